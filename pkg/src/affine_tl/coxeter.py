"""
Coxeter words of type affine C.

This module holds the rank context of the affine C Coxeter graph
(generators s_1 ... s_{n+1}, bonds 4-3-...-3-4), fully commutative
recognition, Cartier-Foata canonical forms, descent sets and the
enumeration of fully commutative elements by length.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from .errors import InvalidRankError, NotFullyCommutativeError, WordError

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]


@dataclass(frozen=True)
class CoxeterContext:
    """Rank context of the affine C Coxeter graph."""

    n: int

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, int):
            raise InvalidRankError(f"Rank must be an integer, got {self.n!r}")
        if self.n < 2:
            raise InvalidRankError(f"Rank must be at least 2, got {self.n}")

    @property
    def generator_count(self) -> int:
        """Number of generators, n + 1."""
        return self.n + 1

    @property
    def node_count(self) -> int:
        """Number of nodes per face of the diagrams, n + 2."""
        return self.n + 2

    @property
    def generators(self) -> range:
        """Generator indices 1 .. n+1."""
        return range(1, self.n + 2)

    def check_index(self, i: int) -> int:
        """
        Validate a generator index.

        Args:
            i: Candidate generator index

        Returns:
            The index unchanged

        Raises:
            WordError: If the index is not in 1..n+1
        """
        if isinstance(i, bool) or not isinstance(i, int) or not 1 <= i <= self.n + 1:
            raise WordError(f"Generator index {i!r} out of range 1..{self.n + 1}")
        return i

    def validate_word(self, letters: Iterable[int]) -> Word:
        """
        Turn a letter sequence into a checked word.

        Args:
            letters: Generator indices

        Returns:
            The word as a tuple

        Raises:
            WordError: If any letter is out of range
        """
        return tuple(self.check_index(letter) for letter in letters)

    def bond(self, i: int, j: int) -> int:
        """
        Return the bond m(s_i, s_j) of the Coxeter graph.

        Args:
            i: First generator index
            j: Second generator index

        Returns:
            1 if i == j, 2 for commuting generators, 4 on the end bonds
            {1,2} and {n,n+1}, 3 otherwise

        Raises:
            WordError: If an index is out of range
        """
        self.check_index(i)
        self.check_index(j)
        if i == j:
            return 1
        if abs(i - j) > 1:
            return 2
        if {i, j} in ({1, 2}, {self.n, self.n + 1}):
            return 4
        return 3

    def commutes(self, i: int, j: int) -> bool:
        """Return True when s_i and s_j are distinct commuting generators."""
        return self.bond(i, j) == 2


@dataclass(frozen=True)
class FCElement:
    """
    A fully commutative element, stored by its Cartier-Foata word.

    Two elements are equal exactly when their canonical words and ranks
    are equal. Instances are built by canonical_form; the constructor does
    not re-check the word.
    """

    canonical: Word
    rank: int

    @property
    def length(self) -> int:
        """Coxeter length of the element."""
        return len(self.canonical)

    @property
    def context(self) -> CoxeterContext:
        """The ambient rank context."""
        return CoxeterContext(self.rank)

    @property
    def is_identity(self) -> bool:
        """True for the empty word."""
        return not self.canonical

    @property
    def sort_key(self) -> Tuple[int, Word]:
        """Ordering by length, then canonical word."""
        return (len(self.canonical), self.canonical)

    @property
    def word(self) -> str:
        """Space-separated text form of the canonical word."""
        return " ".join(str(letter) for letter in self.canonical)

    def __str__(self) -> str:
        return f"[{self.word}]"


def new_context(n: int) -> CoxeterContext:
    """
    Create the rank context of the affine C graph with n+1 generators.

    Args:
        n: Rank parameter, at least 2

    Returns:
        The context

    Raises:
        InvalidRankError: If n < 2
    """
    return CoxeterContext(n)


def bond(ctx: CoxeterContext, i: int, j: int) -> int:
    """Return m(s_i, s_j); see CoxeterContext.bond."""
    return ctx.bond(i, j)


def identity_element(ctx: CoxeterContext) -> FCElement:
    """Return the identity element (empty word)."""
    return FCElement((), ctx.n)


def _levels(ctx: CoxeterContext, word: Sequence[int]) -> List[int]:
    """Top-aligned heap levels: 1 + deepest non-commuting entry above."""
    # deepest level reached so far in each column
    column_depth: Dict[int, int] = {}
    levels: List[int] = []
    for letter in word:
        level = 1 + max(
            (
                depth
                for column, depth in column_depth.items()
                if not ctx.commutes(column, letter)
            ),
            default=0,
        )
        column_depth[letter] = level
        levels.append(level)
    return levels


def _cartier_foata(ctx: CoxeterContext, word: Sequence[int]) -> Word:
    levels = _levels(ctx, word)
    return tuple(letter for _, letter in sorted(zip(levels, word)))


def _checked_canonical(ctx: CoxeterContext, word: Word) -> Optional[Word]:
    """Cartier-Foata word of an FC-reduced word, None otherwise."""
    from .heap import build, convex_violations

    if convex_violations(ctx, build(ctx, word)):
        return None
    return _cartier_foata(ctx, word)


def is_fc_reduced(ctx: CoxeterContext, w: Sequence[int]) -> bool:
    """
    Decide whether a word is a reduced expression of an FC element.

    The heap of the word is scanned for a same-column pair with no
    neighbouring column between them, and for convex braid chains of
    length m(s,t) >= 3.

    Args:
        ctx: Rank context
        w: The word

    Returns:
        True if the heap scan finds no violation

    Raises:
        WordError: If a letter is out of range
    """
    from .heap import build, convex_violations

    word = ctx.validate_word(w)
    return not convex_violations(ctx, build(ctx, word))


def canonical_form(ctx: CoxeterContext, w: Sequence[int]) -> FCElement:
    """
    Compute the Cartier-Foata normal form of an FC-reduced word.

    Level by level, the letters movable to the front are emitted in
    ascending order and removed.

    Args:
        ctx: Rank context
        w: An FC-reduced word

    Returns:
        The FCElement with the canonical word

    Raises:
        WordError: If a letter is out of range
        NotFullyCommutativeError: If the word is not FC-reduced
    """
    from .heap import build, convex_violations

    word = ctx.validate_word(w)
    violations = convex_violations(ctx, build(ctx, word))
    if violations:
        raise NotFullyCommutativeError(
            f"Word {list(word)} is not FC-reduced: {violations[0].describe()}",
            violations,
        )
    return FCElement(_cartier_foata(ctx, word), ctx.n)


def left_descents(fc: FCElement) -> FrozenSet[int]:
    """
    Return the left descent set L(w).

    s_i is a left descent iff i lies in the first Cartier-Foata level.
    """
    if fc.is_identity:
        return frozenset()
    ctx = fc.context
    levels = _levels(ctx, fc.canonical)
    return frozenset(
        letter for letter, level in zip(fc.canonical, levels) if level == 1
    )


def right_descents(fc: FCElement) -> FrozenSet[int]:
    """Return the right descent set R(w), read on the reversed word."""
    return left_descents(reverse(fc))


def support(fc: FCElement) -> FrozenSet[int]:
    """Return the set of distinct letters of the element."""
    return frozenset(fc.canonical)


def reverse(fc: FCElement) -> FCElement:
    """Return the inverse element, canonicalized."""
    ctx = fc.context
    return FCElement(_cartier_foata(ctx, fc.canonical[::-1]), fc.rank)


def drop_left_descent(fc: FCElement, s: int) -> FCElement:
    """
    Return s*w for a left descent s of w.

    Args:
        fc: The element w
        s: A left descent of w

    Returns:
        The element of length len(w) - 1

    Raises:
        WordError: If s is not a left descent
    """
    if s not in left_descents(fc):
        raise WordError(f"s{s} is not a left descent of {fc}")
    word = list(fc.canonical)
    del word[word.index(s)]
    return FCElement(_cartier_foata(fc.context, word), fc.rank)


def drop_right_descent(fc: FCElement, s: int) -> FCElement:
    """Return w*s for a right descent s of w."""
    return reverse(drop_left_descent(reverse(fc), s))


def commutation_class(ctx: CoxeterContext, w: Sequence[int]) -> Set[Word]:
    """
    Collect every word reachable by swapping adjacent commuting letters.

    Args:
        ctx: Rank context
        w: Starting word

    Returns:
        The commutation class, including the starting word
    """
    start = ctx.validate_word(w)
    seen: Set[Word] = {start}
    queue = deque([start])
    while queue:
        word = queue.popleft()
        for i in range(len(word) - 1):
            if ctx.commutes(word[i], word[i + 1]):
                swapped = word[:i] + (word[i + 1], word[i]) + word[i + 2 :]
                if swapped not in seen:
                    seen.add(swapped)
                    queue.append(swapped)
    return seen


def enumerate_fc(
    ctx: CoxeterContext, max_len: int, allowed: Optional[Iterable[int]] = None
) -> Iterator[FCElement]:
    """
    Enumerate FC elements by length, then canonical word.

    Every element of length l+1 is s*w for an element w of length l and a
    generator s outside L(w), so each layer is built from the previous one.

    Args:
        ctx: Rank context
        max_len: Largest length to enumerate
        allowed: Optional generator subset; restricts to the parabolic
            subgroup it generates

    Yields:
        FC elements in (length, canonical word) order
    """
    if max_len < 0:
        raise WordError(f"Length bound must be non-negative, got {max_len}")
    letters = sorted(set(allowed)) if allowed is not None else list(ctx.generators)
    for letter in letters:
        ctx.check_index(letter)
    layer = [identity_element(ctx)]
    for length in range(max_len + 1):
        yield from layer
        if length == max_len:
            break
        following: Set[FCElement] = set()
        for fc in layer:
            descents = left_descents(fc)
            for s in letters:
                if s in descents:
                    continue
                canonical = _checked_canonical(ctx, (s,) + fc.canonical)
                if canonical is not None:
                    following.add(FCElement(canonical, ctx.n))
        layer = sorted(following, key=lambda element: element.canonical)
        logger.debug(f"rank {ctx.n}: {len(layer)} FC elements of length {length + 1}")
        if not layer:
            break
