"""
Type I and type II elements, weak star reductions and non-cancellable
classification.

Type I elements are the zigzag words between the end generators (heaps of
width one); type II elements alternate the product of all odd generators
with the product of all even generators. Weak star reductions shorten an
element by one letter without changing its heap width, and an element with
no weak star reduction is non-cancellable.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Set, Tuple

from .coxeter import (
    CoxeterContext,
    FCElement,
    Word,
    _levels,
    canonical_form,
    drop_left_descent,
    left_descents,
    reverse,
    right_descents,
)
from .errors import (
    CancellableElementError,
    ClassificationError,
    DescriptorError,
    NotFullyCommutativeError,
)
from .heap import build, max_antichain

logger = logging.getLogger(__name__)


class TypeIShape(Enum):
    """Zigzag shapes of type I words."""

    PATH = "path"
    L_EVEN = "L-even"
    L_ODD = "L-odd"
    R_EVEN = "R-even"
    R_ODD = "R-odd"


class Parity(Enum):
    """Starting factor of a type II product."""

    ODD = "O"
    EVEN = "E"


class Side(Enum):
    """Side of a weak star reduction."""

    LEFT = "left"
    RIGHT = "right"


class ClassTag(Enum):
    """Cases of the non-cancellable classification."""

    PRODUCT_BBPRIME = "product-bbprime"
    TYPE_I_END = "type-I-end"
    TYPE_II = "type-II"


@dataclass(frozen=True)
class TypeIDescriptor:
    """Shape, start index i, end index j and winding count k of a zigzag."""

    shape: TypeIShape
    i: int
    j: int
    k: int = 0


@dataclass(frozen=True)
class WeakStarMove:
    """A weak star reduction by s with respect to t and its result."""

    side: Side
    s: int
    t: int
    result: FCElement

    def describe(self) -> str:
        """Text form, e.g. ``LEFT(s=1,t=2) -> [2 1]``."""
        return f"{self.side.name}(s={self.s},t={self.t}) -> {self.result}"


@dataclass(frozen=True)
class NonCancellableClass:
    """
    Outcome of classify_non_cancellable.

    PRODUCT_BBPRIME carries the split (u, v); TYPE_I_END carries the
    matching zigzag descriptor; TYPE_II carries the starting parity and
    factor count.
    """

    tag: ClassTag
    u: Optional[FCElement] = None
    v: Optional[FCElement] = None
    family: Optional[TypeIDescriptor] = None
    start: Optional[Parity] = None
    factors: int = 0

    def describe(self) -> str:
        """One-line text form of the class."""
        if self.tag is ClassTag.PRODUCT_BBPRIME:
            return f"{self.tag.value} u={self.u} v={self.v}"
        if self.tag is ClassTag.TYPE_I_END and self.family is not None:
            family = self.family
            return (
                f"{self.tag.value} {family.shape.value}"
                f"(i={family.i},j={family.j},k={family.k})"
            )
        start = self.start.value if self.start is not None else "?"
        return f"{self.tag.value} start={start} factors={self.factors}"


def lambda_rank(ctx: CoxeterContext) -> int:
    """Largest integer lambda with 2*lambda <= n+1."""
    return (ctx.n + 1) // 2


def _path(i: int, j: int) -> List[int]:
    """The path word z_{i,j}, ascending or descending."""
    step = 1 if j >= i else -1
    return list(range(i, j + step, step))


def _check_descriptor(ctx: CoxeterContext, d: TypeIDescriptor) -> None:
    top = ctx.n + 1
    ranges = {
        TypeIShape.PATH: (1 <= d.i <= top and 1 <= d.j <= top, 0),
        TypeIShape.L_EVEN: (1 < d.i <= top and 1 < d.j <= top, 1),
        TypeIShape.L_ODD: (1 < d.i <= top and 1 <= d.j < top, 0),
        TypeIShape.R_EVEN: (1 <= d.i < top and 1 <= d.j < top, 1),
        TypeIShape.R_ODD: (1 <= d.i < top and 1 < d.j <= top, 0),
    }
    indices_ok, min_k = ranges[d.shape]
    if not indices_ok or d.k < min_k or (d.shape is TypeIShape.PATH and d.k):
        raise DescriptorError(f"Descriptor {d} outside the ranges for rank {ctx.n}")


def _type_I_letters(ctx: CoxeterContext, d: TypeIDescriptor) -> List[int]:
    n = ctx.n
    west_turn = _path(1, n) + _path(n + 1, 2)
    east_turn = _path(n + 1, 2) + _path(1, n)
    if d.shape is TypeIShape.PATH:
        return _path(d.i, d.j)
    if d.shape is TypeIShape.L_EVEN:
        return (
            _path(d.i, 2) + west_turn * (d.k - 1) + _path(1, n) + _path(n + 1, d.j)
        )
    if d.shape is TypeIShape.L_ODD:
        return _path(d.i, 2) + west_turn * d.k + _path(1, d.j)
    if d.shape is TypeIShape.R_EVEN:
        return (
            _path(d.i, n) + east_turn * (d.k - 1) + _path(n + 1, 2) + _path(1, d.j)
        )
    return _path(d.i, n) + east_turn * d.k + _path(n + 1, d.j)


def type_I_word(ctx: CoxeterContext, d: TypeIDescriptor) -> FCElement:
    """
    Build the zigzag element of a type I descriptor.

    Args:
        ctx: Rank context
        d: Shape, start, end and winding count

    Returns:
        The canonical element

    Raises:
        DescriptorError: If the descriptor is outside its ranges or its word
            is not FC-reduced
    """
    _check_descriptor(ctx, d)
    letters = _type_I_letters(ctx, d)
    try:
        return canonical_form(ctx, letters)
    except NotFullyCommutativeError as e:
        raise DescriptorError(f"Descriptor {d} gives a non-FC word: {e}") from e


def n_value(ctx: CoxeterContext, fc: FCElement) -> int:
    """Width n(w) of the heap of fc."""
    return max_antichain(build(ctx, fc.canonical))


def is_type_I(ctx: CoxeterContext, fc: FCElement) -> bool:
    """True iff fc is not the identity and its heap has width one."""
    return not fc.is_identity and n_value(ctx, fc) == 1


def type_I_family(ctx: CoxeterContext, fc: FCElement) -> Optional[TypeIDescriptor]:
    """
    Find a descriptor whose word is fc.

    Windings are tried up to the length of fc, shapes in declaration order,
    then ascending i, j, k.
    """
    top = ctx.n + 1
    for shape in TypeIShape:
        for i in range(1, top + 1):
            for j in range(1, top + 1):
                for k in range(fc.length + 1):
                    d = TypeIDescriptor(shape, i, j, k)
                    try:
                        _check_descriptor(ctx, d)
                    except DescriptorError:
                        continue
                    letters = _type_I_letters(ctx, d)
                    if len(letters) > fc.length:
                        break
                    if len(letters) == fc.length and _matches(ctx, letters, fc):
                        return d
    return None


def _matches(ctx: CoxeterContext, letters: List[int], fc: FCElement) -> bool:
    try:
        return canonical_form(ctx, letters) == fc
    except NotFullyCommutativeError:
        return False


def x_odd(ctx: CoxeterContext) -> Word:
    """Product of all odd-index generators, ascending."""
    return tuple(i for i in ctx.generators if i % 2 == 1)


def x_even(ctx: CoxeterContext) -> Word:
    """Product of all even-index generators, ascending."""
    return tuple(i for i in ctx.generators if i % 2 == 0)


def type_II_word(ctx: CoxeterContext, start: Parity, factors: int) -> FCElement:
    """
    Alternating product of x_O and x_E.

    Args:
        ctx: Rank context
        start: Which factor comes first
        factors: Number of factors, at least 1

    Returns:
        The canonical element

    Raises:
        DescriptorError: If factors < 1
    """
    if factors < 1:
        raise DescriptorError(
            f"A type II product needs at least one factor, got {factors}"
        )
    pieces = (x_odd(ctx), x_even(ctx))
    offset = 0 if start is Parity.ODD else 1
    letters: List[int] = []
    for index in range(factors):
        letters.extend(pieces[(index + offset) % 2])
    return canonical_form(ctx, letters)


def _type_II_shape(ctx: CoxeterContext, fc: FCElement) -> Optional[Tuple[Parity, int]]:
    """Starting parity and factor count when the levels alternate full parity sets."""
    if fc.is_identity:
        return None
    levels = _levels(ctx, fc.canonical)
    rows: List[Set[int]] = [set() for _ in range(max(levels))]
    for letter, level in zip(fc.canonical, levels):
        rows[level - 1].add(letter)
    odd, even = set(x_odd(ctx)), set(x_even(ctx))
    if rows[0] == odd:
        expected, start = [odd, even], Parity.ODD
    elif rows[0] == even:
        expected, start = [even, odd], Parity.EVEN
    else:
        return None
    if all(row == expected[index % 2] for index, row in enumerate(rows)):
        return start, len(rows)
    return None


def is_type_II(ctx: CoxeterContext, fc: FCElement) -> bool:
    """True iff fc is an alternating product of x_O and x_E with at least one factor."""
    return _type_II_shape(ctx, fc) is not None


def _left_move(
    ctx: CoxeterContext, fc: FCElement, s: int, t: int
) -> Optional[FCElement]:
    """Result of the left weak star reduction by s w.r.t. t, if it exists."""
    m = ctx.bond(s, t)
    if m < 3 or s not in left_descents(fc):
        return None
    shorter = drop_left_descent(fc, s)
    if t not in left_descents(shorter):
        return None
    if m == 4 and s not in left_descents(drop_left_descent(shorter, t)):
        return None
    return shorter


def star_reducible(
    ctx: CoxeterContext, fc: FCElement, side: Side, s: int, t: int
) -> Optional[FCElement]:
    """
    Apply one weak star reduction if it is defined.

    On the left, fc must factor as s t v (bond 3) or s t s v (bond 4) with
    lengths adding up; the right side is the mirror image.

    Args:
        ctx: Rank context
        fc: The element
        side: LEFT or RIGHT
        s: Generator removed
        t: Generator it is taken with respect to

    Returns:
        The element of length len(fc) - 1, or None when the move is undefined
    """
    ctx.check_index(s)
    ctx.check_index(t)
    if side is Side.LEFT:
        return _left_move(ctx, fc, s, t)
    mirrored = _left_move(ctx, reverse(fc), s, t)
    return reverse(mirrored) if mirrored is not None else None


def weak_star_moves(ctx: CoxeterContext, fc: FCElement) -> List[WeakStarMove]:
    """
    List every weak star reduction of fc.

    Scan order: LEFT before RIGHT, ascending s, then ascending t.
    """
    moves = []
    for side in (Side.LEFT, Side.RIGHT):
        descents = left_descents(fc) if side is Side.LEFT else right_descents(fc)
        for s in sorted(descents):
            for t in (s - 1, s + 1):
                if not 1 <= t <= ctx.n + 1:
                    continue
                result = star_reducible(ctx, fc, side, s, t)
                if result is not None:
                    moves.append(WeakStarMove(side, s, t, result))
    return moves


def is_non_cancellable(ctx: CoxeterContext, fc: FCElement) -> bool:
    """True iff fc has no weak star reduction."""
    return not weak_star_moves(ctx, fc)


def _product_split(ctx: CoxeterContext, fc: FCElement) -> Optional[NonCancellableClass]:
    """
    Case (i): distinct letters whose support runs are singletons or end pairs.

    The west pair {1,2} and singletons up to n go to u; the east pair
    {n,n+1} and the singleton n+1 go to v.
    """
    letters = fc.canonical
    if len(set(letters)) != len(letters):
        return None
    runs: List[List[int]] = []
    for letter in sorted(letters):
        if runs and letter == runs[-1][-1] + 1:
            runs[-1].append(letter)
        else:
            runs.append([letter])
    west: Set[int] = set()
    for run in runs:
        if len(run) == 1:
            if run[0] <= ctx.n:
                west.update(run)
        elif run == [1, 2]:
            west.update(run)
        elif run != [ctx.n, ctx.n + 1]:
            return None
    u = canonical_form(ctx, [letter for letter in letters if letter in west])
    v = canonical_form(ctx, [letter for letter in letters if letter not in west])
    return NonCancellableClass(ClassTag.PRODUCT_BBPRIME, u=u, v=v)


def _end_family(ctx: CoxeterContext, fc: FCElement) -> Optional[NonCancellableClass]:
    """Case (ii): zigzags running between the end generators."""
    top = ctx.n + 1
    families = (
        (TypeIShape.R_EVEN, 1, 1, 1),
        (TypeIShape.L_EVEN, top, top, 1),
        (TypeIShape.L_ODD, top, 1, 0),
        (TypeIShape.R_ODD, 1, top, 0),
    )
    for shape, i, j, first_k in families:
        for k in range(first_k, fc.length + 1):
            d = TypeIDescriptor(shape, i, j, k)
            letters = _type_I_letters(ctx, d)
            if len(letters) > fc.length:
                break
            if len(letters) == fc.length and _matches(ctx, letters, fc):
                return NonCancellableClass(ClassTag.TYPE_I_END, family=d)
    return None


def classify_non_cancellable(ctx: CoxeterContext, fc: FCElement) -> NonCancellableClass:
    """
    Name the closed-form case a non-cancellable element belongs to.

    Cases are tried in order: (i) product of the two end shapes, (ii) end
    zigzag, (iii) type II; the first match wins.

    Args:
        ctx: Rank context
        fc: A non-cancellable element

    Returns:
        The matching class

    Raises:
        CancellableElementError: If fc has a weak star reduction
        ClassificationError: If no case matches
    """
    moves = weak_star_moves(ctx, fc)
    if moves:
        raise CancellableElementError(
            f"{fc} is cancellable: {moves[0].describe()}"
        )
    found = _product_split(ctx, fc) or _end_family(ctx, fc)
    if found is not None:
        return found
    shape = _type_II_shape(ctx, fc)
    if shape is not None:
        return NonCancellableClass(ClassTag.TYPE_II, start=shape[0], factors=shape[1])
    logger.error(f"No non-cancellable case matches {fc} (rank {ctx.n})")
    raise ClassificationError(f"No non-cancellable case matches {fc}")


def matches_closed_form(ctx: CoxeterContext, fc: FCElement) -> bool:
    """Membership in the union of the three closed-form cases."""
    return (
        _product_split(ctx, fc) is not None
        or _end_family(ctx, fc) is not None
        or _type_II_shape(ctx, fc) is not None
    )


def reduction_path(ctx: CoxeterContext, fc: FCElement) -> List[WeakStarMove]:
    """
    Greedy chain of weak star reductions down to a non-cancellable element.

    Each step takes the first move in the scan order of weak_star_moves.
    """
    path: List[WeakStarMove] = []
    current = fc
    while True:
        moves = weak_star_moves(ctx, current)
        if not moves:
            return path
        path.append(moves[0])
        current = moves[0].result

