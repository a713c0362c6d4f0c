"""
Heaps of reduced words.

A heap is the labeled poset on the positions of a word: an earlier entry
sits above a later one whenever their generators do not commute, closed
under transitivity. Entry ids are word positions, columns are generator
indices and levels are the top-aligned Cartier-Foata rows. The module
scans heaps for the configurations that rule out full commutativity and
computes maximal antichains.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Sequence, Tuple

from .coxeter import CoxeterContext, _levels

logger = logging.getLogger(__name__)

HeapKey = Tuple[Tuple[Tuple[int, int], ...], Tuple[Tuple[int, ...], ...]]


class ViolationKind(Enum):
    """Heap configurations that rule out an FC-reduced word."""

    SAME_COLUMN_ADJACENT = "same-column-adjacent"
    BOND3_CHAIN = "bond3-chain"
    BOND4_CHAIN = "bond4-chain"


_DESCRIPTIONS = {
    ViolationKind.SAME_COLUMN_ADJACENT: "not reduced",
    ViolationKind.BOND3_CHAIN: "bond-3 braid",
    ViolationKind.BOND4_CHAIN: "bond-4 braid",
}


@dataclass(frozen=True)
class Violation:
    """A located violation: its pattern, entry ids and their columns."""

    kind: ViolationKind
    entries: Tuple[int, ...]
    columns: Tuple[int, ...]

    def describe(self) -> str:
        """Short text naming the pattern, e.g. ``bond-3 braid``."""
        return _DESCRIPTIONS[self.kind]


@dataclass(frozen=True)
class Heap:
    """
    Heap poset of a word.

    ``below[i]`` is a bitmask of the entries strictly below entry i and
    ``above[i]`` the entries strictly above it.
    """

    rank: int
    labels: Tuple[int, ...]
    below: Tuple[int, ...]
    above: Tuple[int, ...]
    levels: Tuple[int, ...]

    @property
    def size(self) -> int:
        """Number of entries."""
        return len(self.labels)

    @property
    def height(self) -> int:
        """Number of levels."""
        return max(self.levels, default=0)

    def is_below(self, upper: int, lower: int) -> bool:
        """True if ``lower`` lies strictly below ``upper``."""
        return bool(self.below[upper] >> lower & 1)

    def comparable(self, i: int, j: int) -> bool:
        """True if the two entries are related in the poset."""
        return i == j or self.is_below(i, j) or self.is_below(j, i)

    def up_set(self, i: int) -> int:
        """Bitmask of entry i and every entry above it."""
        return self.above[i] | (1 << i)

    def between(self, upper: int, lower: int) -> int:
        """Bitmask of the entries strictly between two entries."""
        return self.below[upper] & self.above[lower]

    def level_rows(self) -> List[List[int]]:
        """Entry ids per level, top level first, ascending column inside."""
        rows: List[List[int]] = [[] for _ in range(self.height)]
        for entry, level in enumerate(self.levels):
            rows[level - 1].append(entry)
        return [sorted(row, key=lambda entry: self.labels[entry]) for row in rows]

    def linear_extension(self) -> Tuple[int, ...]:
        """Word read level by level, ascending column within a level."""
        return tuple(
            self.labels[entry] for row in self.level_rows() for entry in row
        )

    def covers(self) -> List[Tuple[int, int]]:
        """Cover relations as (upper, lower) pairs of entry ids."""
        pairs = []
        for upper in range(self.size):
            for lower in range(self.size):
                if self.is_below(upper, lower) and not self.between(upper, lower):
                    pairs.append((upper, lower))
        return pairs

    def canonical_key(self) -> HeapKey:
        """
        Coordinate form of the heap, independent of the word it came from.

        Entries are named by (level, column); for heaps of FC-reduced words
        this naming is unambiguous, so words of one commutation class give
        equal keys.

        Returns:
            Sorted entry coordinates and sorted cover relations between them
        """
        coords = list(zip(self.levels, self.labels))
        relations = sorted(
            coords[upper] + coords[lower] for upper, lower in self.covers()
        )
        return tuple(sorted(coords)), tuple(relations)


def build(ctx: CoxeterContext, w: Sequence[int]) -> Heap:
    """
    Build the heap of a word.

    Args:
        ctx: Rank context
        w: Any word with letters in range (need not be reduced)

    Returns:
        The heap with transitive order masks and canonical levels

    Raises:
        WordError: If a letter is out of range
    """
    word = ctx.validate_word(w)
    size = len(word)
    below = [0] * size
    for i in range(size - 1, -1, -1):
        mask = 0
        for j in range(i + 1, size):
            if not ctx.commutes(word[i], word[j]):
                mask |= (1 << j) | below[j]
        below[i] = mask
    above = [0] * size
    for i in range(size):
        for j in range(i + 1, size):
            if below[i] >> j & 1:
                above[j] |= 1 << i
    return Heap(ctx.n, word, tuple(below), tuple(above), tuple(_levels(ctx, word)))


def _same_column_violations(ctx: CoxeterContext, h: Heap) -> List[Violation]:
    found = []
    last_seen: Dict[int, int] = {}
    for entry, label in enumerate(h.labels):
        previous = last_seen.get(label)
        if previous is not None:
            between = h.between(previous, entry)
            blocked = any(
                between >> k & 1 and ctx.bond(h.labels[k], label) >= 3
                for k in range(previous + 1, entry)
            )
            if not blocked:
                found.append(
                    Violation(
                        ViolationKind.SAME_COLUMN_ADJACENT,
                        (previous, entry),
                        (label, label),
                    )
                )
        last_seen[label] = entry
    return found


def _chain_violations(ctx: CoxeterContext, h: Heap) -> List[Violation]:
    found = []
    for s in range(1, ctx.n + 1):
        t = s + 1
        m = ctx.bond(s, t)
        pair_entries = [e for e, label in enumerate(h.labels) if label in (s, t)]
        for start in range(len(pair_entries) - m + 1):
            window = pair_entries[start : start + m]
            labels = [h.labels[e] for e in window]
            if any(labels[k] == labels[k + 1] for k in range(m - 1)):
                continue
            window_mask = sum(1 << e for e in window)
            if h.between(window[0], window[-1]) & ~window_mask:
                continue
            kind = (
                ViolationKind.BOND4_CHAIN if m == 4 else ViolationKind.BOND3_CHAIN
            )
            found.append(Violation(kind, tuple(window), tuple(labels)))
    return found


def convex_violations(ctx: CoxeterContext, h: Heap) -> List[Violation]:
    """
    Scan a heap for the configurations that forbid an FC-reduced word.

    Reports same-column pairs with no neighbouring-column entry between
    them (the word is not reduced), and convex alternating chains
    s t s (bond 3) or s t s t (bond 4).

    Args:
        ctx: Rank context
        h: Heap to scan

    Returns:
        Violations ordered by pattern then position; empty iff the word is
        FC-reduced
    """
    violations = _same_column_violations(ctx, h) + _chain_violations(ctx, h)
    if violations:
        logger.debug(f"heap {list(h.labels)}: {len(violations)} violation(s)")
    return violations


def max_antichain(h: Heap) -> int:
    """
    Size of a largest set of pairwise incomparable entries, n(w).

    Entries of one column are a chain, so an antichain takes at most one
    entry per column. On a path graph any chain joining columns a < c
    crosses every column between them; entries listed by column are
    therefore pairwise incomparable as soon as neighbours in that list
    are. The search keeps, per entry, the largest antichain whose
    rightmost column holds that entry.
    """
    order = sorted(range(h.size), key=lambda entry: h.labels[entry])
    ending_at = [0] * h.size
    for position, entry in enumerate(order):
        label = h.labels[entry]
        ending_at[entry] = 1 + max(
            (
                ending_at[left]
                for left in order[:position]
                if h.labels[left] < label and not h.comparable(left, entry)
            ),
            default=0,
        )
    return max(ending_at, default=0)


def render_ascii(h: Heap) -> str:
    """
    Draw the canonical lattice embedding, one row per level.

    Each entry is a ``[i]`` box placed in the column of its generator.
    """
    width = 4
    lines = []
    for row in h.level_rows():
        cells = [" " * width] * (h.rank + 1)
        for entry in row:
            label = h.labels[entry]
            cells[label - 1] = f"[{label}]".center(width)
        lines.append("".join(cells).rstrip())
    return "\n".join(lines)
