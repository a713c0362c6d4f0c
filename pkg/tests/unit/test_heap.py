"""Unit tests for heaps, violation scans and antichains."""

from itertools import combinations

import pytest

from affine_tl.coxeter import commutation_class, enumerate_fc, new_context
from affine_tl.heap import (
    ViolationKind,
    build,
    convex_violations,
    max_antichain,
    render_ascii,
)


def test_chain_order(ctx2):
    h = build(ctx2, [1, 2, 1])
    assert h.size == 3
    assert h.is_below(0, 2)
    assert h.comparable(0, 2)
    assert h.covers() == [(0, 1), (1, 2)]


def test_commuting_entries_incomparable(ctx2):
    h = build(ctx2, [1, 3])
    assert not h.comparable(0, 1)
    assert h.height == 1
    assert h.level_rows() == [[0, 1]]


def test_levels_of_long_word(ctx5):
    h = build(ctx5, [3, 2, 1, 2, 5, 4, 6, 5])
    assert h.height == 4
    assert h.linear_extension() == (3, 5, 2, 4, 6, 1, 5, 2)


def test_canonical_key_ignores_commutations(ctx3):
    def key(word):
        return build(ctx3, word).canonical_key()

    assert key([1, 3, 2]) == key([3, 1, 2])
    assert key([1, 2]) != key([2, 1])


@pytest.mark.parametrize(
    "n, word, kind, description",
    [
        (3, [1, 1], ViolationKind.SAME_COLUMN_ADJACENT, "not reduced"),
        (3, [2, 3, 2], ViolationKind.BOND3_CHAIN, "bond-3 braid"),
        (2, [1, 2, 1, 2], ViolationKind.BOND4_CHAIN, "bond-4 braid"),
        (3, [3, 4, 3, 4], ViolationKind.BOND4_CHAIN, "bond-4 braid"),
    ],
)
def test_violations(n, word, kind, description):
    ctx = new_context(n)
    violations = convex_violations(ctx, build(ctx, word))
    assert violations[0].kind is kind
    assert violations[0].describe() == description


def test_separated_braid_is_not_a_violation(ctx3):
    # 1 sits between the two 2s and blocks the bond-3 chain 2 3 2
    assert convex_violations(ctx3, build(ctx3, [2, 1, 3, 2])) == []


@pytest.mark.parametrize(
    "n, word, width",
    [
        (2, [], 0),
        (2, [1, 2, 1], 1),
        (2, [1, 3], 2),
        (5, [1, 3, 5], 3),
        (3, [1, 2, 3, 4, 3, 2, 1], 1),
    ],
)
def test_max_antichain(n, word, width):
    ctx = new_context(n)
    assert max_antichain(build(ctx, word)) == width


@pytest.mark.parametrize("n, max_len", [(2, 6), (3, 6)])
def test_canonical_key_constant_on_commutation_classes(n, max_len):
    ctx = new_context(n)
    keys = set()
    for fc in enumerate_fc(ctx, max_len):
        class_keys = {
            build(ctx, word).canonical_key()
            for word in commutation_class(ctx, fc.canonical)
        }
        assert len(class_keys) == 1
        keys |= class_keys
    # distinct elements have distinct heaps
    assert len(keys) == sum(1 for _ in enumerate_fc(ctx, max_len))


def _brute_force_width(h):
    for size in range(h.size, 0, -1):
        for entries in combinations(range(h.size), size):
            if not any(h.comparable(i, j) for i, j in combinations(entries, 2)):
                return size
    return 0


@pytest.mark.parametrize("n", [2, 3, 4])
def test_max_antichain_matches_subset_search(n):
    ctx = new_context(n)
    for fc in enumerate_fc(ctx, 6):
        h = build(ctx, fc.canonical)
        assert max_antichain(h) == _brute_force_width(h)


def test_long_words(ctx2):
    word = [1, 3, 2] * 400
    h = build(ctx2, word)
    assert h.height == 800
    assert max_antichain(h) == 2


def test_render_ascii(ctx2):
    assert render_ascii(build(ctx2, [1, 3, 2])) == "[1]     [3]\n    [2]"
