"""Unit tests for type I/II elements, weak star moves and classification."""

from itertools import product

import pytest

from affine_tl.coxeter import (
    canonical_form,
    commutation_class,
    enumerate_fc,
    identity_element,
    new_context,
)
from affine_tl.elements import (
    ClassTag,
    Parity,
    Side,
    TypeIDescriptor,
    TypeIShape,
    classify_non_cancellable,
    is_non_cancellable,
    is_type_I,
    is_type_II,
    lambda_rank,
    matches_closed_form,
    n_value,
    reduction_path,
    star_reducible,
    type_I_family,
    type_I_word,
    type_II_word,
    weak_star_moves,
    x_even,
    x_odd,
)
from affine_tl.errors import CancellableElementError, DescriptorError
from affine_tl.heap import build, max_antichain


@pytest.mark.parametrize("n, expected", [(2, 1), (3, 2), (4, 2), (5, 3)])
def test_lambda_rank(n, expected):
    assert lambda_rank(new_context(n)) == expected


class TestTypeI:
    """Zigzag descriptors and their words."""

    @pytest.mark.parametrize(
        "n, descriptor, word",
        [
            (3, TypeIDescriptor(TypeIShape.R_EVEN, 1, 1, 1), (1, 2, 3, 4, 3, 2, 1)),
            (3, TypeIDescriptor(TypeIShape.PATH, 2, 4), (2, 3, 4)),
            (3, TypeIDescriptor(TypeIShape.L_ODD, 3, 1, 0), (3, 2, 1)),
            (2, TypeIDescriptor(TypeIShape.PATH, 3, 1), (3, 2, 1)),
        ],
    )
    def test_type_I_word(self, n, descriptor, word):
        assert type_I_word(new_context(n), descriptor).canonical == word

    def test_descriptor_out_of_range(self, ctx3):
        with pytest.raises(DescriptorError):
            type_I_word(ctx3, TypeIDescriptor(TypeIShape.L_EVEN, 1, 2, 1))
        with pytest.raises(DescriptorError):
            type_I_word(ctx3, TypeIDescriptor(TypeIShape.R_EVEN, 1, 1, 0))

    def test_type_I_words_have_width_one(self, ctx3):
        fc = type_I_word(ctx3, TypeIDescriptor(TypeIShape.R_EVEN, 1, 1, 1))
        assert n_value(ctx3, fc) == 1
        assert is_type_I(ctx3, fc)

    def test_identity_is_not_type_I(self, ctx2):
        assert not is_type_I(ctx2, identity_element(ctx2))

    def test_family_lookup(self, ctx3):
        fc = canonical_form(ctx3, [3, 2, 1])
        d = type_I_family(ctx3, fc)
        assert d is not None
        assert type_I_word(ctx3, d) == fc
        assert type_I_family(ctx3, canonical_form(ctx3, [1, 3])) is None

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_zigzags_are_rigid(self, n):
        ctx = new_context(n)
        top = n + 1
        built = 0
        for shape, i, j, k in product(
            TypeIShape, range(1, top + 1), range(1, top + 1), range(3)
        ):
            try:
                fc = type_I_word(ctx, TypeIDescriptor(shape, i, j, k))
            except DescriptorError:
                continue
            built += 1
            assert commutation_class(ctx, fc.canonical) == {fc.canonical}
            assert n_value(ctx, fc) == 1
        assert built > 0

    def test_width_one_words_are_rigid(self, ctx3):
        for fc in enumerate_fc(ctx3, 8):
            if is_type_I(ctx3, fc):
                assert commutation_class(ctx3, fc.canonical) == {fc.canonical}


class TestTypeII:
    """Alternating products of x_O and x_E."""

    @pytest.mark.parametrize(
        "n, start, factors, word",
        [
            (2, Parity.ODD, 3, (1, 3, 2, 1, 3)),
            (5, Parity.ODD, 1, (1, 3, 5)),
            (2, Parity.EVEN, 2, (2, 1, 3)),
        ],
    )
    def test_type_II_word(self, n, start, factors, word):
        assert type_II_word(new_context(n), start, factors).canonical == word

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_width_is_the_larger_parity_class(self, n):
        ctx = new_context(n)
        assert len(x_odd(ctx)) >= len(x_even(ctx))
        for start in Parity:
            for factors in range(1, 6):
                fc = type_II_word(ctx, start, factors)
                if factors == 1 and start is Parity.EVEN:
                    expected = len(x_even(ctx))
                else:
                    expected = len(x_odd(ctx))
                assert n_value(ctx, fc) == expected
                assert max_antichain(build(ctx, fc.canonical)) == expected

    def test_needs_a_factor(self, ctx2):
        with pytest.raises(DescriptorError):
            type_II_word(ctx2, Parity.ODD, 0)

    @pytest.mark.parametrize(
        "word, expected", [([1, 3, 2], True), ([1, 2], False), ([], False)]
    )
    def test_is_type_II(self, ctx2, word, expected):
        assert is_type_II(ctx2, canonical_form(ctx2, word)) is expected


class TestWeakStar:
    """Weak star reductions and reduction paths."""

    def test_moves_of_bond_four_zigzag(self, ctx2):
        moves = weak_star_moves(ctx2, canonical_form(ctx2, [1, 2, 1]))
        found = {(m.side, m.s, m.t, m.result.canonical) for m in moves}
        assert (Side.LEFT, 1, 2, (2, 1)) in found
        assert (Side.RIGHT, 1, 2, (1, 2)) in found
        assert moves[0].side is Side.LEFT

    def test_east_end(self, ctx2):
        moves = weak_star_moves(ctx2, canonical_form(ctx2, [2, 3, 2]))
        found = {(m.side, m.s, m.t, m.result.canonical) for m in moves}
        assert (Side.LEFT, 2, 3, (3, 2)) in found

    def test_no_moves(self, ctx2):
        fc = canonical_form(ctx2, [1, 2])
        assert weak_star_moves(ctx2, fc) == []
        assert is_non_cancellable(ctx2, fc)

    def test_bond_three_move(self, ctx3):
        fc = canonical_form(ctx3, [2, 3])
        result = star_reducible(ctx3, fc, Side.LEFT, 2, 3)
        assert result is not None and result.canonical == (3,)
        assert star_reducible(ctx3, fc, Side.LEFT, 2, 1) is None
        assert star_reducible(ctx3, fc, Side.RIGHT, 3, 2).canonical == (2,)

    def test_describe(self, ctx2):
        (move, *_) = weak_star_moves(ctx2, canonical_form(ctx2, [1, 2, 1]))
        assert move.describe() == "LEFT(s=1,t=2) -> [2 1]"

    def test_reduction_path(self, ctx2):
        path = reduction_path(ctx2, canonical_form(ctx2, [1, 2, 1]))
        assert len(path) == 1
        assert path[0].result.canonical == (2, 1)


class TestClassification:
    """classify_non_cancellable on each closed-form case."""

    def test_end_zigzag(self, ctx3):
        found = classify_non_cancellable(
            ctx3, canonical_form(ctx3, [1, 2, 3, 4, 3, 2, 1])
        )
        assert found.tag is ClassTag.TYPE_I_END
        assert found.family == TypeIDescriptor(TypeIShape.R_EVEN, 1, 1, 1)

    def test_type_II(self, ctx2):
        found = classify_non_cancellable(ctx2, canonical_form(ctx2, [1, 3, 2]))
        assert found.tag is ClassTag.TYPE_II
        assert found.start is Parity.ODD
        assert found.factors == 2
        assert found.describe() == "type-II start=O factors=2"

    def test_product(self, ctx3):
        found = classify_non_cancellable(ctx3, canonical_form(ctx3, [2, 1]))
        assert found.tag is ClassTag.PRODUCT_BBPRIME
        assert found.u is not None and found.u.canonical == (2, 1)
        assert found.v is not None and found.v.is_identity

    def test_cancellable_rejected(self, ctx2):
        with pytest.raises(CancellableElementError):
            classify_non_cancellable(ctx2, canonical_form(ctx2, [1, 2, 1]))

    def test_closed_form_matches_brute_force(self, ctx2):
        for fc in enumerate_fc(ctx2, 7):
            assert is_non_cancellable(ctx2, fc) == matches_closed_form(ctx2, fc)
