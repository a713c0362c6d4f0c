"""Unit tests for decorated diagrams, their products and admissibility."""

import pytest

from affine_tl.coxeter import enumerate_fc, new_context
from affine_tl.diagram import (
    CD,
    CT,
    OD,
    OT,
    RETAINED_LOOP,
    Decoration,
    Diagram,
    DiagramElement,
    Edge,
    Face,
    Node,
    a_value,
    canonicalize,
    check_diagram,
    concat,
    end_template,
    from_model,
    identity_diagram,
    is_admissible,
    mul_elements,
    normalize_block,
    normalize_loop,
    simple_diagram,
    to_model,
)
from affine_tl.errors import DiagramFormatError, InvalidRankError
from affine_tl.models import DiagramModel, EdgeModel
from affine_tl.theta import diagram_product
from affine_tl.tl import DeltaPoly

DELTA = DeltaPoly.monomial(1, 1)


class TestDecorations:
    """Glyph parsing and block reduction."""

    def test_parse(self):
        assert Decoration.parse("cd") is CD
        assert Decoration.parse("△") is OT
        with pytest.raises(DiagramFormatError):
            Decoration.parse("x")

    @pytest.mark.parametrize(
        "word, expected",
        [
            ((), (0, ())),
            ((CD, CD), (0, (CT,))),
            ((CD, CT), (1, (CD,))),
            ((CT, CT), (1, (CT,))),
            ((OD, OD, OD), (1, (OD,))),
            ((CD, CD, OD, CD, OD, OD, CD), (0, (CT, OD, CD, OT, CD))),
            ((CD, OD, CD), (0, (CD, OD, CD))),
        ],
    )
    def test_normalize_block(self, word, expected):
        assert normalize_block(word) == expected

    def test_normalize_loop_wraps_around(self):
        assert normalize_loop((CD, OD, CD)) == (0, (CT, OD))
        assert normalize_loop((CD, CD)) == (0, (CT,))

    def test_normalize_loop_rotation_and_reflection(self):
        assert normalize_loop((OT, CT)) == (0, RETAINED_LOOP)
        assert normalize_loop((CT, OD, CD, OT)) == normalize_loop((OT, CD, OD, CT))


class TestConstruction:
    """Identity and generator diagrams."""

    def test_identity(self, ctx2):
        d = identity_diagram(ctx2)
        assert len(d.edges) == 4
        assert all(edge.is_propagating and not edge.blocks for edge in d.edges)
        assert d.a_value == 0
        assert d.to_text() == "t1-b1 t2-b2 t3-b3 t4-b4"

    def test_nodes_and_edge_lookup(self, ctx2):
        d = identity_diagram(ctx2)
        assert [str(node) for node in d.nodes] == [
            "t1",
            "t2",
            "t3",
            "t4",
            "b1",
            "b2",
            "b3",
            "b4",
        ]
        assert d.edge_at(Node(Face.SOUTH, 3)) == 2
        with pytest.raises(DiagramFormatError):
            d.edge_at(Node(Face.NORTH, 5))

    def test_simple_diagrams(self, ctx2):
        assert simple_diagram(ctx2, 1).to_text() == "t1-t2[cd] t3-b3 t4-b4 b1-b2[cd]"
        assert simple_diagram(ctx2, 2).to_text() == "t1-b1 t2-t3 t4-b4 b2-b3"
        assert simple_diagram(ctx2, 3).to_text() == "t1-b1 t2-b2 t3-t4[od] b3-b4[od]"
        assert a_value(simple_diagram(ctx2, 3)) == 1

    def test_node_parse(self):
        assert Node.parse("t3") == Node(Face.NORTH, 3)
        assert str(Node.parse(" b12 ")) == "b12"
        with pytest.raises(DiagramFormatError):
            Node.parse("x1")


class TestConcat:
    """Stacking and reduction of products."""

    def test_square_of_generator(self, ctx2):
        d1 = simple_diagram(ctx2, 1)
        assert concat(ctx2, d1, d1) == (DELTA, d1)

    def test_interior_square(self, ctx3):
        d2 = simple_diagram(ctx3, 2)
        assert concat(ctx3, d2, d2) == (DELTA, d2)

    def test_commuting_ends(self, ctx2):
        scalar, d = concat(ctx2, simple_diagram(ctx2, 1), simple_diagram(ctx2, 3))
        assert scalar == DeltaPoly.one()
        assert a_value(d) == 2
        assert d == concat(ctx2, simple_diagram(ctx2, 3), simple_diagram(ctx2, 1))[1]

    def test_identity_is_unit(self, ctx2):
        d = diagram_product(ctx2, [1, 2])[1]
        e = identity_diagram(ctx2)
        assert concat(ctx2, e, d) == (DeltaPoly.one(), d)
        assert concat(ctx2, d, e) == (DeltaPoly.one(), d)

    def test_bond_four_folding(self, ctx2):
        scalar, d = diagram_product(ctx2, [1, 2, 1, 2])
        assert (scalar, d) == (DeltaPoly.constant(2), diagram_product(ctx2, [1, 2])[1])

    def test_rank_mismatch(self, ctx2, ctx3):
        with pytest.raises(InvalidRankError):
            concat(ctx2, identity_diagram(ctx2), identity_diagram(ctx3))


class TestDiagramElements:
    """Linear combinations of diagrams."""

    def test_product(self, ctx2):
        x = DiagramElement.single(simple_diagram(ctx2, 1))
        assert mul_elements(ctx2, x, x) == x.scale(DELTA)

    def test_sum_and_text(self, ctx2):
        d1 = simple_diagram(ctx2, 1)
        x = DiagramElement.single(d1) + DiagramElement.single(d1, DELTA)
        assert x.coefficient(d1) == DeltaPoly((1, 1))
        assert x.to_text() == f"(1 + 1 d) * <{d1}>"
        assert DiagramElement(2).to_text() == "0"


class TestSerialization:
    """Wire models and structural validation."""

    @pytest.mark.parametrize("n", [2, pytest.param(3, marks=pytest.mark.slow)])
    def test_json_round_trip(self, n):
        ctx = new_context(n)
        for fc in enumerate_fc(ctx, 8):
            d = diagram_product(ctx, fc.canonical)[1]
            text = to_model(d).model_dump_json(indent=2)
            parsed = from_model(DiagramModel.model_validate_json(text))
            assert parsed == d
            assert canonicalize(parsed) == canonicalize(d)

    def test_reversed_ends_are_reoriented(self, ctx2):
        model = to_model(simple_diagram(ctx2, 1))
        model.edges[0] = EdgeModel(ends=("t2", "t1"), blocks=[["cd"]])
        assert from_model(model) == simple_diagram(ctx2, 1)

    def test_crossing_rejected(self):
        model = DiagramModel(
            rank=2,
            edges=[
                EdgeModel(ends=("t1", "b2")),
                EdgeModel(ends=("t2", "b1")),
                EdgeModel(ends=("t3", "b3")),
                EdgeModel(ends=("t4", "b4")),
            ],
        )
        with pytest.raises(DiagramFormatError):
            from_model(model)

    def test_node_used_twice(self):
        model = DiagramModel(
            rank=2,
            edges=[
                EdgeModel(ends=("t1", "b1")),
                EdgeModel(ends=("t1", "b2")),
                EdgeModel(ends=("t3", "b3")),
                EdgeModel(ends=("t4", "b4")),
            ],
        )
        with pytest.raises(DiagramFormatError):
            from_model(model)

    def test_unreduced_block_rejected(self, ctx2):
        d = simple_diagram(ctx2, 1)
        bad = Diagram(d.rank, (Edge(d.edges[0].ends, ((CD, CD),)),) + d.edges[1:])
        with pytest.raises(DiagramFormatError):
            check_diagram(bad)


class TestAdmissibility:
    """Decoration rules and admissibility axioms."""

    @pytest.mark.parametrize("word", [[], [1], [3], [1, 2, 1], [1, 3], [2, 1, 3]])
    def test_products_of_generators(self, ctx2, word):
        d = diagram_product(ctx2, word)[1]
        assert is_admissible(ctx2, d) == (True, [])

    def test_scalar_loop_fails_c1(self, ctx2):
        e = identity_diagram(ctx2)
        ok, violations = is_admissible(ctx2, Diagram(2, e.edges, ((CT,),)))
        assert not ok
        assert str(violations[0]).startswith("C1: ")

    def test_decorated_identity_fails_d0(self, ctx2):
        e = identity_diagram(ctx2)
        edges = (Edge(e.edges[0].ends, ((CD,),)),) + e.edges[1:]
        ok, violations = is_admissible(ctx2, Diagram(2, edges))
        assert not ok
        assert violations[0].axiom == "D0"

    def test_closed_decoration_out_of_reach(self, ctx3):
        d = simple_diagram(ctx3, 3)
        edges = tuple(
            Edge(edge.ends, ((CD,),)) if edge.ends[0] == Node(Face.NORTH, 3) else edge
            for edge in d.edges
        )
        ok, violations = is_admissible(ctx3, Diagram(3, edges))
        assert not ok
        assert any(v.axiom == "D1" for v in violations)

    def test_rank_mismatch(self, ctx2):
        with pytest.raises(InvalidRankError):
            is_admissible(new_context(3), identity_diagram(ctx2))

    @pytest.mark.parametrize(
        "word, west, east",
        [
            ([1, 2], "south", "through"),
            ([2, 1], "north", "through"),
            ([1, 2, 1], "bare", "through"),
            ([2, 1, 2], "through", "through"),
            ([3, 2], "through", "south"),
            ([2, 3], "through", "north"),
        ],
    )
    def test_end_templates(self, ctx2, word, west, east):
        d = diagram_product(ctx2, word)[1]
        assert d.a_value == 1
        assert end_template(d).name == west
        assert end_template(d, east=True).name == east

    @pytest.mark.parametrize(
        "n, max_len", [(2, 8), pytest.param(3, 10, marks=pytest.mark.slow)]
    )
    def test_every_a_value_one_image_fits_a_template(self, n, max_len):
        ctx = new_context(n)
        seen = set()
        for fc in enumerate_fc(ctx, max_len):
            d = diagram_product(ctx, fc.canonical)[1]
            if d.a_value != 1:
                continue
            west, east = end_template(d), end_template(d, east=True)
            assert west is not None and east is not None, d.to_text()
            seen.update((west.name, east.name))
        assert {"through", "bare", "north", "south"} <= seen

    def test_doubled_dot_western_cup_fails_c5(self, ctx2):
        d = diagram_product(ctx2, [1, 2, 1])[1]
        bad = _redecorate(d, Node(Face.NORTH, 1), ((CD,), (CD,)))
        ok, violations = is_admissible(ctx2, bad)
        assert not ok
        assert any(str(v).startswith("C5: ") for v in violations)

    def test_misplaced_triangle_fails_c5(self, ctx2):
        d = diagram_product(ctx2, [1, 2, 1])[1]
        bad = _redecorate(d, Node(Face.NORTH, 1), ((CT,),))
        ok, violations = is_admissible(ctx2, bad)
        assert not ok
        assert any(str(v).startswith("C5: ") for v in violations)

    def test_undotted_north_end_fails_c5(self, ctx2):
        d = diagram_product(ctx2, [2, 1])[1]
        bad = _redecorate(d, Node(Face.NORTH, 1), ())
        ok, violations = is_admissible(ctx2, bad)
        assert not ok
        assert [str(v) for v in violations] == [
            "C5: western end t1-b3 fits no template"
        ]


def _redecorate(d, node, blocks):
    """Replace the blocks on the edge at a node, dropping stale schedule entries."""
    index = d.edge_at(node)
    edges = list(d.edges)
    edges[index] = Edge(edges[index].ends, blocks)
    schedule = tuple((e, j) for e, j in d.schedule if j < len(edges[e].blocks))
    return Diagram(d.rank, tuple(edges), d.loops, schedule)
