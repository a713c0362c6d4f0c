"""
LR-decorated diagrams and their multiplication.

A diagram of rank n has n+2 nodes on each of its north (t1..tN) and south
(b1..bN) faces, joined by a non-crossing perfect matching. Edges carry
blocks of decorations from the decoration algebra: closed dots and
triangles live at the west, open ones at the east. Loops keep their cyclic
decoration word. Diagrams with exactly one north cup also keep a schedule,
the vertical order of the blocks on their propagating edges.

Products stack one diagram on top of another, trace the composite strands,
and reduce decorations and loops to a scalar 2^k delta^m times a diagram.
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .coxeter import CoxeterContext
from .errors import DiagramFormatError, InvalidRankError
from .models import DiagramModel, EdgeModel
from .tl import Coefficient, DeltaPoly, _as_poly, collect_terms

logger = logging.getLogger(__name__)


class Decoration(Enum):
    """Decoration glyphs; closed ones are western, open ones eastern."""

    CLOSED_DOT = "cd"
    CLOSED_TRI = "ct"
    OPEN_DOT = "od"
    OPEN_TRI = "ot"

    @property
    def is_closed(self) -> bool:
        return self in (Decoration.CLOSED_DOT, Decoration.CLOSED_TRI)

    @property
    def is_dot(self) -> bool:
        return self in (Decoration.CLOSED_DOT, Decoration.OPEN_DOT)

    @property
    def symbol(self) -> str:
        """Unicode glyph, e.g. a filled triangle for CLOSED_TRI."""
        return _SYMBOLS[self]

    @classmethod
    def parse(cls, text: str) -> "Decoration":
        """
        Read a glyph given by its code (``cd``) or its symbol.

        Raises:
            DiagramFormatError: If the glyph is unknown
        """
        for decoration in cls:
            if text in (decoration.value, _SYMBOLS[decoration]):
                return decoration
        raise DiagramFormatError(f"Unknown decoration glyph {text!r}")


_SYMBOLS = {
    Decoration.CLOSED_DOT: "•",
    Decoration.CLOSED_TRI: "▲",
    Decoration.OPEN_DOT: "○",
    Decoration.OPEN_TRI: "△",
}

CD = Decoration.CLOSED_DOT
CT = Decoration.CLOSED_TRI
OD = Decoration.OPEN_DOT
OT = Decoration.OPEN_TRI

Block = Tuple[Decoration, ...]

RETAINED_LOOP: Block = (CT, OT)
SCALAR_LOOPS = ((), (CT,), (OT,))

# (left is dot, right is dot) -> (result is dot, extracted power of 2)
_MERGE = {
    (True, True): (False, 0),
    (True, False): (True, 1),
    (False, True): (True, 1),
    (False, False): (False, 1),
}


def _decoration(closed: bool, dot: bool) -> Decoration:
    if closed:
        return CD if dot else CT
    return OD if dot else OT


def normalize_block(word: Sequence[Decoration]) -> Tuple[int, Block]:
    """
    Reduce a decoration word to its alternating basis word.

    Adjacent decorations of the same kind merge: two dots give a triangle,
    a dot next to a triangle gives twice the dot, and two triangles give
    twice the triangle.

    Args:
        word: Decorations in reading order

    Returns:
        (power of 2 extracted, alternating word)
    """
    two_power = 0
    stack: List[Decoration] = []
    for decoration in word:
        if stack and stack[-1].is_closed == decoration.is_closed:
            dot, extra = _MERGE[(stack[-1].is_dot, decoration.is_dot)]
            stack[-1] = _decoration(decoration.is_closed, dot)
            two_power += extra
        else:
            stack.append(decoration)
    return two_power, tuple(stack)


def _glyph_key(word: Block) -> Tuple[str, ...]:
    return tuple(decoration.value for decoration in word)


def _canonical_rotation(word: Block) -> Block:
    if not word:
        return word
    candidates = [
        source[shift:] + source[:shift]
        for source in (word, word[::-1])
        for shift in range(len(source))
    ]
    return min(candidates, key=_glyph_key)


def normalize_loop(word: Sequence[Decoration]) -> Tuple[int, Block]:
    """
    Reduce the decoration word of a loop up to rotation and reversal.

    The word is reduced linearly, then while its two ends are of the same
    kind the last decoration is moved to the front and merged.

    Returns:
        (power of 2 extracted, smallest rotation or reflection of the result)
    """
    two_power, reduced = normalize_block(word)
    while len(reduced) > 1 and reduced[0].is_closed == reduced[-1].is_closed:
        extra, reduced = normalize_block(reduced[-1:] + reduced[:-1])
        two_power += extra
    return two_power, _canonical_rotation(reduced)


def format_block(block: Block) -> str:
    return "[" + " ".join(decoration.value for decoration in block) + "]"


class Face(Enum):
    """Diagram faces."""

    NORTH = "t"
    SOUTH = "b"


@dataclass(frozen=True)
class Node:
    """A boundary node, e.g. t3 or b1."""

    face: Face
    pos: int

    @property
    def name(self) -> str:
        return f"{self.face.value}{self.pos}"

    @property
    def sort_key(self) -> Tuple[int, int]:
        """North nodes first, then by position."""
        return (0 if self.face is Face.NORTH else 1, self.pos)

    @classmethod
    def parse(cls, name: str) -> "Node":
        """
        Read a node name.

        Raises:
            DiagramFormatError: If the name is not t<k> or b<k>
        """
        match = re.fullmatch(r"([tb])([0-9]+)", name.strip())
        if match is None:
            raise DiagramFormatError(f"Bad node name {name!r}")
        return cls(Face(match.group(1)), int(match.group(2)))

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Edge:
    """
    An edge and its decoration blocks.

    Ends are oriented: same-face edges left to right, propagating edges
    north end first. Blocks are read along that orientation.
    """

    ends: Tuple[Node, Node]
    blocks: Tuple[Block, ...] = ()

    @property
    def is_propagating(self) -> bool:
        return self.ends[0].face is not self.ends[1].face

    @property
    def face(self) -> Face:
        """Face of a non-propagating edge (north end's face otherwise)."""
        return self.ends[0].face

    @property
    def span(self) -> Tuple[int, int]:
        """Smallest and largest position among the ends."""
        low, high = sorted(node.pos for node in self.ends)
        return low, high

    @property
    def decorations(self) -> Block:
        """All decorations in reading order."""
        return tuple(decoration for block in self.blocks for decoration in block)

    def end_on(self, face: Face) -> Node:
        """The end lying on a face; for propagating edges."""
        return self.ends[0] if self.ends[0].face is face else self.ends[1]

    def touches(self, node: Node) -> bool:
        return node in self.ends

    def to_text(self) -> str:
        label = f"{self.ends[0]}-{self.ends[1]}"
        return label + "".join(format_block(block) for block in self.blocks)


def orient_ends(first: Node, second: Node) -> Tuple[Node, Node]:
    """Put two ends in reading orientation."""
    if first.face is second.face:
        return (first, second) if first.pos < second.pos else (second, first)
    return (first, second) if first.face is Face.NORTH else (second, first)


@dataclass(frozen=True)
class Diagram:
    """
    An LR-decorated diagram in canonical form.

    ``edges`` are sorted by first end, ``loops`` hold the sorted canonical
    words of retained loops and ``schedule`` lists (edge index, block index)
    pairs top to bottom when the a-value is 1.
    """

    rank: int
    edges: Tuple[Edge, ...]
    loops: Tuple[Block, ...] = ()
    schedule: Tuple[Tuple[int, int], ...] = ()

    @property
    def node_count(self) -> int:
        return self.rank + 2

    @property
    def nodes(self) -> Tuple[Node, ...]:
        """North nodes then south nodes, each west to east."""
        return tuple(
            Node(face, pos)
            for face in (Face.NORTH, Face.SOUTH)
            for pos in range(1, self.node_count + 1)
        )

    @property
    def a_value(self) -> int:
        """Number of non-propagating edges on the north face."""
        return sum(
            1
            for edge in self.edges
            if not edge.is_propagating and edge.face is Face.NORTH
        )

    @property
    def propagating(self) -> Tuple[int, ...]:
        """Indices of propagating edges, west to east."""
        indices = [i for i, edge in enumerate(self.edges) if edge.is_propagating]
        return tuple(sorted(indices, key=lambda i: self.edges[i].ends[0].pos))

    @property
    def is_dammed(self) -> bool:
        return any(edge.is_propagating for edge in self.edges)

    @property
    def standard_loops(self) -> Optional[int]:
        """Loop count when every loop is the retained class, else None."""
        if all(loop == RETAINED_LOOP for loop in self.loops):
            return len(self.loops)
        return None

    def edge_at(self, node: Node) -> int:
        """
        Index of the edge ending at a node.

        Raises:
            DiagramFormatError: If no edge ends there
        """
        for index, edge in enumerate(self.edges):
            if edge.touches(node):
                return index
        raise DiagramFormatError(f"No edge at node {node}")

    def face_edges(self, face: Face) -> List[int]:
        """Indices of the non-propagating edges on a face."""
        return [
            i
            for i, edge in enumerate(self.edges)
            if not edge.is_propagating and edge.face is face
        ]

    @property
    def sort_key(self) -> Tuple:
        edges = tuple(
            (
                edge.ends[0].sort_key,
                edge.ends[1].sort_key,
                tuple(_glyph_key(block) for block in edge.blocks),
            )
            for edge in self.edges
        )
        return edges, tuple(_glyph_key(loop) for loop in self.loops), self.schedule

    def to_text(self) -> str:
        """One-line text form, e.g. ``t1-t2[cd] t3-b1[cd] t4-b4 b2-b3``."""
        parts = [edge.to_text() for edge in self.edges]
        parts.extend(f"loop{format_block(loop)}" for loop in self.loops)
        if self.schedule:
            order = " ".join(f"{e}.{b}" for e, b in self.schedule)
            parts.append(f"@ {order}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_text()


def _assemble(
    rank: int,
    edges: Iterable[Edge],
    loops: Iterable[Block] = (),
    schedule: Iterable[Tuple[Edge, int]] = (),
) -> Diagram:
    """Sort edges and loops; schedule entries name edges by object."""
    ordered = sorted(edges, key=lambda edge: edge.ends[0].sort_key)
    index = {id(edge): i for i, edge in enumerate(ordered)}
    return Diagram(
        rank,
        tuple(ordered),
        tuple(sorted(loops, key=_glyph_key)),
        tuple((index[id(edge)], j) for edge, j in schedule),
    )


def _check_rank(ctx: CoxeterContext, d: Diagram) -> None:
    if d.rank != ctx.n:
        raise InvalidRankError(f"Diagram of rank {d.rank} used at rank {ctx.n}")


def identity_diagram(ctx: CoxeterContext) -> Diagram:
    """The undecorated diagram with all edges vertical."""
    edges = [
        Edge((Node(Face.NORTH, p), Node(Face.SOUTH, p)))
        for p in range(1, ctx.node_count + 1)
    ]
    return _assemble(ctx.n, edges)


def simple_diagram(ctx: CoxeterContext, i: int) -> Diagram:
    """
    The generator diagram d_i.

    Cup {t_i, t_i+1} and cap {b_i, b_i+1}, vertical edges elsewhere; d_1
    decorates its cup and cap with a closed dot, d_n+1 with an open dot.

    Raises:
        WordError: If i is out of range
    """
    ctx.check_index(i)
    if i == 1:
        blocks: Tuple[Block, ...] = ((CD,),)
    elif i == ctx.n + 1:
        blocks = ((OD,),)
    else:
        blocks = ()
    edges = [
        Edge((Node(Face.NORTH, i), Node(Face.NORTH, i + 1)), blocks),
        Edge((Node(Face.SOUTH, i), Node(Face.SOUTH, i + 1)), blocks),
    ]
    edges.extend(
        Edge((Node(Face.NORTH, p), Node(Face.SOUTH, p)))
        for p in range(1, ctx.node_count + 1)
        if p not in (i, i + 1)
    )
    return _assemble(ctx.n, edges)


def a_value(d: Diagram) -> int:
    """Count of north-face non-propagating edges."""
    return d.a_value


# Layers of the stacked picture
_NORTH, _MIDDLE, _SOUTH = 0, 1, 2

Vertex = Tuple[int, int]
ScheduleKey = Tuple[int, int]


class _Segment(NamedTuple):
    ends: Tuple[Vertex, Vertex]
    pieces: List[Tuple[ScheduleKey, Block]]


def _segments(d: Diagram, upper: bool) -> List[_Segment]:
    """
    Edges of one factor placed in the stacked picture.

    Each block gets a vertical key: the upper factor's propagating blocks
    come first in its schedule order, then every block on the middle
    cups and caps, then the lower factor's propagating blocks.
    """
    layers = {
        Face.NORTH: _NORTH if upper else _MIDDLE,
        Face.SOUTH: _MIDDLE if upper else _SOUTH,
    }
    position = {pair: k for k, pair in enumerate(d.schedule)}
    band = 0 if upper else 2
    segments = []
    for index, edge in enumerate(d.edges):
        ends = (
            (layers[edge.ends[0].face], edge.ends[0].pos),
            (layers[edge.ends[1].face], edge.ends[1].pos),
        )
        pieces = []
        for j, block in enumerate(edge.blocks):
            if edge.is_propagating:
                key = (band, position.get((index, j), j))
            else:
                key = (1, 0)
            pieces.append((key, block))
        segments.append(_Segment(ends, pieces))
    return segments


def _node(vertex: Vertex) -> Node:
    return Node(Face.NORTH if vertex[0] == _NORTH else Face.SOUTH, vertex[1])


def _flatten(pieces: Iterable[Tuple[ScheduleKey, Block]]) -> Block:
    return tuple(decoration for _, block in pieces for decoration in block)


class _Tracer:
    """Walks the strands of two stacked diagrams."""

    def __init__(self, segments: List[_Segment]):
        self.segments = segments
        self.used = [False] * len(segments)
        self.incidence: Dict[Vertex, List[Tuple[int, int]]] = {}
        for index, segment in enumerate(segments):
            for end, vertex in enumerate(segment.ends):
                self.incidence.setdefault(vertex, []).append((index, end))

    def _take(self, index: int, end: int) -> Tuple[Vertex, List]:
        self.used[index] = True
        segment = self.segments[index]
        if end == 0:
            pieces = list(segment.pieces)
        else:
            pieces = [(key, block[::-1]) for key, block in reversed(segment.pieces)]
        return segment.ends[1 - end], pieces

    def _next(self, vertex: Vertex) -> Optional[Tuple[int, int]]:
        return next(
            ((i, end) for i, end in self.incidence[vertex] if not self.used[i]),
            None,
        )

    def strand(self, start: Vertex) -> Optional[Tuple[Vertex, List]]:
        """Follow the strand leaving a boundary vertex, unless already traced."""
        step = self._next(start)
        if step is None:
            return None
        current, pieces = self._take(*step)
        while current[0] == _MIDDLE:
            follow = self._next(current)
            if follow is None:
                raise DiagramFormatError(f"Strand broken at middle node {current}")
            current, more = self._take(*follow)
            pieces.extend(more)
        return current, pieces

    def loops(self) -> List[Block]:
        """Decoration words of the closed strands left after tracing."""
        words = []
        for index in range(len(self.segments)):
            if self.used[index]:
                continue
            start = self.segments[index].ends[0]
            current, pieces = self._take(index, 0)
            while current != start:
                follow = self._next(current)
                if follow is None:
                    raise DiagramFormatError(f"Loop broken at middle node {current}")
                current, more = self._take(*follow)
                pieces.extend(more)
            words.append(_flatten(pieces))
        return words


def concat(
    ctx: CoxeterContext, top: Diagram, bottom: Diagram
) -> Tuple[DeltaPoly, Diagram]:
    """
    Stack ``top`` on ``bottom`` and reduce.

    Strands are traced from t1..tN then b1..bN so every new edge comes out
    in reading orientation. When the result has a-value other than 1, or
    for non-propagating edges, all decorations of an edge conjoin into one
    block. When the a-value is 1 the propagating blocks are ordered by
    vertical position and schedule-adjacent blocks of one edge merge.

    Args:
        ctx: Rank context
        top: Upper factor
        bottom: Lower factor

    Returns:
        (scalar 2^k delta^m, reduced diagram)

    Raises:
        InvalidRankError: If a factor lives over another rank
    """
    _check_rank(ctx, top)
    _check_rank(ctx, bottom)
    tracer = _Tracer(_segments(top, upper=True) + _segments(bottom, upper=False))
    size = ctx.node_count
    strands = []
    for vertex in [(_NORTH, p) for p in range(1, size + 1)] + [
        (_SOUTH, p) for p in range(1, size + 1)
    ]:
        traced = tracer.strand(vertex)
        if traced is not None:
            end, pieces = traced
            strands.append(((_node(vertex), _node(end)), pieces))

    two_power = 0
    delta_power = 0
    loops: List[Block] = list(top.loops) + list(bottom.loops)
    for word in tracer.loops():
        extra, canonical = normalize_loop(word)
        two_power += extra
        if canonical in SCALAR_LOOPS:
            delta_power += 1
        else:
            loops.append(canonical)

    cups = sum(1 for ends, _ in strands if ends[0].face is ends[1].face is Face.NORTH)
    edges: List[Edge] = []
    scheduled: List[Tuple[ScheduleKey, int, int, Block]] = []
    for ends, pieces in strands:
        propagating = ends[0].face is not ends[1].face
        if cups == 1 and propagating:
            edge_index = len(edges)
            scheduled.extend(
                (key, edge_index, along, block)
                for along, (key, block) in enumerate(pieces)
            )
            edges.append(Edge(ends))
            continue
        word = _flatten(pieces)
        if word:
            extra, block = normalize_block(word)
            two_power += extra
            edges.append(Edge(ends, (block,)))
        else:
            edges.append(Edge(ends))

    schedule: List[Tuple[Edge, int]] = []
    if scheduled:
        scheduled.sort(key=lambda item: (item[0], item[1], item[2]))
        runs: List[Tuple[int, List[Decoration]]] = []
        for _, edge_index, _, block in scheduled:
            if runs and runs[-1][0] == edge_index:
                runs[-1][1].extend(block)
            else:
                runs.append((edge_index, list(block)))
        blocks: Dict[int, List[Block]] = {}
        order: List[Tuple[int, int]] = []
        for edge_index, word_list in runs:
            extra, block = normalize_block(word_list)
            two_power += extra
            blocks.setdefault(edge_index, []).append(block)
            order.append((edge_index, len(blocks[edge_index]) - 1))
        for edge_index, edge_blocks in blocks.items():
            edges[edge_index] = Edge(edges[edge_index].ends, tuple(edge_blocks))
        schedule = [(edges[e], j) for e, j in order]

    result = _assemble(ctx.n, edges, loops, schedule)
    scalar = DeltaPoly.power_form(two_power, delta_power)
    logger.debug(f"concat -> {scalar} * {result}")
    return scalar, result


@dataclass(frozen=True)
class DiagramElement:
    """Finite Z[delta]-combination of diagrams, sorted by diagram key."""

    rank: int
    terms: Tuple[Tuple[Diagram, DeltaPoly], ...] = ()

    @classmethod
    def from_terms(
        cls, rank: int, pairs: Iterable[Tuple[Diagram, Coefficient]]
    ) -> "DiagramElement":
        collected = collect_terms((d, _as_poly(c)) for d, c in pairs)
        ordered = sorted(collected.items(), key=lambda item: item[0].sort_key)
        return cls(rank, tuple(ordered))

    @classmethod
    def single(cls, d: Diagram, coefficient: Coefficient = 1) -> "DiagramElement":
        return cls.from_terms(d.rank, [(d, coefficient)])

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, d: Diagram) -> DeltaPoly:
        return dict(self.terms).get(d, DeltaPoly.zero())

    def __add__(self, other: "DiagramElement") -> "DiagramElement":
        if self.rank != other.rank:
            raise InvalidRankError(f"Rank mismatch: {self.rank} vs {other.rank}")
        return DiagramElement.from_terms(self.rank, self.terms + other.terms)

    def scale(self, factor: Coefficient) -> "DiagramElement":
        poly = _as_poly(factor)
        return DiagramElement.from_terms(
            self.rank, ((d, c * poly) for d, c in self.terms)
        )

    def to_text(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for d, c in self.terms:
            if c == DeltaPoly.one():
                parts.append(f"<{d}>")
            elif len(c.as_dict()) == 1:
                parts.append(f"{c} * <{d}>")
            else:
                parts.append(f"({c}) * <{d}>")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_text()


def mul_elements(
    ctx: CoxeterContext, x: DiagramElement, y: DiagramElement
) -> DiagramElement:
    """Bilinear product, collecting like diagrams."""
    pairs = []
    for top, c_top in x.terms:
        for bottom, c_bottom in y.terms:
            scalar, d = concat(ctx, top, bottom)
            pairs.append((d, scalar * c_top * c_bottom))
    return DiagramElement.from_terms(ctx.n, pairs)


# Serialization and validation


def _boundary_index(node: Node, size: int) -> int:
    """Position on the boundary cycle t1..tN, bN..b1."""
    if node.face is Face.NORTH:
        return node.pos - 1
    return 2 * size - node.pos


def check_diagram(d: Diagram) -> Diagram:
    """
    Validate the structure of a diagram.

    Args:
        d: Diagram to check

    Returns:
        The diagram unchanged

    Raises:
        InvalidRankError: If the rank is below 2
        DiagramFormatError: If the pairing, blocks, loops or schedule are
            not in canonical form
    """
    ctx = CoxeterContext(d.rank)
    size = ctx.node_count
    seen: Dict[Node, int] = {}
    for index, edge in enumerate(d.edges):
        for node in edge.ends:
            if not 1 <= node.pos <= size:
                raise DiagramFormatError(f"Node {node} outside 1..{size}")
            if node in seen:
                raise DiagramFormatError(f"Node {node} used twice")
            seen[node] = index
        if edge.ends != orient_ends(*edge.ends):
            raise DiagramFormatError(f"Edge {edge.to_text()} not in reading order")
        for block in edge.blocks:
            if not block or normalize_block(block) != (0, block):
                raise DiagramFormatError(
                    f"Block {format_block(block)} on {edge.to_text()} is not reduced"
                )
    if len(seen) != 2 * size:
        raise DiagramFormatError(f"Pairing covers {len(seen)} of {2 * size} nodes")
    keys = [edge.ends[0].sort_key for edge in d.edges]
    if keys != sorted(keys):
        raise DiagramFormatError("Edges not sorted by first end")

    stack: List[int] = []
    by_position = sorted(seen.items(), key=lambda item: _boundary_index(item[0], size))
    opened = set()
    for node, index in by_position:
        if index not in opened:
            opened.add(index)
            stack.append(index)
        elif not stack or stack.pop() != index:
            raise DiagramFormatError("Pairing is not planar")

    for loop in d.loops:
        extra, canonical = normalize_loop(loop)
        if extra or canonical != loop or canonical in SCALAR_LOOPS:
            raise DiagramFormatError(f"Loop {format_block(loop)} is not reduced")
    if list(d.loops) != sorted(d.loops, key=_glyph_key):
        raise DiagramFormatError("Loops not sorted")

    if d.a_value == 1:
        expected = {
            (index, j)
            for index in d.propagating
            for j in range(len(d.edges[index].blocks))
        }
        if set(d.schedule) != expected or len(d.schedule) != len(expected):
            raise DiagramFormatError("Schedule must list every propagating block once")
        for index in d.propagating:
            along = [j for e, j in d.schedule if e == index]
            if along != sorted(along):
                raise DiagramFormatError(f"Schedule reorders blocks of edge {index}")
    elif d.schedule:
        raise DiagramFormatError("Only diagrams with a-value 1 carry a schedule")
    for index, edge in enumerate(d.edges):
        conjoined = d.a_value != 1 or not edge.is_propagating
        if conjoined and len(edge.blocks) > 1:
            raise DiagramFormatError(f"Edge {edge.to_text()} must carry one block")
    return d


def to_model(d: Diagram) -> DiagramModel:
    """Serialize a diagram."""
    standard = d.standard_loops
    return DiagramModel(
        rank=d.rank,
        edges=[
            EdgeModel(
                ends=(edge.ends[0].name, edge.ends[1].name),
                blocks=[list(_glyph_key(block)) for block in edge.blocks],
            )
            for edge in d.edges
        ],
        loops=(
            standard
            if standard is not None
            else [list(_glyph_key(loop)) for loop in d.loops]
        ),
        schedule=list(d.schedule),
    )


def from_model(model: DiagramModel) -> Diagram:
    """
    Build a validated diagram from its serialized form.

    Edge ends may be given in either order; blocks are then read from the
    first listed end.

    Raises:
        DiagramFormatError: If the data does not describe a canonical diagram
    """
    edges = []
    for edge_model in model.edges:
        first, second = (Node.parse(name) for name in edge_model.ends)
        blocks = tuple(
            tuple(Decoration.parse(glyph) for glyph in block)
            for block in edge_model.blocks
        )
        ends = orient_ends(first, second)
        if ends != (first, second):
            blocks = tuple(block[::-1] for block in reversed(blocks))
        edges.append(Edge(ends, blocks))
    if isinstance(model.loops, int):
        loops = [RETAINED_LOOP] * model.loops
    else:
        loops = []
        for word in model.loops:
            extra, canonical = normalize_loop([Decoration.parse(g) for g in word])
            if extra:
                raise DiagramFormatError(f"Loop {word} is not reduced")
            loops.append(canonical)
    for e, j in model.schedule:
        if not 0 <= e < len(edges) or not 0 <= j < len(edges[e].blocks):
            raise DiagramFormatError(f"Schedule entry {(e, j)} out of range")
    schedule = [(edges[e], j) for e, j in model.schedule]
    return check_diagram(_assemble(model.rank, edges, loops, schedule))


def canonicalize(d: Diagram) -> str:
    """Deterministic compact JSON of a diagram; equal iff diagrams are equal."""
    return to_model(d).model_dump_json()


# Admissibility


@dataclass(frozen=True)
class AxiomViolation:
    """A failed decoration rule or admissibility axiom."""

    axiom: str
    message: str

    def __str__(self) -> str:
        return f"{self.axiom}: {self.message}"


def _nested(d: Diagram, index: int) -> bool:
    edge = d.edges[index]
    low, high = edge.span
    for other_index in d.face_edges(edge.face):
        other_low, other_high = d.edges[other_index].span
        if other_low < low and high < other_high:
            return True
    return False


def _west_exposed(d: Diagram, index: int) -> bool:
    """May the edge carry closed decorations."""
    edge = d.edges[index]
    propagating = d.propagating
    if edge.is_propagating:
        return index == propagating[0]
    if _nested(d, index):
        return False
    if not propagating:
        return True
    bound = d.edges[propagating[0]].end_on(edge.face).pos
    return edge.span[1] < bound


def _east_exposed(d: Diagram, index: int) -> bool:
    """May the edge carry open decorations."""
    edge = d.edges[index]
    propagating = d.propagating
    if edge.is_propagating:
        return index == propagating[-1]
    if _nested(d, index):
        return False
    if not propagating:
        return True
    bound = d.edges[propagating[-1]].end_on(edge.face).pos
    return edge.span[0] > bound


def decoration_violations(d: Diagram) -> List[AxiomViolation]:
    """
    Check the placement rules every LR-decorated diagram obeys.

    D0: a diagram with a-value 0 is undecorated. D1: closed decorations
    only on edges exposed to the west wall, open ones only on edges
    exposed to the east wall, and on an undammed diagram closed
    decorations precede open ones along each edge. D4: no two
    schedule-adjacent blocks share an edge.
    """
    found = []
    if d.a_value == 0:
        for edge in d.edges:
            if edge.blocks:
                found.append(AxiomViolation("D0", f"{edge.to_text()} is decorated"))
        return found
    dammed = d.is_dammed
    for index, edge in enumerate(d.edges):
        decorations = edge.decorations
        if any(x.is_closed for x in decorations) and not _west_exposed(d, index):
            found.append(
                AxiomViolation("D1", f"closed decoration on {edge.to_text()}")
            )
        if any(not x.is_closed for x in decorations) and not _east_exposed(d, index):
            found.append(AxiomViolation("D1", f"open decoration on {edge.to_text()}"))
        if not dammed:
            kinds = [x.is_closed for x in decorations]
            if kinds != sorted(kinds, reverse=True):
                found.append(
                    AxiomViolation("D1", f"open before closed on {edge.to_text()}")
                )
    for (e1, _), (e2, _) in zip(d.schedule, d.schedule[1:]):
        if e1 == e2:
            found.append(
                AxiomViolation("D4", f"adjacent blocks on {d.edges[e1].to_text()}")
            )
    return found


def _dot_counts(edge: Edge) -> Tuple[int, int]:
    decorations = edge.decorations
    return decorations.count(CD), decorations.count(OD)


def _walls(d: Diagram) -> Tuple[Tuple[Node, Node], Tuple[Node, Node]]:
    size = d.node_count
    west = (Node(Face.NORTH, 1), Node(Face.SOUTH, 1))
    east = (Node(Face.NORTH, size), Node(Face.SOUTH, size))
    return west, east


def _at(edge: Edge, nodes: Tuple[Node, Node]) -> int:
    return sum(1 for node in edge.ends if node in nodes)


def _check_undammed(d: Diagram) -> List[AxiomViolation]:
    found = []
    west, east = _walls(d)
    for edge in d.edges:
        decorations = edge.decorations
        closed_dots, open_dots = _dot_counts(edge)
        at_west = _at(edge, west) > 0
        at_east = _at(edge, east) > 0
        if at_west and (closed_dots != 1 or decorations[0] is not CD):
            found.append(AxiomViolation("C2", f"{edge.to_text()} needs a leading cd"))
        if at_east and (open_dots != 1 or decorations[-1] is not OD):
            found.append(AxiomViolation("C2", f"{edge.to_text()} needs a trailing od"))
        if (closed_dots and not at_west) or (open_dots and not at_east):
            found.append(AxiomViolation("C2", f"stray dot on {edge.to_text()}"))
    return found


def _check_single_propagating(d: Diagram) -> List[AxiomViolation]:
    found = []
    size = d.node_count
    west, east = _walls(d)
    index = d.propagating[0]
    edge = d.edges[index]
    decorations = list(edge.decorations)
    has_closed = any(x.is_closed for x in decorations)
    has_open = any(not x.is_closed for x in decorations)
    if has_closed and has_open:
        north, south = edge.ends
        first = CD if north.pos == 1 else OD if north.pos == size else None
        last = CD if south.pos == 1 else OD if south.pos == size else None
        expected_ends = [(0, first), (len(decorations) - 1, last)]
        for position, wanted in expected_ends:
            got = decorations[position]
            misplaced = got.is_dot if wanted is None else got != wanted
            if misplaced:
                found.append(
                    AxiomViolation("C3", f"bad end decoration on {edge.to_text()}")
                )
        if any(x.is_dot for x in decorations[1:-1]):
            found.append(AxiomViolation("C3", f"inner dot on {edge.to_text()}"))
    else:
        wall = west if has_closed else east
        dot = CD if has_closed else OD
        allowed: List[List[Decoration]] = [[], [CT if has_closed else OT]]
        if _at(edge, wall) == 1:
            allowed.append([dot])
        if decorations not in allowed:
            found.append(AxiomViolation("C3", f"bad decoration on {edge.to_text()}"))
    for other_index, other in enumerate(d.edges):
        if other_index == index:
            continue
        closed_dots, open_dots = _dot_counts(other)
        if _at(other, west) and other.blocks != ((CD,),):
            found.append(AxiomViolation("C3", f"{other.to_text()} must carry [cd]"))
        elif _at(other, east) and other.blocks != ((OD,),):
            found.append(AxiomViolation("C3", f"{other.to_text()} must carry [od]"))
        elif (closed_dots or open_dots) and not (_at(other, west) or _at(other, east)):
            found.append(AxiomViolation("C3", f"stray dot on {other.to_text()}"))
    return found


def _check_dammed(d: Diagram) -> List[AxiomViolation]:
    found = []
    size = d.node_count
    allowed_dots: Dict[int, Decoration] = {}
    for wall_pos, triangle, dot in ((1, CT, CD), (size, OT, OD)):
        north, south = Node(Face.NORTH, wall_pos), Node(Face.SOUTH, wall_pos)
        top, bottom = d.edge_at(north), d.edge_at(south)
        if top == bottom:
            if d.edges[top].blocks not in ((), ((triangle,),)):
                found.append(
                    AxiomViolation(
                        "C4",
                        f"{d.edges[top].to_text()} may carry only [{triangle.value}]",
                    )
                )
            continue
        for index in (top, bottom):
            allowed_dots[index] = dot
            if d.edges[index].blocks != ((dot,),):
                found.append(
                    AxiomViolation(
                        "C4", f"{d.edges[index].to_text()} must carry [{dot.value}]"
                    )
                )
    for index, edge in enumerate(d.edges):
        for dot in (CD, OD):
            if dot in edge.decorations and allowed_dots.get(index) is not dot:
                found.append(AxiomViolation("C4", f"stray dot on {edge.to_text()}"))
    return found


@dataclass(frozen=True)
class EndTemplate:
    """
    Shape of one end of an a-value 1 diagram.

    ``north`` and ``south`` say whether the outer nodes of the wall lie on
    the outermost propagating edge; otherwise they sit on a cup or cap
    carrying a single dot. Between the optional leading and trailing dots
    the edge carries a run of single triangles.
    """

    name: str
    north: bool
    south: bool
    lead_dot: bool
    trail_dot: bool
    one_sided: bool = False

    def accepts(self, north: bool, south: bool, blocks: Sequence[Block]) -> bool:
        if (north, south) != (self.north, self.south):
            return False
        dots = [j for j, block in enumerate(blocks) if block[0].is_dot]
        wanted = [0] if self.lead_dot else []
        if self.trail_dot:
            wanted.append(len(blocks) - 1)
        return dots == wanted


# Western ends; the eastern ones mirror them with open glyphs
END_TEMPLATES = (
    EndTemplate("through", north=True, south=True, lead_dot=False, trail_dot=False),
    EndTemplate(
        "bare",
        north=False,
        south=False,
        lead_dot=False,
        trail_dot=False,
        one_sided=True,
    ),
    EndTemplate("capped", north=False, south=False, lead_dot=True, trail_dot=True),
    EndTemplate("north", north=True, south=False, lead_dot=True, trail_dot=False),
    EndTemplate("south", north=False, south=True, lead_dot=False, trail_dot=True),
)


def end_template(d: Diagram, east: bool = False) -> Optional[EndTemplate]:
    """
    The template matched by the western (or eastern) end of a diagram.

    Only meaningful for a-value 1 diagrams with two or more propagating
    edges. Blocks of the outermost propagating edge must be single glyphs
    of that side.

    Returns:
        The first matching entry of END_TEMPLATES, or None
    """
    propagating = d.propagating
    if len(propagating) < 2:
        return None
    wall = d.node_count if east else 1
    edge = d.edges[propagating[-1] if east else propagating[0]]
    glyphs = ((OT,), (OD,)) if east else ((CT,), (CD,))
    if any(block not in glyphs for block in edge.blocks):
        return None
    north = edge.touches(Node(Face.NORTH, wall))
    south = edge.touches(Node(Face.SOUTH, wall))
    return next(
        (t for t in END_TEMPLATES if t.accepts(north, south, edge.blocks)), None
    )


def _check_single_cup(d: Diagram) -> List[AxiomViolation]:
    found = []
    size = d.node_count
    propagating = d.propagating
    leftmost, rightmost = propagating[0], propagating[-1]
    for index, edge in enumerate(d.edges):
        if not edge.is_propagating:
            low, high = edge.span
            expected: Tuple[Block, ...] = ()
            if low == 1:
                expected = ((CD,),)
            elif high == size:
                expected = ((OD,),)
            if edge.blocks != expected:
                found.append(
                    AxiomViolation("C5", f"bad decoration on {edge.to_text()}")
                )
        elif index not in (leftmost, rightmost) and edge.blocks:
            found.append(AxiomViolation("C5", f"inner edge {edge.to_text()} decorated"))

    all_decorations = [x for edge in d.edges for x in edge.decorations]
    for index, east in ((leftmost, False), (rightmost, True)):
        side = "eastern" if east else "western"
        template = end_template(d, east)
        if template is None:
            found.append(
                AxiomViolation(
                    "C5", f"{side} end {d.edges[index].to_text()} fits no template"
                )
            )
        elif template.one_sided and any(x.is_closed == east for x in all_decorations):
            other = "closed" if east else "open"
            message = f"bare {side} end with {other} decorations"
            found.append(AxiomViolation("C5", message))
    last = len(d.schedule) - 1
    for position, (e, j) in enumerate(d.schedule):
        if d.edges[e].blocks[j][0].is_dot and position not in (0, last):
            found.append(
                AxiomViolation("C5", f"dot on {d.edges[e].to_text()} not extremal")
            )
    return found


def is_admissible(ctx: CoxeterContext, d: Diagram) -> Tuple[bool, List[AxiomViolation]]:
    """
    Check the decoration rules and the admissibility axioms.

    C1 restricts loops to the retained class. The remaining axiom depends
    on the shape: C2 for undammed diagrams, C3 for a single propagating
    edge, C5 for a-value 1 and C4 otherwise.

    Args:
        ctx: Rank context
        d: Diagram to check

    Returns:
        (True, []) for admissible diagrams, else (False, violations)
    """
    _check_rank(ctx, d)
    found = decoration_violations(d)
    for loop in d.loops:
        if loop != RETAINED_LOOP:
            found.append(AxiomViolation("C1", f"loop {format_block(loop)}"))
    propagating = len(d.propagating)
    if d.a_value == 0:
        pass
    elif propagating == 0:
        found.extend(_check_undammed(d))
    elif propagating == 1:
        found.extend(_check_single_propagating(d))
    elif d.a_value == 1:
        found.extend(_check_single_cup(d))
    else:
        found.extend(_check_dammed(d))
    if found:
        logger.debug(f"{d}: {len(found)} violation(s)")
    return not found, found
