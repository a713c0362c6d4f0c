"""
Drawings of diagrams and heaps.

ASCII pictures put the north nodes on the first line and the south nodes
on the last, with cups, caps and propagating edges in between and a
legend listing decorations, loops and the schedule. SVG pictures draw the
same diagram with Bezier edges, decoration glyphs placed along the edges
(by schedule position for a-value 1) and loops nested at the west.
"""

import logging
import math
from typing import Dict, List, Sequence, Tuple

import svg

from .diagram import Decoration, Diagram, Edge, Face, format_block

logger = logging.getLogger(__name__)

CELL = 4

SPACING = 50
MARGIN = 40
NORTH_Y = 30
SOUTH_Y = 210
HEIGHT = 240
LOOP_STEP = 24

Point = Tuple[float, float]


def _column(pos: int) -> int:
    return CELL * (pos - 1) + 2


def _depths(d: Diagram, face: Face) -> Dict[int, int]:
    """Nesting depth of each non-propagating edge on a face, innermost 1."""
    def width(index: int) -> int:
        low, high = d.edges[index].span
        return high - low

    indices = sorted(d.face_edges(face), key=width)
    depths: Dict[int, int] = {}
    for index in indices:
        low, high = d.edges[index].span
        inner = [
            depths[other]
            for other in depths
            if low < d.edges[other].span[0] and d.edges[other].span[1] < high
        ]
        depths[index] = 1 + max(inner, default=0)
    return depths


def _blank(width: int) -> List[str]:
    return [" "] * width


def _label_row(size: int, face: Face, width: int) -> str:
    row = _blank(width)
    for pos in range(1, size + 1):
        label = f"{face.value}{pos}"
        start = _column(pos) - 1
        for offset, char in enumerate(label):
            if start + offset < width:
                row[start + offset] = char
    return "".join(row).rstrip()


def _arc_rows(d: Diagram, face: Face, width: int) -> List[str]:
    depths = _depths(d, face)
    height = max(depths.values(), default=0)
    bar = "_" if face is Face.NORTH else "‾"
    rows = []
    for r in range(1, height + 1):
        row = _blank(width)
        for index in d.propagating:
            row[_column(d.edges[index].end_on(face).pos)] = "|"
        for index, depth in depths.items():
            low, high = d.edges[index].span
            if depth >= r:
                row[_column(low)] = row[_column(high)] = "|"
            if depth == r:
                for x in range(_column(low) + 1, _column(high)):
                    row[x] = bar
        rows.append("".join(row).rstrip())
    return rows if face is Face.NORTH else rows[::-1]


def _propagating_rows(d: Diagram, width: int) -> List[str]:
    if not d.propagating:
        return []
    top, middle, bottom = _blank(width), _blank(width), _blank(width)
    for index in d.propagating:
        edge = d.edges[index]
        north = _column(edge.end_on(Face.NORTH).pos)
        south = _column(edge.end_on(Face.SOUTH).pos)
        top[north] = "|"
        bottom[south] = "|"
        if north == south:
            stroke = "|"
        else:
            stroke = "/" if south < north else "\\"
        middle[(north + south) // 2] = stroke
    return ["".join(row).rstrip() for row in (top, middle, bottom)]


def _glyphs(block: Sequence[Decoration]) -> str:
    return "".join(decoration.symbol for decoration in block)


def _edge_name(edge: Edge) -> str:
    return f"{edge.ends[0]}-{edge.ends[1]}"


def _legend(d: Diagram) -> List[str]:
    lines = []
    for edge in d.edges:
        if edge.blocks:
            blocks = " | ".join(_glyphs(block) for block in edge.blocks)
            lines.append(f"{_edge_name(edge)}: {blocks}")
    for loop in d.loops:
        lines.append(f"loop: ({_glyphs(loop)})")
    if d.schedule:
        order = " ".join(
            f"{_edge_name(d.edges[e])}{format_block(d.edges[e].blocks[j])}"
            for e, j in d.schedule
        )
        lines.append(f"schedule: {order}")
    return lines


def render_ascii(d: Diagram) -> str:
    """
    Text drawing of a diagram.

    Cups hang below the north labels with ``_`` bars, caps rise above the
    south labels with ``‾`` bars, propagating edges are drawn as ``|``,
    ``/`` or ``\\`` and decorations are listed below the picture.
    """
    size = d.node_count
    width = CELL * size + 1
    lines = [_label_row(size, Face.NORTH, width)]
    lines.extend(_arc_rows(d, Face.NORTH, width))
    lines.extend(_propagating_rows(d, width))
    lines.extend(_arc_rows(d, Face.SOUTH, width))
    lines.append(_label_row(size, Face.SOUTH, width))
    lines.extend(_legend(d))
    return "\n".join(lines)


def _bezier(points: Sequence[Point], t: float) -> Point:
    (x0, y0), (x1, y1), (x2, y2), (x3, y3) = points
    u = 1 - t
    x = u**3 * x0 + 3 * u**2 * t * x1 + 3 * u * t**2 * x2 + t**3 * x3
    y = u**3 * y0 + 3 * u**2 * t * y1 + 3 * u * t**2 * y2 + t**3 * y3
    return round(x, 2), round(y, 2)


def _glyph(decoration: Decoration, at: Point) -> svg.Element:
    x, y = at
    fill = "black" if decoration.is_closed else "white"
    if decoration.is_dot:
        return svg.Circle(cx=x, cy=y, r=5, fill=fill, stroke="black", stroke_width=1)
    return svg.Polygon(
        points=[x, y - 6, x - 5, y + 4, x + 5, y + 4],
        fill=fill,
        stroke="black",
        stroke_width=1,
    )


def _edge_points(
    d: Diagram, index: int, offset: float, depths: Dict[int, int]
) -> List[Point]:
    edge = d.edges[index]

    def x(pos: int) -> float:
        return offset + MARGIN + SPACING * (pos - 1)

    if edge.is_propagating:
        north = x(edge.end_on(Face.NORTH).pos)
        south = x(edge.end_on(Face.SOUTH).pos)
        middle = (NORTH_Y + SOUTH_Y) / 2
        return [(north, NORTH_Y), (north, middle), (south, middle), (south, SOUTH_Y)]
    low, high = edge.span
    base = NORTH_Y if edge.face is Face.NORTH else SOUTH_Y
    rise = 20 + 15 * depths[index]
    control = base + rise if edge.face is Face.NORTH else base - rise
    return [(x(low), base), (x(low), control), (x(high), control), (x(high), base)]


def _decoration_positions(d: Diagram, index: int) -> List[float]:
    """Curve parameters of the decorations of an edge, in reading order."""
    edge = d.edges[index]
    decorations = edge.decorations
    if d.schedule and edge.is_propagating:
        slots = len(d.schedule)
        positions = []
        for j, block in enumerate(edge.blocks):
            slot = d.schedule.index((index, j))
            centre = (slot + 1) / (slots + 1)
            spread = 0.05
            first = centre - spread * (len(block) - 1) / 2
            positions.extend(first + spread * k for k in range(len(block)))
        return positions
    count = len(decorations)
    return [(k + 1) / (count + 1) for k in range(count)]


def render_svg(d: Diagram) -> str:
    """SVG 1.1 drawing with a fixed viewport per rank and loop count."""
    size = d.node_count
    loop_margin = LOOP_STEP * len(d.loops) + (10 if d.loops else 0)
    width = loop_margin + 2 * MARGIN + SPACING * (size - 1)
    elements: List[svg.Element] = [
        svg.Rect(
            x=loop_margin + 10,
            y=NORTH_Y,
            width=width - loop_margin - 20,
            height=SOUTH_Y - NORTH_Y,
            fill="none",
            stroke="lightgray",
        ),
    ]
    depths = {**_depths(d, Face.NORTH), **_depths(d, Face.SOUTH)}
    for index in range(len(d.edges)):
        points = _edge_points(d, index, loop_margin, depths)
        (x0, y0), (x1, y1), (x2, y2), (x3, y3) = points
        elements.append(
            svg.Path(
                d=[svg.M(x0, y0), svg.C(x1, y1, x2, y2, x3, y3)],
                stroke="black",
                stroke_width=2,
                fill="none",
            )
        )
        decorations = d.edges[index].decorations
        for decoration, t in zip(decorations, _decoration_positions(d, index)):
            elements.append(_glyph(decoration, _bezier(points, t)))
    for pos in range(1, size + 1):
        cx = loop_margin + MARGIN + SPACING * (pos - 1)
        for cy in (NORTH_Y, SOUTH_Y):
            elements.append(svg.Circle(cx=cx, cy=cy, r=3, fill="black"))
    centre_y = (NORTH_Y + SOUTH_Y) / 2
    for k, loop in enumerate(d.loops):
        rx = LOOP_STEP * (k + 1) / 2
        ry = 20 + 12 * k
        cx = loop_margin / 2
        elements.append(
            svg.Ellipse(
                cx=cx,
                cy=centre_y,
                rx=rx,
                ry=ry,
                fill="none",
                stroke="black",
                stroke_width=2,
            )
        )
        for m, decoration in enumerate(loop):
            angle = 2 * math.pi * m / len(loop)
            at = (
                round(cx + rx * math.sin(angle), 2),
                round(centre_y - ry * math.cos(angle), 2),
            )
            elements.append(_glyph(decoration, at))
    logger.debug(f"svg for {d}: {len(elements)} elements")
    return svg.SVG(
        width=width,
        height=HEIGHT,
        viewBox=svg.ViewBoxSpec(0, 0, width, HEIGHT),
        elements=elements,
    ).as_str()
