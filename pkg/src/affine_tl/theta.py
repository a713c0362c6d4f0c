"""
The homomorphism theta from the monomial algebra to the diagram algebra.

theta sends b_i to the simple diagram d_i, so b_w goes to the product of
simple diagrams along any reduced word of w. This module evaluates theta,
reads descents back off diagrams, inverts theta by a bounded search, and
sweeps every FC element up to a length bound to check that theta(b_w) is
an admissible diagram with scalar 1, that distinct elements give distinct
diagrams, and that a-values match n-values.
"""

import logging
from collections import Counter
from functools import lru_cache
from typing import Dict, FrozenSet, Optional, Sequence, Tuple

from .coxeter import (
    CoxeterContext,
    FCElement,
    commutation_class,
    enumerate_fc,
    left_descents,
    right_descents,
)
from .diagram import (
    CD,
    OD,
    Block,
    Diagram,
    DiagramElement,
    Face,
    Node,
    concat,
    identity_diagram,
    is_admissible,
    simple_diagram,
)
from .elements import is_type_I, n_value, weak_star_moves
from .errors import InconsistencyError, InvalidRankError
from .models import VerificationReport
from .tl import DeltaPoly, MonomialElement

logger = logging.getLogger(__name__)


# Prefixes are cached at multiples of this length
PREFIX_STRIDE = 32
PRODUCT_CACHE_SIZE = 8192


@lru_cache(maxsize=PRODUCT_CACHE_SIZE)
def _product(n: int, word: Tuple[int, ...]) -> Tuple[DeltaPoly, Diagram]:
    ctx = CoxeterContext(n)
    cut = (len(word) - 1) // PREFIX_STRIDE * PREFIX_STRIDE if word else 0
    if cut:
        scalar, result = _product(n, word[:cut])
    else:
        scalar, result = DeltaPoly.one(), identity_diagram(ctx)
    for letter in word[cut:]:
        extra, result = concat(ctx, result, simple_diagram(ctx, letter))
        scalar = scalar * extra
    return scalar, result


def diagram_product(
    ctx: CoxeterContext, word: Sequence[int]
) -> Tuple[DeltaPoly, Diagram]:
    """
    Product d_x1 ... d_xp of simple diagrams along any word.

    Args:
        ctx: Rank context
        word: Generator indices, reduced or not

    Returns:
        (scalar, diagram)

    Raises:
        WordError: If a letter is out of range
    """
    return _product(ctx.n, ctx.validate_word(word))


def theta(ctx: CoxeterContext, x: MonomialElement) -> DiagramElement:
    """
    Image of a monomial element, evaluated along canonical words.

    Raises:
        InvalidRankError: If x lives over another rank
    """
    if x.rank != ctx.n:
        raise InvalidRankError(f"Element of rank {x.rank} used at rank {ctx.n}")
    pairs = []
    for fc, c in x.terms:
        scalar, d = diagram_product(ctx, fc.canonical)
        pairs.append((d, scalar * c))
    return DiagramElement.from_terms(ctx.n, pairs)


def d_of_w(ctx: CoxeterContext, fc: FCElement) -> Diagram:
    """
    The admissible diagram d_w = theta(b_w).

    Raises:
        InconsistencyError: If the product carries a scalar other than 1 or
            the diagram is not admissible
    """
    scalar, d = diagram_product(ctx, fc.canonical)
    if scalar != DeltaPoly.one():
        raise InconsistencyError(f"theta(b{fc}) has scalar {scalar}")
    admissible, violations = is_admissible(ctx, d)
    if not admissible:
        details = "; ".join(str(v) for v in violations)
        raise InconsistencyError(f"theta(b{fc}) is not admissible: {details}")
    return d


def _simple_block(ctx: CoxeterContext, i: int) -> Tuple[Block, ...]:
    if i == 1:
        return ((CD,),)
    if i == ctx.n + 1:
        return ((OD,),)
    return ()


def _face_descents(ctx: CoxeterContext, d: Diagram, face: Face) -> FrozenSet[int]:
    found = set()
    for i in ctx.generators:
        edge = d.edges[d.edge_at(Node(face, i))]
        if edge.ends == (Node(face, i), Node(face, i + 1)):
            if edge.blocks == _simple_block(ctx, i):
                found.add(i)
    return frozenset(found)


def descents_from_diagram(
    ctx: CoxeterContext, d: Diagram
) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """
    Read descents off simple edges.

    i is a left descent when the north face has the edge {t_i, t_i+1}
    decorated exactly like the cup of d_i; right descents are read on the
    south face.

    Returns:
        (left descents, right descents)
    """
    return _face_descents(ctx, d, Face.NORTH), _face_descents(ctx, d, Face.SOUTH)


@lru_cache(maxsize=16)
def _inverse_table(n: int, max_len: int) -> Dict[Diagram, FCElement]:
    ctx = CoxeterContext(n)
    table: Dict[Diagram, FCElement] = {}
    for fc in enumerate_fc(ctx, max_len):
        table.setdefault(diagram_product(ctx, fc.canonical)[1], fc)
    logger.info(f"rank {n}: inverse table holds {len(table)} diagrams")
    return table


def invert(ctx: CoxeterContext, d: Diagram, max_len: int) -> Optional[FCElement]:
    """
    Find the FC element w with d_w = d among elements of length <= max_len.

    Returns:
        The element, or None when no element within the bound maps to d
    """
    if d.rank != ctx.n:
        raise InvalidRankError(f"Diagram of rank {d.rank} used at rank {ctx.n}")
    return _inverse_table(ctx.n, max_len).get(d)


def _report(suite: str, ctx: CoxeterContext, max_len: int) -> VerificationReport:
    return VerificationReport(suite=suite, rank=ctx.n, max_len=max_len)


def _finish(report: VerificationReport) -> VerificationReport:
    if report.passed:
        logger.info(f"{report.suite} rank {report.rank}: {report.checked} checked, ok")
    else:
        logger.warning(
            f"{report.suite} rank {report.rank}: "
            f"{len(report.failures)} failure(s) in {report.checked}"
        )
    return report


def verify_round_trip(ctx: CoxeterContext, max_len: int) -> VerificationReport:
    """
    Check theta(b_w) = 1 * d_w with d_w admissible and descents preserved.

    Every FC element up to max_len is checked.
    """
    report = _report("round-trip", ctx, max_len)
    for fc in enumerate_fc(ctx, max_len):
        report.checked += 1
        word = list(fc.canonical)
        scalar, d = diagram_product(ctx, fc.canonical)
        if scalar != DeltaPoly.one():
            report.add_failure(word, f"scalar {scalar}")
            continue
        admissible, violations = is_admissible(ctx, d)
        if not admissible:
            report.add_failure(word, "; ".join(str(v) for v in violations))
            continue
        left, right = descents_from_diagram(ctx, d)
        if left != left_descents(fc) or right != right_descents(fc):
            report.add_failure(
                word,
                f"descents {sorted(left)}/{sorted(right)} read from diagram, "
                f"expected {sorted(left_descents(fc))}/{sorted(right_descents(fc))}",
            )
    return _finish(report)


def verify_injectivity(ctx: CoxeterContext, max_len: int) -> VerificationReport:
    """Check that d_w are pairwise distinct over all FC elements up to max_len."""
    report = _report("injectivity", ctx, max_len)
    seen: Dict[Diagram, FCElement] = {}
    for fc in enumerate_fc(ctx, max_len):
        report.checked += 1
        d = diagram_product(ctx, fc.canonical)[1]
        previous = seen.setdefault(d, fc)
        if previous != fc:
            report.add_failure(list(fc.canonical), f"same diagram as {previous}")
    return _finish(report)


def verify_a_values(ctx: CoxeterContext, max_len: int) -> VerificationReport:
    """
    Check a(d_w) = n(w), a(d_w) = 1 exactly for type I elements, and that
    weak star moves keep the a-value.
    """
    report = _report("a-values", ctx, max_len)
    for fc in enumerate_fc(ctx, max_len):
        report.checked += 1
        word = list(fc.canonical)
        a = diagram_product(ctx, fc.canonical)[1].a_value
        expected = n_value(ctx, fc)
        if a != expected:
            report.add_failure(word, f"a-value {a}, n-value {expected}")
        if (a == 1) != is_type_I(ctx, fc):
            report.add_failure(word, f"a-value {a} disagrees with type I test")
        for move in weak_star_moves(ctx, fc):
            moved = diagram_product(ctx, move.result.canonical)[1].a_value
            if moved != a:
                reason = f"{move.describe()} changes a-value to {moved}"
                report.add_failure(word, reason)
    return _finish(report)


def verify_well_defined(ctx: CoxeterContext, max_len: int) -> VerificationReport:
    """Check that every reduced word of w gives the same product of simple diagrams."""
    report = _report("well-defined", ctx, max_len)
    for fc in enumerate_fc(ctx, max_len):
        report.checked += 1
        expected = diagram_product(ctx, fc.canonical)
        for word in commutation_class(ctx, fc.canonical):
            if diagram_product(ctx, word) != expected:
                report.add_failure(list(word), f"differs from the product along {fc}")
                break
    return _finish(report)


def census(ctx: CoxeterContext, max_len: int) -> Dict[Tuple[int, int], int]:
    """
    Count the diagrams d_w up to max_len by (a-value, number of loops).

    Returns:
        Mapping (a-value, loops) -> number of FC elements
    """
    counts: Counter = Counter()
    for fc in enumerate_fc(ctx, max_len):
        d = diagram_product(ctx, fc.canonical)[1]
        counts[(d.a_value, len(d.loops))] += 1
    return dict(sorted(counts.items()))
