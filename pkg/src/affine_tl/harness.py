"""
Verification suites over both engines.

Every suite takes a rank context, a length bound, a sample count and a
seed, and returns a VerificationReport listing the cases it checked and
the ones that failed. Exhaustive suites sweep all FC elements up to the
length bound; sampled suites draw words, blocks or triples from a seeded
generator so that reruns are reproducible.
"""

import logging
import random
from typing import Callable, Dict, List, Sequence, Tuple

from .coxeter import CoxeterContext, Word, enumerate_fc
from .diagram import (
    _MERGE,
    Decoration,
    DiagramElement,
    _decoration,
    mul_elements,
    normalize_block,
    normalize_loop,
)
from .elements import (
    Side,
    classify_non_cancellable,
    is_non_cancellable,
    matches_closed_form,
    weak_star_moves,
)
from .errors import AffineTLError, ConfigError
from .models import VerificationReport
from .theta import (
    diagram_product,
    theta,
    verify_a_values,
    verify_injectivity,
    verify_round_trip,
    verify_well_defined,
)
from .tl import (
    DeltaPoly,
    MonomialElement,
    basis,
    from_word,
    gen_times,
    mul,
    times_gen,
)

logger = logging.getLogger(__name__)

Relation = Tuple[Word, Word, int, int]
Suite = Callable[[CoxeterContext, int, int, int], VerificationReport]

# Generators of the finite parabolic of type B2 at the west end
B2_PARABOLIC = (1, 2)
B2_FC_COUNT = 7


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


def _pairs(ctx: CoxeterContext) -> List[Tuple[int, int]]:
    return [(i, j) for i in ctx.generators for j in ctx.generators if i != j]


def _relation_words(ctx: CoxeterContext) -> List[Relation]:
    """(lhs word, rhs word, power of 2, power of delta) for every relation."""
    relations: List[Relation] = []
    for i in ctx.generators:
        relations.append(((i, i), (i,), 0, 1))
    for i, j in _pairs(ctx):
        m = ctx.bond(i, j)
        if m == 2:
            relations.append(((i, j), (j, i), 0, 0))
        elif m == 3:
            relations.append(((i, j, i), (i,), 0, 0))
        else:
            relations.append(((i, j, i, j), (i, j), 1, 0))
    return relations


def check_relations(
    ctx: CoxeterContext, max_len: int = 0, samples: int = 0, seed: int = 0
) -> VerificationReport:
    """
    Check the defining relations in both engines.

    b_i b_i = delta b_i, b_i b_j = b_j b_i when i and j commute,
    b_i b_j b_i = b_i across a bond 3 and b_i b_j b_i b_j = 2 b_i b_j across
    a bond 4. The diagram side compares products of simple diagrams.
    """
    report = _report("relations", ctx, max_len)
    for lhs, rhs, two_power, delta_power in _relation_words(ctx):
        scalar = DeltaPoly.power_form(two_power, delta_power)
        report.checked += 1
        if from_word(ctx, lhs) != from_word(ctx, rhs).scale(scalar):
            report.add_failure(list(lhs), f"monomial engine: {from_word(ctx, lhs)}")
        left_scalar, left = diagram_product(ctx, lhs)
        right_scalar, right = diagram_product(ctx, rhs)
        if left != right or left_scalar != right_scalar * scalar:
            report.add_failure(
                list(lhs), f"diagram engine: {left_scalar} * <{left}> vs <{right}>"
            )
    return _finish(report)


def check_classification(
    ctx: CoxeterContext, max_len: int, samples: int = 0, seed: int = 0
) -> VerificationReport:
    """
    Compare brute-force weak star irreducibility with the closed-form cases.

    Also counts the FC elements of the west B2 parabolic.
    """
    report = _report("classification", ctx, max_len)
    for fc in enumerate_fc(ctx, max_len):
        report.checked += 1
        word = list(fc.canonical)
        brute = is_non_cancellable(ctx, fc)
        closed = matches_closed_form(ctx, fc)
        if brute != closed:
            report.add_failure(
                word, f"weak star irreducible: {brute}, closed form: {closed}"
            )
            continue
        if brute:
            try:
                classify_non_cancellable(ctx, fc)
            except AffineTLError as e:
                report.add_failure(word, str(e))
    parabolic = sum(1 for _ in enumerate_fc(ctx, 8, allowed=B2_PARABOLIC))
    report.checked += 1
    if parabolic != B2_FC_COUNT:
        report.add_failure(
            list(B2_PARABOLIC), f"{parabolic} FC elements in the B2 parabolic"
        )
    return _finish(report)


def _is_shortened_term(x: MonomialElement, length: int, scalar: int) -> bool:
    if len(x.terms) != 1:
        return False
    ((fc, coefficient),) = x.terms
    return fc.length == length and coefficient == DeltaPoly.constant(scalar)


def check_weak_star_reversal(
    ctx: CoxeterContext, max_len: int, samples: int = 0, seed: int = 0
) -> VerificationReport:
    """
    For every weak star reduction of w by s with respect to t, check that
    b_t b_w is a single term of length l(w) - 1 with coefficient 1 across a
    bond 3 and 2 across a bond 4, and that b_s b_t b_w = b_w (bond 3) or
    2 b_w (bond 4). Right reductions are mirrored.
    """
    report = _report("weak-star-reversal", ctx, max_len)
    for fc in enumerate_fc(ctx, max_len):
        b_w = basis(fc)
        for move in weak_star_moves(ctx, fc):
            report.checked += 1
            scalar = 2 if ctx.bond(move.s, move.t) == 4 else 1
            if move.side is Side.LEFT:
                middle = gen_times(ctx, move.t, b_w)
                product = gen_times(ctx, move.s, middle)
            else:
                middle = times_gen(ctx, b_w, move.t)
                product = times_gen(ctx, middle, move.s)
            if not _is_shortened_term(middle, fc.length - 1, scalar):
                report.add_failure(
                    list(fc.canonical),
                    f"{move.describe()}: b_t b_w = {middle}, expected "
                    f"{scalar} * b_v with l(v) = {fc.length - 1}",
                )
                continue
            expected = b_w.scale(scalar)
            if product != expected:
                report.add_failure(
                    list(fc.canonical), f"{move.describe()}: got {product}"
                )
    return _finish(report)


def _random_word(ctx: CoxeterContext, rng: random.Random, max_len: int) -> List[int]:
    length = rng.randint(0, max_len)
    return [rng.choice(ctx.generators) for _ in range(length)]


def check_single_term(
    ctx: CoxeterContext, max_len: int, samples: int, seed: int
) -> VerificationReport:
    """
    Products of generators along random words are single terms 2^k delta^m
    b_w, and theta of the product matches the product of simple diagrams.
    """
    report = _report("single-term", ctx, max_len)
    rng = random.Random(seed)  # nosec B311: reproducible sampling, not crypto
    for _ in range(samples):
        word = _random_word(ctx, rng, max_len)
        report.checked += 1
        x = from_word(ctx, word)
        if len(x.terms) != 1 or x.terms[0][1].as_power_form() is None:
            report.add_failure(word, f"not a single power term: {x}")
            continue
        scalar, d = diagram_product(ctx, word)
        expected = DiagramElement.single(d, scalar)
        image = theta(ctx, x)
        if image != expected:
            report.add_failure(word, f"theta gives {image}, product gives {expected}")
    return _finish(report)


def reduce_randomly(
    word: Sequence[Decoration], rng: random.Random
) -> Tuple[int, Tuple[Decoration, ...]]:
    """Reduce a decoration word by merging a random reducible pair each step."""
    current = list(word)
    two_power = 0
    while True:
        spots = [
            k
            for k in range(len(current) - 1)
            if current[k].is_closed == current[k + 1].is_closed
        ]
        if not spots:
            return two_power, tuple(current)
        k = rng.choice(spots)
        left, right = current[k], current[k + 1]
        dot, extra = _MERGE[(left.is_dot, right.is_dot)]
        current[k : k + 2] = [_decoration(left.is_closed, dot)]
        two_power += extra


def check_confluence(
    ctx: CoxeterContext, max_len: int, samples: int, seed: int
) -> VerificationReport:
    """
    Random decoration words reduce to the same basis word in every order,
    and loop words normalize independently of the starting rotation.
    """
    report = _report("confluence", ctx, max_len)
    rng = random.Random(seed)  # nosec B311: reproducible sampling, not crypto
    glyphs = list(Decoration)
    for _ in range(samples):
        word = [rng.choice(glyphs) for _ in range(rng.randint(0, max_len))]
        codes = [glyphs.index(g) for g in word]
        report.checked += 1
        expected = normalize_block(word)
        reduced = reduce_randomly(word, rng)
        if reduced != expected:
            report.add_failure(codes, f"block: {reduced} vs {expected}")
        if word:
            shift = rng.randrange(len(word))
            rotated = word[shift:] + word[:shift]
            if normalize_loop(rotated) != normalize_loop(word[::-1]):
                report.add_failure(codes, f"loop rotation by {shift} disagrees")
    return _finish(report)


def check_associativity(
    ctx: CoxeterContext, max_len: int, samples: int, seed: int
) -> VerificationReport:
    """(xy)z = x(yz) on random triples, in both engines."""
    report = _report("associativity", ctx, max_len)
    rng = random.Random(seed)  # nosec B311: reproducible sampling, not crypto
    for _ in range(samples):
        words = [_random_word(ctx, rng, max_len) for _ in range(3)]
        flat = [letter for word in words for letter in word]
        report.checked += 1
        x, y, z = (from_word(ctx, word) for word in words)
        if mul(ctx, mul(ctx, x, y), z) != mul(ctx, x, mul(ctx, y, z)):
            report.add_failure(flat, f"monomial engine, factors {words}")
        a, b, c = (DiagramElement.single(diagram_product(ctx, w)[1]) for w in words)
        if mul_elements(ctx, mul_elements(ctx, a, b), c) != mul_elements(
            ctx, a, mul_elements(ctx, b, c)
        ):
            report.add_failure(flat, f"diagram engine, factors {words}")
    return _finish(report)


def _exhaustive(
    check: Callable[[CoxeterContext, int], VerificationReport]
) -> Suite:
    def suite(
        ctx: CoxeterContext, max_len: int, samples: int = 0, seed: int = 0
    ) -> VerificationReport:
        return check(ctx, max_len)

    suite.__doc__ = check.__doc__
    return suite


SUITES: Dict[str, Suite] = {
    "relations": check_relations,
    "round-trip": _exhaustive(verify_round_trip),
    "injectivity": _exhaustive(verify_injectivity),
    "a-values": _exhaustive(verify_a_values),
    "well-defined": _exhaustive(verify_well_defined),
    "classification": check_classification,
    "weak-star-reversal": check_weak_star_reversal,
    "single-term": check_single_term,
    "confluence": check_confluence,
    "associativity": check_associativity,
}


def run_suite(
    name: str, n: int, max_len: int, samples: int = 0, seed: int = 0
) -> VerificationReport:
    """
    Run one named suite at one rank.

    Args:
        name: Key of SUITES
        n: Rank parameter
        max_len: Length bound (word or block length for sampled suites)
        samples: Number of random cases for sampled suites
        seed: Seed for sampled suites

    Returns:
        The suite's report

    Raises:
        ConfigError: If the suite name is unknown
        InvalidRankError: If n < 2
    """
    suite = SUITES.get(name)
    if suite is None:
        raise ConfigError(f"Unknown suite {name!r}; known: {', '.join(SUITES)}")
    logger.info(f"Running {name} at rank {n} (max_len={max_len}, samples={samples})")
    return suite(CoxeterContext(n), max_len, samples, seed)
