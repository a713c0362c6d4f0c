"""
The monomial basis algebra TL over Z[delta].

Elements are finite Z[delta]-combinations of monomials b_w indexed by fully
commutative elements. Multiplying a monomial by a generator b_s on the left
either extends w, picks up a factor delta (s is a left descent), or removes
a braid pattern from s*w and recurses; every product of generators is
therefore a single term 2^k delta^m b_w.
"""

import logging
from dataclasses import dataclass
from typing import (
    Dict,
    Hashable,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
    Union,
)

from .coxeter import (
    CoxeterContext,
    FCElement,
    _checked_canonical,
    identity_element,
    left_descents,
    reverse,
)
from .errors import InconsistencyError, InvalidRankError
from .heap import build

logger = logging.getLogger(__name__)

K = TypeVar("K", bound=Hashable)


@dataclass(frozen=True)
class DeltaPoly:
    """
    Integer polynomial in delta.

    ``coefficients[m]`` is the coefficient of delta^m; trailing zeros are
    stripped so equal polynomials compare equal.
    """

    coefficients: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        coefficients = tuple(int(c) for c in self.coefficients)
        while coefficients and coefficients[-1] == 0:
            coefficients = coefficients[:-1]
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def constant(cls, value: int) -> "DeltaPoly":
        """The constant polynomial."""
        return cls((value,))

    @classmethod
    def one(cls) -> "DeltaPoly":
        return cls((1,))

    @classmethod
    def zero(cls) -> "DeltaPoly":
        return cls(())

    @classmethod
    def monomial(cls, coefficient: int, degree: int) -> "DeltaPoly":
        """coefficient * delta^degree."""
        return cls((0,) * degree + (coefficient,))

    @classmethod
    def power_form(cls, two_power: int, delta_power: int) -> "DeltaPoly":
        """2^two_power * delta^delta_power."""
        return cls.monomial(2**two_power, delta_power)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def degree(self) -> int:
        """Degree in delta; -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def as_dict(self) -> Dict[int, int]:
        """Mapping delta-exponent -> non-zero coefficient."""
        return {m: c for m, c in enumerate(self.coefficients) if c}

    def as_power_form(self) -> Optional[Tuple[int, int]]:
        """
        Return (k, m) when the polynomial is exactly 2^k delta^m.

        Returns:
            The exponents, or None for any other polynomial
        """
        terms = self.as_dict()
        if len(terms) != 1:
            return None
        ((m, c),) = terms.items()
        if c < 1 or c & (c - 1):
            return None
        return c.bit_length() - 1, m

    def __add__(self, other: "DeltaPoly") -> "DeltaPoly":
        size = max(len(self.coefficients), len(other.coefficients))
        left = self.coefficients + (0,) * (size - len(self.coefficients))
        right = other.coefficients + (0,) * (size - len(other.coefficients))
        return DeltaPoly(tuple(a + b for a, b in zip(left, right)))

    def __mul__(self, other: Union["DeltaPoly", int]) -> "DeltaPoly":
        if isinstance(other, int):
            return DeltaPoly(tuple(c * other for c in self.coefficients))
        if self.is_zero or other.is_zero:
            return DeltaPoly.zero()
        product = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                product[i + j] += a * b
        return DeltaPoly(tuple(product))

    __rmul__ = __mul__

    def to_text(self) -> str:
        """Ascending-degree text, e.g. ``2 + 1 d^2``; ``0`` for zero."""
        if self.is_zero:
            return "0"
        parts: List[str] = []
        for m, c in sorted(self.as_dict().items()):
            monomial = "" if m == 0 else (" d" if m == 1 else f" d^{m}")
            if not parts:
                parts.append(f"{c}{monomial}")
            elif c < 0:
                parts.append(f"- {-c}{monomial}")
            else:
                parts.append(f"+ {c}{monomial}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_text()


Coefficient = Union[DeltaPoly, int]


def _as_poly(value: Coefficient) -> DeltaPoly:
    return value if isinstance(value, DeltaPoly) else DeltaPoly.constant(value)


def collect_terms(pairs: Iterable[Tuple[K, DeltaPoly]]) -> Dict[K, DeltaPoly]:
    """Add up coefficients of equal keys and drop zero terms."""
    collected: Dict[K, DeltaPoly] = {}
    for key, coefficient in pairs:
        collected[key] = collected.get(key, DeltaPoly.zero()) + coefficient
    return {key: c for key, c in collected.items() if not c.is_zero}


@dataclass(frozen=True)
class MonomialElement:
    """
    Finite Z[delta]-combination of monomials b_w.

    Terms are stored sorted by (length, canonical word) with no zero
    coefficients.
    """

    rank: int
    terms: Tuple[Tuple[FCElement, DeltaPoly], ...] = ()

    @classmethod
    def from_terms(
        cls, rank: int, pairs: Iterable[Tuple[FCElement, Coefficient]]
    ) -> "MonomialElement":
        """Build an element, collecting like terms."""
        collected = collect_terms((fc, _as_poly(c)) for fc, c in pairs)
        ordered = sorted(collected.items(), key=lambda item: item[0].sort_key)
        return cls(rank, tuple(ordered))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self) -> Iterator[Tuple[FCElement, DeltaPoly]]:
        return iter(self.terms)

    def coefficient(self, fc: FCElement) -> DeltaPoly:
        """Coefficient of b_fc (zero if absent)."""
        return dict(self.terms).get(fc, DeltaPoly.zero())

    def __add__(self, other: "MonomialElement") -> "MonomialElement":
        _check_same_rank(self.rank, other.rank)
        return MonomialElement.from_terms(self.rank, self.terms + other.terms)

    def scale(self, factor: Coefficient) -> "MonomialElement":
        """Multiply every coefficient by a scalar."""
        poly = _as_poly(factor)
        return MonomialElement.from_terms(
            self.rank, ((fc, c * poly) for fc, c in self.terms)
        )

    def to_text(self) -> str:
        """Text form, e.g. ``2 * b[1 2]`` or ``(1 + 1 d) * b[1] + b[]``."""
        if self.is_zero:
            return "0"
        parts = []
        for fc, c in self.terms:
            basis_text = f"b[{fc.word}]"
            if c == DeltaPoly.one():
                parts.append(basis_text)
            elif len(c.as_dict()) == 1:
                parts.append(f"{c.to_text()} * {basis_text}")
            else:
                parts.append(f"({c.to_text()}) * {basis_text}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_text()


def _check_same_rank(first: int, second: int) -> None:
    if first != second:
        raise InvalidRankError(f"Rank mismatch: {first} vs {second}")


def identity(ctx: CoxeterContext) -> MonomialElement:
    """The unit b_e."""
    return basis(identity_element(ctx))


def basis(fc: FCElement, coefficient: Coefficient = 1) -> MonomialElement:
    """The single term coefficient * b_fc."""
    return MonomialElement.from_terms(fc.rank, [(fc, coefficient)])


def _braid_split(
    ctx: CoxeterContext, s: int, fc: FCElement
) -> Tuple[List[int], List[int], List[int], int]:
    """
    Locate the braid pattern created by putting s on top of w.

    With U the entries that, together with everything above them, commute
    with s, w reads u t s v (bond 3) or u t s t v (bond 4) where u is U.

    Returns:
        (u letters, middle letters t s [t], v letters, bond)

    Raises:
        InconsistencyError: If no pattern is found
    """
    heap = build(ctx, fc.canonical)
    size = heap.size
    free = 0
    for entry in range(size):
        up = heap.up_set(entry)
        if all(
            ctx.commutes(heap.labels[x], s) for x in range(size) if up >> x & 1
        ):
            free |= 1 << entry

    def hangs_below(entry: int, allowed: int) -> bool:
        return not (heap.above[entry] & ~allowed)

    for y in range(size):
        t = heap.labels[y]
        m = ctx.bond(s, t)
        if m < 3 or free >> y & 1 or not hangs_below(y, free):
            continue
        taken = free | (1 << y)
        z = next(
            (
                e
                for e in range(size)
                if heap.labels[e] == s and not taken >> e & 1 and hangs_below(e, taken)
            ),
            None,
        )
        if z is None:
            continue
        taken |= 1 << z
        middle = [y, z]
        if m == 4:
            q = next(
                (
                    e
                    for e in range(size)
                    if heap.labels[e] == t
                    and not taken >> e & 1
                    and hangs_below(e, taken)
                ),
                None,
            )
            if q is None:
                continue
            taken |= 1 << q
            middle.append(q)
        u = [heap.labels[e] for e in range(size) if free >> e & 1]
        v = [heap.labels[e] for e in range(size) if not taken >> e & 1]
        return u, [heap.labels[e] for e in middle], v, m
    raise InconsistencyError(f"No braid pattern for s{s} on top of {fc}")


def _gen_times_basis(ctx: CoxeterContext, s: int, fc: FCElement) -> MonomialElement:
    if s in left_descents(fc):
        return basis(fc, DeltaPoly.monomial(1, 1))
    extended = _checked_canonical(ctx, (s,) + fc.canonical)
    if extended is not None:
        return basis(FCElement(extended, ctx.n))
    u, middle, v, m = _braid_split(ctx, s, fc)
    v_element = _checked_canonical(ctx, tuple(v))
    if v_element is None:
        raise InconsistencyError(f"Remainder {v} of {fc} is not FC-reduced")
    result = basis(FCElement(v_element, ctx.n))
    if m == 4:
        # b_s b_t b_s b_t = 2 b_s b_t
        result = gen_times(ctx, middle[0], result)
    result = gen_times(ctx, s, result)
    for letter in reversed(u):
        result = gen_times(ctx, letter, result)
    return result.scale(2) if m == 4 else result


def gen_times(ctx: CoxeterContext, i: int, x: MonomialElement) -> MonomialElement:
    """
    Left multiplication b_i * x.

    Args:
        ctx: Rank context
        i: Generator index
        x: Element to multiply

    Returns:
        The product, extended linearly over the terms of x

    Raises:
        WordError: If i is out of range
        InvalidRankError: If x lives over another rank
    """
    ctx.check_index(i)
    _check_same_rank(ctx.n, x.rank)
    pairs: List[Tuple[FCElement, DeltaPoly]] = []
    for fc, c in x.terms:
        for product_fc, product_c in _gen_times_basis(ctx, i, fc).terms:
            pairs.append((product_fc, product_c * c))
    return MonomialElement.from_terms(ctx.n, pairs)


def reverse_element(x: MonomialElement) -> MonomialElement:
    """Apply the anti-automorphism b_w -> b_{w^-1} termwise."""
    return MonomialElement.from_terms(x.rank, ((reverse(fc), c) for fc, c in x.terms))


def times_gen(ctx: CoxeterContext, x: MonomialElement, i: int) -> MonomialElement:
    """Right multiplication x * b_i, through the reversal anti-automorphism."""
    return reverse_element(gen_times(ctx, i, reverse_element(x)))


def from_word(ctx: CoxeterContext, w: Sequence[int]) -> MonomialElement:
    """
    Product b_{x1} ... b_{xp} of the generators along an arbitrary word.

    Args:
        ctx: Rank context
        w: Any word with letters in range

    Returns:
        A single term 2^k delta^m b_w'

    Raises:
        WordError: If a letter is out of range
    """
    word = ctx.validate_word(w)
    result = identity(ctx)
    for letter in reversed(word):
        result = gen_times(ctx, letter, result)
    return result


def mul(ctx: CoxeterContext, x: MonomialElement, y: MonomialElement) -> MonomialElement:
    """
    Bilinear product x * y.

    Each term b_v of x acts on y through the letters of v, right to left.
    """
    _check_same_rank(ctx.n, x.rank)
    _check_same_rank(ctx.n, y.rank)
    total = MonomialElement(ctx.n)
    for fc, c in x.terms:
        partial = y
        for letter in reversed(fc.canonical):
            partial = gen_times(ctx, letter, partial)
        total = total + partial.scale(c)
    return total
