"""Exact arithmetic on the Levi-Civita field.

Elements are finite lists of (exponent, coefficient) terms with rational
exponents and rational coefficients, ordered by exponent, together with a
cutoff: the exponent bound below which the representation is exact.  A
cutoff of +inf marks an exact element.  Values with infinite support
(e.g. the inverse of 1 - d) are represented truncated below their cutoff;
all operations propagate cutoffs pessimistically so that every stored
digit is correct.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Union

from .errors import (
    BoundViolation,
    CutoffTooLow,
    IndeterminateAtCutoff,
    IndeterminateLeadingTerm,
    IndeterminateValuation,
    NonPerfectPowerLeadingCoefficient,
    NotPositive,
)

Q = Fraction
#: Cutoff / valuation infinity marker.  Fraction compares cleanly against it.
INF = math.inf

Cutoff = Union[Fraction, float]
Rationalish = Union[int, Fraction]

LT, EQ, GT = -1, 0, 1


def _as_q(value: Rationalish) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True)
class LCNumber:
    """A Levi-Civita field element, exact below its cutoff.

    terms: strictly increasing exponents, no zero coefficients, every
    exponent < cutoff.  Equality is representational (same terms and same
    cutoff); use :func:`compare` for the field order.
    """

    terms: tuple[tuple[Fraction, Fraction], ...] = ()
    cutoff: Cutoff = INF

    def __post_init__(self) -> None:
        last = None
        for exp, coeff in self.terms:
            if coeff == 0:
                raise ValueError("zero coefficient stored")
            if last is not None and exp <= last:
                raise ValueError("exponents must be strictly increasing")
            if exp >= self.cutoff:
                raise ValueError("term at or above cutoff")
            last = exp

    # -- predicates ------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.cutoff == INF

    @property
    def is_zero(self) -> bool:
        """True only for the exact zero."""
        return not self.terms and self.is_exact

    def __bool__(self) -> bool:
        return bool(self.terms) or not self.is_exact

    # -- operators -------------------------------------------------------

    def __add__(self, other: LCLike) -> "LCNumber":
        return add(self, lc(other))

    __radd__ = __add__

    def __sub__(self, other: LCLike) -> "LCNumber":
        return sub(self, lc(other))

    def __rsub__(self, other: LCLike) -> "LCNumber":
        return sub(lc(other), self)

    def __mul__(self, other: LCLike) -> "LCNumber":
        return mul(self, lc(other))

    __rmul__ = __mul__

    def __neg__(self) -> "LCNumber":
        return neg(self)

    def __truediv__(self, other: LCLike) -> "LCNumber":
        other = lc(other)
        if len(other.terms) == 1 and other.is_exact:
            exp, coeff = other.terms[0]
            return _make([(e - exp, c / coeff) for e, c in self.terms],
                         _cut_shift(self.cutoff, -exp))
        raise TypeError("division by a multi-term value needs a cutoff; use div()")

    def __pow__(self, n: int) -> "LCNumber":
        if not isinstance(n, int) or n < 0:
            raise TypeError("only non-negative integer powers; use nth_root for radicals")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = mul(result, base)
            base = mul(base, base)
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = lc(other)
        if not isinstance(other, LCNumber):
            return NotImplemented
        return self.terms == other.terms and self.cutoff == other.cutoff

    def __hash__(self) -> int:
        return hash((self.terms, self.cutoff))

    def __lt__(self, other: LCLike) -> bool:
        return compare(self, lc(other)) == LT

    def __le__(self, other: LCLike) -> bool:
        return compare(self, lc(other)) != GT

    def __gt__(self, other: LCLike) -> bool:
        return compare(self, lc(other)) == GT

    def __ge__(self, other: LCLike) -> bool:
        return compare(self, lc(other)) != LT

    def __abs__(self) -> "LCNumber":
        return self if compare(self, ZERO) != LT else neg(self)

    # -- rendering -------------------------------------------------------

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"<LC {render(self)}>"


LCLike = Union[LCNumber, int, Fraction]


def _make(terms: Iterable[tuple[Fraction, Fraction]], cutoff: Cutoff) -> LCNumber:
    """Normalize: sort, merge, drop zeros and anything at/above the cutoff."""
    merged: dict[Fraction, Fraction] = {}
    for exp, coeff in terms:
        merged[exp] = merged.get(exp, Q(0)) + coeff
    kept = tuple(sorted((e, c) for e, c in merged.items() if c != 0 and e < cutoff))
    return LCNumber(kept, cutoff)


def lc(value: LCLike) -> LCNumber:
    """Coerce an int or Fraction to an exact LCNumber."""
    if isinstance(value, LCNumber):
        return value
    q = _as_q(value)
    return LCNumber(((Q(0), q),)) if q else ZERO


def term(coeff: Rationalish, exp: Rationalish = 0) -> LCNumber:
    """The single-term element coeff * d**exp (exact)."""
    c, e = _as_q(coeff), _as_q(exp)
    return LCNumber(((e, c),)) if c else ZERO


def d_power(exp: Rationalish) -> LCNumber:
    """d**exp for a rational exponent (exact)."""
    return term(1, exp)


def truncate(x: LCNumber, cutoff: Cutoff) -> LCNumber:
    """Drop knowledge at and above `cutoff` (no-op if x is already coarser)."""
    new_cut = min(x.cutoff, cutoff)
    if new_cut == x.cutoff:
        return x
    return LCNumber(tuple(t for t in x.terms if t[0] < new_cut), new_cut)


ZERO = LCNumber()
ONE = lc(1)
d = d_power(1)


# -- valuation and order --------------------------------------------------


def valuation(x: LCNumber) -> Cutoff:
    """lambda(x): smallest support exponent; +inf for exact zero.

    Raises IndeterminateValuation when x stores no terms but is truncated,
    since the true valuation could be anything at or above the cutoff.
    """
    if x.terms:
        return x.terms[0][0]
    if x.is_exact:
        return INF
    raise IndeterminateValuation(
        f"no terms below cutoff {x.cutoff}; valuation undecidable")


def valuation_lower_bound(x: LCNumber) -> Cutoff:
    """A sound lower bound on lambda(x): first exponent, else the cutoff."""
    if x.terms:
        return x.terms[0][0]
    return x.cutoff


def leading(x: LCNumber) -> tuple[Fraction, Fraction]:
    """(lambda(x), leading coefficient).  Errors on zero / truncated-zero."""
    if x.terms:
        return x.terms[0]
    if x.is_exact:
        raise ZeroDivisionError("zero has no leading term")
    raise IndeterminateLeadingTerm(
        f"no terms below cutoff {x.cutoff}; leading term unknown")


def compare(x: LCNumber, y: LCNumber) -> int:
    """Total order on exact elements: -1, 0, +1 for x<y, x=y, x>y.

    Equality is only reported for an exactly zero difference; if the
    difference has no stored terms but a finite cutoff the answer is not
    decidable and IndeterminateAtCutoff is raised.
    """
    diff = sub(y, x)
    if diff.terms:
        return LT if diff.terms[0][1] > 0 else GT
    if diff.is_exact:
        return EQ
    raise IndeterminateAtCutoff(
        f"difference is O(d^({diff.cutoff})); order undecidable at this cutoff")


def sign(x: LCNumber) -> int:
    return compare(x, ZERO)


def lc_min(x: LCNumber, y: LCNumber) -> LCNumber:
    return x if compare(x, y) != GT else y


def lc_max(x: LCNumber, y: LCNumber) -> LCNumber:
    return x if compare(x, y) != LT else y


class UltrametricAbs(NamedTuple):
    """Exact exponent of the ultrametric absolute value plus a float view."""

    exponent: Cutoff
    approx: float


def ultrametric_abs(x: LCNumber) -> UltrametricAbs:
    """|x|_u = e**(-lambda(x)); the exact exponent is authoritative."""
    lam = valuation(x)
    if lam == INF:
        return UltrametricAbs(INF, 0.0)
    return UltrametricAbs(lam, math.exp(-float(lam)))


def seminorm(x: LCNumber, r: Rationalish) -> Fraction:
    """||x||_r: the largest |coefficient| over exponents <= r."""
    r = _as_q(r)
    if r >= x.cutoff:
        raise CutoffTooLow(f"seminorm at {r} needs exponents <= {r}, "
                           f"but x is only known below {x.cutoff}")
    best = Q(0)
    for exp, coeff in x.terms:
        if exp > r:
            break
        best = max(best, abs(coeff))
    return best


# -- ring operations -------------------------------------------------------


def _cut_shift(cutoff: Cutoff, delta: Cutoff) -> Cutoff:
    return INF if cutoff == INF else cutoff + delta


def add(x: LCNumber, y: LCNumber) -> LCNumber:
    """Termwise sum; exact where both inputs are exact."""
    cutoff = min(x.cutoff, y.cutoff)
    return _make(list(x.terms) + list(y.terms), cutoff)


def neg(x: LCNumber) -> LCNumber:
    return LCNumber(tuple((e, -c) for e, c in x.terms), x.cutoff)


def sub(x: LCNumber, y: LCNumber) -> LCNumber:
    return add(x, neg(y))


def mul(x: LCNumber, y: LCNumber) -> LCNumber:
    """Convolution product with pessimistic cutoff propagation.

    The result cutoff is min(x.cutoff + lambda(y), y.cutoff + lambda(x)),
    using the stored-term lower bound for truncated operands.  An exact
    zero annihilates regardless of the other operand's cutoff.
    """
    if x.is_zero or y.is_zero:
        return ZERO
    cutoff = min(_cut_shift(x.cutoff, valuation_lower_bound(y)),
                 _cut_shift(y.cutoff, valuation_lower_bound(x)))
    prods = [(ex + ey, cx * cy) for ex, cx in x.terms for ey, cy in y.terms]
    return _make(prods, cutoff)


_EXACT_DIV_STEP_LIMIT = 10_000


def div(num: LCNumber, den: LCNumber, out_cutoff: Cutoff = INF) -> LCNumber:
    """Series long division, correct on all exponents below the result cutoff.

    The result cutoff is out_cutoff capped by what the operands' own
    cutoffs can support.  If both operands are exact and the division
    terminates, the quotient is exact.
    """
    if num.is_zero:
        return ZERO
    lam_d, lead_d = leading(den)
    lam_n = valuation_lower_bound(num)
    cutoff = min(out_cutoff,
                 _cut_shift(num.cutoff, -lam_d),
                 _cut_shift(den.cutoff, lam_n - 2 * lam_d))
    if cutoff == INF and not (num.is_exact and den.is_exact):
        raise ValueError("an output cutoff is required for truncated operands")
    work_cut = _cut_shift(cutoff, lam_d)
    quotient = ZERO
    remainder = truncate(num, work_cut)
    steps = 0
    while remainder.terms and remainder.terms[0][0] - lam_d < cutoff:
        steps += 1
        if cutoff == INF and steps > _EXACT_DIV_STEP_LIMIT:
            raise ValueError("division does not terminate; provide an output cutoff")
        e, c = remainder.terms[0]
        t = term(c / lead_d, e - lam_d)
        quotient = add(quotient, t)
        remainder = sub(remainder, truncate(mul(t, den), work_cut))
    if num.is_exact and den.is_exact and not remainder.terms and remainder.is_exact:
        return quotient
    if num.is_exact and den.is_exact and mul(quotient, den) == num:
        return quotient
    return truncate(quotient, cutoff)


def inv(x: LCNumber, out_cutoff: Cutoff = INF) -> LCNumber:
    """Multiplicative inverse such that mul(x, inv(x, c)) is 1 + O(d^c).

    The returned value is cut at c - lambda(x) so that the product is
    certified below c.  Exact single-term inputs invert exactly.
    """
    if x.is_zero:
        raise ZeroDivisionError("inverse of zero")
    lam, _ = leading(x)
    return div(ONE, x, _cut_shift(out_cutoff, -lam))


def _int_nth_root(a: int, n: int) -> int | None:
    """Exact n-th root of a non-negative integer, or None."""
    if a < 0:
        return None
    if a in (0, 1) or n == 1:
        return a
    hi = 1 << ((a.bit_length() + n - 1) // n + 1)
    lo = 0
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** n < a:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** n == a else None


def _q_nth_root(q: Fraction, n: int) -> Fraction | None:
    num = _int_nth_root(q.numerator, n)
    if num is None:
        return None
    den = _int_nth_root(q.denominator, n)
    if den is None:
        return None
    return Fraction(num, den)


def _binomial_series(z: LCNumber, alpha: Fraction, rel_cutoff: Cutoff) -> LCNumber:
    """(1 + z)**alpha for lambda(z) > 0, summed until terms pass rel_cutoff."""
    if z.is_zero:
        return ONE
    lam_z = valuation_lower_bound(z)
    if lam_z <= 0:
        raise ValueError("binomial series needs an infinitesimal argument")
    acc = ONE
    term_k = ONE
    k = 0
    while k * lam_z < rel_cutoff:
        k += 1
        factor = (alpha - (k - 1)) / k
        term_k = truncate(mul(mul(term_k, z), term(factor)), rel_cutoff)
        if not term_k.terms:
            break
        acc = add(acc, term_k)
    return truncate(acc, rel_cutoff)


def nth_root(x: LCNumber, n: int, out_cutoff: Cutoff = INF) -> LCNumber:
    """The positive n-th root, with nth_root(x, n)**n = x + O(d^out_cutoff).

    Requires x > 0 with an exactly known leading term whose coefficient is
    a perfect n-th power in Q.  Exact when x is a single exact term.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("root index must be a positive integer")
    lam, lead = leading(x)
    if lead < 0:
        raise NotPositive("n-th roots exist only for positive elements")
    root_lead = _q_nth_root(lead, n)
    if root_lead is None:
        raise NonPerfectPowerLeadingCoefficient(
            f"{lead} has no rational {n}-th root")
    lam_out = Q(lam) / n
    cutoff = min(_cut_shift(out_cutoff, -(n - 1) * Q(lam) / n),
                 _cut_shift(x.cutoff, lam_out - lam))
    unit = x / term(lead, lam)
    z = sub(unit, ONE)
    if z.is_zero:
        return term(root_lead, lam_out)
    if cutoff == INF:
        raise ValueError("an output cutoff is required: the root has infinite support")
    series = _binomial_series(z, Q(1, n), _cut_shift(cutoff, -lam_out))
    return truncate(mul(term(root_lead, lam_out), series), cutoff)


# -- strongly convergent series --------------------------------------------


@dataclass(frozen=True)
class SeriesTermStream:
    """A series with terms a_n = generator(n), n >= 1, whose valuations are
    bounded below by valuation_bound(n), a nondecreasing function diverging
    to +inf.  The bound is what makes exact truncation possible.
    """

    generator: Callable[[int], LCNumber]
    valuation_bound: Callable[[int], Fraction]


def sum_strong_series(s: SeriesTermStream, out_cutoff: Cutoff,
                      max_terms: int = 100_000) -> LCNumber:
    """Sum the stream exactly on all exponents below out_cutoff.

    Terms are consumed until the declared valuation bound reaches the
    cutoff; everything beyond cannot touch exponents below it.  A term
    whose stored support dips below its declared bound raises
    BoundViolation, as does a bound that fails to diverge.
    """
    acc = ZERO
    n = 1
    while True:
        bound = s.valuation_bound(n)
        if bound >= out_cutoff:
            break
        if n > max_terms:
            raise BoundViolation(
                f"valuation bound still {bound} < {out_cutoff} after "
                f"{max_terms} terms; bound does not diverge")
        t = s.generator(n)
        if t.terms and t.terms[0][0] < bound:
            raise BoundViolation(
                f"term {n} has valuation {t.terms[0][0]} below its declared "
                f"bound {bound}")
        acc = add(acc, t)
        n += 1
    return truncate(acc, out_cutoff)


# -- canonical rendering ----------------------------------------------------


def _render_d_power(exp: Cutoff) -> str:
    exp = Q(exp) if exp != INF else exp
    if exp == 1:
        return "d"
    if isinstance(exp, Fraction) and exp.denominator == 1 and exp >= 0:
        return f"d^{exp}"
    return f"d^({exp})"


def _render_term(exp: Fraction, coeff: Fraction) -> str:
    mag = abs(coeff)
    if exp == 0:
        return str(mag)
    if mag == 1:
        return _render_d_power(exp)
    return f"{mag}*{_render_d_power(exp)}"


def render(x: LCNumber) -> str:
    """Canonical ASCII form: ascending exponents, e.g. `3 + 5*d^(1/2) - 2*d^3`,
    with ` + O(d^r)` appended for truncated values."""
    parts: list[str] = []
    for i, (exp, coeff) in enumerate(x.terms):
        body = _render_term(exp, coeff)
        if i == 0:
            parts.append(f"-{body}" if coeff < 0 else body)
        else:
            parts.append(f" - {body}" if coeff < 0 else f" + {body}")
    if not x.is_exact:
        o_term = f"O({_render_d_power(x.cutoff)})"
        parts.append(f" + {o_term}" if parts else o_term)
    if not parts:
        return "0"
    return "".join(parts)
