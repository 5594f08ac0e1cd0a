"""Polynomials over the Levi-Civita field and their calculus.

These are the finite analytic pieces everything downstream integrates:
evaluation, formal derivative/antiderivative, definite integrals over
intervals, and exact root isolation.  Roots are found by recursing on the
Newton polygon of the coefficient valuations: each edge proposes a root
valuation, the rational roots of the edge's residual polynomial give the
leading coefficients, and an affine substitution extends every branch one
term at a time.  Branches whose leading real coefficient would be
irrational abort rather than approximate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from functools import cmp_to_key
from typing import Sequence

from .core import (
    EQ,
    GT,
    LT,
    Cutoff,
    LCNumber,
    ONE,
    ZERO,
    add,
    compare,
    d_power,
    lc,
    mul,
    neg,
    sub,
    term,
    truncate,
    valuation,
    valuation_lower_bound,
)
from .errors import IndeterminateAtCutoff, IrrationalBranchPoint
from .measure import Interval, contains, midpoint
from .realroots import rational_roots

LCLike = LCNumber | int | Q


@dataclass(frozen=True)
class LCPolynomial:
    """sum of coefficients[i] * (x - center)**i, trailing zeros trimmed."""

    coefficients: tuple[LCNumber, ...] = ()
    center: LCNumber = ZERO

    def __post_init__(self) -> None:
        if self.coefficients and self.coefficients[-1] == ZERO:
            raise ValueError("trailing zero coefficient; use poly() to build")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    def __call__(self, x: LCLike) -> LCNumber:
        return eval_poly(self, lc(x) if not isinstance(x, LCNumber) else x)

    def __add__(self, other: "LCPolynomial") -> "LCPolynomial":
        return poly_add(self, other)

    def __sub__(self, other: "LCPolynomial") -> "LCPolynomial":
        return poly_add(self, poly_scale(other, lc(-1)))

    def __mul__(self, other: "LCPolynomial") -> "LCPolynomial":
        return poly_mul(self, other)

    def __str__(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"<poly {render_poly(self)}>"


def poly(coeffs: Sequence[LCLike], center: LCLike = 0) -> LCPolynomial:
    """Build from ascending coefficients, trimming trailing zeros."""
    cs = [c if isinstance(c, LCNumber) else lc(c) for c in coeffs]
    while cs and cs[-1] == ZERO:
        cs.pop()
    cz = center if isinstance(center, LCNumber) else lc(center)
    return LCPolynomial(tuple(cs), cz)


def constant(value: LCLike) -> LCPolynomial:
    return poly([value])


X = poly([0, 1])


def eval_poly(p: LCPolynomial, x: LCNumber) -> LCNumber:
    """Horner evaluation at x; cutoffs propagate by the field rules."""
    shifted = sub(x, p.center)
    acc = ZERO
    for c in reversed(p.coefficients):
        acc = add(mul(acc, shifted), c)
    return acc


def derivative(p: LCPolynomial) -> LCPolynomial:
    return poly([mul(lc(i), c) for i, c in enumerate(p.coefficients)][1:],
                p.center)


def antiderivative(p: LCPolynomial) -> LCPolynomial:
    """The antiderivative vanishing at the center."""
    cs = [ZERO] + [c / (i + 1) for i, c in enumerate(p.coefficients)]
    return poly(cs, p.center)


def integral_over_interval(p: LCPolynomial, i: Interval) -> LCNumber:
    """F(b) - F(a); open/closed endpoint flags are irrelevant."""
    big_f = antiderivative(p)
    return sub(eval_poly(big_f, i.b), eval_poly(big_f, i.a))


# -- polynomial algebra -------------------------------------------------------


def poly_add(p: LCPolynomial, q: LCPolynomial) -> LCPolynomial:
    q = recenter(q, p.center)
    n = max(len(p.coefficients), len(q.coefficients))
    cs = [ZERO] * n
    for i, c in enumerate(p.coefficients):
        cs[i] = add(cs[i], c)
    for i, c in enumerate(q.coefficients):
        cs[i] = add(cs[i], c)
    return poly(cs, p.center)


def poly_scale(p: LCPolynomial, s: LCNumber) -> LCPolynomial:
    return poly([mul(s, c) for c in p.coefficients], p.center)


def poly_shift(p: LCPolynomial, s: LCNumber) -> LCPolynomial:
    """Add the constant s."""
    if s == ZERO:
        return p
    return poly_add(p, poly([s], p.center))


def poly_mul(p: LCPolynomial, q: LCPolynomial) -> LCPolynomial:
    q = recenter(q, p.center)
    if p.is_zero or q.is_zero:
        return poly([], p.center)
    cs = [ZERO] * (len(p.coefficients) + len(q.coefficients) - 1)
    for i, a in enumerate(p.coefficients):
        for j, b in enumerate(q.coefficients):
            cs[i + j] = add(cs[i + j], mul(a, b))
    return poly(cs, p.center)


def recenter(p: LCPolynomial, new_center: LCLike) -> LCPolynomial:
    """Exact Taylor shift onto a new expansion point."""
    nc = new_center if isinstance(new_center, LCNumber) else lc(new_center)
    if nc == p.center:
        return p
    delta = sub(nc, p.center)
    cs = list(p.coefficients)
    n = len(cs)
    for j in range(n):
        for i in range(n - 2, j - 1, -1):
            cs[i] = add(cs[i], mul(delta, cs[i + 1]))
    return poly(cs, nc)


def compose_affine(p: LCPolynomial, offset: LCNumber, scale: LCNumber) -> LCPolynomial:
    """q(y) = p(offset + scale * y), expanded at center 0."""
    q = recenter(p, offset)
    power = ONE
    cs = []
    for c in q.coefficients:
        cs.append(mul(c, power))
        power = mul(power, scale)
    return poly(cs, ZERO)


def sup_bound(p: LCPolynomial, i: Interval) -> LCNumber:
    """A sound bound on |p| over the interval: sum |a_j| r^j with r the
    larger endpoint distance from the center."""
    if not i.bounded:
        raise ValueError("sup bound over an unbounded interval")
    ra = _lc_abs(sub(i.a, p.center))
    rb = _lc_abs(sub(i.b, p.center))
    r = ra if compare(ra, rb) != LT else rb
    total = ZERO
    power = ONE
    for c in p.coefficients:
        total = add(total, mul(_lc_abs(c), power))
        power = mul(power, r)
    return total


def _lc_abs(x: LCNumber) -> LCNumber:
    return x if not x.terms or x.terms[0][1] > 0 else neg(x)


# -- root isolation ------------------------------------------------------------


@dataclass(frozen=True)
class RootReport:
    """Roots of a polynomial inside an interval, with multiplicities.

    Roots are exact when the branch terminated, otherwise truncated at the
    requested cutoff; each satisfies lambda(p(root)) >= the cutoff."""

    roots: tuple[tuple[LCNumber, int], ...]
    interval: Interval


def _lower_hull(points: list[tuple[int, Q]]) -> list[tuple[int, Q]]:
    hull: list[tuple[int, Q]] = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def _newton_edges(coeffs: list[LCNumber]) -> list[tuple[Q, list[tuple[int, Q]]]]:
    """(root valuation, residual polynomial over Q) per lower-hull edge."""
    for c in coeffs:
        if not c.terms and not c.is_exact:
            raise IndeterminateAtCutoff(
                "a coefficient is only known as a truncated zero; the Newton "
                "polygon is not determined")
    points = [(i, Q(valuation(c))) for i, c in enumerate(coeffs) if c.terms]
    hull = _lower_hull(points)
    val_of = dict(points)
    edges = []
    for (i1, v1), (i2, v2) in zip(hull, hull[1:]):
        slope = (v2 - v1) / (i2 - i1)
        mu = -slope
        residual = []
        for i in range(i1, i2 + 1):
            on_edge = i in val_of and val_of[i] == v1 + slope * (i - i1)
            residual.append(coeffs[i].terms[0][1] if on_edge else Q(0))
        edges.append((mu, residual))
    return edges


def _positive_branch_count(coeffs: list[LCNumber]) -> int:
    """Real-branch count (with multiplicity) of roots with positive
    valuation, without descending further."""
    count = 0
    for mu, residual in _newton_edges(coeffs):
        if mu <= 0:
            continue
        roots, irrational = rational_roots(residual)
        if irrational:
            raise IrrationalBranchPoint(
                "a residual polynomial has an irrational real root")
        count += sum(m for r, m in roots if r != 0)
    return count


_MAX_BRANCH_DEPTH = 64


def _expand_roots(coeffs: list[LCNumber], budget: Cutoff,
                  positive_only: bool, depth: int = 0) -> list[tuple[LCNumber, int]]:
    """All field roots of the polynomial (restricted to positive valuation
    when asked), each exact or known below `budget`."""
    if depth > _MAX_BRANCH_DEPTH:
        raise IndeterminateAtCutoff("root expansion exceeded the branch depth limit")
    cs = list(coeffs)
    while cs and cs[-1] == ZERO:
        cs.pop()
    if not cs:
        raise ValueError("the zero polynomial has every point as a root")
    roots: list[tuple[LCNumber, int]] = []
    zero_mult = 0
    while cs[0] == ZERO:
        zero_mult += 1
        cs.pop(0)
    if zero_mult:
        roots.append((ZERO, zero_mult))
    if len(cs) <= 1:
        return roots
    for mu, residual in _newton_edges(cs):
        if positive_only and mu <= 0:
            continue
        res_roots, irrational = rational_roots(residual)
        if irrational:
            raise IrrationalBranchPoint(
                "a residual polynomial has an irrational real root; the "
                "corresponding root's leading coefficient is not rational")
        for t, t_mult in res_roots:
            if t == 0:
                continue
            lead = term(t, mu)
            if mu >= budget:
                roots.append((LCNumber((), budget), t_mult))
                continue
            shifted = [c for c in _substitute(cs, lead, d_power(mu))]
            if budget - mu <= 0:
                count = _count_branch(shifted)
                if count:
                    roots.append((truncate(lead, budget), count))
                continue
            tails = _expand_roots(shifted, budget - mu, True, depth + 1)
            for tail_root, m in tails:
                root = add(lead, mul(d_power(mu), tail_root))
                roots.append((root, m))
    return roots


def _count_branch(coeffs: list[LCNumber]) -> int:
    cs = list(coeffs)
    zero_mult = 0
    while cs and cs[0] == ZERO:
        zero_mult += 1
        cs.pop(0)
    if len(cs) <= 1:
        return zero_mult
    return zero_mult + _positive_branch_count(cs)


def _substitute(coeffs: list[LCNumber], offset: LCNumber,
                scale: LCNumber) -> list[LCNumber]:
    p = poly(coeffs)
    return list(compose_affine(p, offset, scale).coefficients) or [ZERO]


def find_roots(p: LCPolynomial, i: Interval, out_cutoff: Cutoff = 16) -> RootReport:
    """All roots of p inside the interval, verified to the cutoff.

    Each returned root r satisfies lambda(p(r)) >= out_cutoff; exact roots
    stay exact.  Raises IrrationalBranchPoint when a root's leading real
    coefficient is irrational, and bubbles IndeterminateAtCutoff from
    interval-membership comparisons that the cutoff cannot decide.
    """
    if p.is_zero:
        raise ValueError("root finding on the zero polynomial")
    if p.degree < 1:
        return RootReport((), i)
    flat = recenter(p, ZERO)
    budget = out_cutoff
    for _ in range(6):
        candidates = _expand_roots(list(flat.coefficients), budget, False)
        verified = []
        retry = False
        for root, mult in candidates:
            residual = eval_poly(p, root)
            if valuation_lower_bound(residual) >= out_cutoff:
                verified.append((root, mult))
            else:
                retry = True
                break
        if not retry:
            kept = [(r, m) for r, m in verified if _root_in_interval(r, i)]
            kept.sort(key=cmp_to_key(lambda a, b: compare(a[0], b[0])))
            return RootReport(tuple(kept), i)
        budget = 2 * budget + 4
    raise IndeterminateAtCutoff(
        f"could not verify roots to cutoff {out_cutoff}")


def _root_in_interval(root: LCNumber, i: Interval) -> bool:
    return contains(i, root)


# -- sign partitions -------------------------------------------------------------


def sign_partition(p: LCPolynomial, i: Interval,
                   root_cutoff: Cutoff = 16) -> list[tuple[Interval, int]]:
    """Split the interval at the roots of p; the sign of p is constant on
    each piece's interior.

    Needs the roots inside the interval to be exact elements (true for
    every piecewise-analytic construction in this library); otherwise the
    split points are not representable and IndeterminateAtCutoff is raised.
    """
    if p.is_zero:
        return [(i, 0)]
    if not i.bounded:
        raise ValueError("sign partition over an unbounded interval")
    if compare(i.a, i.b) == EQ:
        return [(i, compare(eval_poly(p, i.a), ZERO))]
    report = find_roots(p, i, root_cutoff)
    cuts = []
    for root, _ in report.roots:
        if not root.is_exact:
            raise IndeterminateAtCutoff(
                "a sign-change point has an infinite expansion; it cannot "
                "serve as an exact split point")
        if compare(root, i.a) == GT and compare(root, i.b) == LT:
            cuts.append(root)
    bounds = [i.a] + cuts + [i.b]
    pieces = []
    for k, (u, v) in enumerate(zip(bounds, bounds[1:])):
        piece = Interval(u, v,
                         i.closed_left if k == 0 else True,
                         i.closed_right if k == len(bounds) - 2 else True)
        s = compare(eval_poly(p, midpoint(piece)), ZERO)
        pieces.append((piece, s))
    return pieces


# -- rendering --------------------------------------------------------------------


def render_poly(p: LCPolynomial) -> str:
    """Canonical CLI form: descending powers of x, expanded at center 0."""
    flat = recenter(p, ZERO)
    if flat.is_zero:
        return "0"
    chunks: list[str] = []
    for i in range(flat.degree, -1, -1):
        c = flat.coefficients[i]
        if c == ZERO:
            continue
        body, negative = _render_coeff_power(c, i)
        if not chunks:
            chunks.append(f"-{body}" if negative else body)
        else:
            chunks.append(f" - {body}" if negative else f" + {body}")
    return "".join(chunks)


def _render_coeff_power(c: LCNumber, power: int) -> tuple[str, bool]:
    xpart = "" if power == 0 else ("x" if power == 1 else f"x^{power}")
    if len(c.terms) == 1 and c.is_exact:
        exp, coeff = c.terms[0]
        negative = coeff < 0
        mag = LCNumber(((exp, abs(coeff)),))
        body = str(mag)
        if xpart:
            body = xpart if mag == ONE else f"{body}*{xpart}"
        return body, negative
    body = f"({c})"
    return (f"{body}*{xpart}" if xpart else body), False
