"""Exact real-root machinery for rational-coefficient polynomials.

Polynomials are lists of Fractions in ascending degree order.  Everything
here is exact: Sturm chains isolate the distinct real roots, bisection
narrows an isolating interval until it can hold at most one rational with
an admissible denominator, and the Stern-Brocot "simplest rational in an
interval" search then either exhibits that rational root or proves there
is none.  No floating point, no integer factorization.
"""

from __future__ import annotations

from fractions import Fraction as Q

Poly = list[Q]


def strip(f: Poly) -> Poly:
    while f and f[-1] == 0:
        f = f[:-1]
    return list(f)


def degree(f: Poly) -> int:
    return len(strip(f)) - 1


def eval_at(f: Poly, x: Q) -> Q:
    acc = Q(0)
    for c in reversed(f):
        acc = acc * x + c
    return acc


def deriv(f: Poly) -> Poly:
    return [i * c for i, c in enumerate(f)][1:]


def divmod_poly(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    f, g = strip(f), strip(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Q(0)] * max(0, len(f) - len(g) + 1)
    r = list(f)
    while len(r) >= len(g) and strip(r):
        shift = len(r) - len(g)
        coeff = r[-1] / g[-1]
        q[shift] = coeff
        for i, gc in enumerate(g):
            r[shift + i] -= coeff * gc
        r = strip(r)
    return strip(q), r


def gcd_poly(f: Poly, g: Poly) -> Poly:
    f, g = strip(f), strip(g)
    while g:
        f, g = g, divmod_poly(f, g)[1]
        g = [c / abs(f[-1]) for c in g] if f and g else g
    if f:
        lead = f[-1]
        f = [c / lead for c in f]
    return f


def square_free_part(f: Poly) -> Poly:
    f = strip(f)
    if len(f) <= 1:
        return f
    g = gcd_poly(f, deriv(f))
    if len(g) <= 1:
        return f
    q, _ = divmod_poly(f, g)
    return q


def sturm_chain(f: Poly) -> list[Poly]:
    chain = [strip(f), strip(deriv(f))]
    while chain[-1]:
        rem = divmod_poly(chain[-2], chain[-1])[1]
        chain.append([-c for c in rem])
    return chain[:-1]


def _variations(values: list[Q]) -> int:
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def variations_at(chain: list[Poly], x: Q) -> int:
    return _variations([eval_at(p, x) for p in chain])


def root_bound(f: Poly) -> Q:
    """Cauchy bound: every real root lies strictly inside (-B, B)."""
    f = strip(f)
    lead = abs(f[-1])
    return 1 + max((abs(c) / lead for c in f[:-1]), default=Q(0))


def _deflate(f: Poly, r: Q) -> Poly:
    """Exact synthetic division of f by (x - r); remainder must be zero."""
    out: Poly = [Q(0)] * (len(f) - 1)
    acc = Q(0)
    for i in range(len(f) - 1, 0, -1):
        acc = acc * r + f[i]
        out[i - 1] = acc
    assert acc * r + f[0] == 0, "deflation by a non-root"
    return out


def isolate_real_roots(f: Poly) -> tuple[list[Q], list[tuple[Q, Q]]]:
    """Distinct real roots of f: exact dyadic hits plus isolating intervals."""
    exact, intervals, _ = _isolate_with_deflation(f)
    return exact, intervals


def _isolate_with_deflation(f: Poly) -> tuple[list[Q], list[tuple[Q, Q]], Poly]:
    """Exact dyadic root hits, isolating intervals for the rest, and the
    square-free polynomial with the exact hits deflated away.

    Each open interval contains exactly one real root of the returned
    polynomial, its endpoints are not roots, and none of the exact roots
    lies at an endpoint of an interval as a root."""
    g = square_free_part(f)
    exact: list[Q] = []
    while True:
        g = strip(g)
        if len(g) <= 1:
            return exact, [], g
        bound = root_bound(g) + 1
        chain = sturm_chain(g)
        total = variations_at(chain, -bound) - variations_at(chain, bound)
        stack = [(-bound, bound, total)]
        intervals: list[tuple[Q, Q]] = []
        restart = False
        while stack:
            lo, hi, count = stack.pop()
            if count == 0:
                continue
            if count == 1:
                intervals.append((lo, hi))
                continue
            mid = (lo + hi) / 2
            if eval_at(g, mid) == 0:
                exact.append(mid)
                g = _deflate(g, mid)
                restart = True
                break
            v_mid = variations_at(chain, mid)
            stack.append((lo, mid, variations_at(chain, lo) - v_mid))
            stack.append((mid, hi, v_mid - variations_at(chain, hi)))
        if not restart:
            return exact, intervals, g


def simplest_between(a: Q, b: Q) -> Q:
    """The rational with smallest denominator in the closed interval [a, b]."""
    if a > b:
        a, b = b, a
    if a <= 0 <= b:
        return Q(0)
    if b < 0:
        return -simplest_between(-b, -a)
    return _simplest_pos(a, b)


def _simplest_pos(a: Q, b: Q) -> Q:
    floor_a = a.numerator // a.denominator
    if floor_a == a:
        return a
    if floor_a + 1 <= b:
        return Q(floor_a + 1)
    return floor_a + 1 / _simplest_pos(1 / (b - floor_a), 1 / (a - floor_a))


def _narrow(g: Poly, lo: Q, hi: Q, width: Q) -> tuple[Q, Q] | Q:
    """Shrink an isolating interval of square-free g below `width` by
    sign-preserving bisection.  Returns the root itself if a midpoint
    lands on it."""
    sign_lo = 1 if eval_at(g, lo) > 0 else -1
    while hi - lo >= width:
        mid = (lo + hi) / 2
        v = eval_at(g, mid)
        if v == 0:
            return mid
        if (1 if v > 0 else -1) == sign_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def rational_roots(f: Poly) -> tuple[list[tuple[Q, int]], bool]:
    """All rational roots of f with multiplicities, and whether f has any
    irrational real root.

    A rational root p/q in lowest terms must have q dividing the integer
    leading coefficient; once an isolating interval is narrower than
    1/(2*lead^2) it contains at most one such rational, and that rational,
    if present, is the simplest one in the interval.
    """
    f = strip(f)
    if len(f) <= 1:
        return [], False
    roots: list[tuple[Q, int]] = []
    zero_mult = 0
    while f[0] == 0:
        zero_mult += 1
        f = f[1:]
    if zero_mult:
        roots.append((Q(0), zero_mult))
    if len(f) <= 1:
        return roots, False
    denom_lcm = 1
    for c in f:
        denom_lcm = denom_lcm * c.denominator // _gcd(denom_lcm, c.denominator)
    lead = abs((f[-1] * denom_lcm).numerator)
    width = Q(1, 2 * lead * lead)
    exact, intervals, g = _isolate_with_deflation(f)
    candidates = list(exact)
    irrational = False
    for lo, hi in intervals:
        narrowed = _narrow(g, lo, hi, width)
        if isinstance(narrowed, Q):
            candidates.append(narrowed)
            continue
        guess = simplest_between(*narrowed)
        if eval_at(f, guess) == 0:
            candidates.append(guess)
        else:
            irrational = True
    for r in sorted(candidates):
        mult = 0
        h = f
        while eval_at(h, r) == 0:
            mult += 1
            h = _deflate(h, r)
        roots.append((r, mult))
    return sorted(roots), irrational


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a
