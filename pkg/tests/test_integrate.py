"""Measurable functions, the envelope-scheme integral, and its theorems."""

import random
from fractions import Fraction as Q

import pytest

from conftest import rand_fraction
from levi.core import (
    EQ,
    GT,
    LT,
    ONE,
    ZERO,
    LCNumber,
    add,
    compare,
    d_power,
    div,
    inv,
    lc,
    mul,
    neg,
    sub,
    term,
    truncate,
    valuation,
)
from levi.errors import RateNotDecaying, UnboundedFactor
from levi.integrate import (
    EnvelopePair,
    MeasurableFunction,
    abs_m,
    add_m,
    char_certificate,
    eg_counterexample,
    envelope_gap_exceeds,
    from_simple,
    from_uniform_limit,
    ftc_primitive,
    integrate,
    integrate_over,
    level_sums,
    linear_combine,
    max_m,
    measurable_from_levels,
    min_m,
    multiply,
    remark_counterexample,
    restrict_m,
    scale_m,
    step_function,
    stream_step_function,
    sub_m,
    uniform_series_limit,
    verify_level,
    zero_function,
)
from levi.measure import (
    EMPTY_SET,
    Interval,
    closed,
    finite_set,
    measure,
    open_interval,
    stream_set,
)
from levi.poly import constant, poly
from levi.simple import constant_on, from_polynomial

d = d_power(1)
x_poly = poly([0, 1])


def unit_set():
    return finite_set(closed(lc(0), lc(1)))


def remark_domain():
    return stream_set(lambda n: open_interval(d_power(2 * n), term(2, 2 * n)),
                      lambda n: Q(2 * n))


def remark_function():
    return stream_step_function(remark_domain(), lambda n: d_power(-n),
                                lambda n: Q(n))


# -- construction and the basic integral -----------------------------------------

def test_from_simple_constant():
    f = from_simple(constant_on(unit_set(), lc(Q(7, 2))))
    assert integrate(f) == lc(Q(7, 2))


def test_from_simple_identity():
    f = from_simple(from_polynomial(x_poly, unit_set()))
    assert integrate(f) == lc(Q(1, 2))


def test_empty_domain():
    f = from_simple(constant_on(EMPTY_SET, lc(9)))
    assert integrate(f) == ZERO


def test_integrate_remark_function():
    got = integrate(remark_function(), 5)
    expected = add(add(d, d_power(2)), add(d_power(3), d_power(4)))
    assert got == truncate(expected, 5)


def test_integrate_zero_on_stream():
    f = stream_step_function(remark_domain(), lambda n: ZERO, lambda n: Q(n))
    assert integrate(f, 9) == truncate(ZERO, 9)


def test_two_block_step():
    dom = finite_set(closed(lc(0), lc(2)))
    f = step_function(dom, [
        (finite_set(closed(lc(0), lc(1))), ONE),
        (finite_set(Interval(lc(1), lc(2), False, True)), lc(2)),
    ])
    assert integrate(f) == lc(3)


def test_constant_integral_identity_random():
    rng = random.Random(41)
    for _ in range(60):
        alpha = lc(rand_fraction(rng))
        a = add(lc(rand_fraction(rng)), d_power(rng.randint(1, 3)))
        b = add(a, lc(abs(rand_fraction(rng, nonzero=True))))
        dom = finite_set(closed(a, b))
        f = from_simple(constant_on(dom, alpha))
        assert integrate(f) == mul(alpha, sub(b, a))


# -- sandwich ---------------------------------------------------------------------

def _at_most(a, b):
    """a <= b as far as the stored digits can tell."""
    gap = sub(b, a)
    return not gap.terms or gap.terms[0][1] > 0


def test_sandwich_at_levels():
    f = remark_function()
    value = integrate(f, 6)
    for k in (2, 4, 6):
        lo, hi = level_sums(f, k, 6)
        assert _at_most(lo, hi)
        assert _at_most(lo, value) and _at_most(value, hi)
        assert verify_level(f, k)


def test_sandwich_nontrivial_scheme():
    f = from_uniform_limit(
        lambda n: from_simple(from_polynomial(x_poly, unit_set())),
        lambda n: d_power(n))
    for k in (1, 3):
        lo, hi = level_sums(f, k, 8)
        mid = integrate(f, 8)
        assert _at_most(lo, mid)
        assert _at_most(mid, hi)
        assert verify_level(f, k)


# -- linearity ----------------------------------------------------------------------

def test_linear_identity():
    f = from_simple(from_polynomial(x_poly, unit_set()))
    combo = linear_combine(ONE, f, zero_function(unit_set()))
    assert integrate(combo, 8) == lc(Q(1, 2))


def test_linear_scaling():
    f = from_simple(from_polynomial(x_poly, unit_set()))
    assert integrate(scale_m(lc(2), f), 8) == ONE


def test_linear_streams():
    f = remark_function()
    g = stream_step_function(remark_domain(), lambda n: d_power(n),
                             lambda n: Q(3 * n))
    combo = linear_combine(lc(3), f, g)
    got = integrate(combo, 5)
    expected = ZERO
    for n in range(1, 5):
        block_len = d_power(2 * n)
        v = add(mul(lc(3), d_power(-n)), d_power(n))
        expected = add(expected, mul(v, block_len))
    assert got == truncate(expected, 5)


def test_linearity_random_finite():
    rng = random.Random(42)
    dom = finite_set(closed(lc(-1), lc(1)))
    for _ in range(25):
        alpha = lc(rand_fraction(rng, nonzero=True))
        f = from_simple(from_polynomial(
            poly([lc(rand_fraction(rng)) for _ in range(3)]), dom))
        g = from_simple(from_polynomial(
            poly([lc(rand_fraction(rng)) for _ in range(2)]), dom))
        combo = linear_combine(alpha, f, g)
        assert integrate(combo, 8) == add(mul(alpha, integrate(f)), integrate(g))


# -- abs / min / max -----------------------------------------------------------------

def test_abs_identity_on_symmetric_interval():
    dom = finite_set(closed(lc(-1), lc(1)))
    f = from_simple(from_polynomial(x_poly, dom))
    assert integrate(abs_m(f), 8) == ONE


def test_abs_of_negative_constant():
    dom = unit_set()
    f = from_simple(constant_on(dom, lc(-5)))
    assert integrate(abs_m(f), 8) == lc(5)


def test_abs_x_squared_minus_d():
    dom = unit_set()
    f = from_simple(from_polynomial(poly([neg(d), ZERO, ONE]), dom))
    got = integrate(abs_m(f), 8)
    expected = add(sub(lc(Q(1, 3)), d), mul(lc(Q(4, 3)), d_power(Q(3, 2))))
    assert got == expected


def test_min_max_of_measurables():
    dom = unit_set()
    f = from_simple(from_polynomial(x_poly, dom))
    g = from_simple(from_polynomial(poly([1, -1]), dom))  # 1 - x
    assert integrate(min_m(f, g), 8) == lc(Q(1, 4))
    assert integrate(max_m(f, g), 8) == lc(Q(3, 4))


# -- products --------------------------------------------------------------------------

def test_multiply_by_one():
    f = from_simple(from_polynomial(x_poly, unit_set()))
    one = from_simple(constant_on(unit_set(), ONE))
    p = multiply(f, one, bound_certificate_for_g=ONE)
    assert integrate(p, 8) == lc(Q(1, 2))


def test_multiply_by_indicator_is_restriction():
    dom = finite_set(closed(lc(0), lc(2)))
    B = finite_set(closed(lc(0), lc(1)))
    f = from_simple(from_polynomial(x_poly, dom))
    chi = step_function(dom, [(B, ONE)])
    p = multiply(f, chi, bound_certificate_for_g=ONE)
    assert integrate(p, 8) == integrate_over(f, B)


def test_multiply_unbounded_rejected():
    f = remark_function()
    with pytest.raises(UnboundedFactor):
        multiply(f, f)


# -- additivity ------------------------------------------------------------------------

def test_integrate_over_whole_and_empty():
    f = from_simple(from_polynomial(x_poly, unit_set()))
    assert integrate_over(f, unit_set()) == integrate(f)
    assert integrate_over(f, EMPTY_SET) == ZERO


def test_integrate_over_first_remark_block():
    f = remark_function()
    block = finite_set(open_interval(d_power(2), term(2, 2)))
    assert integrate_over(f, block, 8) == truncate(d, 8)


def test_additivity_over_split():
    rng = random.Random(43)
    for _ in range(25):
        f = from_simple(from_polynomial(
            poly([lc(rand_fraction(rng)) for _ in range(3)]),
            finite_set(closed(lc(0), lc(2)))))
        c = lc(Q(rng.randint(1, 7), 4))
        left = finite_set(closed(lc(0), c))
        right = finite_set(Interval(c, lc(2), False, True))
        assert add(integrate_over(f, left), integrate_over(f, right)) == integrate(f)


def test_countable_additivity_stream_partition():
    # partition (0, d] into blocks (d^{n+1}, d^n]
    dom = finite_set(Interval(ZERO, d, False, True))
    f = from_simple(from_polynomial(x_poly, dom))
    whole = integrate(f)  # d^2 / 2 exactly
    assert whole == mul(lc(Q(1, 2)), d_power(2))
    partial = ZERO
    for n in range(1, 5):
        block = finite_set(Interval(d_power(n + 1), d_power(n), False, True))
        partial = add(partial, integrate_over(f, block))
    assert truncate(partial, 9) == truncate(whole, 9)


# -- zero sets, null sets, a.e. ------------------------------------------------------

def test_null_domain_integrates_to_zero():
    nulls = finite_set(closed(lc(1), lc(1)), closed(d, d))
    f = from_simple(constant_on(nulls, lc(123)))
    assert integrate(f) == ZERO


def test_zero_ae_theorem_constructive():
    dom = finite_set(closed(lc(0), lc(1)))
    support = finite_set(closed(lc(Q(1, 3)), lc(Q(1, 3))))
    f = step_function(dom, [(support, lc(5))])
    for cutoff in (4, 8, 12):
        assert integrate(f, cutoff) == ZERO
    assert integrate(f) == ZERO


def test_zero_ae_theorem_lower_bound():
    dom = finite_set(closed(lc(0), lc(1)))
    block = finite_set(closed(lc(0), d_power(5)))
    f = step_function(dom, [(block, d_power(5))])
    got = integrate(f)
    assert got == d_power(10)
    assert compare(got, d_power(10)) != LT


def test_ae_equality():
    dom = finite_set(closed(lc(0), lc(1)))
    null = finite_set(closed(lc(Q(1, 2)), lc(Q(1, 2))))
    f = step_function(dom, [(finite_set(closed(lc(0), lc(Q(1, 2)))), lc(3))])
    g = step_function(dom, [(finite_set(Interval(lc(0), lc(Q(1, 2)), True, False)), lc(3)),
                            (null, lc(-77))])
    for cutoff in (None, 6, 10):
        assert integrate(f, cutoff) == integrate(g, cutoff)


def test_s_integral_compatibility():
    # for piecewise-polynomial f on an interval the envelope integral equals
    # the direct antiderivative evaluation, exactly
    from levi.poly import integral_over_interval
    rng = random.Random(44)
    for _ in range(25):
        p = poly([lc(rand_fraction(rng)) for _ in range(4)])
        iv = closed(lc(-1), lc(2))
        f = from_simple(from_polynomial(p, finite_set(iv)))
        assert integrate(f) == integral_over_interval(p, iv)


# -- fundamental theorem of calculus ---------------------------------------------------

def test_ftc_values():
    f = from_simple(from_polynomial(x_poly, unit_set()))
    assert ftc_primitive(f, ONE) == lc(Q(1, 2))
    alpha = lc(Q(5, 3))
    g = from_simple(constant_on(finite_set(closed(lc(1), lc(3))), alpha))
    x = lc(2)
    assert ftc_primitive(g, x) == mul(alpha, sub(x, lc(1)))


def test_ftc_difference_quotient():
    f = from_simple(from_polynomial(poly([0, 0, 1]), unit_set()))
    c = lc(Q(1, 2))
    big_f = lambda x: ftc_primitive(f, x)
    quotient = (big_f(add(c, d)) - big_f(c)) / d
    expected = add(lc(Q(1, 4)), add(mul(lc(Q(1, 2)), d), mul(lc(Q(1, 3)), d_power(2))))
    assert quotient == expected
    deviation = sub(quotient, mul(c, c))
    assert valuation(deviation) >= 1  # infinitesimal: F'(c) = f(c)


# -- uniform convergence ----------------------------------------------------------------

def test_uniform_limit_of_shifted_identity():
    dom = unit_set()

    def member(n: int) -> MeasurableFunction:
        return from_simple(from_polynomial(poly([d_power(n), 1]), dom))

    limit = from_uniform_limit(member, lambda n: d_power(n))
    assert integrate(limit, 8) == truncate(lc(Q(1, 2)), 8)
    for n in (1, 3, 5):
        diff = sub(integrate(member(n)), lc(Q(1, 2)))
        assert diff == d_power(n)


def test_uniform_limit_of_zero():
    limit = from_uniform_limit(lambda n: zero_function(unit_set()),
                               lambda n: ZERO)
    assert integrate(limit, 6) == truncate(ZERO, 6)


def test_uniform_series():
    dom = unit_set()

    def term_fn(n: int) -> MeasurableFunction:
        return from_simple(from_polynomial(poly([0, d_power(n)]), dom))

    # |sum - partial_n| <= sum_{m>n} d^m <= 2 d^{n+1} on [0,1]
    limit = uniform_series_limit(term_fn, lambda n: mul(lc(2), d_power(n + 1)))
    got = integrate(limit, 6)
    expected = div(d, mul(lc(2), sub(ONE, d)), 6)  # d / (2 (1 - d))
    assert got == expected


def test_rate_not_decaying():
    with pytest.raises(RateNotDecaying):
        f = from_uniform_limit(lambda n: zero_function(unit_set()),
                               lambda n: lc(Q(1, 2)))
        integrate(f, 4)


# -- the paper counterexamples -----------------------------------------------------------

def test_remark_counterexample_values():
    for n in range(1, 7):
        f, value = remark_counterexample(n)
        expected = add(sub(ONE, lc(Q(1, n))), d_power(Q(1, n)))
        assert value == expected
        assert integrate(f) == expected


def test_remark_counterexample_not_strongly_cauchy():
    # consecutive integrals differ by 1/(n(n+1)) + d^{1/(n+1)} - d^{1/n};
    # the valuation of the gap stays at 0, so the sequence diverges
    values = [remark_counterexample(n)[1] for n in range(1, 7)]
    for n, (a, b) in enumerate(zip(values, values[1:]), start=1):
        assert valuation(sub(b, a)) == 0


def test_eg_counterexample_values():
    for n in range(1, 7):
        f, value = eg_counterexample(n)
        assert value == add(ONE, d)
        assert integrate(f) == add(ONE, d)


def test_eg_limit_mismatch():
    # lim of the integrals is 1 + d, but the pointwise limit (constant 1)
    # integrates to 1
    _, value = eg_counterexample(3)
    pointwise_limit = from_simple(constant_on(
        finite_set(Interval(ZERO, ONE, False, False)), ONE))
    assert integrate(pointwise_limit) == ONE
    assert value != integrate(pointwise_limit)


# -- pointwise envelope diagnostics -------------------------------------------------------

def test_envelope_gap_diagnostic():
    dom = unit_set()

    def member(n: int) -> MeasurableFunction:
        return step_function(dom, [(finite_set(closed(lc(0), lc(Q(1, 2)))),
                                    d_power(n))])

    f = from_uniform_limit(member, lambda n: d_power(n))
    u = envelope_gap_exceeds(f, 3, Q(5))
    # the envelopes at level 3 differ by ~d^4 everywhere: the whole domain
    assert measure(u) == ONE
    u2 = envelope_gap_exceeds(f, 6, Q(5))
    assert measure(u2) == ZERO


def test_char_certificate_on_step_scheme():
    dom = unit_set()

    def member(n: int) -> MeasurableFunction:
        return step_function(dom, [(finite_set(closed(lc(0), lc(Q(1, 2)))),
                                    d_power(n))])

    f = from_uniform_limit(member, lambda n: d_power(n))
    u, k = char_certificate(f, Q(4), Q(2))
    assert compare(measure(u, 4), d_power(2)) == LT


def test_measurable_from_levels_converse():
    # hand the constructor raw envelope levels of the identity and let it
    # re-certify them
    dom = unit_set()
    ident = from_polynomial(x_poly, dom)

    def levels(k: int) -> EnvelopePair:
        lower = from_polynomial(poly([neg(d_power(k)), 1]), dom)
        upper = from_polynomial(poly([d_power(k), 1]), dom)
        return EnvelopePair(((dom, lower, upper),))

    f = measurable_from_levels(dom, levels)
    assert integrate(f, 8) == truncate(lc(Q(1, 2)), 8)
    assert verify_level(f, 5)
