"""Simple functions: construction, algebra, preimages, integration."""

import random
from fractions import Fraction as Q

import pytest

from conftest import rand_fraction
from levi.core import (
    ONE,
    ZERO,
    LCNumber,
    add,
    compare,
    d_power,
    lc,
    mul,
    neg,
    sub,
    term,
    truncate,
)
from levi.errors import (
    ExcessTooLarge,
    NotCovering,
    OverlappingInteriors,
    UnsupportedStreamPair,
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
from levi.simple import (
    SimpleFunction,
    SimpleTail,
    abs_simple,
    add_simple,
    constant_on,
    eval_simple,
    from_polynomial,
    integrate_simple,
    lint_endpoint_agreement,
    make_simple,
    min_max_simple,
    mul_simple,
    negate_simple,
    preimage,
    restrict,
    scale_simple,
    sub_simple,
)

d = d_power(1)
x_poly = poly([0, 1])


def unit_interval_set():
    return finite_set(closed(lc(0), lc(1)))


def remark_domain():
    return stream_set(lambda n: open_interval(d_power(2 * n), term(2, 2 * n)),
                      lambda n: Q(2 * n))


def remark_simple():
    """value d^{-n} on the n-th block (d^{2n}, 2 d^{2n})."""
    domain = remark_domain()
    dom_tail = domain.tail

    def groups(n):
        iv = dom_tail.groups(n)[0]
        return ((closed(iv.a, iv.b), constant(d_power(-n))),)

    # block integral d^{-n} * d^{2n} = d^n
    tail = SimpleTail(groups, lambda n: Q(2 * n), lambda n: Q(n))
    return SimpleFunction(domain, (), tail)


# -- construction ----------------------------------------------------------------

def test_make_simple_constant():
    f = make_simple(unit_interval_set(), [(closed(lc(0), lc(1)), constant(lc(5)))])
    assert eval_simple(f, lc(Q(1, 2))) == lc(5)


def test_make_simple_two_pieces():
    dom = finite_set(closed(lc(0), lc(1)), closed(lc(2), lc(3)))
    f = make_simple(dom, [(closed(lc(0), lc(1)), x_poly),
                          (closed(lc(2), lc(3)), x_poly)])
    assert eval_simple(f, lc(Q(5, 2))) == lc(Q(5, 2))


def test_overlapping_interiors_rejected():
    with pytest.raises(OverlappingInteriors):
        make_simple(unit_interval_set(),
                    [(closed(lc(0), lc(1)), x_poly),
                     (closed(lc(Q(1, 2)), lc(1)), constant(3))])


def test_not_covering_rejected():
    with pytest.raises(NotCovering):
        make_simple(finite_set(closed(lc(0), lc(2))),
                    [(closed(lc(0), lc(1)), x_poly)])


# -- restriction --------------------------------------------------------------------

def test_restrict_identity_to_subinterval():
    f = from_polynomial(x_poly, finite_set(closed(lc(0), lc(2))))
    g = restrict(f, unit_interval_set())
    assert integrate_simple(g) == lc(Q(1, 2))
    assert eval_simple(g, lc(Q(1, 2))) == lc(Q(1, 2))


def test_restrict_to_empty():
    f = constant_on(unit_interval_set(), lc(7))
    g = restrict(f, EMPTY_SET)
    assert integrate_simple(g) == ZERO


def test_restrict_to_stream():
    f = from_polynomial(x_poly, finite_set(closed(lc(0), lc(1))))
    g = restrict(f, remark_domain())
    # integral over each block (d^{2n}, 2d^{2n}) of x dx = 3/2 d^{4n}
    got = integrate_simple(g, 9)
    expected = add(mul(lc(Q(3, 2)), d_power(4)), mul(lc(Q(3, 2)), d_power(8)))
    assert got == truncate(expected, 9)


# -- pointwise algebra ----------------------------------------------------------------

def test_abs_splits_at_zero():
    f = from_polynomial(x_poly, finite_set(closed(lc(-1), lc(1))))
    g = abs_simple(f)
    assert eval_simple(g, lc(Q(-1, 2))) == lc(Q(1, 2))
    assert eval_simple(g, lc(Q(1, 2))) == lc(Q(1, 2))
    assert integrate_simple(g) == ONE


def test_abs_of_positive_constant_unchanged():
    f = constant_on(unit_interval_set(), lc(3))
    assert integrate_simple(abs_simple(f)) == integrate_simple(f)


def test_abs_x_squared_minus_d():
    # |x^2 - d| on [0,1]: split at sqrt(d); integral 1/3 - d + (4/3) d^{3/2}
    p = poly([neg(d), ZERO, ONE])
    f = from_polynomial(p, unit_interval_set())
    g = abs_simple(f)
    expected = add(sub(lc(Q(1, 3)), d), mul(lc(Q(4, 3)), d_power(Q(3, 2))))
    assert integrate_simple(g) == expected


def test_min_max_examples():
    dom = finite_set(closed(lc(-1), lc(1)))
    f = from_polynomial(x_poly, dom)
    zero = constant_on(dom, 0)
    lo, hi = min_max_simple(f, zero)
    assert eval_simple(lo, lc(Q(-1, 2))) == lc(Q(-1, 2))
    assert eval_simple(lo, lc(Q(1, 2))) == ZERO
    assert eval_simple(hi, lc(Q(1, 2))) == lc(Q(1, 2))
    assert integrate_simple(lo) == lc(Q(-1, 2))
    assert integrate_simple(hi) == lc(Q(1, 2))


def test_min_max_same_function():
    f = constant_on(unit_interval_set(), lc(4))
    lo, hi = min_max_simple(f, f)
    assert integrate_simple(lo) == lc(4) == integrate_simple(hi)


def test_min_crossing_pieces():
    dom = unit_interval_set()
    f = from_polynomial(x_poly, dom)
    g = from_polynomial(poly([1, -1]), dom)  # 1 - x
    lo, _ = min_max_simple(f, g)
    # min(x, 1-x) integrates to 1/4 over [0,1]
    assert integrate_simple(lo) == lc(Q(1, 4))
    assert eval_simple(lo, lc(Q(1, 4))) == lc(Q(1, 4))
    assert eval_simple(lo, lc(Q(3, 4))) == lc(Q(1, 4))


def test_pointwise_algebra_random_samples():
    rng = random.Random(31)
    dom = finite_set(closed(lc(-2), lc(2)))
    for _ in range(25):
        cs_f = [lc(rand_fraction(rng)) for _ in range(rng.randint(1, 3))]
        cs_g = [lc(rand_fraction(rng)) for _ in range(rng.randint(1, 3))]
        f = from_polynomial(poly(cs_f), dom)
        g = from_polynomial(poly(cs_g), dom)
        s = add_simple(f, g)
        p = mul_simple(f, g)
        for q in (Q(-2), Q(-1, 2), Q(0), Q(1, 3), Q(2)):
            xx = lc(q)
            fv, gv = eval_simple(f, xx), eval_simple(g, xx)
            assert eval_simple(s, xx) == add(fv, gv)
            assert eval_simple(p, xx) == mul(fv, gv)
            try:
                lo, hi = min_max_simple(f, g)
            except Exception:
                continue
            lo_v, hi_v = eval_simple(lo, xx), eval_simple(hi, xx)
            assert {lo_v, hi_v} == {fv, gv} or lo_v == hi_v
            assert compare(lo_v, hi_v) != 1


# -- preimage -----------------------------------------------------------------------

def test_preimage_identity():
    f = from_polynomial(x_poly, unit_interval_set())
    got = preimage(f, Interval(lc(Q(1, 2)), lc(1), False, True))
    assert got == finite_set(Interval(lc(Q(1, 2)), lc(1), False, True))


def test_preimage_negative_ray():
    p = poly([neg(d), ZERO, ONE])  # x^2 - d
    f = from_polynomial(p, unit_interval_set())
    got = preimage(f, Interval(None, ZERO, False, False))
    assert got == finite_set(Interval(lc(0), d_power(Q(1, 2)), True, False))


def test_preimage_constant():
    f = constant_on(unit_interval_set(), lc(5))
    hit = preimage(f, closed(lc(4), lc(6)))
    assert hit == unit_interval_set()
    miss = preimage(f, closed(lc(6), lc(7)))
    assert miss == EMPTY_SET


def test_preimage_is_measurable_set_of_stream_function():
    f = remark_simple()
    got = preimage(f, closed(d_power(-2), d_power(-2)))
    # only block n = 2 has value d^{-2}
    assert got.fin == ()
    assert got.tail.groups(2) == (open_interval(d_power(4), term(2, 4)),)
    assert got.tail.groups(1) == ()
    assert measure(got, 9) == truncate(d_power(4), 9)


# -- integration ----------------------------------------------------------------------

def test_integral_constant_times_measure():
    rng = random.Random(32)
    for _ in range(50):
        alpha = lc(rand_fraction(rng))
        a = lc(rand_fraction(rng))
        b = add(a, lc(abs(rand_fraction(rng, nonzero=True))))
        dom = finite_set(closed(a, b))
        f = constant_on(dom, alpha)
        assert integrate_simple(f) == mul(alpha, measure(dom))


def test_integral_remark_function():
    f = remark_simple()
    got = integrate_simple(f, 6)
    expected = ZERO
    for n in range(1, 6):
        expected = add(expected, d_power(n))
    assert got == truncate(expected, 6)


def test_integral_linear():
    rng = random.Random(33)
    dom = finite_set(closed(lc(-1), lc(2)))
    for _ in range(40):
        alpha = lc(rand_fraction(rng))
        f = from_polynomial(poly([lc(rand_fraction(rng)) for _ in range(3)]), dom)
        g = from_polynomial(poly([lc(rand_fraction(rng)) for _ in range(2)]), dom)
        combo = add_simple(scale_simple(f, alpha), g)
        assert integrate_simple(combo) == add(mul(alpha, integrate_simple(f)),
                                              integrate_simple(g))


def test_integral_monotone():
    rng = random.Random(34)
    dom = unit_interval_set()
    for _ in range(30):
        f = from_polynomial(poly([lc(rand_fraction(rng)) for _ in range(2)]), dom)
        g = add_simple(f, constant_on(dom, lc(abs(rand_fraction(rng)))))
        diff = sub_simple(g, f)
        # certificate: g - f >= 0 on every sign piece
        from levi.poly import sign_partition
        for iv, p in diff.pieces:
            assert all(s >= 0 for _, s in sign_partition(p, iv))
        assert compare(integrate_simple(g), integrate_simple(f)) != -1


def test_integral_bound_by_sup():
    from levi.simple import _finite_sup_bound
    f = from_polynomial(poly([1, -3, 2]), unit_interval_set())
    m = _finite_sup_bound(f)
    v = integrate_simple(f)
    v_abs = v if compare(v, ZERO) != -1 else neg(v)
    assert compare(v_abs, mul(m, measure(f.domain))) != 1


def test_integral_additive_over_split():
    f = from_polynomial(poly([0, 0, 1]), finite_set(closed(lc(0), lc(2))))
    left = restrict(f, finite_set(closed(lc(0), lc(1))))
    right = restrict(f, finite_set(Interval(lc(1), lc(2), False, True)))
    assert add(integrate_simple(left), integrate_simple(right)) == integrate_simple(f)


def test_countable_additivity_stream_blocks():
    f = remark_simple()
    # blockwise integrals d^n; partial sums stabilize below the cutoff
    partial = ZERO
    for n in range(1, 8):
        block = integrate_simple(SimpleFunction(
            finite_set(*f.tail.groups(n)[0:1] and [f.tail.groups(n)[0][0]]),
            f.tail.groups(n)), None)
        partial = add(partial, block)
    assert truncate(partial, 8) == integrate_simple(f, 8)


def test_excess_certificate():
    dom = unit_interval_set()
    cover = [(closed(lc(0), add(lc(1), d_power(9))), constant(lc(2)))]
    f = make_simple(dom, cover, excess=d_power(9))
    got = integrate_simple(f, 5)
    assert got == truncate(mul(lc(2), add(ONE, d_power(9))), 5)
    assert got == truncate(lc(2), 5)
    with pytest.raises(ExcessTooLarge):
        integrate_simple(f, 12)
    with pytest.raises(ValueError):
        integrate_simple(f)  # exactness impossible with nonzero excess


def test_mul_stream_pair_rejected():
    f = remark_simple()
    with pytest.raises(UnsupportedStreamPair):
        mul_simple(f, f)


def test_lint_endpoint_agreement():
    dom = finite_set(closed(lc(0), lc(2)))
    f = make_simple(dom, [(closed(lc(0), lc(1)), constant(1)),
                          (closed(lc(1), lc(2)), constant(2))])
    issues = lint_endpoint_agreement(f)
    assert len(issues) == 1
    assert issues[0][0] == ONE


def test_scale_by_zero():
    f = from_polynomial(x_poly, unit_interval_set())
    z = scale_simple(f, ZERO)
    assert integrate_simple(z) == ZERO


def test_negate_roundtrip():
    f = from_polynomial(poly([1, 2, 3]), unit_interval_set())
    assert integrate_simple(negate_simple(negate_simple(f))) == integrate_simple(f)
