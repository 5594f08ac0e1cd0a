"""Exact rational/real root helpers on Q[x]."""

import random
from fractions import Fraction as Q

from levi.realroots import (
    eval_at,
    isolate_real_roots,
    rational_roots,
    simplest_between,
    square_free_part,
    strip,
)


def poly_from_roots(roots):
    f = [Q(1)]
    for r in roots:
        f = [Q(0)] + f
        for i in range(len(f) - 1):
            f[i] -= r * f[i + 1]
    return f


def test_simplest_between():
    assert simplest_between(Q(2, 3), Q(3, 4)) == Q(2, 3)
    assert simplest_between(Q(1, 3), Q(2, 3)) == Q(1, 2)
    assert simplest_between(Q(-1, 2), Q(1, 5)) == 0
    assert simplest_between(Q(5, 2), Q(7, 2)) == 3
    assert simplest_between(Q(-7, 3), Q(-9, 4)) == Q(-7, 3)
    assert simplest_between(Q(7, 5), Q(10, 7)) == Q(7, 5)
    assert simplest_between(Q(29, 20), Q(10, 7)) == Q(10, 7)


def test_rational_roots_simple():
    f = poly_from_roots([Q(1, 2), Q(-3), Q(-3)])
    roots, irr = rational_roots(f)
    assert roots == [(Q(-3), 2), (Q(1, 2), 1)]
    assert not irr


def test_rational_roots_detects_irrational():
    # x^2 - 2 has only irrational real roots
    roots, irr = rational_roots([Q(-2), Q(0), Q(1)])
    assert roots == []
    assert irr


def test_rational_roots_mixed():
    # (x - 1)(x^2 - 3): one rational, two irrational
    f = [Q(3), Q(-3), Q(-1), Q(1)]
    roots, irr = rational_roots(f)
    assert roots == [(Q(1), 1)]
    assert irr


def test_complex_only_factor_is_ignored():
    # (x - 2)(x^2 + 1)
    f = [Q(-2), Q(1), Q(-2), Q(1)]
    roots, irr = rational_roots(f)
    assert roots == [(Q(2), 1)]
    assert not irr


def test_zero_root_multiplicity():
    # x^3 * (x - 5)
    f = [Q(0), Q(0), Q(0), Q(-5), Q(1)]
    roots, irr = rational_roots(f)
    assert roots == [(Q(0), 3), (Q(5), 1)]
    assert not irr


def test_isolation_counts():
    f = poly_from_roots([Q(-2), Q(0), Q(7, 3)])
    exact, intervals = isolate_real_roots(f)
    assert len(exact) + len(intervals) == 3


def test_random_products_recovered():
    rng = random.Random(3)
    for _ in range(60):
        k = rng.randint(1, 4)
        roots = set()
        while len(roots) < k:
            roots.add(Q(rng.randint(-8, 8), rng.randint(1, 5)))
        scale = Q(rng.randint(1, 5), rng.randint(1, 3))
        f = [scale * c for c in poly_from_roots(sorted(roots))]
        got, irr = rational_roots(f)
        assert not irr
        assert [r for r, _ in got] == sorted(roots)
        assert all(m == 1 for _, m in got)


def test_square_free_part():
    f = poly_from_roots([Q(2), Q(2), Q(3)])
    g = strip(square_free_part(f))
    assert len(g) == 3
    assert eval_at(g, Q(2)) == 0 and eval_at(g, Q(3)) == 0
