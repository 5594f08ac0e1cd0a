"""Grammar, evaluation, and round-trip properties."""

import random
from fractions import Fraction as Q

import pytest

from conftest import rand_lc
from levi.cli import (
    evaluate,
    render_interval,
    render_set,
    render_simple_function,
)
from levi.core import (
    INF,
    LCNumber,
    ONE,
    ZERO,
    d_power,
    lc,
    mul,
    render,
    term,
    truncate,
)
from levi.errors import ExprSyntaxError
from levi.measure import Interval, closed, finite_set, measure
from levi.parser import (
    BinOp,
    Num,
    PiecewiseNode,
    SetNode,
    StreamNode,
    parse,
    parse_interval,
)
from levi.poly import poly, recenter
from levi.simple import SimpleFunction, from_polynomial, make_simple

d = d_power(1)


def ev(text, cutoff=Q(10)):
    return evaluate(parse(text), cutoff)


# -- parsing ------------------------------------------------------------------

def test_constant_ast():
    node = parse("3 + 2*d^(1/2) - d^2")
    assert isinstance(node, BinOp)
    value = ev("3 + 2*d^(1/2) - d^2")
    assert value == lc(3) + term(2, Q(1, 2)) - d_power(2)


def test_piecewise_ast():
    node = parse("piecewise { [0,1]: x^2 - d }")
    assert isinstance(node, PiecewiseNode)
    assert len(node.pieces) == 1
    f = ev("piecewise { [0,1]: x^2 - d }")
    assert isinstance(f, SimpleFunction)
    assert f.pieces[0][1] == poly([-d, 0, 1])


def test_syntax_error_position():
    with pytest.raises(ExprSyntaxError) as err:
        parse("1 + * d")
    assert err.value.line == 1
    assert err.value.col == 5


def test_unbalanced_brace():
    with pytest.raises(ExprSyntaxError):
        parse("piecewise { [0,1]: x")
    with pytest.raises(ExprSyntaxError):
        parse("set { [0,1] ")
    with pytest.raises(ExprSyntaxError):
        parse("(1 + d")


def test_interval_flags():
    node = parse_interval("(d, 2*d]")
    assert not node.closed_left and node.closed_right


def test_set_union_spellings():
    for sep in ("|", "u", "∪"):
        got = ev(f"set {{ [0,1] {sep} [2,3] }}")
        assert got == finite_set(closed(lc(0), lc(1)), closed(lc(2), lc(3)))


def test_stream_evaluation():
    got = ev("stream(n -> (d^(2*n), 2*d^(2*n)), 2*n)")
    assert got.tail is not None
    assert measure(got, 5) == truncate(d_power(2) + d_power(4), 5)


def test_division_uses_cutoff():
    got = ev("1/(1-d)", cutoff=Q(4))
    assert got == truncate(lc(1) + d + d_power(2) + d_power(3), 4)


def test_fractional_powers():
    assert ev("d^(1/2)") == d_power(Q(1, 2))
    assert ev("4^(1/2)") == lc(2)
    got = ev("(1+d)^(1/2)", cutoff=Q(3))
    assert mul(got, got) == truncate(lc(1) + d, 3)


def test_negative_powers():
    assert ev("d^(-1)") == d_power(-1)
    assert ev("2^(-2)") == lc(Q(1, 4))


def test_big_o_atom():
    got = ev("1 + d + O(d^4)")
    assert got == truncate(lc(1) + d, 4)


def test_min_max_abs_constants():
    assert ev("abs(1 - 3)") == lc(2)
    assert ev("min(d, d^2, 3)") == d_power(2)
    assert ev("max(1, 1 + d)") == lc(1) + d


def test_min_of_piecewise():
    got = ev("min(piecewise{[0,1]: x}, piecewise{[0,1]: 1 - x})")
    assert isinstance(got, SimpleFunction)
    from levi.simple import integrate_simple
    assert integrate_simple(got) == lc(Q(1, 4))


def test_unknown_name_rejected():
    with pytest.raises(ValueError):
        ev("q + 1")


# -- round trips -----------------------------------------------------------------

def test_roundtrip_random_constants():
    rng = random.Random(51)
    for _ in range(200):
        x = rand_lc(rng)
        if rng.random() < 0.4:
            x = truncate(x, Q(rng.randint(-2, 12)))
            if x.cutoff != INF and x.terms and x.cutoff <= x.terms[0][0]:
                continue
        assert evaluate(parse(render(x)), Q(50)) == x


def test_roundtrip_piecewise():
    f = make_simple(
        finite_set(closed(lc(0), lc(1)), Interval(lc(1), lc(2), False, True)),
        [(closed(lc(0), lc(1)), poly([-d, 0, 1])),
         (closed(lc(1), lc(2)), poly([lc(3)]))])
    text = render_simple_function(f)
    assert text == "piecewise { [0,1]: x^2 - d; (1,2]: 3 }"
    back = evaluate(parse(text), Q(10))
    assert isinstance(back, SimpleFunction)
    assert back.domain == f.domain
    for (i1, p1), (i2, p2) in zip(back.pieces, f.pieces):
        assert i1 == i2
        assert recenter(p1, 0) == recenter(p2, 0)


def test_roundtrip_set():
    A = finite_set(closed(lc(0), lc(1)), Interval(lc(2), lc(3), False, False))
    text = render_set(A)
    assert evaluate(parse(text), Q(10)) == A


def test_roundtrip_interval_rendering():
    i = Interval(d, term(2, 1), False, True)
    assert render_interval(i) == "(d,2*d]"
    node = parse_interval(render_interval(i))
    from levi.cli import _eval_interval
    assert _eval_interval(node, Q(10), {}) == i
