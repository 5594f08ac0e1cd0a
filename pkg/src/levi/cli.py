"""Command-line front end: evaluate, compare, measure, integrate, ftc,
roots, and the counterexample reproductions.

Exit codes: 0 ok, 2 syntax error, 3 domain error, 4 indeterminate at the
working cutoff.  All output is deterministic ASCII.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction as Q

from .core import (
    EQ,
    GT,
    INF,
    LT,
    Cutoff,
    LCNumber,
    ONE,
    ZERO,
    compare,
    d,
    div,
    lc,
    lc_max,
    lc_min,
    mul,
    neg,
    nth_root,
    render,
    term,
    truncate,
)
from .errors import ExprSyntaxError, IndeterminateError, LeviError
from .integrate import eg_counterexample, from_simple, ftc_primitive, integrate, remark_counterexample
from .measure import Interval, MeasurableSet, finite_set, measure, stream_set
from .parser import (
    BigO,
    BinOp,
    Call,
    IntervalNode,
    Name,
    Neg,
    Num,
    PiecewiseNode,
    Pow,
    SetNode,
    StreamNode,
    parse,
    parse_interval,
)
from .poly import LCPolynomial, X, constant, find_roots, poly_add, poly_mul, poly_scale, render_poly
from .simple import SimpleFunction, abs_simple, constant_on, from_polynomial, make_simple, min_max_simple, restrict

DEFAULT_CUTOFF = Q(10)

Value = object  # LCNumber | LCPolynomial | SimpleFunction | MeasurableSet


# -- evaluation ---------------------------------------------------------------


def _as_fraction(v: Value, what: str) -> Q:
    if isinstance(v, LCNumber) and v.is_exact:
        if not v.terms:
            return Q(0)
        if len(v.terms) == 1 and v.terms[0][0] == 0:
            return v.terms[0][1]
    raise ValueError(f"{what} must be an exact rational")


def _as_constant(v: Value, what: str = "operand") -> LCNumber:
    if isinstance(v, LCNumber):
        return v
    if isinstance(v, LCPolynomial) and v.degree <= 0:
        return v.coefficients[0] if v.coefficients else ZERO
    raise ValueError(f"{what} must be a constant")


def _as_poly(v: Value) -> LCPolynomial:
    if isinstance(v, LCPolynomial):
        return v
    if isinstance(v, LCNumber):
        return constant(v)
    raise ValueError("expected a polynomial or constant")


def _binop(op: str, a: Value, b: Value, cutoff: Cutoff) -> Value:
    if isinstance(a, (SimpleFunction, MeasurableSet)) or \
            isinstance(b, (SimpleFunction, MeasurableSet)):
        raise ValueError(f"operator {op!r} does not apply to functions or sets")
    if isinstance(a, LCPolynomial) or isinstance(b, LCPolynomial):
        pa, pb = _as_poly(a), _as_poly(b)
        if op == "+":
            return poly_add(pa, pb)
        if op == "-":
            return poly_add(pa, poly_scale(pb, lc(-1)))
        if op == "*":
            return poly_mul(pa, pb)
        if op == "/":
            denom = _as_constant(b, "divisor")
            return poly_scale(pa, _invert(denom, cutoff))
        raise ValueError(f"unknown operator {op!r}")
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return mul(a, b)
    if op == "/":
        if len(b.terms) == 1 and b.is_exact:
            return a / b
        return div(a, b, cutoff)
    raise ValueError(f"unknown operator {op!r}")


def _invert(x: LCNumber, cutoff: Cutoff) -> LCNumber:
    if len(x.terms) == 1 and x.is_exact:
        return ONE / x
    return div(ONE, x, cutoff)


def _power(base: Value, exp: Q, cutoff: Cutoff) -> Value:
    if isinstance(base, LCPolynomial):
        if exp.denominator != 1 or exp < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = constant(1)
        for _ in range(int(exp)):
            result = poly_mul(result, base)
        return result
    if not isinstance(base, LCNumber):
        raise ValueError("exponentiation applies to constants and polynomials")
    p, q = exp.numerator, exp.denominator
    if q == 1:
        if p >= 0:
            return base ** p
        return div(ONE, base ** (-p), cutoff)
    margin = abs(p) * (1 + abs(base.terms[0][0]) if base.terms else 1)
    root = nth_root(base, q, cutoff + margin if cutoff != INF else INF)
    value = root ** p if p >= 0 else div(ONE, root ** (-p), cutoff)
    return value if value.is_exact else truncate(value, cutoff)


def _call(fn: str, args: list[Value], cutoff: Cutoff) -> Value:
    if any(isinstance(a, SimpleFunction) for a in args):
        fns = []
        domain = next(a.domain for a in args if isinstance(a, SimpleFunction))
        for a in args:
            if isinstance(a, SimpleFunction):
                fns.append(a)
            elif isinstance(a, LCNumber):
                fns.append(constant_on(domain, a))
            elif isinstance(a, LCPolynomial):
                fns.append(from_polynomial(a, domain))
            else:
                raise ValueError(f"{fn} cannot mix sets with functions")
        if fn == "abs":
            if len(fns) != 1:
                raise ValueError("abs takes one argument")
            return abs_simple(fns[0])
        acc = fns[0]
        for other in fns[1:]:
            lo, hi = min_max_simple(acc, other)
            acc = lo if fn == "min" else hi
        return acc
    if any(isinstance(a, LCPolynomial) for a in args):
        raise ValueError(f"{fn} of a bare polynomial needs a domain; wrap it "
                         "in piecewise{...}")
    consts = [_as_constant(a) for a in args]
    if fn == "abs":
        if len(consts) != 1:
            raise ValueError("abs takes one argument")
        return abs(consts[0])
    acc = consts[0]
    for other in consts[1:]:
        acc = lc_min(acc, other) if fn == "min" else lc_max(acc, other)
    return acc


def evaluate(node, cutoff: Cutoff = DEFAULT_CUTOFF,
             env: dict[str, LCNumber] | None = None) -> Value:
    """Evaluate a parse tree to a constant, polynomial, function, or set."""
    env = env or {}
    if isinstance(node, Num):
        return lc(node.value)
    if isinstance(node, Name):
        if node.name == "d":
            return d
        if node.name == "x":
            return X
        if node.name in env:
            return env[node.name]
        raise ValueError(f"unknown name {node.name!r}")
    if isinstance(node, Neg):
        v = evaluate(node.operand, cutoff, env)
        if isinstance(v, LCPolynomial):
            return poly_scale(v, lc(-1))
        return neg(_as_constant(v))
    if isinstance(node, BinOp):
        a = evaluate(node.left, cutoff, env)
        b = evaluate(node.right, cutoff, env)
        return _binop(node.op, a, b, cutoff)
    if isinstance(node, Pow):
        base = evaluate(node.base, cutoff, env)
        exp = _as_fraction(evaluate(node.exponent, cutoff, env), "an exponent")
        return _power(base, exp, cutoff)
    if isinstance(node, Call):
        return _call(node.fn, [evaluate(a, cutoff, env) for a in node.args],
                     cutoff)
    if isinstance(node, BigO):
        inner = evaluate(node.operand, cutoff, env)
        if isinstance(inner, LCNumber) and inner.is_exact and \
                len(inner.terms) == 1 and inner.terms[0][1] == 1:
            return LCNumber((), inner.terms[0][0])
        raise ValueError("O(...) takes a single power of d")
    if isinstance(node, IntervalNode):
        return _eval_interval(node, cutoff, env)
    if isinstance(node, SetNode):
        return finite_set(*(_eval_interval(i, cutoff, env)
                            for i in node.intervals))
    if isinstance(node, StreamNode):
        return _eval_stream(node, cutoff)
    if isinstance(node, PiecewiseNode):
        return _eval_piecewise(node, cutoff, env)
    raise ValueError(f"cannot evaluate node {node!r}")


def _eval_interval(node: IntervalNode, cutoff: Cutoff,
                   env: dict[str, LCNumber]) -> Interval:
    lo = _as_constant(evaluate(node.lo, cutoff, env), "an interval endpoint")
    hi = _as_constant(evaluate(node.hi, cutoff, env), "an interval endpoint")
    return Interval(lo, hi, node.closed_left, node.closed_right)


def _eval_piecewise(node: PiecewiseNode, cutoff: Cutoff,
                    env: dict[str, LCNumber]) -> SimpleFunction:
    intervals = []
    pieces = []
    for iv_node, expr in node.pieces:
        iv = _eval_interval(iv_node, cutoff, env)
        body = evaluate(expr, cutoff, env)
        pieces.append((Interval(iv.a, iv.b, True, True), _as_poly(body)))
        intervals.append(iv)
    return make_simple(finite_set(*intervals), pieces)


def _eval_stream(node: StreamNode, cutoff: Cutoff) -> MeasurableSet:
    var = node.var

    def gen(n: int) -> Interval:
        return _eval_interval(node.interval, cutoff, {var: lc(n)})

    def bound(n: int) -> Q:
        return _as_fraction(evaluate(node.bound, cutoff, {var: lc(n)}),
                            "a stream bound")

    return stream_set(gen, bound)


# -- canonical renderings -------------------------------------------------------


def render_interval(i: Interval) -> str:
    left = "[" if i.closed_left else "("
    right = "]" if i.closed_right else ")"
    return f"{left}{render(i.a)},{render(i.b)}{right}"


def render_set(A: MeasurableSet) -> str:
    if A.tail is not None:
        raise ValueError("stream sets have no canonical finite rendering")
    if not A.fin:
        return "set { }"
    return "set { " + " | ".join(render_interval(i) for i in A.fin) + " }"


def render_simple_function(f: SimpleFunction) -> str:
    if f.tail is not None:
        raise ValueError("stream-tailed functions have no finite rendering")
    parts = []
    for iv, p in f.pieces:
        shown = iv
        for dom_iv in f.domain.fin:
            from .measure import iv_intersect

            cut = iv_intersect(iv, dom_iv)
            if cut is not None:
                shown = cut
                break
        parts.append(f"{render_interval(shown)}: {render_poly(p)}")
    return "piecewise { " + "; ".join(parts) + " }"


def render_root_report(report) -> str:
    if not report.roots:
        return "no roots in the interval"
    lines = []
    for root, mult in report.roots:
        lines.append(f"{render(root)}  (multiplicity {mult})")
    return "\n".join(lines)


# -- commands ----------------------------------------------------------------------


def _read_source(text: str | None) -> str:
    if text is None or text == "-":
        return sys.stdin.read().strip()
    return text


def _parse_cutoff(text: str | None) -> Q:
    if text is None:
        return DEFAULT_CUTOFF
    return Q(text)


def cmd_eval(args) -> str:
    value = evaluate(parse(_read_source(args.expression)), args.cutoff)
    if isinstance(value, LCNumber):
        return render(value)
    if isinstance(value, LCPolynomial):
        return render_poly(value)
    if isinstance(value, SimpleFunction):
        return render_simple_function(value)
    if isinstance(value, MeasurableSet):
        return render_set(value)
    raise ValueError("nothing to render")


def cmd_compare(args) -> str:
    a = _as_constant(evaluate(parse(_read_source(args.left)), args.cutoff))
    b = _as_constant(evaluate(parse(args.right), args.cutoff))
    return {LT: "LT", EQ: "EQ", GT: "GT"}[compare(a, b)]


def cmd_measure(args) -> str:
    value = evaluate(parse(_read_source(args.set)), args.cutoff)
    if not isinstance(value, MeasurableSet):
        raise ValueError("measure expects a set { ... } or stream(...)")
    if value.tail is None:
        return render(measure(value))
    return render(measure(value, args.cutoff))


def _function_on_set(args) -> SimpleFunction:
    fn = evaluate(parse(_read_source(args.fn)), args.cutoff)
    target = evaluate(parse(args.set), args.cutoff) if args.set else None
    if isinstance(fn, (LCNumber, LCPolynomial)):
        if target is None:
            raise ValueError("a bare polynomial needs --set")
        if not isinstance(target, MeasurableSet):
            raise ValueError("--set must evaluate to a set")
        if target.tail is not None:
            raise ValueError("bare polynomials integrate over finite sets; "
                             "use piecewise over a stream set")
        return from_polynomial(_as_poly(fn), target)
    if not isinstance(fn, SimpleFunction):
        raise ValueError("--fn must be a piecewise function or polynomial")
    if target is None:
        return fn
    if not isinstance(target, MeasurableSet):
        raise ValueError("--set must evaluate to a set")
    return restrict(fn, target)


def cmd_integrate(args) -> str:
    f = from_simple(_function_on_set(args))
    try:
        return render(integrate(f))
    except ValueError:
        return render(integrate(f, args.cutoff))


def cmd_ftc(args) -> str:
    f = from_simple(_function_on_set(args))
    at = _as_constant(evaluate(parse(args.at), args.cutoff), "--at")
    try:
        return render(ftc_primitive(f, at))
    except ValueError as err:
        if "cutoff" not in str(err):
            raise
        return render(ftc_primitive(f, at, args.cutoff))


def cmd_roots(args) -> str:
    p = evaluate(parse(_read_source(args.poly)), args.cutoff)
    node = parse_interval(args.interval)
    interval = _eval_interval(node, args.cutoff, {})
    report = find_roots(_as_poly(p), interval, args.cutoff)
    return render_root_report(report)


def cmd_repro(args) -> str:
    builder = remark_counterexample if args.family == "remark" else eg_counterexample
    _, value = builder(args.n)
    return render(value)


def build_arg_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="levi",
        description="Exact arithmetic, measure, and integration over the "
                    "Levi-Civita field.")
    sub = top.add_subparsers(dest="command", required=True)

    def add_cutoff(p):
        p.add_argument("--cutoff", type=Q, default=DEFAULT_CUTOFF,
                       help="exponent cutoff for inexact operations "
                            "(default 10)")

    p = sub.add_parser("eval", help="evaluate an expression")
    p.add_argument("expression", nargs="?", help="expression (or stdin)")
    add_cutoff(p)
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("compare", help="compare two constants")
    p.add_argument("left", nargs="?")
    p.add_argument("right")
    add_cutoff(p)
    p.set_defaults(run=cmd_compare)

    p = sub.add_parser("measure", help="measure of a set")
    p.add_argument("set", nargs="?", help="set { ... } or stream(...)")
    add_cutoff(p)
    p.set_defaults(run=cmd_measure)

    p = sub.add_parser("integrate", help="integrate a function over a set")
    p.add_argument("--fn", required=True)
    p.add_argument("--set", default=None)
    add_cutoff(p)
    p.set_defaults(run=cmd_integrate)

    p = sub.add_parser("ftc", help="evaluate the integral primitive F(x)")
    p.add_argument("--fn", required=True)
    p.add_argument("--set", default=None)
    p.add_argument("--at", required=True)
    add_cutoff(p)
    p.set_defaults(run=cmd_ftc)

    p = sub.add_parser("roots", help="isolate roots of a polynomial")
    p.add_argument("--poly", required=True)
    p.add_argument("--interval", required=True)
    add_cutoff(p)
    p.set_defaults(run=cmd_roots)

    p = sub.add_parser("repro", help="reproduce the counterexample integrals")
    p.add_argument("family", choices=("remark", "eg"))
    p.add_argument("--n", type=int, required=True)
    add_cutoff(p)
    p.set_defaults(run=cmd_repro)

    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    try:
        print(args.run(args))
        return 0
    except ExprSyntaxError as err:
        print(f"levi: syntax error: {err}", file=sys.stderr)
        return 2
    except IndeterminateError as err:
        print(f"levi: indeterminate at this cutoff: {err}", file=sys.stderr)
        return 4
    except (LeviError, ZeroDivisionError, ValueError, TypeError) as err:
        print(f"levi: error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
