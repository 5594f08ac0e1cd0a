"""Simple functions: interval covers carrying polynomial pieces.

A simple function is a measurable domain, a finite list of closed cover
intervals with one polynomial piece each, an optional stream tail of
further (interval, piece) groups, and a static cover-excess certificate.
Exactly covered finite domains integrate exactly; stream tails integrate
by strong summation against their declared valuation bounds; a nonzero
excess certifies its own error term M * excess and refuses cutoffs it
cannot reach.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Callable, Sequence

from .core import (
    EQ,
    GT,
    INF,
    LT,
    Cutoff,
    LCNumber,
    ONE,
    ZERO,
    add,
    compare,
    lc,
    mul,
    neg,
    sub,
    SeriesTermStream,
    sum_strong_series,
    truncate,
    valuation_lower_bound,
)
from .errors import (
    ExcessTooLarge,
    IndeterminateAtCutoff,
    NotCovering,
    OverlappingInteriors,
    UnsupportedStreamPair,
)
from .measure import (
    EMPTY_SET,
    GroupStream,
    Interval,
    MeasurableSet,
    canonical,
    closed,
    contains,
    finite_set,
    is_subset,
    iv_intersect,
    length,
    measure,
    midpoint,
)
from .poly import (
    LCPolynomial,
    constant,
    eval_poly,
    integral_over_interval,
    poly,
    poly_add,
    poly_mul,
    poly_scale,
    poly_shift,
    sign_partition,
    sup_bound,
)

Piece = tuple[Interval, LCPolynomial]


@dataclass(frozen=True)
class SimpleTail:
    """Stream part of a cover: group n holds finitely many pieces, every
    piece interval has lambda(length) >= length_bound(n), and every piece
    satisfies lambda(integral of |poly|) >= integral_bound(n); both bounds
    nondecreasing and divergent.  Generators must be pure."""

    groups: Callable[[int], tuple[Piece, ...]]
    length_bound: Callable[[int], Q]
    integral_bound: Callable[[int], Q]


@dataclass(frozen=True)
class SimpleFunction:
    """A piecewise-polynomial function on a measurable set.

    The cover intervals are closed with pairwise non-overlapping
    interiors; `excess` is a certified upper bound on (total cover length
    minus the domain's measure)."""

    domain: MeasurableSet
    pieces: tuple[Piece, ...]
    tail: SimpleTail | None = None
    excess: LCNumber = ZERO


def make_simple(domain: MeasurableSet, pieces: Sequence[Piece],
                tail: SimpleTail | None = None,
                excess: LCNumber = ZERO) -> SimpleFunction:
    """Validate and build; raises OverlappingInteriors / NotCovering."""
    pieces = tuple(pieces)
    for idx, (i, _) in enumerate(pieces):
        for j, _ in pieces[idx + 1:]:
            overlap = iv_intersect(i, j)
            if overlap is not None and compare(overlap.a, overlap.b) == LT:
                raise OverlappingInteriors(f"{i} and {j} share interior points")
    if domain.fin and not is_subset(MeasurableSet(domain.fin),
                                    [i for i, _ in pieces]):
        raise NotCovering("cover misses part of the domain")
    if domain.tail is not None and tail is None:
        raise NotCovering("the domain has a stream tail but the cover does not")
    return SimpleFunction(domain, pieces, tail, excess)


def _closure(i: Interval) -> Interval:
    return closed(i.a, i.b)


def _finite_sup_bound(f: SimpleFunction) -> LCNumber:
    best = ZERO
    for i, p in f.pieces:
        b = sup_bound(p, i)
        if compare(b, best) == GT:
            best = b
    return best


def _lam_lb(x: LCNumber) -> Q:
    """Finite valuation lower bound for bound arithmetic; 0 for zero values
    (any bound is sound for an identically-zero contribution)."""
    lb = valuation_lower_bound(x)
    return Q(0) if lb == INF else Q(lb)


def from_polynomial(p: LCPolynomial, domain: MeasurableSet,
                    tail_region: Interval | None = None) -> SimpleFunction:
    """The restriction of a polynomial to a measurable set.

    For stream domains a bounded `tail_region` containing every tail
    interval must be supplied so the tail's integral bound is derivable.
    """
    pieces = tuple((_closure(i), p) for i in domain.fin)
    tail = None
    if domain.tail is not None:
        if tail_region is None:
            raise ValueError("a tail_region is required for stream domains")
        bound_m = _lam_lb(sup_bound(p, tail_region))
        dom_tail = domain.tail

        def groups(n: int) -> tuple[Piece, ...]:
            return tuple((_closure(i), p) for i in dom_tail.groups(n))

        tail = SimpleTail(groups, dom_tail.bound,
                          lambda n: dom_tail.bound(n) + bound_m)
    return make_simple(domain, pieces, tail)


def constant_on(domain: MeasurableSet, value: LCNumber | int | Q) -> SimpleFunction:
    v = value if isinstance(value, LCNumber) else lc(value)
    pieces = tuple((_closure(i), constant(v)) for i in domain.fin)
    tail = None
    if domain.tail is not None:
        dom_tail = domain.tail
        bound_v = _lam_lb(v)

        def groups(n: int) -> tuple[Piece, ...]:
            return tuple((_closure(i), constant(v)) for i in dom_tail.groups(n))

        tail = SimpleTail(groups, dom_tail.bound,
                          lambda n: dom_tail.bound(n) + bound_v)
    return make_simple(domain, pieces, tail)


def eval_simple(f: SimpleFunction, x: LCNumber, max_tail_groups: int = 64) -> LCNumber:
    """Value at x, searching the finite cover first, then tail groups."""
    for i, p in f.pieces:
        if contains(i, x):
            return eval_poly(p, x)
    if f.tail is not None:
        for n in range(1, max_tail_groups + 1):
            for i, p in f.tail.groups(n):
                if contains(i, x):
                    return eval_poly(p, x)
    raise ValueError(f"{x} is not covered by this simple function")


# -- cover refinement and pointwise algebra -----------------------------------


def _refine(f: SimpleFunction, g: SimpleFunction) -> list[tuple[Interval, LCPolynomial, LCPolynomial]]:
    cells = []
    for i, p in f.pieces:
        for j, q in g.pieces:
            cell = iv_intersect(i, j)
            if cell is not None:
                cells.append((cell, p, q))
    return cells


def _combined_tail_cells(f: SimpleFunction, g: SimpleFunction,
                         n: int) -> list[tuple[Interval, LCPolynomial, LCPolynomial]]:
    """Aligned tail refinement: group n against group n, plus each tail
    against the other's finite cover."""
    cells = []
    ft, gt = f.tail, g.tail
    if ft is not None and gt is not None:
        for i, p in ft.groups(n):
            for j, q in gt.groups(n):
                cell = iv_intersect(i, j)
                if cell is not None:
                    cells.append((cell, p, q))
    elif ft is not None:
        for i, p in ft.groups(n):
            for j, q in g.pieces:
                cell = iv_intersect(i, j)
                if cell is not None:
                    cells.append((cell, p, q))
    elif gt is not None:
        for i, p in f.pieces:
            for j, q in gt.groups(n):
                cell = iv_intersect(i, j)
                if cell is not None:
                    cells.append((cell, p, q))
    return cells


def _tail_bounds_for_sum(f: SimpleFunction, g: SimpleFunction,
                         ) -> tuple[Callable[[int], Q], Callable[[int], Q]] | None:
    """(length_bound, integral_bound) for a sum-like combined tail, using
    |p + q| <= |p| + |q| cellwise; None when neither side has a tail."""
    ft, gt = f.tail, g.tail
    if ft is None and gt is None:
        return None
    if ft is not None and gt is not None:
        length_bound = lambda n: max(ft.length_bound(n), gt.length_bound(n))
        int_f, int_g = ft.integral_bound, gt.integral_bound
    elif ft is not None:
        length_bound = ft.length_bound
        m_g = _lam_lb(_finite_sup_bound(g))
        int_f = ft.integral_bound
        int_g = lambda n: ft.length_bound(n) + m_g
    else:
        length_bound = gt.length_bound
        m_f = _lam_lb(_finite_sup_bound(f))
        int_f = lambda n: gt.length_bound(n) + m_f
        int_g = gt.integral_bound
    return length_bound, lambda n: min(int_f(n), int_g(n))


def add_simple(f: SimpleFunction, g: SimpleFunction) -> SimpleFunction:
    """f + g on their common domain, on the refined cover."""
    pieces = tuple((cell, poly_add(p, q)) for cell, p, q in _refine(f, g))
    tail = None
    bounds = _tail_bounds_for_sum(f, g)
    if bounds is not None:
        length_bound, integral_bound = bounds

        def groups(n: int) -> tuple[Piece, ...]:
            return tuple((cell, poly_add(p, q))
                         for cell, p, q in _combined_tail_cells(f, g, n))

        tail = SimpleTail(groups, length_bound, integral_bound)
    return SimpleFunction(f.domain, pieces, tail,
                          add(f.excess, g.excess))


def scale_simple(f: SimpleFunction, alpha: LCNumber) -> SimpleFunction:
    if alpha == ZERO:
        return constant_on(f.domain, 0)
    pieces = tuple((i, poly_scale(p, alpha)) for i, p in f.pieces)
    tail = None
    if f.tail is not None:
        ft = f.tail
        lam_a = _lam_lb(alpha)

        def groups(n: int) -> tuple[Piece, ...]:
            return tuple((i, poly_scale(p, alpha)) for i, p in ft.groups(n))

        tail = SimpleTail(groups, ft.length_bound,
                          lambda n: ft.integral_bound(n) + lam_a)
    return SimpleFunction(f.domain, pieces, tail, f.excess)


def shift_simple(f: SimpleFunction, c: LCNumber) -> SimpleFunction:
    """f + (constant c)."""
    if c == ZERO:
        return f
    pieces = tuple((i, poly_shift(p, c)) for i, p in f.pieces)
    tail = None
    if f.tail is not None:
        ft = f.tail
        lam_c = _lam_lb(c)

        def groups(n: int) -> tuple[Piece, ...]:
            return tuple((i, poly_shift(p, c)) for i, p in ft.groups(n))

        tail = SimpleTail(groups, ft.length_bound,
                          lambda n: min(ft.integral_bound(n),
                                        ft.length_bound(n) + lam_c))
    return SimpleFunction(f.domain, pieces, tail, f.excess)


def negate_simple(f: SimpleFunction) -> SimpleFunction:
    return scale_simple(f, lc(-1))


def sub_simple(f: SimpleFunction, g: SimpleFunction) -> SimpleFunction:
    return add_simple(f, negate_simple(g))


def mul_simple(f: SimpleFunction, g: SimpleFunction) -> SimpleFunction:
    """f * g on the refined cover; at most one operand may carry a tail."""
    if f.tail is not None and g.tail is not None:
        raise UnsupportedStreamPair("product of two stream-tailed covers")
    pieces = tuple((cell, poly_mul(p, q)) for cell, p, q in _refine(f, g))
    tail = None
    if f.tail is not None or g.tail is not None:
        tailed, other = (f, g) if f.tail is not None else (g, f)
        ft = tailed.tail
        m_other = _lam_lb(_finite_sup_bound(other))

        def groups(n: int) -> tuple[Piece, ...]:
            return tuple((cell, poly_mul(p, q))
                         for cell, p, q in _combined_tail_cells(f, g, n))

        tail = SimpleTail(groups, ft.length_bound,
                          lambda n: ft.integral_bound(n) + m_other)
    return SimpleFunction(f.domain, pieces, tail,
                          add(f.excess, g.excess))


def abs_simple(f: SimpleFunction) -> SimpleFunction:
    """|f|: every piece is split at its sign changes; total cover length
    and the excess certificate are unchanged."""

    def split(piece: Piece) -> tuple[Piece, ...]:
        i, p = piece
        return tuple((cell, p if s != LT else poly_scale(p, lc(-1)))
                     for cell, s in sign_partition(p, i))

    pieces = tuple(part for piece in f.pieces for part in split(piece))
    tail = None
    if f.tail is not None:
        ft = f.tail

        def groups(n: int) -> tuple[Piece, ...]:
            return tuple(part for piece in ft.groups(n) for part in split(piece))

        tail = SimpleTail(groups, ft.length_bound, ft.integral_bound)
    return SimpleFunction(f.domain, pieces, tail, f.excess)


def min_max_simple(f: SimpleFunction, g: SimpleFunction) -> tuple[SimpleFunction, SimpleFunction]:
    """(min(f, g), max(f, g)) via sign splits of f - g on the refined cover."""

    def split(cells) -> tuple[tuple[Piece, ...], tuple[Piece, ...]]:
        lows, highs = [], []
        for cell, p, q in cells:
            for part, s in sign_partition(p - q, cell):
                lows.append((part, p if s != GT else q))
                highs.append((part, q if s != GT else p))
        return tuple(lows), tuple(highs)

    lo_pieces, hi_pieces = split(_refine(f, g))
    lo_tail = hi_tail = None
    bounds = _tail_bounds_for_sum(f, g)
    if bounds is not None:
        length_bound, integral_bound = bounds

        def lo_groups(n: int) -> tuple[Piece, ...]:
            return split(_combined_tail_cells(f, g, n))[0]

        def hi_groups(n: int) -> tuple[Piece, ...]:
            return split(_combined_tail_cells(f, g, n))[1]

        lo_tail = SimpleTail(lo_groups, length_bound, integral_bound)
        hi_tail = SimpleTail(hi_groups, length_bound, integral_bound)
    excess = add(f.excess, g.excess)
    dom = f.domain
    return (SimpleFunction(dom, lo_pieces, lo_tail, excess),
            SimpleFunction(dom, hi_pieces, hi_tail, excess))


# -- restriction and preimage -----------------------------------------------------


def restrict(f: SimpleFunction, B: MeasurableSet) -> SimpleFunction:
    """f restricted to B (contract: B is a subset of the domain).

    The new cover is the pairwise intersection of the old cover with B's
    intervals; the excess certificate remains sound because restriction
    never increases cover excess."""
    pieces = tuple((cell, p) for i, p in f.pieces for b in B.fin
                   if (cell := iv_intersect(i, b)) is not None)
    tail = None
    if f.tail is not None and B.tail is not None:
        ft, bt = f.tail, B.tail

        def groups(n: int) -> tuple[Piece, ...]:
            return tuple((cell, p) for i, p in ft.groups(n)
                         for b in bt.groups(n)
                         if (cell := iv_intersect(i, b)) is not None)

        tail = SimpleTail(groups,
                          lambda n: max(ft.length_bound(n), bt.bound(n)),
                          ft.integral_bound)
    elif f.tail is not None:
        ft = f.tail
        b_fin = B.fin

        def groups(n: int) -> tuple[Piece, ...]:
            return tuple((cell, p) for i, p in ft.groups(n) for b in b_fin
                         if (cell := iv_intersect(i, b)) is not None)

        tail = SimpleTail(groups, ft.length_bound, ft.integral_bound)
    elif B.tail is not None:
        bt = B.tail
        m_f = _lam_lb(_finite_sup_bound(f))
        fin_pieces = f.pieces

        def groups(n: int) -> tuple[Piece, ...]:
            return tuple((cell, p) for b in bt.groups(n) for i, p in fin_pieces
                         if (cell := iv_intersect(i, b)) is not None)

        tail = SimpleTail(groups, bt.bound, lambda n: bt.bound(n) + m_f)
    return SimpleFunction(B, pieces, tail, f.excess)


def preimage(f: SimpleFunction, target: Interval,
             root_cutoff: Cutoff = 16) -> MeasurableSet:
    """{x in the domain : f(x) in target}, as a measurable set.

    Solves the boundary equations piece = target endpoints on every cover
    piece; needs those boundary roots exact, like sign_partition."""

    def piece_preimage(i: Interval, p: LCPolynomial) -> list[Interval]:
        cuts: list[LCNumber] = []
        for bound_value in (target.a, target.b):
            if bound_value is None:
                continue
            shifted = poly_shift(p, neg(bound_value))
            if shifted.is_zero:
                continue
            for root, _ in _exact_roots(shifted, i, root_cutoff):
                if compare(root, i.a) == GT and compare(root, i.b) == LT:
                    cuts.append(root)
        cuts = _sorted_unique(cuts)
        points = [i.a] + cuts + [i.b]
        out: list[Interval] = []
        for k, (u, v) in enumerate(zip(points, points[1:])):
            if compare(u, v) == EQ:
                continue
            cell = Interval(u, v, True, True)
            inside = contains(target, eval_poly(p, midpoint(cell)))
            u_in = contains(target, eval_poly(p, u))
            v_in = contains(target, eval_poly(p, v))
            if inside:
                out.append(Interval(u, v, u_in, v_in))
            else:
                if u_in:
                    out.append(closed(u, u))
                if v_in:
                    out.append(closed(v, v))
        if compare(i.a, i.b) == EQ and contains(target, eval_poly(p, i.a)):
            out.append(closed(i.a, i.a))
        return out

    fin_sol = [cell for i, p in f.pieces for cell in piece_preimage(i, p)]
    fin = tuple(s for sol in canonical(fin_sol) for b in f.domain.fin
                if (s := iv_intersect(sol, b)) is not None)
    tail = None
    if f.tail is not None:
        ft = f.tail
        dom_tail = f.domain.tail

        def groups(n: int) -> tuple[Interval, ...]:
            sols = [cell for i, p in ft.groups(n) for cell in piece_preimage(i, p)]
            dom_ivs = dom_tail.groups(n) if dom_tail is not None else None
            if dom_ivs is None:
                return tuple(canonical(sols))
            return tuple(s for sol in canonical(sols) for b in dom_ivs
                         if (s := iv_intersect(sol, b)) is not None)

        tail = GroupStream(groups, ft.length_bound)
    return MeasurableSet(canonical(fin), tail)


def _exact_roots(p: LCPolynomial, i: Interval, root_cutoff: Cutoff):
    from .poly import find_roots

    report = find_roots(p, i, root_cutoff)
    for root, mult in report.roots:
        if not root.is_exact:
            raise IndeterminateAtCutoff(
                "a preimage boundary point has an infinite expansion")
        yield root, mult


def _sorted_unique(values: list[LCNumber]) -> list[LCNumber]:
    out: list[LCNumber] = []
    for v in values:
        if not any(compare(v, w) == EQ for w in out):
            out.append(v)
    from functools import cmp_to_key

    out.sort(key=cmp_to_key(compare))
    return out


# -- integration --------------------------------------------------------------------


def integrate_simple(f: SimpleFunction, out_cutoff: Cutoff | None = None) -> LCNumber:
    """The integral over the domain: sum of piece integrals over the cover.

    Exact (cutoff +inf) for exactly covered finite domains; otherwise the
    output cutoff drives the tail summation, and a nonzero excess must
    certify M * excess below d^out_cutoff or ExcessTooLarge is raised.
    """
    total = ZERO
    for i, p in f.pieces:
        total = add(total, integral_over_interval(p, i))
    needs_cutoff = f.tail is not None or f.excess != ZERO
    if out_cutoff is None:
        if needs_cutoff:
            raise ValueError("an output cutoff is required: the cover has a "
                             "stream tail or a nonzero excess")
        return total
    if not needs_cutoff:
        # exactly covered finite structure: the sum is already the exact
        # integral, which is strictly better than the requested cutoff
        return total
    if f.tail is not None:
        ft = f.tail

        def group_integral(n: int) -> LCNumber:
            acc = ZERO
            for i, p in ft.groups(n):
                acc = add(acc, integral_over_interval(p, i))
            return acc

        total = add(total, sum_strong_series(
            SeriesTermStream(group_integral, ft.integral_bound), out_cutoff))
    if f.excess != ZERO:
        bound = _finite_sup_bound(f)
        err = mul(bound, f.excess)
        if err != ZERO and valuation_lower_bound(err) < out_cutoff:
            raise ExcessTooLarge(
                f"cover excess only certifies exponents below "
                f"{valuation_lower_bound(err)}, cutoff {out_cutoff} requested")
        total = truncate(total, out_cutoff)
    return truncate(total, out_cutoff)


def lint_endpoint_agreement(f: SimpleFunction) -> list[tuple[LCNumber, LCNumber, LCNumber]]:
    """Shared cover endpoints where adjacent pieces disagree; such points
    are null sets and do not affect integrals, but are worth surfacing."""
    issues = []
    for idx, (i, p) in enumerate(f.pieces):
        for j, q in f.pieces[idx + 1:]:
            shared = iv_intersect(i, j)
            if shared is not None and compare(shared.a, shared.b) == EQ:
                x = shared.a
                left, right = eval_poly(p, x), eval_poly(q, x)
                if left != right:
                    issues.append((x, left, right))
    return issues
