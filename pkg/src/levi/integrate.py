"""Measurable functions as envelope schemes, and their integral.

A measurable function stores, for every level k, a partition of its
domain together with lower/upper simple-function envelopes whose total
integral gap is below d^k.  The integral at a cutoff reads one
sufficiently deep level and sums the upper envelopes; the sandwich
certifies every digit below the cutoff.  Scheme algebra (linear
combinations, absolute value, min/max, bounded products, restriction)
transforms levels into levels, spending the gap budget explicitly.

Stream-tailed partitions are grouped; operands of a binary combination
must index their tail groups over the same domain regions (all library
constructors do), which the combiner re-checks per accessed group.
"""

from __future__ import annotations

import math
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
    d_power,
    lc,
    mul,
    neg,
    sub,
    SeriesTermStream,
    sum_strong_series,
    term,
    truncate,
    valuation_lower_bound,
)
from .errors import (
    RateNotDecaying,
    SchemeExhausted,
    UnboundedFactor,
    UnsupportedStreamPair,
)
from .measure import (
    EMPTY_SET,
    Interval,
    MeasurableSet,
    canonical,
    closed,
    difference,
    finite_set,
    intersect,
    measure,
    union,
)
from .poly import constant
from .simple import (
    SimpleFunction,
    _finite_sup_bound,
    _lam_lb,
    add_simple,
    constant_on,
    integrate_simple,
    min_max_simple,
    negate_simple,
    preimage,
    restrict,
    scale_simple,
    shift_simple,
    sub_simple,
)

Entry = tuple[MeasurableSet, SimpleFunction, SimpleFunction]
Combiner = Callable[[MeasurableSet, SimpleFunction, SimpleFunction,
                     SimpleFunction, SimpleFunction],
                    tuple[SimpleFunction, SimpleFunction]]


@dataclass(frozen=True)
class PartitionTail:
    """Grouped stream blocks of a partition; every block of group n has
    lambda(m(block)) >= measure_bound(n), nondecreasing and divergent."""

    blocks: Callable[[int], tuple[MeasurableSet, ...]]
    measure_bound: Callable[[int], Q]


@dataclass(frozen=True)
class Partition:
    """Mutually disjoint measurable blocks with measures tending to zero
    along the stream tail."""

    blocks: tuple[MeasurableSet, ...]
    tail: PartitionTail | None = None


@dataclass(frozen=True)
class EnvelopeTail:
    """Envelope entries on the stream blocks: group n yields (block,
    lower, upper) triples; integral_bound(n) bounds the valuation of
    every integral of |lower| and |upper| in group n (the
    strong-convergence certificate), measure_bound(n) that of the block
    measures.  Both nondecreasing and divergent."""

    entries: Callable[[int], tuple[Entry, ...]]
    measure_bound: Callable[[int], Q]
    integral_bound: Callable[[int], Q]


@dataclass(frozen=True)
class EnvelopePair:
    """One scheme level: blockwise lower <= f <= upper, certified gap."""

    entries: tuple[Entry, ...]
    tail: EnvelopeTail | None = None
    exact: bool = False

    @property
    def partition(self) -> Partition:
        tail = None
        if self.tail is not None:
            t = self.tail
            tail = PartitionTail(
                lambda n: tuple(block for block, _, _ in t.entries(n)),
                t.measure_bound)
        return Partition(tuple(b for b, _, _ in self.entries), tail)


@dataclass(frozen=True)
class MeasurableFunction:
    """An envelope scheme: scheme(k) has integral gap below d^k."""

    domain: MeasurableSet
    scheme: Callable[[int], EnvelopePair]


# -- constructors -------------------------------------------------------------


def from_simple(f: SimpleFunction) -> MeasurableFunction:
    """A simple function is measurable with the trivial scheme i = s = f."""
    env = EnvelopePair(((f.domain, f, f),), None, exact=True)
    return MeasurableFunction(f.domain, lambda k: env)


def zero_function(domain: MeasurableSet) -> MeasurableFunction:
    return from_simple(constant_on(domain, 0))


def step_function(domain: MeasurableSet,
                  assignments: Sequence[tuple[MeasurableSet, LCNumber]],
                  fill: LCNumber | int | Q = 0) -> MeasurableFunction:
    """Constant value on each assigned block, `fill` on the rest of the
    domain.  Assigned blocks must be disjoint subsets of the domain."""
    assigned = EMPTY_SET
    entries: list[Entry] = []
    for block, value in assignments:
        if block.fin == () and block.tail is None:
            continue
        piece = constant_on(block, value)
        entries.append((block, piece, piece))
        assigned = union(assigned, block)
    filler = difference(domain, assigned)
    if filler.fin or filler.tail is not None:
        piece = constant_on(filler, fill)
        entries.append((filler, piece, piece))
    env = EnvelopePair(tuple(entries), None, exact=True)
    return MeasurableFunction(domain, lambda k: env)


def stream_step_function(domain: MeasurableSet,
                         values: Callable[[int], LCNumber],
                         integral_bound: Callable[[int], Q]) -> MeasurableFunction:
    """Constant values(n) on the n-th stream group of the domain.

    integral_bound(n) must bound the valuation of |values(n)| times the
    group length; it is re-verified against stored terms when summing.
    """
    if domain.tail is None:
        raise ValueError("stream_step_function needs a stream domain")
    if domain.fin:
        raise ValueError("assign the finite part separately via step_function")
    dom_tail = domain.tail

    def entries(n: int) -> tuple[Entry, ...]:
        block = MeasurableSet(dom_tail.groups(n))
        piece = constant_on(block, values(n))
        return ((block, piece, piece),)

    tail = EnvelopeTail(entries, dom_tail.bound, integral_bound)
    env = EnvelopePair((), tail, exact=True)
    return MeasurableFunction(domain, lambda k: env)


def measurable_from_levels(domain: MeasurableSet,
                           levels: Callable[[int], EnvelopePair],
                           max_probe: int = 16) -> MeasurableFunction:
    """Wrap caller-supplied envelope levels, re-certifying each request:
    scheme(k) returns the first provided level whose computed gap really
    is below d^k (the constructive content of envelope measurability);
    SchemeExhausted when no probed level qualifies."""

    def scheme(k: int) -> EnvelopePair:
        for j in range(k, k + max_probe):
            env = levels(j)
            gap = _level_gap(env, Q(k) + 2)
            if not gap.terms or compare(gap, d_power(k)) == LT:
                return env
        raise SchemeExhausted(f"no provided level certifies gap below d^{k}")

    return MeasurableFunction(domain, scheme)


# -- the integral ------------------------------------------------------------


def _env_needs_cutoff(env: EnvelopePair) -> bool:
    if env.tail is not None:
        return True
    return any(up.tail is not None or up.excess != ZERO or
               lo.tail is not None or lo.excess != ZERO
               for _, lo, up in env.entries)


def _sum_envelope(env: EnvelopePair, side: int, out_cutoff: Cutoff | None) -> LCNumber:
    total = ZERO
    for _, lower, upper in env.entries:
        f = upper if side == GT else lower
        total = add(total, integrate_simple(f, out_cutoff))
    if env.tail is not None:
        tail = env.tail

        def group_sum(n: int) -> LCNumber:
            acc = ZERO
            for _, lower, upper in tail.entries(n):
                f = upper if side == GT else lower
                acc = add(acc, integrate_simple(f, out_cutoff))
            return acc

        total = add(total, sum_strong_series(
            SeriesTermStream(group_sum, tail.integral_bound), out_cutoff))
    return total


def level_for_cutoff(out_cutoff: Cutoff) -> int:
    return max(1, math.floor(out_cutoff) + 1)


def integrate(f: MeasurableFunction, out_cutoff: Cutoff | None = None) -> LCNumber:
    """The integral of f over its domain.

    With a cutoff: reads the scheme at a level whose gap bound d^k clears
    the cutoff and sums the upper envelopes; every digit below the cutoff
    is certified by the sandwich.  Without a cutoff: only gap-free
    schemes over exactly covered finite structures integrate, exactly.
    """
    if out_cutoff is None:
        env = f.scheme(1)
        if not env.exact:
            raise ValueError("an output cutoff is required: the scheme "
                             "carries a nonzero envelope gap")
        if _env_needs_cutoff(env):
            raise ValueError("an output cutoff is required: the scheme "
                             "integrates over a stream tail or cover excess")
        return _sum_envelope(env, GT, None)
    env = f.scheme(level_for_cutoff(out_cutoff))
    total = _sum_envelope(env, GT, out_cutoff)
    if env.exact and total.is_exact:
        return total
    return truncate(total, out_cutoff)


def level_sums(f: MeasurableFunction, k: int,
               out_cutoff: Cutoff) -> tuple[LCNumber, LCNumber]:
    """(lower sum, upper sum) at level k, both truncated at the cutoff."""
    env = f.scheme(k)
    return (truncate(_sum_envelope(env, LT, out_cutoff), out_cutoff),
            truncate(_sum_envelope(env, GT, out_cutoff), out_cutoff))


def _level_gap(env: EnvelopePair, out_cutoff: Cutoff) -> LCNumber:
    total = ZERO
    for _, lower, upper in env.entries:
        total = add(total, integrate_simple(sub_simple(upper, lower), out_cutoff))
    if env.tail is not None:
        tail = env.tail

        def group_gap(n: int) -> LCNumber:
            acc = ZERO
            for _, lower, upper in tail.entries(n):
                acc = add(acc, integrate_simple(sub_simple(upper, lower),
                                                out_cutoff))
            return acc

        total = add(total, sum_strong_series(
            SeriesTermStream(group_gap, tail.integral_bound), out_cutoff))
    return truncate(total, out_cutoff)


def level_gap(f: MeasurableFunction, k: int, slack: int = 4) -> LCNumber:
    """The realized envelope gap at level k, computed below d^(k+slack)."""
    return _level_gap(f.scheme(k), Q(k + slack))


def verify_level(f: MeasurableFunction, k: int) -> bool:
    """Check the defining certificate: 0 <= gap < d^k at level k."""
    gap = level_gap(f, k)
    if not gap.terms:
        return True
    if compare(gap, ZERO) == LT:
        return False
    return compare(gap, d_power(k)) == LT


# -- restriction / additivity ---------------------------------------------------


def _restrict_entry(entry: Entry, B: MeasurableSet) -> Entry:
    block, lower, upper = entry
    blk = block if block == B else intersect(block, B)
    return (blk, restrict(lower, blk), restrict(upper, blk))


def restrict_m(f: MeasurableFunction, B: MeasurableSet) -> MeasurableFunction:
    """f restricted to a measurable subset of its domain; gaps shrink."""

    def scheme(k: int) -> EnvelopePair:
        env = f.scheme(k)
        entries = tuple(_restrict_entry(e, B) for e in env.entries)
        tail = None
        if env.tail is not None:
            t = env.tail

            def tail_entries(n: int) -> tuple[Entry, ...]:
                return tuple(_restrict_entry(e, B) for e in t.entries(n))

            tail = EnvelopeTail(tail_entries, t.measure_bound, t.integral_bound)
        return EnvelopePair(entries, tail, env.exact)

    return MeasurableFunction(B, scheme)


def integrate_over(f: MeasurableFunction, B: MeasurableSet,
                   out_cutoff: Cutoff | None = None) -> LCNumber:
    """Integral of f over B (contract: B inside the domain)."""
    return integrate(restrict_m(f, B), out_cutoff)


def ftc_primitive(f: MeasurableFunction, x: LCNumber,
                  out_cutoff: Cutoff | None = None) -> LCNumber:
    """F(x) = integral of f from the domain's left end to x."""
    if not f.domain.fin:
        raise ValueError("the fundamental-theorem primitive needs an "
                         "interval-like finite domain")
    a = f.domain.fin[0].a
    if compare(x, a) == LT:
        raise ValueError("evaluation point lies left of the domain")
    return integrate_over(f, finite_set(closed(a, x)), out_cutoff)


# -- scheme combination ----------------------------------------------------------


def _simple_group_bound(sf: SimpleFunction, n: int, group_measure_bound: Q) -> Q:
    """Valuation bound for the integral of |sf| over any set inside group
    n of the partner's tail, assuming aligned group indexing: the finite
    cover contributes sup * measure, an own tail contributes its group-n
    integral bound."""
    routes = []
    if sf.pieces:
        routes.append(group_measure_bound + _lam_lb(_finite_sup_bound(sf)))
    if sf.tail is not None:
        routes.append(sf.tail.integral_bound(n))
    if not routes:
        return group_measure_bound
    return min(routes)


def _combine_pair(f_entry: Entry, g_entry: Entry, make: Combiner) -> Entry | None:
    bf, lf, uf = f_entry
    bg, lg, ug = g_entry
    blk = bf if bf == bg else intersect(bf, bg)
    if not blk.fin and blk.tail is None:
        return None
    if blk != bf:
        lf, uf = restrict(lf, blk), restrict(uf, blk)
    if blk != bg:
        lg, ug = restrict(lg, blk), restrict(ug, blk)
    lower, upper = make(blk, lf, uf, lg, ug)
    return (blk, lower, upper)


def _check_group_alignment(tf: EnvelopeTail, tg: EnvelopeTail, n: int) -> None:
    f_ivs = canonical([i for b, _, _ in tf.entries(n) for i in b.fin])
    g_ivs = canonical([i for b, _, _ in tg.entries(n) for i in b.fin])
    if f_ivs != g_ivs:
        raise UnsupportedStreamPair(
            "stream-tailed schemes can only combine groupwise over the "
            f"same blocks; group {n} differs")


def _combine_schemes(envf: EnvelopePair, envg: EnvelopePair, make: Combiner,
                     adj_f: Q, adj_g: Q, exact: bool) -> EnvelopePair:
    """Common-refinement combination of two envelope levels.

    adj_f / adj_g are valuation shifts of the respective sides inside the
    combined envelopes (e.g. lambda(alpha) for alpha*f + g), entering the
    combined strong-convergence bounds.
    """
    entries = tuple(e for fe in envf.entries for ge in envg.entries
                    if (e := _combine_pair(fe, ge, make)) is not None)
    tf, tg = envf.tail, envg.tail
    generators = []
    if tf is not None and tg is not None:
        def both_groups(n: int) -> tuple[Entry, ...]:
            _check_group_alignment(tf, tg, n)
            return tuple(e for fe in tf.entries(n) for ge in tg.entries(n)
                         if (e := _combine_pair(fe, ge, make)) is not None)

        generators.append((
            both_groups,
            lambda n: max(tf.measure_bound(n), tg.measure_bound(n)),
            lambda n: min(adj_f + tf.integral_bound(n),
                          adj_g + tg.integral_bound(n)),
        ))
    elif tf is not None:
        fixed = envg.entries

        def f_groups(n: int) -> tuple[Entry, ...]:
            return tuple(e for fe in tf.entries(n) for ge in fixed
                         if (e := _combine_pair(fe, ge, make)) is not None)

        def f_bound(n: int) -> Q:
            partner = min((_simple_group_bound(g_lo, n, tf.measure_bound(n))
                           for _, g_lo, g_up in fixed
                           for g_lo in (g_lo, g_up)), default=tf.measure_bound(n))
            return min(adj_f + tf.integral_bound(n), adj_g + partner)

        generators.append((f_groups, tf.measure_bound, f_bound))
    elif tg is not None:
        fixed = envf.entries

        def g_groups(n: int) -> tuple[Entry, ...]:
            return tuple(e for ge in tg.entries(n) for fe in fixed
                         if (e := _combine_pair(fe, ge, make)) is not None)

        def g_bound(n: int) -> Q:
            partner = min((_simple_group_bound(s, n, tg.measure_bound(n))
                           for _, f_lo, f_up in fixed
                           for s in (f_lo, f_up)), default=tg.measure_bound(n))
            return min(adj_g + tg.integral_bound(n), adj_f + partner)

        generators.append((g_groups, tg.measure_bound, g_bound))
    tail = None
    if generators:
        gen_entries, gen_mb, gen_ib = generators[0]
        tail = EnvelopeTail(gen_entries, gen_mb, gen_ib)
    return EnvelopePair(entries, tail, exact)


def _is_exact_value(x: LCNumber) -> Q:
    lb = valuation_lower_bound(x)
    if lb == INF:
        return Q(0)
    return Q(lb)


def linear_combine(alpha: LCNumber, f: MeasurableFunction,
                   g: MeasurableFunction) -> MeasurableFunction:
    """alpha * f + g on the common domain."""
    if alpha == ZERO:
        return g
    lam_a = _lam_lb(alpha)
    shift = max(0, math.ceil(-lam_a))
    positive = compare(alpha, ZERO) == GT

    def make(blk, lf, uf, lg, ug):
        if positive:
            lower = add_simple(scale_simple(lf, alpha), lg)
            upper = add_simple(scale_simple(uf, alpha), ug)
        else:
            lower = add_simple(scale_simple(uf, alpha), lg)
            upper = add_simple(scale_simple(lf, alpha), ug)
        return lower, upper

    def scheme(k: int) -> EnvelopePair:
        envf = f.scheme(k + 1 + shift)
        envg = g.scheme(k + 1)
        return _combine_schemes(envf, envg, make, lam_a, Q(0),
                                envf.exact and envg.exact)

    return MeasurableFunction(f.domain, scheme)


def add_m(f: MeasurableFunction, g: MeasurableFunction) -> MeasurableFunction:
    return linear_combine(ONE, f, g)


def sub_m(f: MeasurableFunction, g: MeasurableFunction) -> MeasurableFunction:
    return linear_combine(lc(-1), g, f)


def scale_m(alpha: LCNumber, f: MeasurableFunction) -> MeasurableFunction:
    return linear_combine(alpha, f, zero_function(f.domain))


def abs_m(f: MeasurableFunction) -> MeasurableFunction:
    """|f|: envelopes max(i, -s, 0) and max(s, -i); the gap never grows."""

    def transform(entry: Entry) -> Entry:
        blk, lower, upper = entry
        zero = constant_on(blk, 0)
        _, lo1 = min_max_simple(lower, negate_simple(upper))
        _, new_lower = min_max_simple(lo1, zero)
        _, new_upper = min_max_simple(upper, negate_simple(lower))
        return (blk, new_lower, new_upper)

    def scheme(k: int) -> EnvelopePair:
        env = f.scheme(k)
        entries = tuple(transform(e) for e in env.entries)
        tail = None
        if env.tail is not None:
            t = env.tail

            def tail_entries(n: int) -> tuple[Entry, ...]:
                return tuple(transform(e) for e in t.entries(n))

            tail = EnvelopeTail(tail_entries, t.measure_bound, t.integral_bound)
        return EnvelopePair(entries, tail, env.exact)

    return MeasurableFunction(f.domain, scheme)


def min_m(f: MeasurableFunction, g: MeasurableFunction) -> MeasurableFunction:
    """min(f, g) = (f + g - |f - g|) / 2."""
    total = add_m(f, g)
    gap = abs_m(sub_m(f, g))
    half = lc(Q(1, 2))
    return linear_combine(neg(half), gap, scale_m(half, total))


def max_m(f: MeasurableFunction, g: MeasurableFunction) -> MeasurableFunction:
    """max(f, g) = (f + g + |f - g|) / 2."""
    total = add_m(f, g)
    gap = abs_m(sub_m(f, g))
    half = lc(Q(1, 2))
    return linear_combine(half, gap, scale_m(half, total))


def multiply(f: MeasurableFunction, g: MeasurableFunction,
             bound_certificate_for_g: LCNumber | None = None) -> MeasurableFunction:
    """f * g for bounded g: the caller certifies |g| <= bound.

    Envelopes are interval-arithmetic corner products of f's envelopes
    with g's envelopes clipped to [-bound, bound]; per-block levels of g
    are chosen deep enough that the blockwise f-magnitudes cannot spoil
    the gap budget.
    """
    if bound_certificate_for_g is None:
        raise UnboundedFactor("a bound certificate for the second factor "
                              "is required")
    m_g = bound_certificate_for_g
    lam_mg = _lam_lb(m_g)
    g_shift = max(0, math.ceil(-lam_mg))

    def product_entry(entry: Entry, k: int, index: int) -> list[Entry]:
        blk, lf, uf = entry
        if lf.tail is not None or uf.tail is not None:
            raise UnsupportedStreamPair(
                "products need per-block envelopes with finite covers")
        m_f = _finite_sup_bound(add_simple(abs_entry(lf), abs_entry(uf)))
        k_g = k + 1 + index + max(0, math.ceil(-_lam_lb(m_f)))
        envg = restrict_m(g, blk).scheme(k_g)
        if envg.tail is not None:
            raise UnsupportedStreamPair(
                "products need the bounded factor on finite partitions")
        out = []
        for sub_blk, lg, ug in envg.entries:
            if not sub_blk.fin and sub_blk.tail is None:
                continue
            lf_r, uf_r = restrict(lf, sub_blk), restrict(uf, sub_blk)
            lg_c = clip(lg, sub_blk)
            ug_c = clip(ug, sub_blk)
            from .simple import mul_simple
            corners = [mul_simple(a, b) for a in (lf_r, uf_r)
                       for b in (lg_c, ug_c)]
            lo = corners[0]
            hi = corners[0]
            for c in corners[1:]:
                lo, _ = min_max_simple(lo, c)
                _, hi = min_max_simple(hi, c)
            out.append((sub_blk, lo, hi))
        return out

    def abs_entry(s: SimpleFunction) -> SimpleFunction:
        from .simple import abs_simple
        return abs_simple(s)

    def clip(s: SimpleFunction, blk: MeasurableSet) -> SimpleFunction:
        low = constant_on(blk, neg(m_g))
        high = constant_on(blk, m_g)
        _, clipped = min_max_simple(s, low)
        clipped, _ = min_max_simple(clipped, high)
        return clipped

    def scheme(k: int) -> EnvelopePair:
        envf = f.scheme(k + 1 + g_shift)
        entries = tuple(e for i, fe in enumerate(envf.entries)
                        for e in product_entry(fe, k, i))
        tail = None
        if envf.tail is not None:
            t = envf.tail
            offset = len(envf.entries)

            def tail_entries(n: int) -> tuple[Entry, ...]:
                return tuple(e for fe in t.entries(n)
                             for e in product_entry(fe, k, offset + n))

            tail = EnvelopeTail(tail_entries, t.measure_bound,
                                lambda n: t.integral_bound(n) + lam_mg)
        return EnvelopePair(entries, tail, envf.exact)

    return MeasurableFunction(f.domain, scheme)


# -- uniform convergence ---------------------------------------------------------


def from_uniform_limit(seq: Callable[[int], MeasurableFunction],
                       rate: Callable[[int], LCNumber],
                       max_search: int = 200) -> MeasurableFunction:
    """The uniform limit of seq(1), seq(2), ... with |limit - seq(n)|
    bounded by rate(n), rate decaying strongly to zero.

    Level k widens the envelopes of a far-enough member by +-rate(n); the
    widening costs 2 * rate(n) * m(A) of gap, so n is chosen with
    lambda(rate(n)) clearing k + 1 plus the measure's valuation deficit.
    """
    first = seq(1)
    domain = first.domain
    m_lam = _measure_valuation_floor(domain)

    def pick_level(k: int) -> int:
        target = Q(k + 1) - min(m_lam, Q(0)) + 1
        for n in range(1, max_search + 1):
            r = rate(n)
            if r == ZERO or valuation_lower_bound(r) >= target:
                return n
        raise RateNotDecaying(
            f"rate valuation never reached {target} within {max_search} terms")

    def widen(entry: Entry, r: LCNumber) -> Entry:
        blk, lower, upper = entry
        return (blk, shift_simple(lower, neg(r)), shift_simple(upper, r))

    def scheme(k: int) -> EnvelopePair:
        n = pick_level(k)
        r = rate(n)
        env = seq(n).scheme(k + 1)
        entries = tuple(widen(e, r) for e in env.entries)
        tail = None
        if env.tail is not None:
            t = env.tail
            lam_r = _lam_lb(r)

            def tail_entries(nn: int) -> tuple[Entry, ...]:
                return tuple(widen(e, r) for e in t.entries(nn))

            tail = EnvelopeTail(
                tail_entries, t.measure_bound,
                lambda nn: min(t.integral_bound(nn),
                               lam_r + t.measure_bound(nn)))
        return EnvelopePair(entries, tail, exact=False)

    return MeasurableFunction(domain, scheme)


def uniform_series_limit(terms: Callable[[int], MeasurableFunction],
                         tail_rate: Callable[[int], LCNumber]) -> MeasurableFunction:
    """The sum of a uniformly convergent series: partial sums converge
    uniformly with |sum - partial_n| <= tail_rate(n)."""

    def partial(n: int) -> MeasurableFunction:
        acc = terms(1)
        for j in range(2, n + 1):
            acc = add_m(acc, terms(j))
        return acc

    return from_uniform_limit(partial, tail_rate)


def _measure_valuation_floor(domain: MeasurableSet, probe: int = 16) -> Q:
    m = measure(domain, probe)
    if m.terms:
        return Q(m.terms[0][0])
    return Q(probe)


# -- the paper-exact counterexamples -----------------------------------------------


def remark_counterexample(n: int) -> tuple[MeasurableFunction, LCNumber]:
    """The n-th member of the monotone-convergence counterexample: the
    indicator of (0, d^(1/n)) plus the indicator of (1/n, 1), on (0, 1);
    its exact integral is 1 + d^(1/n) - 1/n, a sequence that strongly
    diverges although the functions increase monotonically to the
    indicator of (0, 1)."""
    if n < 1:
        raise ValueError("the family is indexed by positive integers")
    e = d_power(Q(1, n))
    domain = finite_set(open_interval_01())
    blocks: list[tuple[MeasurableSet, LCNumber]] = [
        (finite_set(Interval(ZERO, e, False, False)), ONE)]
    if n >= 2:
        blocks.append((finite_set(Interval(lc(Q(1, n)), ONE, False, False)), ONE))
    f = step_function(domain, blocks)
    return f, integrate(f)


def eg_counterexample(n: int) -> tuple[MeasurableFunction, LCNumber]:
    """The n-th member of the dominated-convergence counterexample: a
    five-block step function on (0, 1) whose integral is exactly 1 + d
    for every n, although the pointwise limit is the constant 1."""
    if n < 1:
        raise ValueError("the family is indexed by positive integers")
    e = d_power(Q(1, n))
    domain = finite_set(open_interval_01())
    blocks: list[tuple[MeasurableSet, LCNumber]] = [
        (finite_set(Interval(ZERO, e, False, False)), ONE),
        (finite_set(Interval(e, mul(lc(2), e), False, False)), lc(-1)),
        (finite_set(Interval(mul(lc(2), e), mul(lc(3), e), False, False)),
         mul(lc(Q(1, n)), d_power(Q(-1, n)))),
        (finite_set(Interval(mul(lc(3), e), mul(lc(4), e), False, False)),
         d_power(1 - Q(1, n))),
    ]
    if n >= 2:
        blocks.append((finite_set(Interval(lc(Q(1, n)), ONE, False, False)), ONE))
    f = step_function(domain, blocks)
    return f, integrate(f)


def open_interval_01() -> Interval:
    return Interval(ZERO, ONE, False, False)


# -- pointwise envelope diagnostics (step schemes) -----------------------------------


def envelope_gap_exceeds(f: MeasurableFunction, k: int,
                         threshold_exp: Q) -> MeasurableSet:
    """The set where the level-k envelope gap exceeds d^threshold_exp,
    computed via preimages of the gap functions (step schemes and
    polynomial pieces with exact crossing points)."""
    env = f.scheme(k)
    ray = Interval(d_power(threshold_exp), None, False, False)
    out = EMPTY_SET
    for _, lower, upper in env.entries:
        gap = sub_simple(upper, lower)
        out = union(out, preimage(gap, ray))
    if env.tail is not None:
        raise UnsupportedStreamPair(
            "the pointwise diagnostic covers finite-partition schemes")
    return out


def char_certificate(f: MeasurableFunction, eps_exp: Q, delta_exp: Q,
                     max_level: int = 40) -> tuple[MeasurableSet, int]:
    """A level K and a small set U with m(U) < d^delta_exp such that the
    level-K envelopes are pointwise closer than d^eps_exp off U."""
    for k in range(1, max_level + 1):
        u = envelope_gap_exceeds(f, k, eps_exp)
        m_u = measure(u, delta_exp + 2)
        if not m_u.terms or compare(m_u, d_power(delta_exp)) == LT:
            return u, k
    raise SchemeExhausted("no level brings the envelopes pointwise close "
                          "off a small set")
