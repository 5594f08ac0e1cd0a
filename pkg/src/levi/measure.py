"""Intervals with Levi-Civita endpoints, measurable sets, and their measure.

A measurable set is a finite disjoint interval union plus an optional
stream tail: countably many further interval groups whose lengths carry a
diverging valuation bound.  The measure of the finite part is exact; the
tail is a strongly convergent series of lengths summed to a cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from functools import cmp_to_key
from typing import Callable, Iterable, Optional, Sequence

from .core import (
    EQ,
    GT,
    LT,
    Cutoff,
    LCNumber,
    SeriesTermStream,
    ZERO,
    add,
    compare,
    sub,
    sum_strong_series,
    truncate,
)
from .errors import NotACover, UnsupportedStreamPair


@dataclass(frozen=True)
class Interval:
    """An interval of the field; `None` endpoints mean -oo / +oo.

    Unbounded ends are necessarily open.  Degenerate intervals must be
    closed on both sides (singletons); empty intervals are not
    representable.
    """

    a: Optional[LCNumber]
    b: Optional[LCNumber]
    closed_left: bool = True
    closed_right: bool = True

    def __post_init__(self) -> None:
        if self.a is None and self.closed_left:
            raise ValueError("unbounded left end must be open")
        if self.b is None and self.closed_right:
            raise ValueError("unbounded right end must be open")
        if self.a is not None and self.b is not None:
            order = compare(self.a, self.b)
            if order == GT:
                raise ValueError("interval endpoints out of order")
            if order == EQ and not (self.closed_left and self.closed_right):
                raise ValueError("empty interval")

    @property
    def bounded(self) -> bool:
        return self.a is not None and self.b is not None

    def __str__(self) -> str:
        left = "[" if self.closed_left else "("
        right = "]" if self.closed_right else ")"
        sa = str(self.a) if self.a is not None else "-oo"
        sb = str(self.b) if self.b is not None else "oo"
        return f"{left}{sa},{sb}{right}"


def closed(a: LCNumber, b: LCNumber) -> Interval:
    return Interval(a, b, True, True)


def open_interval(a: LCNumber, b: LCNumber) -> Interval:
    return Interval(a, b, False, False)


def length(i: Interval) -> LCNumber:
    """l(I) = b - a; open/closed flags are irrelevant to the measure."""
    if not i.bounded:
        raise ValueError("length of an unbounded interval")
    return sub(i.b, i.a)


def contains(i: Interval, x: LCNumber) -> bool:
    if i.a is not None:
        left = compare(i.a, x)
        if left == GT or (left == EQ and not i.closed_left):
            return False
    if i.b is not None:
        right = compare(x, i.b)
        if right == GT or (right == EQ and not i.closed_right):
            return False
    return True


def midpoint(i: Interval) -> LCNumber:
    if not i.bounded:
        raise ValueError("midpoint of an unbounded interval")
    return add(i.a, i.b) / 2


def _try_interval(a, b, cl, cr) -> Interval | None:
    if a is not None and b is not None:
        order = compare(a, b)
        if order == GT or (order == EQ and not (cl and cr)):
            return None
    return Interval(a, b, cl, cr)


def iv_intersect(i: Interval, j: Interval) -> Interval | None:
    if i.a is None:
        a, cl = j.a, j.closed_left
    elif j.a is None:
        a, cl = i.a, i.closed_left
    else:
        order = compare(i.a, j.a)
        if order == GT:
            a, cl = i.a, i.closed_left
        elif order == LT:
            a, cl = j.a, j.closed_left
        else:
            a, cl = i.a, i.closed_left and j.closed_left
    if i.b is None:
        b, cr = j.b, j.closed_right
    elif j.b is None:
        b, cr = i.b, i.closed_right
    else:
        order = compare(i.b, j.b)
        if order == LT:
            b, cr = i.b, i.closed_right
        elif order == GT:
            b, cr = j.b, j.closed_right
        else:
            b, cr = i.b, i.closed_right and j.closed_right
    return _try_interval(a, b, cl, cr)


def iv_subtract(i: Interval, j: Interval) -> list[Interval]:
    """The (up to two) pieces of i not covered by j."""
    if iv_intersect(i, j) is None:
        return [i]
    pieces = []
    if j.a is not None:
        left = _try_interval(i.a, j.a, i.closed_left, not j.closed_left)
        if left is not None:
            pieces.append(left)
    if j.b is not None:
        right = _try_interval(j.b, i.b, not j.closed_right, i.closed_right)
        if right is not None:
            pieces.append(right)
    return pieces


def _subtract_many(i: Interval, cutters: Iterable[Interval]) -> list[Interval]:
    pieces = [i]
    for j in cutters:
        pieces = [part for p in pieces for part in iv_subtract(p, j)]
    return pieces


def _cmp_left(i: Interval, j: Interval) -> int:
    if i.a is None or j.a is None:
        if i.a is None and j.a is None:
            return 0
        return -1 if i.a is None else 1
    order = compare(i.a, j.a)
    if order != EQ:
        return order
    return (not i.closed_left) - (not j.closed_left)


def canonical(intervals: Sequence[Interval]) -> tuple[Interval, ...]:
    """Sort and merge: overlapping intervals always merge, touching ones
    merge when at least one side of the shared endpoint is closed."""
    ivs = sorted(intervals, key=cmp_to_key(_cmp_left))
    out: list[Interval] = []
    for nxt in ivs:
        if not out:
            out.append(nxt)
            continue
        cur = out[-1]
        gap = compare(nxt.a, cur.b) if cur.b is not None and nxt.a is not None else LT
        touching = gap == EQ and (cur.closed_right or nxt.closed_left)
        if gap == LT or touching:
            if nxt.b is None or (cur.b is not None and compare(nxt.b, cur.b) != GT):
                b, cr = cur.b, cur.closed_right or (
                    nxt.b is not None and compare(nxt.b, cur.b) == EQ and nxt.closed_right)
            else:
                b, cr = nxt.b, nxt.closed_right
            cl = cur.closed_left or (
                _cmp_left(cur, nxt) == 0 and nxt.closed_left)
            out[-1] = Interval(cur.a, b, cl, cr)
        else:
            out.append(nxt)
    return tuple(out)


# -- measurable sets ---------------------------------------------------------


@dataclass(frozen=True)
class GroupStream:
    """Countably many disjoint interval groups with a valuation bound on
    lengths: every interval of group n has lambda(l) >= bound(n), and the
    bound is nondecreasing and diverges.  Generators must be pure."""

    groups: Callable[[int], tuple[Interval, ...]]
    bound: Callable[[int], Q]


@dataclass(frozen=True)
class MeasurableSet:
    """Finite disjoint interval union plus an optional stream tail,
    disjoint from the finite part by construction."""

    fin: tuple[Interval, ...] = ()
    tail: GroupStream | None = None

    @property
    def is_finite(self) -> bool:
        return self.tail is None

    def __str__(self) -> str:
        parts = " u ".join(str(i) for i in self.fin) or "{}"
        return parts + (" u <stream>" if self.tail else "")


EMPTY_SET = MeasurableSet()


def finite_set(*intervals: Interval) -> MeasurableSet:
    for i in intervals:
        if not i.bounded:
            raise ValueError("measurable sets are built from bounded intervals")
    return MeasurableSet(canonical(intervals))


def stream_set(gen: Callable[[int], Interval], bound: Callable[[int], Q],
               fin: Sequence[Interval] = ()) -> MeasurableSet:
    """The union of gen(1), gen(2), ... with declared length-valuation bound.

    Disjointness of the generated intervals (and from `fin`) is the
    caller's contract, as is the validity of the bound; the bound itself
    is re-checked against stored terms whenever the measure is summed.
    """
    return MeasurableSet(canonical(fin),
                         GroupStream(lambda n: (gen(n),), bound))


def from_interval(i: Interval) -> MeasurableSet:
    return finite_set(i)


def measure(A: MeasurableSet, out_cutoff: Cutoff | None = None) -> LCNumber:
    """m(A): exact for finite sets, summed to out_cutoff for stream tails."""
    total = ZERO
    for i in A.fin:
        total = add(total, length(i))
    if A.tail is None:
        return total if out_cutoff is None else truncate(total, out_cutoff)
    if out_cutoff is None:
        raise ValueError("an output cutoff is required to measure a stream set")
    tail = A.tail

    def group_length(n: int) -> LCNumber:
        acc = ZERO
        for piece in tail.groups(n):
            acc = add(acc, length(piece))
        return acc

    series = SeriesTermStream(group_length, tail.bound)
    return truncate(add(total, sum_strong_series(series, out_cutoff)), out_cutoff)


def _tail_map(tail: GroupStream,
              fn: Callable[[Interval], list[Interval]]) -> GroupStream:
    def groups(n: int) -> tuple[Interval, ...]:
        return tuple(piece for i in tail.groups(n) for piece in fn(i))

    return GroupStream(groups, tail.bound)


def intersect(A: MeasurableSet, B: MeasurableSet) -> MeasurableSet:
    """A n B; at least one operand must have no stream tail."""
    if A.tail is not None and B.tail is not None:
        raise UnsupportedStreamPair("intersection of two stream sets")
    if A.tail is not None:
        A, B = B, A
    fin = tuple(p for i in A.fin for j in B.fin
                if (p := iv_intersect(i, j)) is not None)
    tail = None
    if B.tail is not None:
        a_fin = A.fin
        tail = _tail_map(B.tail, lambda i: [
            p for j in a_fin if (p := iv_intersect(i, j)) is not None])
    return MeasurableSet(canonical(fin), tail)


def union(A: MeasurableSet, B: MeasurableSet) -> MeasurableSet:
    """A u B with canonical disjoint re-normalization."""
    if A.tail is not None and B.tail is not None:
        raise UnsupportedStreamPair("union of two stream sets")
    if A.tail is not None:
        A, B = B, A
    fin = canonical(A.fin + B.fin)
    tail = B.tail
    if tail is not None and A.fin:
        a_fin = A.fin
        tail = _tail_map(tail, lambda i: _subtract_many(i, a_fin))
    return MeasurableSet(fin, tail)


def difference(A: MeasurableSet, B: MeasurableSet) -> MeasurableSet:
    """A \\ B; B must be finite."""
    if B.tail is not None:
        raise UnsupportedStreamPair("difference with a stream subtrahend")
    fin = tuple(p for i in A.fin for p in _subtract_many(i, B.fin))
    tail = None
    if A.tail is not None:
        b_fin = B.fin
        tail = _tail_map(A.tail, lambda i: _subtract_many(i, b_fin))
    return MeasurableSet(canonical(fin), tail)


def is_subset(A: MeasurableSet, cover: Sequence[Interval]) -> bool:
    """Decidable only for finite A: does the cover contain every point?"""
    if A.tail is not None:
        raise UnsupportedStreamPair("subset test against a stream set")
    return all(not _subtract_many(i, cover) for i in A.fin)


def cover_excess(A: MeasurableSet, cover: Sequence[Interval],
                 out_cutoff: Cutoff | None = None) -> LCNumber:
    """sum of cover lengths minus m(A), the quantity a simple-function
    cover must drive below any requested epsilon."""
    if A.tail is None and not is_subset(A, cover):
        raise NotACover("the proposed intervals do not cover the set")
    total = ZERO
    for i in cover:
        total = add(total, length(i))
    result = sub(total, measure(A, out_cutoff))
    return result if out_cutoff is None else truncate(result, out_cutoff)


