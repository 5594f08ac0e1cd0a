"""Shared helpers for building random exact field elements in tests."""

from __future__ import annotations

import random
from fractions import Fraction as Q

from levi.core import LCNumber, lc


def rand_fraction(rng: random.Random, lo: int = -9, hi: int = 9,
                  max_den: int = 4, nonzero: bool = False) -> Q:
    while True:
        q = Q(rng.randint(lo, hi), rng.randint(1, max_den))
        if q or not nonzero:
            return q


def rand_exponent(rng: random.Random, lo: int = -6, hi: int = 12,
                  max_den: int = 3) -> Q:
    return Q(rng.randint(lo, hi), rng.choice([1, 1, 2, max_den]))


def rand_lc(rng: random.Random, max_terms: int = 4, nonzero: bool = False,
            positive: bool = False) -> LCNumber:
    """A random exact element with a few rational-exponent terms."""
    n = rng.randint(0 if not (nonzero or positive) else 1, max_terms)
    exps = sorted({rand_exponent(rng) for _ in range(n)})
    terms = [(e, rand_fraction(rng, nonzero=True)) for e in exps]
    if positive and terms:
        e0, c0 = terms[0]
        terms[0] = (e0, abs(c0))
    value = LCNumber(tuple(terms))
    if (nonzero or positive) and not value.terms:
        return lc(1)
    return value
