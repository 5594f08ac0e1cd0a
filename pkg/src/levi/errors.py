"""Exception hierarchy shared by all levi modules."""

from __future__ import annotations


class LeviError(Exception):
    """Base class for all domain errors raised by this package."""


class IndeterminateError(LeviError):
    """A question whose answer is not decidable at the available cutoff."""


class IndeterminateAtCutoff(IndeterminateError):
    """Order/equality between two values cannot be decided at this precision."""


class IndeterminateValuation(IndeterminateError):
    """The valuation of a truncated value with no stored terms is unknown."""


class IndeterminateLeadingTerm(IndeterminateError):
    """An operation needs the leading term, but none is stored below the cutoff."""


class NotPositive(LeviError):
    """Root extraction requires a strictly positive argument."""


class NonPerfectPowerLeadingCoefficient(LeviError):
    """The leading coefficient has no rational n-th root."""


class CutoffTooLow(LeviError):
    """The value's cutoff does not reach the exponents the operation needs."""


class BoundViolation(LeviError):
    """A declared valuation bound of a series or stream does not hold."""


class IrrationalBranchPoint(LeviError):
    """A root's leading real coefficient is irrational; out of exact scope."""


class UnsupportedStreamPair(LeviError):
    """Set algebra between two stream-backed sets is not supported."""


class NotACover(LeviError):
    """The proposed interval family does not cover the set."""


class OverlappingInteriors(LeviError):
    """Cover intervals of a simple function have overlapping interiors."""


class NotCovering(LeviError):
    """A simple function's cover misses part of its domain."""


class ExcessTooLarge(LeviError):
    """The cover excess cannot certify the requested output cutoff."""


class SchemeExhausted(LeviError):
    """An envelope scheme provides no level fine enough for the request."""


class UnboundedFactor(LeviError):
    """Multiplication requires a bound certificate for one factor."""


class RateNotDecaying(LeviError):
    """A declared uniform-convergence rate fails to decay strongly."""


class ExprSyntaxError(LeviError):
    """Syntax error in the expression grammar, with source position."""

    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.col = col
        self.expected = expected
        detail = f"{message} at line {line}, column {col}"
        if expected:
            detail += " (expected " + " or ".join(expected) + ")"
        super().__init__(detail)
