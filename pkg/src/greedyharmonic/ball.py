"""Rigorous real enclosures (midpoint/radius view over interval endpoints).

RealBall wraps mpmath's low-level interval arithmetic (libmp mpi_*
functions), which rounds endpoints outward, so every operation returns an
enclosure of the exact result.  Values are immutable; the mpi layer is a
set of pure functions, so balls are safe to share across threads.

Endpoints are stored as raw mpf tuples; use .lo_fraction()/.hi_fraction()
to get exact rational endpoints, or .scaled_bounds(P) for integer bounds
at 2^-P resolution (the greedy engine's fixed-point representation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath.libmp import (
    from_int,
    from_rational,
    mpf_cmp,
    to_rational,
)
from mpmath.libmp.libmpi import (
    mpi_abs,
    mpi_add,
    mpi_cos,
    mpi_div,
    mpi_exp,
    mpi_log,
    mpi_mul,
    mpi_neg,
    mpi_pi,
    mpi_pow_int,
    mpi_sin,
    mpi_sqrt,
    mpi_sub,
)

from .errors import DomainError

__all__ = ["RealBall", "pi_ball"]


def _fraction_of(raw) -> Fraction:
    p, q = to_rational(raw)
    return Fraction(int(p), int(q))


def _endpoints_from_fraction(value: Fraction, prec: int):
    p, q = value.numerator, value.denominator
    return from_rational(p, q, prec, "f"), from_rational(p, q, prec, "c")


@dataclass(frozen=True)
class RealBall:
    """An interval [lo, hi] certified to contain the represented real."""

    lo: tuple
    hi: tuple
    prec: int

    # -- construction -------------------------------------------------

    @classmethod
    def from_int(cls, n: int, prec: int = 53) -> "RealBall":
        raw = from_int(n)
        return cls(raw, raw, prec)

    @classmethod
    def from_fraction(cls, value, prec: int) -> "RealBall":
        value = Fraction(value)
        lo, hi = _endpoints_from_fraction(value, prec)
        return cls(lo, hi, prec)

    @classmethod
    def from_endpoints(cls, lo, hi, prec: int) -> "RealBall":
        """Build a ball from exact rational endpoints (rounded outward)."""
        lo = Fraction(lo)
        hi = Fraction(hi)
        if lo > hi:
            raise ValueError("lower endpoint exceeds upper endpoint")
        lo_raw = from_rational(lo.numerator, lo.denominator, prec, "f")
        hi_raw = from_rational(hi.numerator, hi.denominator, prec, "c")
        return cls(lo_raw, hi_raw, prec)

    @classmethod
    def hull(cls, a: "RealBall", b: "RealBall") -> "RealBall":
        prec = max(a.prec, b.prec)
        lo = a.lo if mpf_cmp(a.lo, b.lo) <= 0 else b.lo
        hi = a.hi if mpf_cmp(a.hi, b.hi) >= 0 else b.hi
        return cls(lo, hi, prec)

    # -- inspection ---------------------------------------------------

    def lo_fraction(self) -> Fraction:
        return _fraction_of(self.lo)

    def hi_fraction(self) -> Fraction:
        return _fraction_of(self.hi)

    def midpoint(self) -> Fraction:
        return (self.lo_fraction() + self.hi_fraction()) / 2

    def radius(self) -> Fraction:
        return (self.hi_fraction() - self.lo_fraction()) / 2

    def midpoint_float(self) -> float:
        return float(self.midpoint())

    def radius_float(self) -> float:
        return float(self.radius())

    def contains(self, value) -> bool:
        value = Fraction(value)
        return self.lo_fraction() <= value <= self.hi_fraction()

    def contains_zero(self) -> bool:
        return self.contains(0)

    def overlaps(self, other: "RealBall") -> bool:
        return (mpf_cmp(self.lo, other.hi) <= 0
                and mpf_cmp(other.lo, self.hi) <= 0)

    def is_positive(self) -> bool:
        """True iff every represented value is > 0."""
        return self.lo_fraction() > 0

    def is_negative(self) -> bool:
        return self.hi_fraction() < 0

    def scaled_bounds(self, bits: int):
        """Integers (a, b) with a/2^bits <= lo and hi <= b/2^bits."""
        lo = self.lo_fraction()
        hi = self.hi_fraction()
        a = (lo.numerator << bits) // lo.denominator
        b = -((-hi.numerator << bits) // hi.denominator)
        return a, b

    # -- arithmetic ---------------------------------------------------

    def _mpi(self):
        return (self.lo, self.hi)

    def _coerce(self, other):
        if isinstance(other, RealBall):
            return other
        if isinstance(other, int):
            return RealBall.from_int(other, self.prec)
        if isinstance(other, Fraction):
            return RealBall.from_fraction(other, self.prec)
        return NotImplemented

    def _binary(self, other, op):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = max(self.prec, other.prec)
        lo, hi = op(self._mpi(), other._mpi(), prec)
        return RealBall(lo, hi, prec)

    def __add__(self, other):
        return self._binary(other, mpi_add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, mpi_sub)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        return self._binary(other, mpi_mul)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.contains_zero():
            raise DomainError("division by an interval containing zero")
        return self._binary(other, mpi_div)

    def __rtruediv__(self, other):
        num = self._coerce(other)
        if num is NotImplemented:
            return NotImplemented
        return num.__truediv__(self)

    def __neg__(self):
        lo, hi = mpi_neg(self._mpi(), self.prec)
        return RealBall(lo, hi, self.prec)

    def __abs__(self):
        lo, hi = mpi_abs(self._mpi(), self.prec)
        return RealBall(lo, hi, self.prec)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        lo, hi = mpi_pow_int(self._mpi(), exponent, self.prec)
        return RealBall(lo, hi, self.prec)

    # -- elementary functions ------------------------------------------

    def sqrt(self) -> "RealBall":
        if self.lo_fraction() < 0:
            raise DomainError("sqrt of an interval extending below zero")
        lo, hi = mpi_sqrt(self._mpi(), self.prec)
        return RealBall(lo, hi, self.prec)

    def log(self) -> "RealBall":
        if not self.is_positive():
            raise DomainError("log of an interval touching zero")
        lo, hi = mpi_log(self._mpi(), self.prec)
        return RealBall(lo, hi, self.prec)

    def exp(self) -> "RealBall":
        lo, hi = mpi_exp(self._mpi(), self.prec)
        return RealBall(lo, hi, self.prec)

    def cos(self) -> "RealBall":
        lo, hi = mpi_cos(self._mpi(), self.prec)
        return RealBall(lo, hi, self.prec)

    def sin(self) -> "RealBall":
        lo, hi = mpi_sin(self._mpi(), self.prec)
        return RealBall(lo, hi, self.prec)

    def __repr__(self):
        mid = self.midpoint_float()
        rad = self.radius_float()
        return f"RealBall(mid={mid!r}, rad={rad!r}, prec={self.prec})"


def pi_ball(prec: int) -> RealBall:
    lo, hi = mpi_pi(prec)
    return RealBall(lo, hi, prec)
