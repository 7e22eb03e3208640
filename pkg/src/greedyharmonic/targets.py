"""Target number descriptions with arbitrary-precision enclosure oracles.

A TargetNumber is either an exact rational (admitting exact comparison)
or a symbolic irrational with a certified enclosure oracle:

  ExactRational  p/q, including exact decimals d.ddd = d/10^j
  NamedU         the series constant U(k, m) plus a rational offset
  Tau0           the signed-harmonic self-describing constant plus offset
  SqrtCombo      sum of c_i * sqrt(r_i) (square-free r_i >= 2) plus offset

The oracle contract: enclosure(prec) has radius <= 2^(-prec + 2).
Irrationality of the symbolic kinds is what guarantees that greedy sign
decisions always terminate under precision escalation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .ball import RealBall

__all__ = [
    "TargetNumber",
    "ExactRational",
    "NamedU",
    "Tau0",
    "SqrtCombo",
    "parse_target",
    "parse_rational_literal",
]


class TargetNumber:
    """Base class; subclasses implement _compute(prec) -> RealBall."""

    is_rational = False

    def exact_value(self):
        """The exact rational value, or None for irrational kinds."""
        return None

    def enclosure(self, prec: int) -> RealBall:
        """Certified enclosure with radius <= 2^(-prec + 2)."""
        if prec < 2:
            raise ValueError("precision must be at least 2 bits")
        cache = self._cache()
        ball = cache.get(prec)
        if ball is not None:
            return ball
        tolerance = Fraction(1, 1 << (prec - 2))
        working = prec + 16
        while True:
            ball = self._compute(working)
            if ball.radius() <= tolerance:
                break
            working *= 2
        ball = RealBall(ball.lo, ball.hi, prec)
        cache[prec] = ball
        return ball

    def _cache(self):
        cache = getattr(self, "_enclosure_cache", None)
        if cache is None:
            cache = {}
            object.__setattr__(self, "_enclosure_cache", cache)
        return cache

    def _compute(self, prec: int) -> RealBall:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class ExactRational(TargetNumber):
    value: Fraction

    is_rational = True

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))

    def exact_value(self):
        return self.value

    def _compute(self, prec: int) -> RealBall:
        return RealBall.from_fraction(self.value, prec)

    def enclosure(self, prec: int) -> RealBall:
        # widen for the integer part so the radius bound stays absolute
        head = abs(self.value.numerator) // self.value.denominator
        return RealBall.from_fraction(self.value, prec + head.bit_length() + 2)

    def describe(self) -> str:
        return f"{self.value.numerator}/{self.value.denominator}"


def _offset_fraction(offset) -> Fraction:
    return Fraction(offset)


@dataclass(frozen=True, eq=False)
class NamedU(TargetNumber):
    k: int
    m: int
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        object.__setattr__(self, "m", self.m % (1 << self.k))
        object.__setattr__(self, "offset", _offset_fraction(self.offset))

    def _compute(self, prec: int) -> RealBall:
        from .constants import u_closed_form
        return u_closed_form((self.k, self.m), prec) + RealBall.from_fraction(
            self.offset, prec)

    def describe(self) -> str:
        base = f"u:{self.k}:{self.m}"
        return base + _offset_suffix(self.offset)


@dataclass(frozen=True, eq=False)
class Tau0(TargetNumber):
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "offset", _offset_fraction(self.offset))

    def _compute(self, prec: int) -> RealBall:
        from .constants import tau0
        return tau0(prec) + RealBall.from_fraction(self.offset, prec)

    def describe(self) -> str:
        return "tau0" + _offset_suffix(self.offset)


def _is_square_free(r: int) -> bool:
    if r < 1:
        return False
    d = 2
    while d * d <= r:
        if r % (d * d) == 0:
            return False
        while r % d == 0:
            r //= d
        d += 1
    return True


@dataclass(frozen=True, eq=False)
class SqrtCombo(TargetNumber):
    terms: tuple  # of (coeff: Fraction, radicand: int)
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        terms = tuple((Fraction(c), int(r)) for c, r in self.terms)
        if not terms:
            raise ValueError("SqrtCombo needs at least one term")
        radicands = [r for _, r in terms]
        if len(set(radicands)) != len(radicands):
            raise ValueError("radicands must be distinct")
        for c, r in terms:
            if c == 0:
                raise ValueError("coefficients must be nonzero")
            if r < 2 or not _is_square_free(r):
                raise ValueError(
                    f"radicand {r} must be a square-free integer >= 2")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "offset", _offset_fraction(self.offset))

    def _compute(self, prec: int) -> RealBall:
        total = RealBall.from_fraction(self.offset, prec)
        for c, r in self.terms:
            root = RealBall.from_int(r, prec).sqrt()
            total = total + RealBall.from_fraction(c, prec) * root
        return total

    def describe(self) -> str:
        body = ",".join(f"{c.numerator}" +
                        (f"/{c.denominator}" if c.denominator != 1 else "") +
                        f":{r}" for c, r in self.terms)
        return f"sqrt:{body}" + _offset_suffix(self.offset)


def _offset_suffix(offset: Fraction) -> str:
    if offset == 0:
        return ""
    sign = "+" if offset > 0 else "-"
    mag = abs(offset)
    if mag.denominator == 1:
        return f"{sign}{mag.numerator}"
    return f"{sign}{mag.numerator}/{mag.denominator}"


_DECIMAL_RE = re.compile(r"^[+-]?\d+\.\d+$")
_FRACTION_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational_literal(text: str) -> Fraction:
    """Parse p/q, an integer, or an exact decimal d.ddd."""
    text = text.strip()
    if _DECIMAL_RE.match(text):
        whole, frac = text.split(".")
        sign = -1 if whole.startswith("-") else 1
        whole = whole.lstrip("+-")
        scale = 10 ** len(frac)
        return sign * Fraction(int(whole) * scale + int(frac), scale)
    if _FRACTION_RE.match(text):
        return Fraction(text)
    raise ValueError(f"not a rational literal: {text!r}")


def _split_offset(text: str):
    """Split a trailing [+p/q] / [-p/q] offset from a symbolic spec."""
    match = re.search(r"[+-](\d+(/\d+)?|\d+\.\d+)$", text)
    if not match:
        return text, Fraction(0)
    return text[:match.start()], parse_rational_literal(match.group(0))


def parse_target(text: str) -> TargetNumber:
    """Parse the CLI target syntax into a TargetNumber.

    Accepted forms: `p/q`, `d.ddd`, `u:k:m[+p/q]`, `tau0[+p/q]`,
    `sqrt:c1:r1[,c2:r2...][+p/q]`.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty target")
    if text.startswith("u:"):
        body, offset = _split_offset(text)
        parts = body.split(":")
        if len(parts) != 3:
            raise ValueError(f"malformed U target: {text!r}")
        try:
            k, m = int(parts[1]), int(parts[2])
        except ValueError:
            raise ValueError(f"malformed U target: {text!r}") from None
        return NamedU(k, m, offset)
    if text == "tau0" or text.startswith("tau0+") or text.startswith("tau0-"):
        body, offset = _split_offset(text)
        if body != "tau0":
            raise ValueError(f"malformed tau0 target: {text!r}")
        return Tau0(offset)
    if text.startswith("sqrt:"):
        body, offset = _split_offset(text)
        terms = []
        for piece in body[len("sqrt:"):].split(","):
            bits = piece.split(":")
            if len(bits) != 2:
                raise ValueError(f"malformed sqrt term: {piece!r}")
            terms.append((parse_rational_literal(bits[0]), int(bits[1])))
        return SqrtCombo(tuple(terms), offset)
    return ExactRational(parse_rational_literal(text))
