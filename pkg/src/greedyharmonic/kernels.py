"""Alternating harmonic kernels and their certified bounds.

g(k, x) = sum_{0 <= l < 2^k} epsilon(l)/(x + l) is the kernel that
controls greedy deviation sizes; it is positive, decreasing, and of
order c_k / x^{k+1} with c_k = 2^{k(k-1)/2} * k!.

All operations accept either exact rationals (Fraction/int, results are
exact) or RealBall (results are enclosures); the two paths share one
generic implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .ball import RealBall
from .errors import DomainError, PrecisionError, ResourceLimitError
from .thue_morse import f_periodic

__all__ = [
    "KernelOrder",
    "c_scale",
    "g",
    "g_shifted",
    "G",
    "tm_partial_sum",
    "g_tail_sum",
]

_MAX_ORDER = 30


def c_scale(k: int) -> int:
    """c_k = 2^{k(k-1)/2} * k!, the deviation scale at order k."""
    if k < 0:
        raise ValueError("order must be nonnegative")
    return (1 << (k * (k - 1) // 2)) * math.factorial(k)


@dataclass(frozen=True)
class KernelOrder:
    """An order k bundled with its exact scale constant c_k."""

    k: int
    c_k: int

    @classmethod
    def of(cls, k: int) -> "KernelOrder":
        return cls(k, c_scale(k))

    def next(self) -> "KernelOrder":
        # c_{k+1} = (k+1) * 2^k * c_k
        return KernelOrder(self.k + 1, (self.k + 1) * (self.c_k << self.k))


def _check_order(k: int):
    if k < 0:
        raise ValueError("order must be nonnegative")
    if k > _MAX_ORDER:
        raise ResourceLimitError(f"order {k} exceeds {_MAX_ORDER}")


def _check_positive(x):
    if isinstance(x, RealBall):
        if not x.is_positive():
            raise DomainError("argument enclosure must be strictly positive")
    elif x <= 0:
        raise DomainError("argument must be strictly positive")


def _one_over(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(1) / x
    return 1 / x


def g(k: int, x):
    """g_k(x), via the difference recursion (cost O(2^k) additions)."""
    _check_order(k)
    _check_positive(x)
    return _g(k, x)


def _g(k: int, x):
    if k == 0:
        return _one_over(x)
    half = 1 << (k - 1)
    return _g(k - 1, x) - _g(k - 1, x + half)


def g_shifted(k: int, m: int, x):
    """g_{k,m}(x) = sum_{0 <= n < 2^k} f_k(n + m)/(n + x)."""
    _check_order(k)
    if m < 0:
        raise ValueError("shift must be nonnegative")
    _check_positive(x)
    total = None
    for n in range(1 << k):
        term = f_periodic(k, n + m) * _one_over(x + n)
        total = term if total is None else total + term
    return total


def G(k: int, x):
    """G_k(x) = k! / prod_{l=0..k} (x + l); telescopes as
    G_{k+1}(x) = G_k(x) - G_k(x+1)."""
    _check_order(k)
    _check_positive(x)
    denom = x
    for l in range(1, k + 1):
        denom = denom * (x + l)
    return math.factorial(k) * _one_over(denom)


def tm_partial_sum(x, r: int):
    """sum_{0 <= l < r} epsilon(l)/(x + l), assembled from whole dyadic
    blocks: writing r = 2^{h_0} + ... + 2^{h_q} with h_0 > ... > h_q,
    the sum is sum_j (-1)^j g_{h_j}(x + r_j) with r_j the partial
    prefix, because each block of 2^{h_j} consecutive epsilon values
    starting at r_j is (-1)^j times an initial block."""
    if r <= 0:
        raise ValueError("r must be positive")
    _check_positive(x)
    total = None
    offset = 0
    parity = 1
    for h in range(r.bit_length() - 1, -1, -1):
        if not (r >> h) & 1:
            continue
        term = parity * _g(h, x + offset)
        total = term if total is None else total + term
        offset += 1 << h
        parity = -parity
    return total


def g_tail_sum(k: int, x: RealBall, target_radius) -> RealBall:
    """Enclosure of sum_{h >= 0} g_k(x + h*2^k).

    Explicit terms are added until the rigorous tail enclosure brings
    the radius under target_radius.  The tail after the first H terms
    is sandwiched using monotonicity of g_k and the exact antiderivative
    bounds c_k/(k*(y+2^k)^k) <= integral_y^inf g_k <= c_k/(k*y^k)
    (from c_k/(y+2^k)^{k+1} < g_k(y) < c_k/y^{k+1} termwise):

        (1/2^k) * I(y)  <=  tail from y  <=  g_k(y) + (1/2^k) * I(y)

    with y = x + H*2^k.
    """
    if k <= 0:
        raise ValueError("order must be positive")
    _check_order(k)
    if not isinstance(x, RealBall):
        x = RealBall.from_fraction(Fraction(x), 128)
    if x.lo_fraction() < 1:
        raise DomainError("g_tail_sum requires x >= 1")
    target_radius = Fraction(target_radius)
    if target_radius <= 0:
        raise ValueError("target_radius must be positive")

    ck = c_scale(k)
    step = 1 << k
    prec = x.prec
    acc = RealBall.from_int(0, prec)
    h = 0
    budget = 1 << 22
    while True:
        y = x + h * step
        g_at_y = _g(k, y)
        # the tail bound is checked on a sparse schedule; each check
        # costs a few extra interval powers
        if h & (h - 1) == 0 or h % 1024 == 0:
            # integral bounds divided by the grid spacing 2^k
            i_hi = ck / (k * (y ** k) * step)
            i_lo = ck / (k * ((y + step) ** k) * step)
            tail = RealBall.from_endpoints(
                i_lo.lo_fraction(),
                (g_at_y + i_hi).hi_fraction(),
                prec,
            )
            result = acc + tail
            if result.radius() <= target_radius:
                return result
        if h >= budget:
            raise PrecisionError(
                "g_tail_sum could not reach the target radius within budget; "
                "increase the precision of x or relax target_radius")
        acc = acc + g_at_y
        h += 1
