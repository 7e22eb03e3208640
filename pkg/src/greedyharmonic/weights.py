"""Iterated partial sums of the sign sequence and their weight vectors.

The k-fold iterated partial-sum sequence of epsilon expands blockwise as
epsilon(floor(n/2^k)) times a fixed vector W_k of 2^k nonnegative
integers, the coefficients of Q_k(x) = prod_{j<k} (1 + x + ... +
x^{2^j - 1}).  fabius_profile exposes the rescaled W_k values that
sample the derivative of the k-th approximant to the Fabius function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ResourceLimitError
from .thue_morse import epsilon

__all__ = ["WeightVector", "weight_vector", "eps_iterated", "fabius_profile"]

_MAX_LEVEL = 20


@dataclass(frozen=True)
class WeightVector:
    k: int
    w: tuple


@lru_cache(maxsize=None)
def _weights(k: int) -> tuple:
    # coefficients of prod_{j=0..k-1} (1 + x + ... + x^{2^j - 1});
    # each factor is applied as a sliding-window sum over prefix sums
    coeffs = [1]
    for j in range(k):
        width = 1 << j
        out_len = len(coeffs) + width - 1
        prefix = [0]
        for c in coeffs:
            prefix.append(prefix[-1] + c)
        total = prefix[-1]
        out = []
        for i in range(out_len):
            hi = min(i + 1, len(coeffs))
            lo = max(0, i - width + 1)
            out.append(prefix[hi] - prefix[lo])
        coeffs = out
    coeffs.extend([0] * ((1 << k) - len(coeffs)))
    return tuple(coeffs)


def weight_vector(k: int) -> WeightVector:
    """W_k as exact integers, padded with k trailing zeros to length 2^k."""
    if k < 0:
        raise ValueError("level must be nonnegative")
    if k > _MAX_LEVEL:
        raise ResourceLimitError(f"level {k} exceeds {_MAX_LEVEL}")
    return WeightVector(k, _weights(k))


def eps_iterated(k: int, n: int) -> int:
    """The k-fold iterated partial sum of epsilon at index n.

    Answered pointwise from the block expansion: the value is
    epsilon(floor(n / 2^k)) * w_k(n mod 2^k).  Satisfies
    eps_iterated(k+1, n) = sum_{m <= n} eps_iterated(k, m).
    """
    if n < 0:
        raise ValueError("index must be nonnegative")
    w = weight_vector(k).w
    return epsilon(n >> k) * w[n & ((1 << k) - 1)]


def fabius_profile(k: int) -> list:
    """Pairs (n/2^k, 2^{(3k-k^2)/2} * w_k(n)) for n in [0, 2^k).

    The exponent (3k - k^2)/2 = k(3-k)/2 is an integer for every k.
    The values average to exactly 1 over the 2^k abscissas.
    """
    if k < 1:
        raise ValueError("level must be positive")
    w = weight_vector(k).w
    e = (3 * k - k * k) // 2
    scale = Fraction(1 << e) if e >= 0 else Fraction(1, 1 << (-e))
    denom = 1 << k
    return [(Fraction(n, denom), scale * w[n]) for n in range(denom)]
