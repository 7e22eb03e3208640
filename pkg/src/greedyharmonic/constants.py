"""High-precision enclosures of the series constants U(k,m) and tau0.

u_closed_form is the authoritative evaluation path for U(k,m): a finite
sum over odd a < 2^k of c(a) * e^{2 pi i a m / 2^k} * log(1 - zeta^a)
with zeta = e^{2 pi i / 2^k}.  The complex logarithm is expanded over
real intervals via log(1 - e^{i phi}) = log(2 sin(phi/2)) +
i (phi/2 - pi/2) for phi in (0, 2 pi) (principal branch; the argument
never meets the branch cut).  The imaginary accumulation must enclose 0.

tau0 sums the defining series to a cutoff n = 2^k * q and certifies the
remainder by |tau0 - sigma_n| <= 2^{(k-1)(k-2)/2} * G_{k-1}(n+1)
(valid whenever 2^k divides n, because the first k iterated partial
sums of the sign sequence vanish at n-1 there).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .ball import RealBall, pi_ball
from .errors import InconsistencyError
from .kernels import c_scale
from .targets import ExactRational, NamedU, SqrtCombo, Tau0, TargetNumber
from .thue_morse import epsilon, f_periodic

__all__ = [
    "UConstantSpec",
    "u_closed_form",
    "u_series",
    "tau0",
    "named_oracle",
]

_MAX_U_ORDER = 16


@dataclass(frozen=True)
class UConstantSpec:
    k: int
    m: int

    def __post_init__(self):
        if not (1 <= self.k <= _MAX_U_ORDER):
            raise ValueError(f"k must be in [1, {_MAX_U_ORDER}]")
        object.__setattr__(self, "m", self.m % (1 << self.k))


def _coerce_spec(spec) -> UConstantSpec:
    if isinstance(spec, UConstantSpec):
        return spec
    k, m = spec
    return UConstantSpec(k, m)


def _u_terms(k: int, m: int, prec: int):
    """Real/imaginary enclosures of the closed-form sum at working prec."""
    pi = pi_ball(prec)
    two_k = 1 << k
    re_acc = RealBall.from_int(0, prec)
    im_acc = RealBall.from_int(0, prec)
    for a in range(1, two_k, 2):
        rho = RealBall.from_int(1, prec)
        for j in range(1, k + 1):
            rho = rho * (pi * Fraction(a, 1 << j)).sin()
        theta = pi * (Fraction(k, 2) + Fraction(a * (2 * m + 1), two_k))
        cos_t = theta.cos()
        sin_t = theta.sin()
        # log(1 - e^{2 pi i a / 2^k}) = L + i psi
        log_mag = (2 * (pi * Fraction(a, two_k)).sin()).log()
        psi = pi * (Fraction(a, two_k) - Fraction(1, 2))
        re_acc = re_acc + rho * (cos_t * log_mag - sin_t * psi)
        im_acc = im_acc + rho * (sin_t * log_mag + cos_t * psi)
    return re_acc, im_acc


def u_closed_form(spec, precision_bits: int) -> RealBall:
    """Enclosure of U(k,m) via the finite closed form.

    Raises InconsistencyError if the (necessarily zero) imaginary part
    of the accumulated sum has an enclosure excluding 0.
    """
    spec = _coerce_spec(spec)
    tolerance = Fraction(1, 1 << precision_bits)
    working = precision_bits + 40 + 2 * spec.k
    while True:
        re_acc, im_acc = _u_terms(spec.k, spec.m, working)
        if not im_acc.contains_zero():
            raise InconsistencyError(
                "imaginary part of the closed-form sum excludes zero")
        if re_acc.radius() <= tolerance:
            return RealBall(re_acc.lo, re_acc.hi, precision_bits)
        working *= 2


def u_series(spec, n_terms: int) -> RealBall:
    """Partial sum of U(k,m)'s defining series with a 2/n_terms tail.

    Slowly convergent; used only to cross-validate u_closed_form.
    """
    spec = _coerce_spec(spec)
    if n_terms < (1 << spec.k):
        raise ValueError("n_terms must be at least one period 2^k")
    prec = 96
    one = 1 << prec
    acc = 0
    for n in range(1, n_terms + 1):
        term = one // n
        if f_periodic(spec.k, n + spec.m) > 0:
            acc += term
        else:
            acc -= term
    scale = Fraction(1, one)
    slop = Fraction(n_terms, one)  # one ulp dropped per term
    tail = Fraction(2, n_terms)
    return RealBall.from_endpoints(
        acc * scale - slop - tail,
        acc * scale + slop + tail,
        prec,
    )


def _tau0_cutoff(target_bits: int):
    """Pick (k, n) with 2^k | n minimizing n subject to the tail bound
    2^{(k-1)(k-2)/2} (k-1)! / prod_{l=1..k} (n+l) <= 2^-target_bits."""
    best = None
    for k in range(2, 64):
        log2_num = (k - 1) * (k - 2) / 2 + math.log2(math.factorial(k - 1))
        log2_n = (log2_num + target_bits) / k
        if log2_n > 48:
            continue
        q = max(1, math.ceil(2 ** log2_n / (1 << k)))
        n = q << k
        while _tau0_tail(k, n) > Fraction(1, 1 << target_bits):
            q += max(1, q // 16)
            n = q << k
        if best is None or n < best[1]:
            best = (k, n)
    if best is None:
        raise ValueError("precision request too large")
    return best


def _tau0_tail(k: int, n: int) -> Fraction:
    num = (1 << ((k - 1) * (k - 2) // 2)) * math.factorial(k - 1)
    den = 1
    for l in range(1, k + 1):
        den *= n + l
    return Fraction(num, den)


_tau0_cache: dict = {}


def tau0(precision_bits: int) -> RealBall:
    """Certified enclosure of the signed-harmonic constant
    sum_{n>=1} epsilon(n-1)/n, radius <= 2^-precision_bits."""
    if precision_bits > (1 << 16):
        raise ValueError("precision_bits must be at most 2^16")
    if precision_bits < 2:
        raise ValueError("precision_bits must be at least 2")
    cached = _tau0_cache.get(precision_bits)
    if cached is not None:
        return cached
    target_bits = precision_bits + 3
    k, n = _tau0_cutoff(target_bits)
    scale_bits = target_bits + n.bit_length() + 4
    one = 1 << scale_bits
    # pairing consecutive terms: epsilon(2t) = epsilon(t),
    # epsilon(2t+1) = -epsilon(t), so terms t give
    # epsilon(t) * (1/(2t+1) - 1/(2t+2)) = epsilon(t)/((2t+1)(2t+2))
    acc = 0
    for t in range(n >> 1):
        term = one // ((2 * t + 1) * (2 * t + 2))
        if t.bit_count() & 1:
            acc -= term
        else:
            acc += term
    slop = Fraction(n >> 1, one)
    tail = _tau0_tail(k, n)
    mid = Fraction(acc, one)
    ball = RealBall.from_endpoints(
        mid - slop - tail, mid + slop + tail, precision_bits + 8)
    ball = RealBall(ball.lo, ball.hi, precision_bits)
    _tau0_cache[precision_bits] = ball
    return ball


def named_oracle(target: TargetNumber):
    """An enclosure oracle (precision_bits -> RealBall) for a symbolic
    target, backed by u_closed_form / tau0 / ball square roots."""
    if isinstance(target, (NamedU, Tau0, SqrtCombo)):
        return target.enclosure
    if isinstance(target, ExactRational):
        raise ValueError("exact rational targets admit exact comparison; "
                         "no oracle is needed")
    raise ValueError(f"unsupported target kind: {type(target).__name__}")
