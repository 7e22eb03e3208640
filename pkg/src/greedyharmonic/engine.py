"""Greedy sign iteration: s_{n+1} = +1 if sigma_n <= tau else -1.

Two arithmetic regimes cooperate:

* exact Fractions for rational targets during the short window where an
  exact hit sigma_N = tau is possible (N <= 3 log q for reduced p/q);
  ties resolve to +1 and the hit index is recorded exactly;
* a scaled-integer fixed point afterwards and for irrational targets:
  sigma is an integer S at P fractional bits with a certified error of
  E ulps (one ulp per step from the floored division), the target an
  integer interval [tlo, thi].  A sign is emitted only when the
  enclosures separate; otherwise precision doubles and the state is
  recomputed from the recorded signs.  Irrationality (or the exhausted
  hit window) guarantees separation at some finite precision.

The precision ceiling for escalation is configurable through the
GREEDYHARMONIC_PREC_CEILING environment variable (default 2^20 bits).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetError, DomainError, PrecisionError
from .kernels import c_scale, g
from .targets import ExactRational, TargetNumber

__all__ = [
    "GreedyState",
    "RunSummary",
    "RecordEntry",
    "ScaledDeviation",
    "AdversarialResult",
    "step",
    "run",
    "greedy_signs",
    "exact_hit_search",
    "record_tracker",
    "scaled_deviations",
    "nearest_cluster",
    "corollary_witnesses",
    "nh_sequence",
    "construct_adversarial",
    "presize_precision",
    "precision_ceiling",
]

_DEFAULT_CEILING = 1 << 20


def precision_ceiling() -> int:
    raw = os.environ.get("GREEDYHARMONIC_PREC_CEILING")
    if raw is None:
        return _DEFAULT_CEILING
    value = int(raw)
    if value < 64:
        raise ValueError("precision ceiling must be at least 64 bits")
    return value


def presize_precision(n_max: int) -> int:
    """Working precision expected to decide every comparison up to
    horizon n_max without escalation (deviations shrink roughly like
    exp(-(ln n)^2 / ln 4))."""
    n_max = max(n_max, 2)
    return math.ceil(1.5 * math.log(n_max) ** 2 / math.log(4)) + 64


def _exact_window(value: Fraction) -> int:
    """Steps during which sigma_n = value is still possible."""
    q = value.denominator
    if q == 1:
        return 1
    return max(1, math.ceil(3 * math.log(q)))


def _scaled_target(target: TargetNumber, prec: int):
    """Integer bounds tlo <= tau * 2^prec <= thi."""
    exact = target.exact_value()
    if exact is not None:
        lo = (exact.numerator << prec) // exact.denominator
        hi = lo if lo * exact.denominator == exact.numerator << prec else lo + 1
        return lo, hi
    ball = target.enclosure(prec + 8)
    return ball.scaled_bounds(prec)


class GreedyState:
    """Single-owner iterator over the greedy sign sequence of a target."""

    def __init__(self, target: TargetNumber, precision_bits: int = None,
                 horizon_hint: int = None):
        if not isinstance(target, TargetNumber):
            target = ExactRational(Fraction(target))
        self.target = target
        self.n = 0
        self.signs = []
        self.exact_hit = None
        if precision_bits is None:
            precision_bits = presize_precision(horizon_hint or 4096)
        self.precision_bits = max(64, precision_bits)
        self._exact_value = target.exact_value()
        if self._exact_value is not None:
            self._sigma = Fraction(0)
            self._window = _exact_window(self._exact_value)
        else:
            self._sigma = None
            self._window = 0
            self._init_fixed(self.precision_bits)

    # -- fixed-point plumbing -----------------------------------------

    def _init_fixed(self, prec: int):
        self.precision_bits = prec
        self._one = 1 << prec
        self._tlo, self._thi = _scaled_target(self.target, prec)
        if self._sigma is not None:
            num, den = self._sigma.numerator, self._sigma.denominator
            self._S = (num << prec) // den
            self._E = 0 if self._S * den == num << prec else 1
            self._sigma = None
        else:
            self._S = 0
            self._E = 0
            for m, s in enumerate(self.signs, start=1):
                d = self._one // m
                self._S += d if s > 0 else -d
                self._E += 1

    def _escalate(self):
        ceiling = precision_ceiling()
        new_prec = self.precision_bits * 2
        if new_prec > ceiling:
            raise PrecisionError(
                f"comparison undecided at the {ceiling}-bit ceiling; "
                "the target may coincide with a partial sum")
        self._init_fixed(new_prec)

    # -- stepping ------------------------------------------------------

    def step(self) -> int:
        """Emit s_{n+1} and advance sigma."""
        n_next = self.n + 1
        if self._sigma is not None:
            # exact window for rational targets
            tau = self._exact_value
            sign = 1 if self._sigma <= tau else -1
            self._sigma += Fraction(sign, n_next)
            self.n = n_next
            self.signs.append(sign)
            if self._sigma == tau and self.exact_hit is None:
                self.exact_hit = n_next
            if self.n >= self._window + 1:
                self._init_fixed(self.precision_bits)
            return sign
        while True:
            if self._S + self._E <= self._tlo:
                sign = 1
                break
            if self._S - self._E > self._thi:
                sign = -1
                break
            self._escalate()
        d = self._one // n_next
        self._S += d if sign > 0 else -d
        self._E += 1
        self.n = n_next
        self.signs.append(sign)
        return sign

    # -- inspection ------------------------------------------------------

    def sigma_bounds(self):
        """Exact rational bounds (lo, hi) enclosing sigma_n."""
        if self._sigma is not None:
            return self._sigma, self._sigma
        return (Fraction(self._S - self._E, self._one),
                Fraction(self._S + self._E, self._one))

    def deviation_bounds(self):
        """Exact rational bounds enclosing |sigma_n - tau|."""
        if self._sigma is not None:
            dev = abs(self._sigma - self._exact_value)
            return dev, dev
        lo = self._S - self._E - self._thi
        hi = self._S + self._E - self._tlo
        if lo > 0:
            bounds = (lo, hi)
        elif hi < 0:
            bounds = (-hi, -lo)
        else:
            bounds = (0, max(-lo, hi))
        return (Fraction(bounds[0], self._one),
                Fraction(bounds[1], self._one))


def step(state: GreedyState):
    """Functional facade over GreedyState.step."""
    sign = state.step()
    return sign, state


@dataclass(frozen=True)
class RunSummary:
    n_steps: int
    signs: tuple
    sigma_lo: Fraction
    sigma_hi: Fraction
    exact_hit: int | None
    precision_bits: int


def run(target, n_max: int, observer=None, precision_bits: int = None
        ) -> RunSummary:
    """Drive the iterator n_max steps, streaming
    (n, sign, deviation_lo, deviation_hi) to the observer if given."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    state = GreedyState(target, precision_bits=precision_bits,
                        horizon_hint=n_max)
    for _ in range(n_max):
        sign = state.step()
        if observer is not None:
            dev_lo, dev_hi = state.deviation_bounds()
            observer(state.n, sign, dev_lo, dev_hi)
    sigma_lo, sigma_hi = state.sigma_bounds()
    return RunSummary(state.n, tuple(state.signs), sigma_lo, sigma_hi,
                      state.exact_hit, state.precision_bits)


def greedy_signs(target, n_max: int, precision_bits: int = None) -> list:
    return list(run(target, n_max, precision_bits=precision_bits).signs)


def exact_hit_search(target) -> int | None:
    """The unique N with sigma_N = tau, if any (rational targets only).

    Simulates exactly for max(1, ceil(3 ln q)) steps, the window beyond
    which hits are impossible for reduced p/q.
    """
    if isinstance(target, TargetNumber):
        value = target.exact_value()
        if value is None:
            raise DomainError("exact hits exist only for rational targets")
    else:
        value = Fraction(target)
    bound = _exact_window(value)
    sigma = Fraction(0)
    for n in range(1, bound + 1):
        sigma += Fraction(1 if sigma <= value else -1, n)
        if sigma == value:
            return n
    return None


@dataclass(frozen=True)
class RecordEntry:
    index: int
    deviation_lo: Fraction
    deviation_hi: Fraction

    def log_ratio(self) -> float:
        """log|sigma - tau| / (log index)^2 from the enclosure midpoint."""
        if self.index == 1:
            return float("nan")  # log(1)^2 = 0: the statistic is undefined
        mid = (self.deviation_lo + self.deviation_hi) / 2
        return _log_fraction(mid) / math.log(self.index) ** 2


def _log_fraction(x: Fraction) -> float:
    if x <= 0:
        return float("-inf")
    return (_log_int(x.numerator) - _log_int(x.denominator))


def _log_int(n: int) -> float:
    bl = n.bit_length()
    if bl <= 900:
        return math.log(n)
    top = n >> (bl - 64)
    return math.log(top) + (bl - 64) * math.log(2)


def record_tracker(target, n_max: int, precision_bits: int = None) -> list:
    """Every n where |sigma_n - tau| is certifiably a new strict minimum."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if not isinstance(target, TargetNumber):
        target = ExactRational(Fraction(target))
    prec = max(64, precision_bits or presize_precision(n_max))
    ceiling = max(precision_ceiling(), prec)
    while True:
        records = _record_attempt(target, n_max, prec)
        if records is not None:
            return records
        prec *= 2
        if prec > ceiling:
            raise PrecisionError(
                "record comparison undecided at the precision ceiling")


def _record_attempt(target, n_max, prec):
    one = 1 << prec
    records = []
    exact = target.exact_value()
    sigma = Fraction(0)
    best = None
    n = 0
    if exact is not None:
        window = min(_exact_window(exact) + 1, n_max)
        while n < window:
            n += 1
            sigma += Fraction(1 if sigma <= exact else -1, n)
            dev = abs(sigma - exact)
            if best is None or dev < best:
                records.append(RecordEntry(n, dev, dev))
                best = dev
                if dev == 0:
                    return records  # nothing can beat an exact hit
        S = (sigma.numerator << prec) // sigma.denominator
        E = 0 if S * sigma.denominator == sigma.numerator << prec else 1
    else:
        S = 0
        E = 0
    tlo, thi = _scaled_target(target, prec)
    if best is None:
        best_lo, best_hi = None, None
    else:
        best_lo = (best.numerator << prec) // best.denominator
        best_hi = -((-best.numerator << prec) // best.denominator)
    while n < n_max:
        # decide s_{n+1}
        if S + E <= tlo:
            sign = 1
        elif S - E > thi:
            sign = -1
        else:
            return None
        n += 1
        d = one // n
        S = S + d if sign > 0 else S - d
        E += 1
        lo = S - E - thi
        hi = S + E - tlo
        if lo > 0:
            dev_lo, dev_hi = lo, hi
        elif hi < 0:
            dev_lo, dev_hi = -hi, -lo
        else:
            dev_lo, dev_hi = 0, max(-lo, hi)
        if best_lo is None:
            pass  # first step is a record vacuously
        elif dev_hi < best_lo:
            pass  # certified new minimum
        elif dev_lo >= best_hi:
            continue  # certified not a record
        else:
            return None  # ambiguous; escalate
        records.append(RecordEntry(n, Fraction(dev_lo, one),
                                   Fraction(dev_hi, one)))
        best_lo, best_hi = dev_lo, dev_hi
    return records


@dataclass(frozen=True)
class ScaledDeviation:
    n: int
    lo: Fraction
    hi: Fraction

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def radius(self) -> Fraction:
        return (self.hi - self.lo) / 2


def scaled_deviations(target, k: int, n_max: int,
                      precision_bits: int = None) -> list:
    """Enclosures of (sigma_n - tau) * n^{k+1} for n = 1..n_max."""
    if not 0 <= k <= 8:
        raise ValueError("k must be in [0, 8]")
    rows = []
    state = GreedyState(target, precision_bits=precision_bits,
                        horizon_hint=n_max)
    exact = state.target.exact_value()
    t_lo = t_hi = exact
    t_prec = None
    for _ in range(n_max):
        state.step()
        n = state.n
        sig_lo, sig_hi = state.sigma_bounds()
        if exact is None and t_prec != state.precision_bits:
            t_prec = state.precision_bits
            ball = state.target.enclosure(t_prec + 8)
            t_lo, t_hi = ball.lo_fraction(), ball.hi_fraction()
        scale = n ** (k + 1)
        rows.append(ScaledDeviation(n, (sig_lo - t_hi) * scale,
                                    (sig_hi - t_lo) * scale))
    return rows


_CLUSTER_LABELS = ("0", "+ck", "-ck", "+ck/2", "-ck/2")


def nearest_cluster(value: Fraction, k: int) -> str:
    """Label of the nearest limit point among {0, +-c_k, +-c_k/2}."""
    ck = c_scale(k)
    points = (0, ck, -ck, Fraction(ck, 2), Fraction(-ck, 2))
    best = min(range(len(points)), key=lambda i: abs(value - points[i]))
    return _CLUSTER_LABELS[best]


def corollary_witnesses(rows, k: int):
    """Indices certifying the two strict inequalities
    0 < (sigma_n - tau) n^{k+1} < c_k and 0 < (tau - sigma_n) n^{k+1} < c_k."""
    ck = c_scale(k)
    above = [r.n for r in rows if r.lo > 0 and r.hi < ck]
    below = [r.n for r in rows if r.hi < 0 and r.lo > -ck]
    return above, below


def nh_sequence(target, h_max: int, step_budget: int = 1 << 20,
                precision_bits: int = None) -> list:
    """n_h = least n >= 2^h * h with |tau - sigma_{n-1}| < g_{h-1}(n),
    for h = 1..h_max.  The caller asserts the target is irrational and
    has no eventually-periodic sign tail."""
    if not isinstance(target, TargetNumber):
        target = ExactRational(Fraction(target))
    if target.is_rational:
        raise DomainError("nh_sequence requires an irrational target")
    if h_max < 1:
        raise ValueError("h_max must be positive")
    prec = max(64, precision_bits or 256)
    ceiling = max(precision_ceiling(), prec)
    while True:
        out = _nh_attempt(target, h_max, step_budget, prec)
        if out is not None:
            return out
        prec *= 2
        if prec > ceiling:
            raise PrecisionError(
                "n_h comparison undecided at the precision ceiling")


def _nh_attempt(target, h_max, step_budget, prec):
    one = 1 << prec
    tlo, thi = _scaled_target(target, prec)
    S = 0
    E = 0
    results = []
    h = 1
    n = 1
    while n <= step_budget:
        # sigma_{n-1} is current; test pending h at index n
        while h <= h_max and n >= (1 << h) * h:
            lo = S - E - thi
            hi = S + E - tlo
            if lo > 0:
                dev_lo, dev_hi = lo, hi
            elif hi < 0:
                dev_lo, dev_hi = -hi, -lo
            else:
                dev_lo, dev_hi = 0, max(-lo, hi)
            bound = g(h - 1, Fraction(n))
            # dev < bound iff dev_hi/2^prec < bound (certified)
            if dev_hi * bound.denominator < bound.numerator * one:
                results.append(n)
                h += 1
            elif dev_lo * bound.denominator >= bound.numerator * one:
                break
            else:
                return None
        if h > h_max:
            return results
        # advance sigma_{n-1} -> sigma_n
        if S + E <= tlo:
            sign = 1
        elif S - E > thi:
            sign = -1
        else:
            return None
        d = one // n
        S = S + d if sign > 0 else S - d
        E += 1
        n += 1
    raise BudgetError(f"n_h search exhausted the budget of {step_budget} steps "
                      f"with {len(results)} of {h_max} indices found")


@dataclass(frozen=True)
class AdversarialResult:
    target: ExactRational
    witnesses: tuple  # of (m_i, certified bound as Fraction)
    slack: Fraction


def construct_adversarial(f, i_max: int,
                          search_budget: int = 1 << 18) -> AdversarialResult:
    """A rational target whose greedy deviations at chosen indices m_i
    beat the prescribed envelope f.

    f is clamped to F(1) = min(f(1), 1/2), F(n) = min(f(n), F(n-1)/5) so
    that F(n+1) < F(n)/4 holds.  Each round runs the greedy process on
    the current tau exactly and looks for a later index q whose
    deviation is a strict record below F(m_i)/8 and whose partial sum
    lies in the interval of targets sharing the sign prefix; the next
    tau is placed just above sigma_q inside that interval.  The returned
    center tau satisfies |tau - sigma_{m_i}(tau)| <= F(m_i) <= f(m_i)
    for every witness; slack = F(m_last)/2 bounds the distance to the
    limiting target of the infinite iteration.
    """
    if i_max < 1:
        raise ValueError("i_max must be positive")

    clamped = {}

    def envelope(n: int) -> Fraction:
        if n in clamped:
            return clamped[n]
        if n == 1:
            value = min(Fraction(f(1)), Fraction(1, 2))
        else:
            value = min(Fraction(f(n)), envelope(n - 1) / 5)
        if value <= 0:
            raise ValueError("f must be strictly positive")
        clamped[n] = value
        return value

    m_list = [1]
    tau = 1 + envelope(1) / 4
    for _ in range(i_max - 1):
        m_i = m_list[-1]
        q, sigma_q, interval_hi = _adversarial_search(
            tau, m_i, envelope(m_i) / 8, search_budget)
        room = envelope(q) / 2
        if interval_hi is not None:
            room = min(room, interval_hi - sigma_q)
        tau = sigma_q + room / 2
        m_list.append(q)
    witnesses = tuple((m, envelope(m)) for m in m_list)
    return AdversarialResult(ExactRational(tau), witnesses,
                             envelope(m_list[-1]) / 2)


def _adversarial_search(tau: Fraction, m_i: int, threshold: Fraction,
                        budget: int):
    """First q > m_i whose deviation is a strict record below threshold
    with sigma_q inside the prefix-compatible target interval.

    All state is kept as integer numerators over a common denominator
    (an lcm of the step range times tau's denominator), grown in chunks,
    so the loop is pure integer arithmetic.
    """
    cap = 4096
    den = math.lcm(math.lcm(*range(1, cap + 1)), tau.denominator)
    tau_num = tau.numerator * (den // tau.denominator)
    thr_f = threshold
    thr_floor = (thr_f.numerator * den) // thr_f.denominator
    sigma = 0
    best = None  # strict running minimum of |sigma_n - tau| (numerator)
    lo_run = None  # max sigma_{n-1} over +1 steps (numerator)
    hi_run = None  # min sigma_{n-1} over -1 steps (numerator)
    lo_mi = hi_mi = None
    n = 0
    while n < budget:
        if n == cap:
            new_cap = cap * 2
            new_den = math.lcm(den, math.lcm(*range(cap + 1, new_cap + 1)))
            factor = new_den // den
            den = new_den
            tau_num *= factor
            sigma *= factor
            thr_floor = (thr_f.numerator * den) // thr_f.denominator
            if best is not None:
                best *= factor
            if lo_run is not None:
                lo_run *= factor
            if hi_run is not None:
                hi_run *= factor
            if lo_mi is not None:
                lo_mi *= factor
            if hi_mi is not None:
                hi_mi *= factor
            cap = new_cap
        n += 1
        prev = sigma
        if prev <= tau_num:
            sigma = prev + den // n
            if lo_run is None or prev > lo_run:
                lo_run = prev
        else:
            sigma = prev - den // n
            if hi_run is None or prev < hi_run:
                hi_run = prev
        if n == m_i:
            lo_mi, hi_mi = lo_run, hi_run
        dev = abs(sigma - tau_num)
        is_record = best is None or dev < best
        if is_record:
            best = dev
        if (n > m_i and is_record and dev <= thr_floor
                and _exactly_below(dev, den, thr_f)):
            lo_candidates = [v for v in (lo_mi, lo_run) if v is not None]
            lo_all = max(lo_candidates) if lo_candidates else None
            hi_candidates = [v for v in (hi_mi, hi_run) if v is not None]
            hi_all = min(hi_candidates) if hi_candidates else None
            inside = ((lo_all is None or sigma >= lo_all)
                      and (hi_all is None or sigma < hi_all))
            if inside:
                sigma_q = Fraction(sigma, den)
                interval_hi = (None if hi_all is None
                               else Fraction(hi_all, den))
                return n, sigma_q, interval_hi
    raise BudgetError(
        f"adversarial search exhausted {budget} steps below m={m_i}")


def _exactly_below(dev_num: int, den: int, threshold: Fraction) -> bool:
    return dev_num * threshold.denominator < threshold.numerator * den
