"""Decision procedure for membership in the exceptional sets X_k.

A target tau lies in X_k when its greedy sign sequence ends in the
periodic repetition of the block B_k, i.e. s_n = f_k(n + m) for all
n >= N.  For each level h the procedure locates the first index
N_h >= 2^{h+2}(h+2) whose sign window equals B_h; from such an index
the whole remaining sequence tiles into +-B_h blocks, so tau is in X_h
if and only if the candidate identity

    tau = U(h, m_h) + sum_{1 <= n < N_h} (s_n - f_h(n + m_h)) / n,

holds, where m_h = (-N_h) mod 2^h.  The identity is confirmed only
symbolically: the target must name U(h, m_h) plus a rational offset
equal to the exact correction sum.  It is refuted numerically by an
enclosure of the gap that excludes zero.  When neither happens before
the precision ceiling, the verdict is UndeterminedAtPrecision: finite
precision can never certify equality of two unrelated reals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .ball import RealBall
from .constants import u_closed_form
from .engine import GreedyState, precision_ceiling
from .errors import BudgetError
from .targets import NamedU, TargetNumber
from .thue_morse import block, f_periodic

__all__ = [
    "SeparationGap",
    "ClassificationStep",
    "ClassificationResult",
    "classify",
    "first_block_index",
    "VERDICT_IN",
    "VERDICT_NOT_IN",
    "VERDICT_UNDETERMINED",
    "VERDICT_RATIONAL",
]

VERDICT_IN = "InXk"
VERDICT_NOT_IN = "NotInXk"
VERDICT_UNDETERMINED = "UndeterminedAtPrecision"
VERDICT_RATIONAL = "RationalTarget"


@dataclass(frozen=True)
class SeparationGap:
    """Enclosure of G = tau - U(h, m_h) - correction, used as refutation
    evidence only when it excludes zero."""
    value: RealBall


@dataclass(frozen=True)
class ClassificationStep:
    h: int
    n_onset: int
    phase: int
    correction: Fraction
    decision: str  # "confirmed" | "refuted" | "undetermined"
    gap: RealBall | None


@dataclass(frozen=True)
class ClassificationResult:
    verdict: str
    k: int | None
    m: int | None
    n_onset: int | None
    gap: RealBall | None
    transcript: tuple


def _block_floor(h: int) -> int:
    return (1 << (h + 2)) * (h + 2)


def _find_block(state: GreedyState, h: int, n_floor: int,
                n_budget: int) -> int:
    """First N >= n_floor with (s_n)_{N <= n < N + 2^h} = B_h, advancing
    the shared greedy stream as needed."""
    b = block(h)
    width = 1 << h
    n = max(1, n_floor)
    while True:
        end = n + width - 1
        if end > n_budget:
            raise BudgetError(
                f"no B_{h} block found at indices <= {n_budget}")
        while state.n < end:
            state.step()
        signs = state.signs
        hit = True
        for i in range(width):
            if signs[n - 1 + i] != b[i]:
                n += 1
                hit = False
                break
        if hit:
            return n


def first_block_index(target, h: int, n_floor: int = None,
                      n_budget: int = 1 << 20) -> int:
    """Minimal N >= n_floor where the emitted signs match B_h.

    n_floor defaults to the classifier's level floor 2^{h+2}(h+2).
    Raises BudgetError when no match starts at an index <= n_budget.
    """
    if h < 1:
        raise ValueError("level must be positive")
    if n_floor is None:
        n_floor = _block_floor(h)
    state = GreedyState(target, horizon_hint=max(4096, 2 * n_floor))
    return _find_block(state, h, n_floor, n_budget)


def _correction(signs, h: int, n_onset: int, phase: int) -> Fraction:
    """Exact value of sum_{1 <= n < n_onset} (s_n - f_h(n + phase)) / n."""
    total = Fraction(0)
    for n in range(1, n_onset):
        diff = signs[n - 1] - f_periodic(h, n + phase)
        if diff:
            total += Fraction(diff, n)
    return total


def _gap_ball(target: TargetNumber, h: int, phase: int,
              correction: Fraction, max_precision: int):
    """Enclosure of tau - U(h, phase) - correction, escalated until it
    excludes zero or the ceiling is reached.  Returns (ball, decided)."""
    prec = 64
    while True:
        gap = (target.enclosure(prec)
               - u_closed_form((h, phase), prec)
               - correction)
        if not gap.contains_zero():
            return gap, True
        if prec >= max_precision:
            return gap, False
        prec = min(2 * prec, max_precision)


def classify(target: TargetNumber, k_max: int, step_budget: int = 1 << 20,
             max_precision: int = None) -> ClassificationResult:
    """Decide membership of an irrational target in X_1, ..., X_{k_max}.

    Rational targets are not in any X_k (the X_k are rational translates
    of the irrational constants U(k, m)) and get a dedicated verdict.
    Raises BudgetError, with the partial transcript attached, when a
    block search exhausts step_budget.
    """
    if k_max < 1:
        raise ValueError("k_max must be positive")
    if not isinstance(target, TargetNumber):
        raise TypeError("classify expects a TargetNumber")
    if target.is_rational:
        return ClassificationResult(VERDICT_RATIONAL, None, None, None,
                                    None, ())
    if max_precision is None:
        max_precision = precision_ceiling()
    state = GreedyState(target, horizon_hint=4096)
    steps = []
    last_gap = None
    for h in range(1, k_max + 1):
        try:
            n_onset = _find_block(state, h, _block_floor(h), step_budget)
        except BudgetError as exc:
            exc.transcript = tuple(steps)
            raise
        phase = (-n_onset) % (1 << h)
        correction = _correction(state.signs, h, n_onset, phase)
        if (isinstance(target, NamedU) and target.k == h
                and target.m == phase):
            diff = target.offset - correction
            if diff == 0:
                steps.append(ClassificationStep(
                    h, n_onset, phase, correction, "confirmed", None))
                return ClassificationResult(VERDICT_IN, h, phase, n_onset,
                                            None, tuple(steps))
            # same symbolic coset, rationally shifted: the gap is exact
            gap = RealBall.from_fraction(diff, 64)
            decided = True
        else:
            gap, decided = _gap_ball(target, h, phase, correction,
                                     max_precision)
        if not decided:
            steps.append(ClassificationStep(
                h, n_onset, phase, correction, "undetermined", gap))
            return ClassificationResult(VERDICT_UNDETERMINED, h, phase,
                                        n_onset, gap, tuple(steps))
        steps.append(ClassificationStep(
            h, n_onset, phase, correction, "refuted", gap))
        last_gap = gap
    last = steps[-1]
    return ClassificationResult(VERDICT_NOT_IN, k_max, last.phase,
                                last.n_onset, last_gap, tuple(steps))


def n1_bound(tau_abs_upper: float) -> int:
    """The a priori bound N_1 <= max(24, e^{|tau|} + 2) on the first
    B_1 window (every greedy sequence changes sign by then)."""
    return max(24, math.ceil(math.exp(tau_abs_upper)) + 2)
