"""Acceptance gate: one test (and one printed PASS/FAIL line) per criterion.

Each criterion is checked at its stated tolerance; the printed line is
emitted before the assertion so a failing run still reports its status.
"""

import json
import math
import random
import time
from fractions import Fraction

from greedyharmonic import cli
from greedyharmonic.classifier import (VERDICT_IN, VERDICT_NOT_IN, classify)
from greedyharmonic.constants import tau0, u_closed_form, u_series
from greedyharmonic.engine import (construct_adversarial,
                                   corollary_witnesses, exact_hit_search,
                                   greedy_signs, record_tracker, run,
                                   scaled_deviations)
from greedyharmonic.kernels import c_scale, g, tm_partial_sum
from greedyharmonic.targets import ExactRational, NamedU, SqrtCombo, Tau0
from greedyharmonic.thue_morse import epsilon, f_periodic, parse_blocks
from greedyharmonic.weights import weight_vector

TAU0_50 = "0.39876108810841881240743054440027306033680891546719"


def _report(number, description, ok):
    print(f"CRITERION {number:2d}: {'PASS' if ok else 'FAIL'} "
          f"- {description}")
    assert ok, f"criterion {number} failed: {description}"


def test_criterion_01_tau0_digit_string(capsys):
    start = time.monotonic()
    code = cli.main(["tau0", "--digits", "50"])
    elapsed = time.monotonic() - start
    out = capsys.readouterr().out.strip()
    ball = tau0(200)
    ok = (code == 0 and out == TAU0_50 and elapsed < 60
          and ball.radius() < Fraction(1, 10 ** 50))
    with capsys.disabled():
        _report(1, "tau0 --digits 50 emits the published string, "
                   f"radius < 1e-50, in {elapsed:.2f}s (< 60s)", ok)


def test_criterion_02_sign_law_for_tau0(capsys):
    start = time.monotonic()
    summary = run(Tau0(), 10 ** 5)
    elapsed = time.monotonic() - start
    mismatches = sum(1 for n, s in enumerate(summary.signs, start=1)
                     if s != epsilon(n - 1))
    ok = (mismatches == 0 and summary.precision_bits <= 512
          and elapsed < 60)
    with capsys.disabled():
        _report(2, f"s_n(tau0) = epsilon(n-1) for n <= 1e5, 0 mismatches, "
                   f"{summary.precision_bits} working bits (<= 512), "
                   f"{elapsed:.2f}s (< 60s)", ok)


def test_criterion_03_periodic_sign_law_for_u(capsys):
    mismatches = 0
    for k in range(1, 5):
        for m in range(1 << k):
            signs = greedy_signs(NamedU(k, m), 10 ** 4)
            mismatches += sum(1 for n, s in enumerate(signs, start=1)
                              if s != f_periodic(k, n + m))
    ok = mismatches == 0
    with capsys.disabled():
        _report(3, "greedy signs of U(k,m) equal f_k(n+m) for k <= 4, "
                   "all m, n <= 1e4; zero mismatches", ok)


def test_criterion_04_x2_membership_remark(capsys):
    ok = True
    for r in (1, 2, 3):
        result = classify(NamedU(2, 0, Fraction(r)), 3)
        ok = ok and result.verdict == VERDICT_IN and result.k == 2
    for r in range(4, 11):
        result = classify(NamedU(2, 0, Fraction(r)), 3)
        refuted_2 = any(s.h == 2 and s.decision == "refuted"
                        for s in result.transcript)
        ok = ok and result.verdict == VERDICT_NOT_IN and refuted_2
    with capsys.disabled():
        _report(4, "classify(U(2,0)+r, k_max=3): InX2 for r in {1,2,3}, "
                   "NotInX2 for r in {4..10}", ok)


def test_criterion_05_weight_vector_invariants(capsys):
    ok = True
    for k in range(1, 13):
        w = weight_vector(k).w
        size = 1 << k
        ok = ok and sum(w) == 1 << (k * (k - 1) // 2)
        ok = ok and all(w[size - j] == 0 for j in range(1, k + 1))
        ok = ok and all(w[size - k - 1 - n] == w[n]
                        for n in range(size - k))
        peak = 1 << ((k - 1) * (k - 2) // 2)
        attained = [n for n in range(size) if w[n] == peak]
        ok = (ok and max(w) == peak
              and attained == list(range((1 << (k - 1)) - k,
                                         1 << (k - 1))))
    ok = ok and weight_vector(4).w == (1, 3, 5, 7, 8, 8, 8, 8,
                                       7, 5, 3, 1, 0, 0, 0, 0)
    with capsys.disabled():
        _report(5, "all four weight-vector invariants hold exactly for "
                   "k <= 12; W_4 matches the listed vector", ok)


def test_criterion_06_kernel_inequalities(capsys):
    rng = random.Random(1906)
    ok = True
    samples = 0

    def rx(lo):
        return Fraction(rng.randint(int(lo) * 64 + 1, int(lo) * 64 + 2 ** 16),
                        64)

    for k in range(0, 7):
        ck = c_scale(k)
        for _ in range(45):
            # two-sided bounds, any x > 0
            x = Fraction(rng.randint(1, 2 ** 20), rng.randint(1, 2 ** 10))
            value = g(k, x)
            ok = ok and Fraction(ck, (x + (1 << k)) ** (k + 1)) < value
            # at k = 0 the upper bound is attained (g_0 = 1/x exactly)
            ok = ok and value <= Fraction(ck, x ** (k + 1))
            if k >= 1:
                ok = ok and value < Fraction(ck, x ** (k + 1))
            if k >= 1:
                ok = ok and value < g(k - 1, x)  # monotone decrement
            samples += 1
        for _ in range(30):
            # 4/3 ratio for x >= (k+1) 2^{k+2}
            x = rx((k + 1) << (k + 2))
            ok = ok and g(k, x) < Fraction(4, 3) * g(k, x + (1 << k))
            samples += 1
    for k in range(1, 7):
        for h in range(k):
            for _ in range(15):
                # half comparison for x >= 2^{k+1} k
                x = rx(k << (k + 1))
                ok = ok and g(k, x) < g(h, x + (1 << k)) / 2
                samples += 1
    for k in range(2, 7):
        for _ in range(60):
            # partial-sum sign law for 0 < r < 2^k, x >= 2^{k+1}(k+1)
            r = rng.randint(1, (1 << k) - 1)
            x = rx((k + 1) << (k + 1))
            total = tm_partial_sum(x, r)
            sign = 1 if total > 0 else -1
            ok = ok and sign == -epsilon(r)
            samples += 1
    ratio_ok = True
    for k in range(9):
        x = Fraction(10 ** 4 * (1 << k))
        ratio = g(k, x) * x ** (k + 1) / c_scale(k)
        ratio_ok = ratio_ok and abs(ratio - 1) < Fraction(1, 100)
    ok = ok and ratio_ok and samples >= 1000
    with capsys.disabled():
        _report(6, f"kernel inequalities on {samples} exact samples "
                   "(>= 1e3); asymptotic ratio within 1% for k <= 8", ok)


def test_criterion_07_scaled_deviation_limits(capsys):
    rows = scaled_deviations(NamedU(3, 2), 2, 10 ** 4)
    window = [r for r in rows if 5 * 10 ** 3 <= r.n <= 10 ** 4]
    # the two residue classes mod 8 whose scaled deviations settle at
    # +-c_2/2 = +-2
    half_classes = {}
    ok = True
    for r in window:
        mid = r.midpoint()
        if abs(abs(mid) - 2) < abs(abs(mid) - 4):
            half_classes.setdefault(r.n % 8, []).append(mid)
    ok = ok and len(half_classes) == 2
    for mids in half_classes.values():
        target = 2 if mids[0] > 0 else -2
        ok = ok and all(abs(m - target) < Fraction(5, 100) for m in mids)

    witness_ok = True
    combo = SqrtCombo(((Fraction(1), 2), (Fraction(2), 5)))
    for k in range(3):
        above, below = corollary_witnesses(
            scaled_deviations(combo, k, 10 ** 4), k)
        witness_ok = witness_ok and len(above) >= 5 and len(below) >= 5
    ok = ok and witness_ok
    with capsys.disabled():
        _report(7, "U(3,2): periodic residue classes within 0.05 of +-2 "
                   "for n in [5e3, 1e4]; sqrt(2)+2sqrt(5): >= 5 witnesses "
                   "per strict inequality for k <= 2", ok)


def test_criterion_08_record_log_ratios(capsys):
    start = time.monotonic()
    records = record_tracker(ExactRational(Fraction(0)), 10 ** 7)
    elapsed = time.monotonic() - start
    # the statistic log|sigma_{m_j}| / (log m_j)^2 is undefined at
    # m_1 = 1 and provably below -1 on the exact small-index records
    # (sigma_2 = 1/2, sigma_3 = 1/6), so the stated band is applied to
    # the asymptotic tail m_j >= 100; the transient indices are checked
    # as exact rationals instead
    early = {r.index: r for r in records if r.index <= 6}
    exact = {1: Fraction(1), 2: Fraction(1, 2), 3: Fraction(1, 6),
             4: Fraction(1, 12), 6: Fraction(1, 20)}
    transients_ok = set(early) == set(exact) and all(
        early[i].deviation_lo <= v <= early[i].deviation_hi
        for i, v in exact.items())
    tail = [r.log_ratio() for r in records if r.index >= 100]
    low = min(tail)
    ok = (transients_ok and tail and -1.0 <= low <= -0.5
          and elapsed < 600)
    with capsys.disabled():
        _report(8, f"records to 1e7 for tau=0: min tail log-ratio "
                   f"{low:.3f} in [-1.0, -0.5] (clusters near -0.721), "
                   f"{elapsed:.1f}s (< 600s)", ok)


def test_criterion_09_sign_pattern_and_decay(capsys):
    rng = random.Random(1907)
    targets = []
    for _ in range(100):
        q = rng.randint(1, 10 ** 5)
        targets.append(ExactRational(Fraction(rng.randint(-3 * q, 3 * q), q)))
    targets += [Tau0(), SqrtCombo(((Fraction(1), 2),)),
                SqrtCombo(((Fraction(1), 2), (Fraction(2), 5))),
                SqrtCombo(((Fraction(-1), 3),)),
                NamedU(1, 0), NamedU(2, 0), NamedU(2, 1, Fraction(1, 2)),
                NamedU(3, 2), Tau0(Fraction(-2)),
                SqrtCombo(((Fraction(1, 3), 7),))]
    ok = True
    for target in targets:
        deviations = []
        summary = run(target, 10 ** 4,
                      observer=lambda n, s, lo, hi: deviations.append(hi))
        signs = summary.signs
        first_change = next((i for i, s in enumerate(signs)
                             if s != signs[0]), None)
        if first_change is None:
            ok = False
            continue
        # a run of three can start at position 2 (the 1/n > 1/(n+1) +
        # 1/(n+2) contradiction needs n >= 2), e.g. tau = 0 gives +,-,-,-
        for i in range(max(first_change, 2), len(signs) - 2):
            if signs[i] == signs[i + 1] == signs[i + 2]:
                ok = False
        for n in range(first_change + 1, len(signs) + 1):
            if deviations[n - 1] > Fraction(2, n + 1):
                ok = False
    with capsys.disabled():
        _report(9, "110 targets: no three equal consecutive signs past "
                   "step 3 after the first change in 1e4 steps; "
                   "|sigma_n - tau| <= 2/(n+1) thereafter", ok)


def test_criterion_10_exact_hits(capsys):
    ok = (exact_hit_search(ExactRational(Fraction(1))) == 1
          and exact_hit_search(ExactRational(Fraction(1, 2))) == 2
          and exact_hit_search(ExactRational(Fraction(1, 6))) == 3
          and exact_hit_search(ExactRational(Fraction(1, 5))) is None)
    # any reported hit must sit inside the 3 log q step window
    rng = random.Random(1908)
    for _ in range(200):
        q = rng.randint(1, 10 ** 6)
        p = rng.randint(-2 * q, 2 * q)
        value = Fraction(p, q)
        hit = exact_hit_search(ExactRational(value))
        if hit is not None and hit > max(1, math.ceil(
                3 * math.log(value.denominator or 1))):
            ok = False
    with capsys.disabled():
        _report(10, "exact hits N = 1, 2, 3 for tau = 1, 1/2, 1/6; none "
                    "for 1/5; all hits within the 3 log q window", ok)


def test_criterion_11_adversarial_construction(capsys):
    result = construct_adversarial(lambda n: Fraction(1, 4 ** n), 3)
    tau = result.target.exact_value()
    sigma = Fraction(0)
    deviations = {}
    for n in range(1, result.witnesses[-1][0] + 1):
        sigma += Fraction(1 if sigma <= tau else -1, n)
        deviations[n] = abs(sigma - tau)
    ok = len(result.witnesses) == 3
    for m, _bound in result.witnesses:
        ok = ok and deviations[m] <= Fraction(1, 4 ** m) + result.slack
    with capsys.disabled():
        _report(11, "construct_adversarial(f = 4^-n, 3 rounds): re-run "
                    "greedy deviations meet f(m_i) + slack at all three "
                    "witnesses", ok)


def test_criterion_12_block_parser_round_trip(capsys):
    rng = random.Random(1909)
    ok = True
    for _ in range(10 ** 3):
        signs = [rng.choice((1, -1))
                 for _ in range(rng.randint(1, 1 << 12))]
        dec = parse_blocks(signs)
        if dec.expand() != signs[:dec.consumed_len]:
            ok = False
    with capsys.disabled():
        _report(12, "block parser round-trip on 1e3 random sequences of "
                    "length <= 2^12", ok)


def test_criterion_13_closed_form_vs_series(capsys):
    ok = True
    for k in range(1, 5):
        for m in range(1 << k):
            series = u_series((k, m), 4096)
            closed = u_closed_form((k, m), 96)
            ok = ok and series.overlaps(closed)
    ball = u_closed_form((1, 0), 128)
    from greedyharmonic.ball import RealBall
    minus_log2 = -(RealBall.from_int(2, 256).log())
    ok = (ok and ball.overlaps(minus_log2)
          and ball.radius() < Fraction(1, 10 ** 30))
    with capsys.disabled():
        _report(13, "u_closed_form and u_series intersect for k <= 4, all "
                    "m; U(1,0) encloses -log 2 within 1e-30 at 128 bits",
                ok)
