"""Command-line surface emitting CSV/JSON data for the diagnostics.

Subcommands:

  greedy       stream signs and certified deviation enclosures
  exponent     convergence exponent -log|sigma_n - tau| / log n per step
  records      indices of certified new deviation minima and log-ratios
  limits       scaled deviations (sigma_n - tau) n^{k+1} with cluster labels
  classify     exceptional-set membership verdict as a JSON document
  uconst       decimal enclosure of the series constant U(k, m)
  tau0         certified decimal digits of the signed-harmonic constant
  fabius       exact sampled derivative profile of the k-th approximant
  blocks       block decomposition of a +-1 sign prefix
  adversarial  rational target with prescribed closeness witnesses
  exact-hit    the unique step with sigma_N = tau, if any

Exit codes: 0 success, 2 usage/malformed input, 3 budget or precision
exhaustion.  No subcommand uses randomness; output is deterministic.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import constants, engine, thue_morse, weights
from .classifier import classify
from .errors import (BudgetError, DomainError, InconsistencyError,
                     PrecisionError, ResourceLimitError)
from .targets import parse_target

__all__ = ["RunConfig", "main"]


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    target: str | None
    n_max: int | None
    k: int | None
    precision_bits: int | None
    output: str | None
    format: str


# -- numeric formatting ------------------------------------------------

def _sci(value: Fraction) -> str:
    """Scientific decimal with 17 significant digits, exact-rational in."""
    value = Fraction(value)
    if value == 0:
        return "0"
    sign = "-" if value < 0 else ""
    mag = abs(value)
    e10 = math.floor((mag.numerator.bit_length()
                      - mag.denominator.bit_length()) * math.log10(2))
    mant = mag / Fraction(10) ** e10
    while mant >= 10:
        mant /= 10
        e10 += 1
    while mant < 1:
        mant *= 10
        e10 -= 1
    digits = str(int(mant * 10 ** 16))
    return f"{sign}{digits[0]}.{digits[1:]}e{e10:+03d}"


def _exact_decimal(value: Fraction) -> str:
    """Exact decimal string; the denominator must be of the form 2^a 5^b."""
    value = Fraction(value)
    den = value.denominator
    a = b = 0
    while den % 2 == 0:
        den //= 2
        a += 1
    while den % 5 == 0:
        den //= 5
        b += 1
    if den != 1:
        raise ValueError("value has no finite decimal expansion")
    places = max(a, b)
    scaled = abs(value) * 10 ** places
    sign = "-" if value < 0 else ""
    if places == 0:
        return f"{sign}{scaled.numerator}"
    q, r = divmod(scaled.numerator, 10 ** places)
    return f"{sign}{q}.{r:0{places}d}"


def _enclosure_digits(lo: Fraction, hi: Fraction, digits: int) -> str:
    """Decimal truncation certified by the enclosure: both endpoints
    must land in the same 10^-digits cell."""
    scale = 10 ** digits
    cell = math.floor(lo * scale)
    if cell != math.floor(hi * scale):
        raise PrecisionError(
            f"{digits} digits are not certified by the enclosure")
    sign = "-" if cell < 0 else ""
    q, r = divmod(abs(cell), scale)
    return f"{sign}{q}.{r:0{digits}d}"


def _json_number(value) -> float | None:
    try:
        out = float(value)
    except (OverflowError, ValueError):
        return None
    return out if math.isfinite(out) else None


# -- row emission ------------------------------------------------------

def _emit(config: RunConfig, header: list, rows) -> None:
    stream = (open(config.output, "w", encoding="utf-8")
              if config.output else sys.stdout)
    try:
        if config.format == "json":
            doc = [dict(zip(header, row)) for row in rows]
            json.dump(doc, stream, indent=2)
            stream.write("\n")
        else:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    finally:
        if config.output:
            stream.close()


def _emit_text(config: RunConfig, text: str) -> None:
    if config.output:
        with open(config.output, "w", encoding="utf-8") as stream:
            stream.write(text + "\n")
    else:
        print(text)


# -- subcommand handlers -----------------------------------------------

def _cmd_greedy(config: RunConfig, args) -> int:
    target = parse_target(config.target)
    rows = []

    def observer(n, sign, dev_lo, dev_hi):
        rows.append((n, sign, _sci((dev_lo + dev_hi) / 2),
                     _sci((dev_hi - dev_lo) / 2)))

    engine.run(target, config.n_max, observer=observer,
               precision_bits=config.precision_bits)
    _emit(config, ["n", "sign", "abs_err_mid", "abs_err_rad"], rows)
    return 0


def _cmd_exponent(config: RunConfig, args) -> int:
    target = parse_target(config.target)
    rows = []

    def observer(n, sign, dev_lo, dev_hi):
        if n < 2:
            return
        mid = (dev_lo + dev_hi) / 2
        if mid > 0:
            exponent = -engine._log_fraction(mid) / math.log(n)
        else:
            exponent = float("inf")
        rows.append((n, repr(exponent), _sci(mid),
                     _sci((dev_hi - dev_lo) / 2)))

    engine.run(target, config.n_max, observer=observer,
               precision_bits=config.precision_bits)
    _emit(config, ["n", "exponent", "abs_err_mid", "abs_err_rad"], rows)
    return 0


def _cmd_records(config: RunConfig, args) -> int:
    target = parse_target(config.target)
    entries = engine.record_tracker(target, config.n_max,
                                    precision_bits=config.precision_bits)
    rows = [(j, e.index, repr(e.log_ratio()),
             _sci((e.deviation_lo + e.deviation_hi) / 2),
             _sci((e.deviation_hi - e.deviation_lo) / 2))
            for j, e in enumerate(entries, start=1)]
    _emit(config, ["j", "m_j", "log_ratio", "abs_err_mid", "abs_err_rad"],
          rows)
    return 0


def _cmd_limits(config: RunConfig, args) -> int:
    target = parse_target(config.target)
    data = engine.scaled_deviations(target, config.k, config.n_max,
                                    precision_bits=config.precision_bits)
    rows = [(r.n, _sci(r.midpoint()), _sci(r.radius()),
             engine.nearest_cluster(r.midpoint(), config.k))
            for r in data]
    _emit(config, ["n", "scaled_mid", "scaled_rad", "nearest_cluster"],
          rows)
    return 0


def _ball_fields(ball):
    if ball is None:
        return None, None
    return (_json_number(ball.midpoint()), _json_number(ball.radius()))


def _cmd_classify(config: RunConfig, args) -> int:
    target = parse_target(config.target)
    result = classify(target, args.k_max, step_budget=args.step_budget,
                      max_precision=config.precision_bits)
    gap_mid, gap_rad = _ball_fields(result.gap)
    steps = []
    for s in result.transcript:
        smid, srad = _ball_fields(s.gap)
        steps.append({
            "h": s.h, "N": s.n_onset, "m": s.phase,
            "correction": (f"{s.correction.numerator}"
                           f"/{s.correction.denominator}"),
            "decision": s.decision,
            "gap_midpoint": smid, "gap_radius": srad,
        })
    doc = {
        "verdict": result.verdict,
        "k": result.k, "m": result.m, "N": result.n_onset,
        "gap_midpoint": gap_mid, "gap_radius": gap_rad,
        "steps": steps,
    }
    _emit_text(config, json.dumps(doc, indent=2))
    return 0


def _cmd_uconst(config: RunConfig, args) -> int:
    prec = config.precision_bits or max(64, 4 * args.digits + 32)
    ball = constants.u_closed_form((config.k, args.m), prec)
    text = _enclosure_digits(ball.lo_fraction(), ball.hi_fraction(),
                             args.digits)
    _emit_text(config, f"{text} +/- {_sci(ball.radius())}")
    return 0


def _cmd_tau0(config: RunConfig, args) -> int:
    prec = config.precision_bits or (int(args.digits * 3.33) + 16)
    while True:
        ball = constants.tau0(prec)
        try:
            text = _enclosure_digits(ball.lo_fraction(), ball.hi_fraction(),
                                     args.digits)
            break
        except PrecisionError:
            if prec >= (1 << 16):
                raise
            prec = min(2 * prec, 1 << 16)
    _emit_text(config, text)
    return 0


def _cmd_fabius(config: RunConfig, args) -> int:
    rows = [(_exact_decimal(x), _exact_decimal(fp))
            for x, fp in weights.fabius_profile(config.k)]
    _emit(config, ["x", "fprime"], rows)
    return 0


def _parse_signs(text: str) -> list:
    text = text.strip()
    if "," in text or "1" in text:
        pieces = text.replace(",", " ").split()
        return [int(p) for p in pieces]
    return [1 if ch == "+" else -1 for ch in text if ch in "+-"]


def _cmd_blocks(config: RunConfig, args) -> int:
    signs = _parse_signs(args.signs)
    if not signs or any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be a nonempty +-1 sequence")
    decomposition = thue_morse.parse_blocks(signs)
    doc = {
        "entries": [{"sign": s, "level": k}
                    for s, k in decomposition.entries],
        "consumed_len": decomposition.consumed_len,
    }
    _emit_text(config, json.dumps(doc, indent=2))
    return 0


def _cmd_adversarial(config: RunConfig, args) -> int:
    base = args.base
    if base < 2:
        raise ValueError("decay base must be at least 2")
    result = engine.construct_adversarial(
        lambda n: Fraction(1, base ** n), args.rounds)
    tau = result.target.exact_value()
    doc = {
        "target": f"{tau.numerator}/{tau.denominator}",
        "witnesses": [{"m": m,
                       "bound": f"{b.numerator}/{b.denominator}"}
                      for m, b in result.witnesses],
        "slack": (f"{result.slack.numerator}"
                  f"/{result.slack.denominator}"),
    }
    _emit_text(config, json.dumps(doc, indent=2))
    return 0


def _cmd_exact_hit(config: RunConfig, args) -> int:
    target = parse_target(config.target)
    hit = engine.exact_hit_search(target)
    _emit_text(config, "none" if hit is None else str(hit))
    return 0


# -- argument parsing --------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greedyharmonic",
        description="greedy signed-harmonic approximation diagnostics")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, target=True, n_max=False, k=False):
        if target:
            p.add_argument("--target", required=True,
                           help="p/q, d.ddd, u:k:m[+p/q], tau0[+p/q], "
                                "sqrt:c1:r1[,c2:r2...][+p/q]")
        if n_max:
            p.add_argument("--n-max", type=int, required=True)
        if k:
            p.add_argument("--k", type=int, required=True)
        p.add_argument("--precision-bits", type=int, default=None)
        p.add_argument("--output", default=None)
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    common(sub.add_parser("greedy", help="stream signs and deviations"),
           n_max=True)
    common(sub.add_parser("exponent", help="convergence exponent rows"),
           n_max=True)
    common(sub.add_parser("records", help="certified deviation minima"),
           n_max=True)
    common(sub.add_parser("limits", help="scaled-deviation clusters"),
           n_max=True, k=True)

    p = sub.add_parser("classify", help="exceptional-set membership")
    common(p)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--step-budget", type=int, default=1 << 20)

    p = sub.add_parser("uconst", help="decimal enclosure of U(k, m)")
    common(p, target=False, k=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--digits", type=int, default=30)

    p = sub.add_parser("tau0", help="certified digits of tau0")
    common(p, target=False)
    p.add_argument("--digits", type=int, default=50)

    common(sub.add_parser("fabius", help="sampled derivative profile"),
           target=False, k=True)

    p = sub.add_parser("blocks", help="block parse of a sign prefix")
    common(p, target=False)
    p.add_argument("--signs", required=True,
                   help="e.g. '+-+--+' or '1,-1,1,-1'")

    p = sub.add_parser("adversarial", help="prescribed-closeness target")
    common(p, target=False)
    p.add_argument("--base", type=int, default=4,
                   help="decay base b in f(n) = b^-n")
    p.add_argument("--rounds", type=int, default=3)

    common(sub.add_parser("exact-hit", help="step with sigma_N = tau"))
    return parser


_HANDLERS = {
    "greedy": _cmd_greedy,
    "exponent": _cmd_exponent,
    "records": _cmd_records,
    "limits": _cmd_limits,
    "classify": _cmd_classify,
    "uconst": _cmd_uconst,
    "tau0": _cmd_tau0,
    "fabius": _cmd_fabius,
    "blocks": _cmd_blocks,
    "adversarial": _cmd_adversarial,
    "exact-hit": _cmd_exact_hit,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code or 0
    precision = getattr(args, "precision_bits", None)
    if precision is not None and precision < 64:
        print("error: --precision-bits must be at least 64",
              file=sys.stderr)
        return 2
    n_max = getattr(args, "n_max", None)
    if n_max is not None and n_max < 1:
        print("error: --n-max must be at least 1", file=sys.stderr)
        return 2
    config = RunConfig(
        subcommand=args.subcommand,
        target=getattr(args, "target", None),
        n_max=n_max,
        k=getattr(args, "k", None),
        precision_bits=precision,
        output=getattr(args, "output", None),
        format=getattr(args, "format", "csv"),
    )
    try:
        return _HANDLERS[args.subcommand](config, args)
    except (ValueError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BudgetError, PrecisionError, ResourceLimitError,
            InconsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
