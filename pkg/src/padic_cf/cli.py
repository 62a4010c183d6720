"""Command-line interface: expand, orbit, census, verify.

Exit codes: 0 success, 2 invalid input, 3 step cap exceeded,
4 verification failure (an exact identity did not hold).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .algorithms import ALGORITHMS, SCHNEIDER, choose_map
from .engine import (
    CFExpansion,
    EventuallyPeriodic,
    Finite,
    Truncated,
    _pure_raw,
    convergents,
    expand,
    hensel_orbit,
    schneider_expand,
    verify_convergence,
)
from .errors import CapExceeded, PadicCFError, VerificationFailed
from .hensel import _classify_raw, in_S, is_perfect_square
from .quadratic import RationalElement, make_quadratic, root_elements
from .rationals import require_prime

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_VERIFY = 4

ENV_MAX_STEPS = "PADIC_CF_MAX_STEPS"

CSV_HEADER = ["b", "c", "quadrant", "preperiod", "period", "pure", "closed_form_pure"]


def _resolve_cap(value: int | None) -> int | None:
    if value is not None:
        return value
    env = os.environ.get(ENV_MAX_STEPS)
    return int(env) if env else None


def _parse_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return int(lo), int(hi)


def _build_element(args):
    p = args.p
    require_prime(p)
    if args.rational is not None:
        return RationalElement.from_value(Fraction(args.rational), p)
    a, b, c = (int(t) for t in args.poly.split(","))
    if a == 0:
        return RationalElement.from_value(Fraction(-c, b), p)
    if args.approx is not None:
        return make_quadratic(a, b, c, p, Fraction(args.approx), args.prec)
    # no selector given: take the root with the larger valuation (for a
    # Hensel-form polynomial that is the root in pZ_p), canonical on ties
    e1, e2 = root_elements(a, b, c, p)
    return e2 if e2.valuation() > e1.valuation() else e1


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _status_json(status) -> dict:
    out = {"kind": status.kind, "preperiod": None, "period": None}
    if isinstance(status, EventuallyPeriodic):
        out["preperiod"] = status.preperiod
        out["period"] = status.period
    if isinstance(status, Truncated):
        out["cap"] = status.cap
    return out


def _print_expansion(e: CFExpansion, algorithm: str, fmt: str, nterms: int | None) -> None:
    if fmt == "json":
        doc = {
            "p": e.p,
            "algorithm": algorithm,
            "d0": _frac_str(e.d0),
            "terms": [{"t": str(t.t), "k": t.k, "d": str(t.d)} for t in e.terms],
            "status": _status_json(e.status),
        }
        if nterms:
            doc["convergents"] = [
                {"n": cv.n, "p": str(cv.p_n), "q": str(cv.q_n)}
                for cv in convergents(e, nterms)
            ]
        print(json.dumps(doc))
        return
    print(f"p: {e.p}")
    print(f"algorithm: {algorithm}")
    print(f"d0: {_frac_str(e.d0)}")
    st = e.status
    if isinstance(st, EventuallyPeriodic):
        print(f"status: periodic preperiod={st.preperiod} period={st.period}")
    elif isinstance(st, Finite):
        print("status: finite")
    else:
        print(f"status: truncated cap={st.cap}")
    for i, t in enumerate(e.terms, start=1):
        print(f"term {i}: t={t.t} k={t.k} d={t.d}")
    if nterms:
        for cv in convergents(e, nterms)[1:]:
            print(f"convergent {cv.n}: p={cv.p_n} q={cv.q_n}")


def cmd_expand(args) -> int:
    element = _build_element(args)
    cap = _resolve_cap(args.max_steps)
    if args.algorithm == SCHNEIDER:
        e = schneider_expand(element, cap=cap)
    else:
        e = expand(element, args.algorithm, cap=cap)
    _print_expansion(e, args.algorithm, args.format, args.terms)
    return EXIT_OK


def cmd_orbit(args) -> int:
    require_prime(args.p)
    b, c = (int(t) for t in args.state.split(","))
    if args.algorithm not in ALGORITHMS:
        print(f"error: orbit requires one of {ALGORITHMS}", file=sys.stderr)
        return EXIT_INPUT
    if not in_S(b, c, args.p):
        print(f"error: ({b}, {c}) is not a quadratic Hensel state", file=sys.stderr)
        return EXIT_INPUT
    cap = _resolve_cap(args.max_steps)
    pre, period, states = hensel_orbit(
        b, c, args.p, args.algorithm, cap if cap is not None else 10_000
    )
    for i, (sb, sc) in enumerate(states):
        cls = _classify_raw(sb, sc, args.p)
        which = choose_map(args.algorithm, sb, sc)
        mark = "  [cycle entry]" if i == pre else ""
        print(
            f"step {i}: ({sb}, {sc})  {cls.quadrant}  "
            f"disc={sb * sb - 4 * sc}  map={which}{mark}"
        )
    print(f"preperiod={pre} period={period}")
    return EXIT_OK


@dataclass(frozen=True)
class CensusReport:
    prime: int
    ranges: tuple[int, int, int, int]
    algorithm: str
    counts: dict[tuple[int, int], int]
    violations: list[str]


def _census_chunk(task):
    p, algorithm, bs, c_lo, c_hi, cap = task
    rows = []
    violations = []
    c_start = c_lo + (-c_lo) % p
    for b in bs:
        for c in range(c_start, c_hi + 1, p):
            if c == 0 or is_perfect_square(b * b - 4 * c):
                continue
            try:
                pre, period, states = hensel_orbit(b, c, p, algorithm, cap)
            except CapExceeded:
                violations.append(f"({b},{c}): no cycle within {cap} steps")
                continue
            disc = b * b - 4 * c
            drift = next(
                ((sb, sc) for sb, sc in states if sb * sb - 4 * sc != disc), None
            )
            if drift:
                violations.append(f"({b},{c}): discriminant drift at {drift}")
            pure = pre == 0
            cf_pure = _pure_raw(b, c, p, algorithm)
            if pure != cf_pure:
                violations.append(
                    f"({b},{c}): detected pure={pure} but closed form says {cf_pure}"
                )
            rows.append((b, c, _classify_raw(b, c, p).quadrant, pre, period, pure, cf_pure))
    return rows, violations


def run_census(
    p: int,
    algorithm: str,
    b_range: tuple[int, int],
    c_range: tuple[int, int],
    jobs: int = 1,
    cap: int = 10_000,
):
    """Sweep every valid state in the box; returns (report, sorted rows)."""
    require_prime(p)
    b_lo, b_hi = b_range
    c_lo, c_hi = c_range
    bs = [b for b in range(b_lo, b_hi + 1) if b % p]
    rows: list[tuple] = []
    violations: list[str] = []
    if jobs <= 1 or len(bs) < 2:
        chunk_rows, chunk_violations = _census_chunk((p, algorithm, bs, c_lo, c_hi, cap))
        rows.extend(chunk_rows)
        violations.extend(chunk_violations)
    else:
        step = -(-len(bs) // jobs)
        tasks = [
            (p, algorithm, bs[i : i + step], c_lo, c_hi, cap)
            for i in range(0, len(bs), step)
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for chunk_rows, chunk_violations in pool.map(_census_chunk, tasks):
                rows.extend(chunk_rows)
                violations.extend(chunk_violations)
    rows.sort(key=lambda r: (r[0], r[1]))
    counts: dict[tuple[int, int], int] = {}
    for r in rows:
        key = (r[3], r[4])
        counts[key] = counts.get(key, 0) + 1
    report = CensusReport(p, (b_lo, b_hi, c_lo, c_hi), algorithm, counts, violations)
    return report, rows


def _write_census_csv(rows, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for b, c, quadrant, pre, period, pure, cf_pure in rows:
        writer.writerow(
            [b, c, quadrant, pre, period, str(pure).lower(), str(cf_pure).lower()]
        )


def cmd_census(args) -> int:
    if args.algorithm not in ALGORITHMS:
        print(f"error: census requires one of {ALGORITHMS}", file=sys.stderr)
        return EXIT_INPUT
    cap = _resolve_cap(args.max_steps)
    report, rows = run_census(
        args.p,
        args.algorithm,
        _parse_range(args.b_range),
        _parse_range(args.c_range),
        jobs=args.jobs,
        cap=cap if cap is not None else 10_000,
    )
    if args.out:
        with open(args.out, "w", newline="") as fh:
            _write_census_csv(rows, fh)
        summary = sys.stdout
    else:
        _write_census_csv(rows, sys.stdout)
        summary = sys.stderr
    print(f"states: {len(rows)}", file=summary)
    for (pre, period), count in sorted(report.counts.items()):
        print(f"preperiod={pre} period={period}: {count}", file=summary)
    for v in report.violations:
        print(f"violation: {v}", file=summary)
    return EXIT_VERIFY if report.violations else EXIT_OK


def cmd_verify(args) -> int:
    element = _build_element(args)
    cap = _resolve_cap(args.max_steps)
    if args.algorithm == SCHNEIDER:
        e = schneider_expand(element, cap=cap)
    else:
        e = expand(element, args.algorithm, cap=cap)
    limit = args.upto
    if not isinstance(e.status, EventuallyPeriodic):
        limit = min(limit, len(e.terms) if isinstance(e.status, Finite) else len(e.terms) - 1)
    for n in range(1, limit + 1):
        rec = verify_convergence(element, e, n)
        if rec.predicted is None:
            print(f"n={n}: terminal convergent equals the input exactly")
        else:
            print(f"n={n}: predicted={rec.predicted} computed={rec.computed}")
    return EXIT_OK


def _add_element_flags(sub) -> None:
    sub.add_argument("--p", type=int, required=True, help="prime modulus")
    sub.add_argument(
        "--algorithm", required=True, choices=list(ALGORITHMS) + [SCHNEIDER]
    )
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--rational", help="rational input as num/den")
    group.add_argument("--poly", help="minimal polynomial as a,b,c")
    sub.add_argument("--approx", help="root selector approximation (rational)")
    sub.add_argument(
        "--prec", type=int, default=1, help="selector modulus exponent (with --approx)"
    )
    sub.add_argument("--max-steps", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padic-cf",
        description="Exact p-adic continued fraction expansions (algorithms A, B, C).",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_expand = subs.add_parser("expand", help="expand a rational or quadratic element")
    _add_element_flags(p_expand)
    p_expand.add_argument("--terms", type=int, default=None, help="also print convergents up to n")
    p_expand.add_argument("--format", choices=["text", "json"], default="text")
    p_expand.set_defaults(func=cmd_expand)

    p_orbit = subs.add_parser("orbit", help="print a Hensel state orbit")
    p_orbit.add_argument("--p", type=int, required=True)
    p_orbit.add_argument("--algorithm", required=True)
    p_orbit.add_argument("--state", required=True, help="state as b,c")
    p_orbit.add_argument("--max-steps", type=int, default=None)
    p_orbit.set_defaults(func=cmd_orbit)

    p_census = subs.add_parser("census", help="sweep states and cross-check periodicity")
    p_census.add_argument("--p", type=int, required=True)
    p_census.add_argument("--algorithm", required=True)
    p_census.add_argument("--b-range", required=True, help="lo:hi")
    p_census.add_argument("--c-range", required=True, help="lo:hi")
    p_census.add_argument("--jobs", type=int, default=1)
    p_census.add_argument("--out", default=None, help="write CSV here")
    p_census.add_argument("--max-steps", type=int, default=None)
    p_census.set_defaults(func=cmd_census)

    p_verify = subs.add_parser("verify", help="check the convergent error law")
    _add_element_flags(p_verify)
    p_verify.add_argument("--upto", type=int, required=True)
    p_verify.set_defaults(func=cmd_verify)

    # values like -10:10 or -5/3 are arguments, not option strings
    matcher = re.compile(r"^-\d")
    for sub in (parser, p_expand, p_orbit, p_census, p_verify):
        sub._negative_number_matcher = matcher

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except VerificationFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (PadicCFError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
