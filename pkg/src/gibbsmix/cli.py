"""gibbsmix command line: report, sweep and verify."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from .dimensions import Statistics
from .entropy import MixingScenario, mixing_report
from .errors import PhysicsError, ResourceError
from .oracle import run_verification, verification_grid

SWEEP_COLUMNS = [
    "param_value",
    "delta_s_informed",
    "delta_s_ignorant",
    "delta_s_identical",
    "delta_s_classical_dist",
    "delta_s_classical_indist",
    "shannon_hp",
    "work_variance",
]
VERIFY_COLUMNS = ["n", "m", "d", "theta", "statistics", "formula", "oracle", "difference", "p_error", "dim_error", "status"]


def _fmt(value) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def _to_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _theta(value: str) -> float:
    theta = float(value)
    if not 0.0 <= theta <= math.pi:
        raise argparse.ArgumentTypeError(f"theta must lie in [0, pi], got {value}")
    return theta


def _positive(value: str) -> float:
    x = float(value)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return x


def _scenario_args(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--n", type=int, required=required, help="particles on the left (spin up)")
    p.add_argument("--m", type=int, required=required, help="particles on the right")
    p.add_argument("--d", type=int, required=required, help="total number of cells (even)")
    p.add_argument("--statistics", choices=[s.value for s in Statistics], default="boson")
    p.add_argument("--theta", type=_theta, default=None, help="angle between the two spin directions; default orthogonal")
    p.add_argument("--kT", type=_positive, default=1.0, help="temperature in energy units")
    p.add_argument("--output", help="write to this file instead of stdout")


def cmd_report(args) -> int:
    s = MixingScenario(args.n, args.m, args.d, Statistics.parse(args.statistics))
    report = mixing_report(s, args.theta, args.kT)
    _emit(json.dumps(report.as_dict(), indent=2) + "\n", args.output)
    return 0


def _sweep_values(param: str, start: str, stop: str, step: str | None) -> list:
    if param == "theta":
        # exact decimal stepping keeps the grid free of accumulated rounding
        a, b = Fraction(start), Fraction(stop)
        h = Fraction(step) if step is not None else Fraction(1, 100)
        if h <= 0 or b < a:
            raise ValueError("sweep range must be non-empty with a positive step")
        values = [float(a + k * h) for k in range(int((b - a) // h) + 1)]
        if values[0] < 0 or values[-1] > math.pi:
            raise ValueError("theta values must lie in [0, pi]")
        return values
    a, b = int(start), int(stop)
    h = int(step) if step is not None else (2 if param == "d" else 1)
    if h <= 0 or b < a:
        raise ValueError("sweep range must be non-empty with a positive step")
    values = list(range(a, b + 1, h))
    if param == "d" and any(v % 2 for v in values):
        raise ValueError("swept d values must be even; use an even start and step")
    return values


def cmd_sweep(args) -> int:
    values = _sweep_values(args.param, args.start, args.stop, args.step)
    stats = Statistics.parse(args.statistics)
    needed = {"d": ("n", "m"), "n": ("d",), "theta": ("n", "m", "d")}[args.param]
    missing = [f"--{k}" for k in needed if getattr(args, k) is None]
    if missing:
        raise ValueError(f"sweeping {args.param} needs {', '.join(missing)}")
    rows = []
    for v in values:
        n, m, d, theta = args.n, args.m, args.d, args.theta
        if args.param == "d":
            d = v
        elif args.param == "n":
            n = v
            m = v if args.m is None else args.m
        else:
            theta = v
        report = mixing_report(MixingScenario(n, m, d, stats), theta, args.kT)
        row = {c: getattr(report, c) for c in SWEEP_COLUMNS[1:]}
        row["param_value"] = v
        rows.append(row)
    if args.format == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        text = _to_csv(SWEEP_COLUMNS, rows)
    _emit(text, args.output)
    return 0


def cmd_verify(args) -> int:
    cases = verification_grid(args.cap, args.statistics, max_particles=args.max_particles)
    results = run_verification(cases, args.cap, args.perturb)
    rows = []
    for r in results:
        c = r.case
        rows.append(
            {
                "n": c.n,
                "m": c.m,
                "d": c.d,
                "theta": c.theta,
                "statistics": c.statistics.value,
                "formula": r.formula,
                "oracle": r.oracle,
                "difference": r.difference,
                "p_error": r.p_error,
                "dim_error": r.dim_error,
                "status": "pass" if r.passed(args.tol) else "FAIL",
            }
        )
    text = json.dumps(rows, indent=2) + "\n" if args.format == "json" else _to_csv(VERIFY_COLUMNS, rows)
    _emit(text, args.output)
    failed = [row for row in rows if row["status"] != "pass"]
    if failed:
        print(f"{len(failed)} of {len(rows)} cases failed:", file=sys.stderr)
        for row in failed:
            print(
                "  n={n} m={m} d={d} theta={theta:.6g} {statistics}: |diff|={difference:.3e} "
                "p_error={p_error:.3e} dim_error={dim_error}".format(**row),
                file=sys.stderr,
            )
        return 1
    print(f"all {len(rows)} cases within {args.tol:g}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gibbsmix", description="Entropy of mixing for spin-carrying gases.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="all entropy changes for one scenario, as JSON")
    _scenario_args(p, required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("sweep", help="entropy changes over a range of d, n or theta")
    _scenario_args(p, required=False)
    p.add_argument("--param", choices=["d", "theta", "n"], required=True)
    p.add_argument("--from", dest="start", required=True)
    p.add_argument("--to", dest="stop", required=True)
    p.add_argument("--step", default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="check the closed forms against the brute-force oracle")
    p.add_argument("--cap", type=int, default=None, help="largest (2d)^N; default 1500 or $GIBBS_ORACLE_CAP")
    p.add_argument("--statistics", choices=[s.value for s in Statistics], default=None)
    p.add_argument("--max-particles", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output")
    p.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PhysicsError as exc:
        print(f"gibbsmix: {exc}", file=sys.stderr)
        return 3
    except (ValueError, TypeError, ResourceError) as exc:
        print(f"gibbsmix: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
