"""Command line entry point.

Exit codes: 0 success, 1 usage or parse error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .errors import DlmSimError, ScheduleSemanticError, ScheduleSyntaxError
from .experiment import run_schedule
from .oracle import expected_counts, mzi_probabilities
from .records import Format, emit_run_record, fmt_float, record_from_json
from .schedule import DataBlock, Schedule, parse_schedule
from .stats import compare_runs

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _phase_grid(spec: str) -> np.ndarray:
    try:
        start, stop, steps = spec.split(":")
        start_f, stop_f, n = float(start), float(stop), int(steps)
    except ValueError:
        raise UsageError(f"--phases expects START:STOP:STEPS, got {spec!r}") from None
    if n < 1:
        raise UsageError("--phases needs at least one step")
    return np.linspace(start_f, stop_f, n)


def cmd_run(args: argparse.Namespace) -> int:
    try:
        text = Path(args.schedule).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read schedule: {exc}") from None
    doc = parse_schedule(text)
    record = run_schedule(
        doc.schedule, doc.gamma, doc.phase0, doc.phase1, doc.seed, keep_clicks=args.emit_clicks
    )
    Path(args.out).write_bytes(emit_run_record(record, Format(args.format)))
    a = record.aggregates
    print(f"N={a.n} d0={a.d0} mean_freq_d0={fmt_float(a.mean_freq_d0)} verdict={a.verdict.value}")
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    res = mzi_probabilities(args.phase0, args.phase1)
    print(f"p0={fmt_float(res.p0)}")
    print(f"p1={fmt_float(res.p1)}")
    if args.n is not None:
        if args.n < 0:
            raise UsageError("--n must be nonnegative")
        for name, p in (("d0", res.p0), ("d1", res.p1)):
            mean, std = expected_counts(args.n, p)
            print(f"{name}_mean={fmt_float(mean)} {name}_stddev={fmt_float(std)}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    grid = _phase_grid(args.phases)
    if args.events < 1 or not (0 <= args.discard < args.events):
        raise UsageError("need --events >= 1 and 0 <= --discard < --events")
    rows = ["delta_phi,n_kept,d0,freq_d0,oracle_p0,abs_error"]
    for delta in grid:
        delta = float(delta)
        record = run_schedule(
            Schedule((DataBlock(args.events),)), args.gamma, delta, 0.0, args.seed, keep_clicks=True
        )
        kept = record.data_clicks()[args.discard :]
        d0 = kept.count(0)
        freq = d0 / len(kept)
        p0 = mzi_probabilities(delta, 0.0).p0
        rows.append(
            f"{fmt_float(delta)},{len(kept)},{d0},{fmt_float(freq)},{fmt_float(p0)},{fmt_float(abs(freq - p0))}"
        )
    Path(args.out).write_text("\n".join(rows) + "\n")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    try:
        a = record_from_json(Path(args.a).read_bytes()).aggregates
        b = record_from_json(Path(args.b).read_bytes()).aggregates
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read run record: {exc}") from None
    res = compare_runs((a.d0, a.d1), (b.d0, b.d1))
    print(f"chi2={fmt_float(res.chi2)}")
    print(f"p_value={fmt_float(res.p_value)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dlmsim", description="Learning-machine MZI simulator and wave-theory oracle.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="execute a schedule file")
    p.add_argument("--schedule", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=[f.value for f in Format], default="json")
    p.add_argument("--emit-clicks", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("oracle", help="wave-theory detector probabilities")
    p.add_argument("--phase0", type=float, required=True)
    p.add_argument("--phase1", type=float, required=True)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("sweep", help="D0 frequency over a phase grid vs sin^2(dphi/2)")
    p.add_argument("--phases", required=True, help="START:STOP:STEPS in radians")
    p.add_argument("--events", type=int, required=True)
    p.add_argument("--discard", type=int, default=0)
    p.add_argument("--gamma", type=float, default=0.99)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="chi-square test between two JSON run records")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"dlmsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ScheduleSyntaxError, ScheduleSemanticError) as exc:
        print(f"dlmsim: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DlmSimError, OSError) as exc:
        print(f"dlmsim: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
