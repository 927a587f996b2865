"""Command-line entry point: seeded, reproducible experiment runs.

Every file-writing subcommand records a key=value metadata sidecar that is
sufficient to re-run it exactly.  Exit codes: 0 success, 1 usage error,
2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import __version__, datagen, harness, kernels, posit
from .datagen import GenSpec
from .harness import CycleParams
from .oracle import Precision, exponent_of, relative_error
from .systems import DEFAULT_SYSTEM_NAMES, get_system

USAGE_ERROR = 1
INVARIANT_ERROR = 2


class InvariantViolation(RuntimeError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _add_common(p: argparse.ArgumentParser, *, needs_out: bool = True) -> None:
    p.add_argument("--seed", type=int, default=42, help="master seed")
    p.add_argument("--precision", type=int, default=256, help="oracle significand bits")
    p.add_argument("--workers", type=int, default=1, help="parallel worker bound")
    if needs_out:
        p.add_argument("--out", required=True, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="positstat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ops-accuracy", help="per-operation accuracy sweep")
    _add_common(p)
    p.add_argument("--systems", default=",".join(DEFAULT_SYSTEM_NAMES))
    p.add_argument("--adds", type=int, default=10_000, help="number of add trials")
    p.add_argument("--muls", type=int, default=5_500, help="number of mul trials")
    p.add_argument("--range", dest="exp_range", default="-10000:0", help="result exponent range lo:hi")
    p.add_argument("--edges", default=",".join(str(e) for e in harness.DEFAULT_BUCKET_EDGES))
    p.add_argument("--exclude-at", type=float, default=1.0, help="percentile exclusion threshold")

    p = sub.add_parser("app-accuracy", help="application-level accuracy ensemble")
    _add_common(p)
    p.add_argument("--app", choices=("forward", "pbd"), required=True)
    p.add_argument("--systems", default=",".join(DEFAULT_SYSTEM_NAMES))
    p.add_argument("--count", type=int, default=32, help="ensemble size")
    p.add_argument("--window", default=None, help="target log2 result window lo:hi")
    p.add_argument("--states", type=int, default=2, help="forward: HMM state count")
    p.add_argument("--symbols", type=int, default=256, help="forward: alphabet size")
    p.add_argument("--edges", default=None, help="summary bucket edges (defaults to window-derived)")

    p = sub.add_parser("trace", help="oracle alpha-exponent trace of one model")
    _add_common(p)
    p.add_argument("--states", type=int, default=4)
    p.add_argument("--symbols", type=int, default=4)
    p.add_argument("--length", type=int, default=10_000, help="observation count")
    p.add_argument("--alpha", type=float, default=1.0, help="Dirichlet concentration")

    p = sub.add_parser("cycles", help="analytic accelerator cycle model")
    _add_common(p)
    p.add_argument("--app", choices=("forward", "column"), required=True)
    p.add_argument("--system", choices=("log", "posit", "both"), default="both")
    p.add_argument("--h", type=int, help="forward: state count (pipeline latency)")
    p.add_argument("--t", type=int, help="forward: observation count (outer bound)")
    p.add_argument("--k", type=int, help="column: success threshold (pipeline latency)")
    p.add_argument("--n", type=int, help="column: trial count (outer bound)")

    p = sub.add_parser("table1", help="range/precision table of the formats")
    _add_common(p)

    p = sub.add_parser("selftest", help="exhaustive small-width and oracle checks")
    _add_common(p, needs_out=False)

    return parser


def _parse_pair(text: str, flag: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        print(f"positstat: error: malformed {flag} value {text!r} (expected lo:hi)", file=sys.stderr)
        raise SystemExit(USAGE_ERROR) from None
    return lo, hi


def _resolve_systems(text: str, precision: Precision) -> list[str]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    if not names:
        raise SystemExit(USAGE_ERROR)
    for name in names:
        try:
            get_system(name, precision)  # reject unknown names before any work
        except ValueError as e:
            print(f"positstat: error: {e}", file=sys.stderr)
            raise SystemExit(USAGE_ERROR) from None
    return names


def _write_metadata(out: Path, items: dict) -> None:
    with open(out / "run-metadata.txt", "w", encoding="utf-8") as f:
        f.write(f"tool=positstat {__version__}\n")
        for key, value in items.items():
            f.write(f"{key}={value}\n")


def _cmd_ops_accuracy(args: argparse.Namespace) -> int:
    precision = Precision(args.precision)
    systems = _resolve_systems(args.systems, precision)
    lo, hi = _parse_pair(args.exp_range, "--range")
    edges = tuple(int(e) for e in args.edges.split(","))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_metadata(out, {
        "command": "ops-accuracy",
        "seed": args.seed,
        "systems": ",".join(systems),
        "adds": args.adds,
        "muls": args.muls,
        "range": f"{lo}:{hi}",
        "edges": ",".join(str(e) for e in edges),
        "exclude_at": args.exclude_at,
        "precision": precision.significand_bits,
        "workers": args.workers,
    })
    specs = []
    if args.adds:
        specs.append(GenSpec(args.seed, "operands", 0, op="add", count=args.adds, exponent_range=(lo, hi)))
    if args.muls:
        specs.append(GenSpec(args.seed, "operands", 1, op="mul", count=args.muls, exponent_range=(lo, hi)))
    records, summaries = harness.run_ops_accuracy(
        systems, specs, edges, precision, workers=args.workers, exclude_at=args.exclude_at
    )
    with open(out / "records.csv", "w", encoding="utf-8", newline="\n") as f:
        harness.write_records_csv(records, f)
    with open(out / "summary.csv", "w", encoding="utf-8", newline="\n") as f:
        harness.write_summary_csv(summaries, f)
    print(f"wrote {len(records)} records across {len(summaries)} buckets to {out}")
    return 0


def _cmd_app_accuracy(args: argparse.Namespace) -> int:
    precision = Precision(args.precision)
    systems = _resolve_systems(args.systems, precision)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    window = _parse_pair(args.window, "--window") if args.window else None
    meta = {
        "command": "app-accuracy",
        "app": args.app,
        "seed": args.seed,
        "systems": ",".join(systems),
        "count": args.count,
        "window": args.window or "",
        "precision": precision.significand_bits,
        "workers": args.workers,
    }
    if args.app == "forward":
        w = window or (-40_000, -2_000)
        meta.update({"states": args.states, "symbols": args.symbols, "window": f"{w[0]}:{w[1]}"})
        ensemble = datagen.forward_ensemble_specs(
            args.seed, args.count, w, n_states=args.states, n_symbols=args.symbols
        )
        result = harness.run_app_accuracy(args.app, systems, ensemble, precision, workers=args.workers)
    else:
        w = window or (-20_000, -200)
        meta["window"] = f"{w[0]}:{w[1]}"
        ensemble = _pbd_ensemble_specs(args.seed, args.count, w)
        result = harness.run_app_accuracy(
            args.app, systems, ensemble, precision, workers=args.workers, window=(w[0], w[1])
        )
    _write_metadata(out, meta)
    for truth in result.truths:
        e = exponent_of(truth)
        if window and not (window[0] <= e <= window[1]):
            raise InvariantViolation(f"oracle result exponent {e} escaped the window {window}")
    edges = tuple(int(e) for e in args.edges.split(",")) if args.edges else _window_edges(w)
    summaries = harness.summarize_records(result.records, edges)
    with open(out / "records.csv", "w", encoding="utf-8", newline="\n") as f:
        harness.write_records_csv(result.records, f)
    with open(out / "summary.csv", "w", encoding="utf-8", newline="\n") as f:
        harness.write_summary_csv(summaries, f)
    with open(out / "cdf.csv", "w", encoding="utf-8", newline="\n") as f:
        harness.write_cdf_csv(harness.cdf_rows(result.records), f)
    print(f"wrote {len(result.records)} records for {len(result.truths)} instances to {out}")
    return 0


def _pbd_ensemble_specs(seed: int, count: int, window: tuple[int, int]) -> list[GenSpec]:
    lo, hi = window
    margin = max((hi - lo) // 20, 16)
    specs = []
    for i in range(count):
        rng = datagen._rng(seed, "pbd", i, sub=255)
        target = int(rng.integers(lo + margin, hi - margin + 1))
        specs.append(GenSpec(seed, "pbd", i, target_log2=target))
    return specs


def _window_edges(window: tuple[int, int]) -> tuple[int, ...]:
    lo, hi = window
    steps = 6
    width = max(1, (hi - lo) // steps)
    edges = list(range(lo, hi, width)) + [hi]
    return tuple(sorted(set(edges)))


def _cmd_trace(args: argparse.Namespace) -> int:
    precision = Precision(args.precision)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_metadata(out, {
        "command": "trace",
        "seed": args.seed,
        "states": args.states,
        "symbols": args.symbols,
        "length": args.length,
        "alpha": args.alpha,
        "precision": precision.significand_bits,
        "binary64_min_exponent": harness.BINARY64_MIN_EXPONENT,
    })
    spec = GenSpec(args.seed, "hmm", 0, n_states=args.states, n_symbols=args.symbols,
                   n_obs=args.length, alpha=args.alpha)
    series = harness.run_exponent_trace(spec, precision)
    with open(out / "trace.csv", "w", encoding="utf-8", newline="\n") as f:
        harness.write_trace_csv(series, f)
    print(f"wrote {len(series)} trace points to {out}; final exponent {series[-1][1]}")
    return 0


def _cmd_cycles(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.app == "forward":
        if args.h is None or args.t is None:
            print("positstat: error: forward needs --h and --t", file=sys.stderr)
            raise SystemExit(USAGE_ERROR)
        outer, pipeline = args.t, args.h
    else:
        if args.k is None or args.n is None:
            print("positstat: error: column needs --k and --n", file=sys.stderr)
            raise SystemExit(USAGE_ERROR)
        outer, pipeline = args.n, args.k
    _write_metadata(out, {
        "command": "cycles", "app": args.app, "system": args.system,
        "outer_bound": outer, "pipeline_latency": pipeline,
    })
    names = ("log", "posit") if args.system == "both" else (args.system,)
    rows = []
    for name in names:
        params = CycleParams(args.app, outer, pipeline, name)
        report = harness.cycle_model(params)
        rows.append((params, report))
        print(f"{args.app}/{name}: pe_latency={report.pe_latency} total_cycles={report.total_cycles}")
    with open(out / "cycles.csv", "w", encoding="utf-8", newline="\n") as f:
        harness.write_cycles_csv(rows, f)
    return 0


def _cmd_table1(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_metadata(out, {"command": "table1"})
    rows = harness.table1_report()
    with open(out / "table1.csv", "w", encoding="utf-8", newline="\n") as f:
        harness.write_table1_csv(rows, f)
    for row in rows:
        print(row)
    return 0


def _cmd_selftest(args: argparse.Namespace) -> int:
    failures = []

    def check(name: str, ok: bool) -> None:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            failures.append(name)

    for n_bits, es in ((8, 2), (16, 2)):
        config = posit.PositConfig(n_bits, es)
        ok_rt, ok_mono = True, True
        prev = None
        patterns = sorted(
            (p for p in range(1 << n_bits) if p != 1 << (n_bits - 1)),
            key=lambda p: posit.PositValue(p, config).signed_int(),
        )
        for bits in patterns:
            value = posit.PositValue(bits, config)
            x = posit.to_real(value)
            if posit.from_real(x, config).bits != bits:
                ok_rt = False
            if prev is not None and not prev < x:
                ok_mono = False
            prev = x
        check(f"posit({n_bits},{es}) exhaustive roundtrip", ok_rt)
        check(f"posit({n_bits},{es}) exhaustive monotonicity", ok_mono)

    # cross-precision agreement of a representative oracle computation
    spec = GenSpec(args.seed, "hmm", 0, n_states=3, n_symbols=8, n_obs=200)
    model = datagen.gen_hmm(spec)
    like_lo = kernels.forward_likelihood(model, get_system("oracle", Precision(args.precision)))
    like_hi = kernels.forward_likelihood(model, get_system("oracle", Precision(args.precision + 64)))
    rel = relative_error(like_hi, like_lo)
    bound = 2.0 ** -(args.precision - 56)
    check("oracle cross-precision forward agreement", rel.to_float() < bound)

    if failures:
        raise InvariantViolation(f"{len(failures)} selftest checks failed")
    print("selftest ok")
    return 0


_COMMANDS = {
    "ops-accuracy": _cmd_ops_accuracy,
    "app-accuracy": _cmd_app_accuracy,
    "trace": _cmd_trace,
    "cycles": _cmd_cycles,
    "table1": _cmd_table1,
    "selftest": _cmd_selftest,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except SystemExit as e:
        return int(e.code or 0)
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return INVARIANT_ERROR
    except Exception as e:  # internal failure, not a usage problem
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return INVARIANT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
