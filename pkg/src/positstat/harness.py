"""Experiment drivers: per-op accuracy sweeps, application-level accuracy
ensembles, exponent traces, the format range/precision table, and the
analytic accelerator cycle model.

All drivers are deterministic given seeds; records carry a trial index so
re-running one trial in isolation reproduces the record, and parallel
execution returns records in the same order as sequential.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from . import datagen, kernels, oracle
from .datagen import GenSpec
from .oracle import BigReal, DEFAULT_PRECISION, Precision, exponent_of
from .posit import PositConfig
from .systems import NumericSystem, get_system

__all__ = [
    "AccuracyRecord",
    "BucketSummary",
    "CycleParams",
    "CycleReport",
    "AppRunResult",
    "DEFAULT_BUCKET_EDGES",
    "nearest_rank_percentile",
    "summarize_records",
    "run_ops_accuracy",
    "run_app_accuracy",
    "run_exponent_trace",
    "cycle_model",
    "table1_report",
    "cdf_rows",
    "write_records_csv",
    "write_summary_csv",
    "write_cdf_csv",
    "write_trace_csv",
    "write_cycles_csv",
    "write_table1_csv",
]

# Anchored on the binary64 normal-range bound -1,022 and the sweep floor.
DEFAULT_BUCKET_EDGES = (-10_000, -6_000, -4_000, -2_000, -1_022, -512, -256, -128, -64, 0)

BINARY64_MIN_EXPONENT = -1_074


@dataclass(frozen=True)
class AccuracyRecord:
    """One measured operation or application result."""

    system: str
    op_or_app: str
    trial_index: int
    true_exponent: int
    relative_error: float
    underflowed: bool


@dataclass(frozen=True)
class BucketSummary:
    """Percentiles of the relative errors whose truth fell in one bucket."""

    system: str
    op_or_app: str
    bucket_lo: int
    bucket_hi: int
    p5: float
    p25: float
    p50: float
    p75: float
    p95: float
    count: int
    underflow_count: int
    excluded_count: int


@dataclass(frozen=True)
class CycleParams:
    """Inputs of the analytic accelerator cycle model."""

    app: str  # "forward" or "column"
    outer_bound: int
    pipeline_latency: int
    system: str  # "log" or "posit"

    def __post_init__(self) -> None:
        if self.app not in ("forward", "column"):
            raise ValueError("app must be 'forward' or 'column'")
        if self.system not in ("log", "posit"):
            raise ValueError("system must be 'log' or 'posit'")
        if self.outer_bound < 1 or self.pipeline_latency < 1:
            raise ValueError("bounds must be positive")
        if self.app == "forward" and self.pipeline_latency & (self.pipeline_latency - 1):
            raise ValueError("forward-unit state count must be a power of two")


@dataclass(frozen=True)
class CycleReport:
    pe_latency: int
    total_cycles: int


@dataclass(frozen=True)
class AppRunResult:
    records: list[AccuracyRecord]
    truths: list[BigReal]


def nearest_rank_percentile(sorted_values: Sequence[float], pct: float) -> float:
    """Nearest-rank percentile of an ascending sequence (exact, no interpolation)."""
    if not sorted_values:
        raise ValueError("no values")
    rank = max(1, math.ceil(pct / 100.0 * len(sorted_values)))
    return sorted_values[rank - 1]


def summarize_records(
    records: Iterable[AccuracyRecord],
    edges: Sequence[int] = DEFAULT_BUCKET_EDGES,
    exclude_at: float = 1.0,
) -> list[BucketSummary]:
    """Per-(system, op, bucket) percentile summaries.

    Buckets are half-open [lo, hi) from consecutive edges.  Errors at or
    above exclude_at (underflows land at exactly 1.0, saturation far
    higher) are counted but left out of the percentiles, which are then
    computed by nearest rank over what remains.
    """
    if list(edges) != sorted(set(edges)):
        raise ValueError("bucket edges must be strictly increasing")
    groups: dict[tuple[str, str, int], list[AccuracyRecord]] = {}
    for r in records:
        b = _bucket_of(r.true_exponent, edges)
        if b is None:
            continue
        groups.setdefault((r.system, r.op_or_app, b), []).append(r)
    out = []
    for (system, op, b), recs in sorted(groups.items()):
        kept = sorted(
            r.relative_error for r in recs if math.isfinite(r.relative_error) and r.relative_error < exclude_at
        )
        excluded = len(recs) - len(kept)
        pcts = {p: math.nan for p in (5, 25, 50, 75, 95)}
        if kept:
            pcts = {p: nearest_rank_percentile(kept, p) for p in (5, 25, 50, 75, 95)}
        out.append(
            BucketSummary(
                system=system,
                op_or_app=op,
                bucket_lo=edges[b],
                bucket_hi=edges[b + 1],
                p5=pcts[5],
                p25=pcts[25],
                p50=pcts[50],
                p75=pcts[75],
                p95=pcts[95],
                count=len(recs),
                underflow_count=sum(r.underflowed for r in recs),
                excluded_count=excluded,
            )
        )
    return out


def _bucket_of(exponent: int, edges: Sequence[int]) -> int | None:
    for i in range(len(edges) - 1):
        if edges[i] <= exponent < edges[i + 1]:
            return i
    if exponent == edges[-1]:  # the sweep range is inclusive at the top
        return len(edges) - 2
    return None


# -- per-operation accuracy sweep ---------------------------------------


def _measure(truth: BigReal, decoded: BigReal) -> tuple[float, bool]:
    underflowed = decoded.is_zero() and not truth.is_zero()
    rel = oracle.relative_error(truth, decoded)
    err = math.inf if rel.is_infinite() else rel.to_float()
    return err, underflowed


def _ops_trials(args: tuple[GenSpec, Sequence[str], int, int, int]) -> list[tuple]:
    spec, system_names, start, stop, prec_bits = args
    precision = Precision(prec_bits)
    systems = [get_system(name, precision) for name in system_names]
    rows = []
    for i in range(start, stop):
        # regenerate just this pair from its own stream
        a, b = _pair_at(spec, i)
        truth = oracle.arith(spec.op, a, b, precision)
        t_exp = exponent_of(truth)
        for sys in systems:
            ea, eb = sys.from_real(a), sys.from_real(b)
            res = sys.add(ea, eb) if spec.op == "add" else sys.mul(ea, eb)
            err, under = _measure(truth, sys.to_real(res))
            rows.append((sys.name, spec.op, i, t_exp, err, under))
    return rows


def _pair_at(spec: GenSpec, i: int) -> tuple[BigReal, BigReal]:
    rng = datagen._rng(spec.master_seed, "operands", i, sub=spec.index & 0xFFFF)
    return datagen._one_pair(rng, spec.op, *spec.exponent_range)


def run_ops_accuracy(
    system_names: Sequence[str],
    specs: Sequence[GenSpec],
    edges: Sequence[int] = DEFAULT_BUCKET_EDGES,
    precision: Precision = DEFAULT_PRECISION,
    workers: int = 1,
    exclude_at: float = 1.0,
) -> tuple[list[AccuracyRecord], list[BucketSummary]]:
    """Encode each operand pair into each system, run the op, and compare
    the decoded result against the oracle's, bucketed by the true result's
    exponent."""
    rows: list[tuple] = []
    for spec in specs:
        if spec.kind != "operands":
            raise ValueError("ops accuracy needs operand specs")
        chunks = _split_range(spec.count, workers)
        args = [(spec, tuple(system_names), lo, hi, precision.significand_bits) for lo, hi in chunks]
        if workers > 1 and len(args) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for part in pool.map(_ops_trials, args):
                    rows.extend(part)
        else:
            for arg in args:
                rows.extend(_ops_trials(arg))
    records = [AccuracyRecord(*row) for row in sorted(rows, key=lambda r: (r[0], r[1], r[2]))]
    return records, summarize_records(records, edges, exclude_at)


def _split_range(n: int, workers: int) -> list[tuple[int, int]]:
    parts = max(1, min(workers, n))
    step = -(-n // parts)
    return [(lo, min(lo + step, n)) for lo in range(0, n, step)]


# -- application-level accuracy ------------------------------------------


def _app_trial(args: tuple[GenSpec, Sequence[str], int, str, tuple[float, float] | None]) -> tuple[list[tuple], tuple[int, int]]:
    spec, system_names, prec_bits, app, window = args
    precision = Precision(prec_bits)
    if app == "forward":
        model = datagen.gen_hmm(spec, precision)
        truth = kernels.forward_likelihood(model, get_system("oracle", precision))
        run = lambda sys: sys.to_real(kernels.forward(model, sys))
    elif app == "pbd":
        if window is not None and spec.target_log2 is not None:
            inst, truth = datagen.gen_pbd_targeted(
                spec.master_seed, spec.index, spec.target_log2, window, threshold=spec.threshold, p=precision
            )
        else:
            inst = datagen.gen_pbd(spec)
            truth = kernels.pbd_exact_reference(inst, precision)
        run = lambda sys: sys.to_real(kernels.pbd_pvalue(inst, sys))
    else:
        raise ValueError("app must be 'forward' or 'pbd'")

    t_exp = exponent_of(truth)
    rows = []
    for name in system_names:
        sys = get_system(name, precision)
        err, under = _measure(truth, run(sys))
        rows.append((name, app, spec.index, t_exp, err, under))
    m, e = truth.as_dyadic()
    return rows, (m, e)


def run_app_accuracy(
    app: str,
    system_names: Sequence[str],
    ensemble: Sequence[GenSpec],
    precision: Precision = DEFAULT_PRECISION,
    workers: int = 1,
    window: tuple[float, float] | None = None,
) -> AppRunResult:
    """Run every generated instance through each system's kernel and record
    the final-result relative error against the oracle."""
    if not ensemble:
        raise ValueError("ensemble must be non-empty")
    args = [(spec, tuple(system_names), precision.significand_bits, app, window) for spec in ensemble]
    results = []
    if workers > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_app_trial, args))
    else:
        results = [_app_trial(a) for a in args]
    rows: list[tuple] = []
    truths: list[BigReal] = []
    for part, (m, e) in results:
        rows.extend(part)
        truths.append(BigReal.from_dyadic(m, e))
    records = [AccuracyRecord(*row) for row in sorted(rows, key=lambda r: (r[0], r[1], r[2]))]
    return AppRunResult(records=records, truths=truths)


def cdf_rows(records: Iterable[AccuracyRecord]) -> list[tuple[str, str, float, float]]:
    """(system, app, relative_error, cumulative_fraction), sorted per system."""
    by_system: dict[tuple[str, str], list[float]] = {}
    for r in records:
        by_system.setdefault((r.system, r.op_or_app), []).append(r.relative_error)
    rows = []
    for (system, app), errs in sorted(by_system.items()):
        errs.sort()
        n = len(errs)
        rows.extend((system, app, e, (i + 1) / n) for i, e in enumerate(errs))
    return rows


# -- exponent trace -------------------------------------------------------


def run_exponent_trace(spec: GenSpec, precision: Precision = DEFAULT_PRECISION) -> list[tuple[int, int]]:
    """The oracle alpha-exponent series of a generated model."""
    if spec.kind != "hmm":
        raise ValueError("trace needs an hmm spec")
    model = datagen.gen_hmm(spec, precision)
    return kernels.exponent_trace(model, precision)


# -- analytic cycle model -------------------------------------------------


def cycle_model(params: CycleParams) -> CycleReport:
    """Pipelined-accelerator cycle counts.

    The processing element of the forward unit reduces H products, so its
    latency grows with log2(H); the column unit's is flat.  Total cycles
    are outer iterations times (pipeline fill + PE latency).
    """
    if params.app == "forward":
        log2_h = params.pipeline_latency.bit_length() - 1
        pe = 62 + 9 * log2_h if params.system == "log" else 24 + 8 * log2_h
    else:
        pe = 73 if params.system == "log" else 30
    return CycleReport(pe_latency=pe, total_cycles=params.outer_bound * (params.pipeline_latency + pe))


# -- format range/precision table ----------------------------------------

TABLE1_ES_VALUES = (6, 9, 12, 15, 18, 21)


def table1_report() -> list[tuple[str, int | None, int, int]]:
    """(format, useed_log2, minpos_log2, max_fraction_bits) rows:
    binary64 first, then posit(64,ES) for the standard ES sweep."""
    rows: list[tuple[str, int | None, int, int]] = [("binary64", None, BINARY64_MIN_EXPONENT, 52)]
    for es in TABLE1_ES_VALUES:
        c = PositConfig(64, es)
        rows.append((str(c), c.useed_log2, c.minpos_log2, c.max_fraction_bits))
    return rows


# -- CSV output ------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return repr(x)


def write_records_csv(records: Iterable[AccuracyRecord], f: TextIO) -> None:
    f.write("system,op_or_app,trial_index,true_exponent,relative_error,underflowed\n")
    for r in records:
        f.write(
            f"{r.system},{r.op_or_app},{r.trial_index},{r.true_exponent},"
            f"{_fmt_float(r.relative_error)},{int(r.underflowed)}\n"
        )


def write_summary_csv(summaries: Iterable[BucketSummary], f: TextIO) -> None:
    f.write(
        "system,op_or_app,bucket_lo,bucket_hi,p5,p25,p50,p75,p95,"
        "count,underflow_count,excluded_count\n"
    )
    for s in summaries:
        f.write(
            f"{s.system},{s.op_or_app},{s.bucket_lo},{s.bucket_hi},"
            f"{_fmt_float(s.p5)},{_fmt_float(s.p25)},{_fmt_float(s.p50)},"
            f"{_fmt_float(s.p75)},{_fmt_float(s.p95)},"
            f"{s.count},{s.underflow_count},{s.excluded_count}\n"
        )


def write_cdf_csv(rows: Iterable[tuple[str, str, float, float]], f: TextIO) -> None:
    f.write("system,app,relative_error,cumulative_fraction\n")
    for system, app, err, frac in rows:
        f.write(f"{system},{app},{_fmt_float(err)},{_fmt_float(frac)}\n")


def write_trace_csv(series: Iterable[tuple[int, int]], f: TextIO) -> None:
    f.write("t,exponent\n")
    for t, e in series:
        f.write(f"{t},{e}\n")


def write_cycles_csv(rows: Iterable[tuple[CycleParams, CycleReport]], f: TextIO) -> None:
    f.write("app,system,outer_bound,pipeline_latency,pe_latency,total_cycles\n")
    for p, r in rows:
        f.write(f"{p.app},{p.system},{p.outer_bound},{p.pipeline_latency},{r.pe_latency},{r.total_cycles}\n")


def write_table1_csv(rows: Iterable[tuple[str, int | None, int, int]], f: TextIO) -> None:
    f.write("format,useed_log2,minpos_log2,max_fraction_bits\n")
    for fmt, useed_log2, minpos_log2, frac in rows:
        useed = "" if useed_log2 is None else str(useed_log2)
        f.write(f"{fmt},{useed},{minpos_log2},{frac}\n")
