"""Seeded synthetic inputs: Dirichlet HMMs, Poisson-binomial instances,
and operand pairs with controlled result exponents.

Every draw comes from a counter-based generator keyed on
(master_seed, kind, index), so items are reproducible in isolation and
parallel generation yields exactly the sequential stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import kernels, oracle
from .kernels import HmmModel, PbdInstance
from .oracle import BigReal, DEFAULT_PRECISION, Precision, exponent_of

__all__ = [
    "GenSpec",
    "LogUniformLaw",
    "ConstantLaw",
    "gen_hmm",
    "gen_pbd",
    "gen_pbd_targeted",
    "sample_operands",
    "forward_ensemble_specs",
]

_MASK64 = (1 << 64) - 1
_KIND_TAGS = {"hmm": 1, "pbd": 2, "operands": 3}


def _rng(master_seed: int, kind: str, index: int, sub: int = 0) -> np.random.Generator:
    stream = (_KIND_TAGS[kind] << 56) ^ (sub << 40) ^ (index & ((1 << 40) - 1))
    return np.random.Generator(np.random.Philox(key=[master_seed & _MASK64, stream & _MASK64]))


@dataclass(frozen=True)
class LogUniformLaw:
    """Probabilities drawn log-uniformly from [lo, hi]."""

    lo: float = 1e-6
    hi: float = 1e-1

    def __post_init__(self) -> None:
        if not 0.0 < self.lo <= self.hi <= 1.0:
            raise ValueError("law bounds must satisfy 0 < lo <= hi <= 1")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.exp(rng.uniform(math.log(self.lo), math.log(self.hi), size=n))

    def describe(self) -> str:
        return f"loguniform({self.lo:.6g},{self.hi:.6g})"

    def scaled(self, factor: float) -> "LogUniformLaw":
        return LogUniformLaw(min(self.lo * factor, 0.5), min(self.hi * factor, 0.5))


@dataclass(frozen=True)
class ConstantLaw:
    """Every trial succeeds with the same probability (degenerate law)."""

    value: float = 0.5

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.full(n, self.value)

    def describe(self) -> str:
        return f"constant({self.value:.6g})"


@dataclass(frozen=True)
class GenSpec:
    """One reproducible generation request.

    kind selects which fields apply: hmm uses n_states/n_symbols/n_obs/
    alpha (and optionally target_log2, which truncates the observation
    sequence where the oracle alpha exponent first reaches the target);
    pbd uses n_trials/threshold/law; operands uses op/count/exponent_range.
    """

    master_seed: int
    kind: str
    index: int = 0
    # hmm
    n_states: int = 2
    n_symbols: int = 4
    n_obs: int = 16
    alpha: float = 1.0
    target_log2: int | None = None
    # pbd
    n_trials: int = 16
    threshold: int = 4
    law: LogUniformLaw | ConstantLaw = LogUniformLaw()
    # operands
    op: str = "add"
    count: int = 100
    exponent_range: tuple[int, int] = (-64, 0)

    def __post_init__(self) -> None:
        if self.kind not in _KIND_TAGS:
            raise ValueError(f"unknown generation kind {self.kind!r}")


def gen_hmm(spec: GenSpec, p: Precision | int = DEFAULT_PRECISION) -> HmmModel:
    """Dirichlet-rowed transition/emission matrices, uniform observations."""
    if spec.kind != "hmm":
        raise ValueError("spec.kind must be 'hmm'")
    if spec.n_states < 1 or spec.n_symbols < 2 or spec.n_obs < 1:
        raise ValueError("need n_states >= 1, n_symbols >= 2, n_obs >= 1")
    rng = _rng(spec.master_seed, "hmm", spec.index)
    a = _dirichlet_rows(rng, spec.n_states, spec.n_states, spec.alpha)
    b = _dirichlet_rows(rng, spec.n_states, spec.n_symbols, spec.alpha)
    pi = np.full(spec.n_states, 1.0 / spec.n_states)
    if spec.target_log2 is None:
        obs = rng.integers(0, spec.n_symbols, size=spec.n_obs)
        return HmmModel(a, b, obs, pi)
    return _truncate_to_target(spec, a, b, pi, p)


def _dirichlet_rows(rng: np.random.Generator, rows: int, dim: int, alpha: float) -> np.ndarray:
    out = np.empty((rows, dim))
    for i in range(rows):
        row = rng.dirichlet(np.full(dim, alpha))
        while np.any(row <= 0.0):  # a zero draw would make a degenerate row
            row = rng.dirichlet(np.full(dim, alpha))
        out[i] = row
    return out


_CHUNK = 4096
_MAX_CHUNKS = 256


def _truncate_to_target(
    spec: GenSpec, a: np.ndarray, b: np.ndarray, pi: np.ndarray, p: Precision | int
) -> HmmModel:
    """Grow the observation sequence until the oracle alpha exponent
    reaches target_log2, then cut it there."""
    target = int(spec.target_log2)  # type: ignore[arg-type]
    obs = np.empty(0, dtype=np.int64)
    for chunk_no in range(_MAX_CHUNKS):
        extra = _rng(spec.master_seed, "hmm", spec.index, sub=1 + chunk_no).integers(
            0, spec.n_symbols, size=_CHUNK
        )
        obs = np.concatenate([obs, extra])
        model = HmmModel(a, b, obs, pi)
        trace = kernels.exponent_trace(model, p)
        for t, e in trace:
            if e <= target:
                return HmmModel(a, b, obs[:t], pi)
    raise ValueError(f"alpha exponent never reached {target} within {_MAX_CHUNKS * _CHUNK} steps")


def gen_pbd(spec: GenSpec) -> PbdInstance:
    """Success probabilities from the configured law."""
    if spec.kind != "pbd":
        raise ValueError("spec.kind must be 'pbd'")
    if not 1 <= spec.threshold <= spec.n_trials:
        raise ValueError("need 1 <= threshold <= n_trials")
    rng = _rng(spec.master_seed, "pbd", spec.index)
    probs = spec.law.sample(rng, spec.n_trials)
    return PbdInstance(probs, spec.threshold)


def gen_pbd_targeted(
    master_seed: int,
    index: int,
    target_log2: float,
    window: tuple[float, float],
    threshold: int | None = None,
    p: Precision | int = DEFAULT_PRECISION,
    max_rounds: int = 8,
) -> tuple[PbdInstance, BigReal]:
    """An instance whose oracle p-value lands inside the log2 window.

    Success probabilities start from a tail-bound estimate for the target
    and are then rescaled against the oracle reference (the p-value moves
    roughly as the K-th power of a probability scale factor).  Returns the
    instance together with its oracle p-value.
    """
    lo2, hi2 = window
    if not lo2 <= target_log2 <= hi2:
        raise ValueError("target must lie inside the window")
    rng = _rng(master_seed, "pbd", index, sub=1)
    k = threshold if threshold is not None else int(rng.integers(64, 193))
    n = 2 * k
    # ln pvalue ~= K (1 + ln rho) for a mean success count rho*K << K
    ln_rho = target_log2 * math.log(2.0) / k - 1.0
    mean_p = math.exp(ln_rho) * k / n
    law = LogUniformLaw(mean_p * math.exp(-1.386) / 1.56, mean_p * math.exp(1.386) / 1.56)

    spec = GenSpec(master_seed, "pbd", index, n_trials=n, threshold=k, law=law)
    inst = gen_pbd(spec)
    for _ in range(max_rounds):
        ref = kernels.pbd_exact_reference(inst, p)
        got = exponent_of(ref)
        if lo2 <= got <= hi2:
            return inst, ref
        law = law.scaled(2.0 ** ((target_log2 - got) / k))
        inst = gen_pbd(replace(spec, law=law))
    raise ValueError(f"could not land a p-value in [2^{lo2}, 2^{hi2}] near 2^{target_log2}")


def sample_operands(spec: GenSpec) -> list[tuple[BigReal, BigReal]]:
    """Operand pairs in (0, 1] whose exact op result has an exponent
    inside exponent_range.

    Operands are exact binary64-width dyadics.  For add, both share the
    exponent just below the result's, so the sum's exponent is pinned; for
    mul, the operand exponents split the result's and the significand
    carry decides between E and E+1.
    """
    if spec.kind != "operands":
        raise ValueError("spec.kind must be 'operands'")
    if spec.op not in ("add", "mul"):
        raise ValueError(f"op must be add or mul, got {spec.op!r}")
    if spec.count < 1:
        raise ValueError("count must be positive")
    lo, hi = spec.exponent_range
    if lo > hi or hi > 0:
        raise ValueError("exponent range must be non-empty and end at or below 0")
    if spec.op == "mul" and lo > -2:
        raise ValueError("mul needs room for two sub-unit operands (lo <= -2)")

    pairs = []
    for i in range(spec.count):
        rng = _rng(spec.master_seed, "operands", i, sub=spec.index & 0xFFFF)
        pairs.append(_one_pair(rng, spec.op, lo, hi))
    return pairs


def _dyadic_operand(rng: np.random.Generator, e: int) -> BigReal:
    mant = (1 << 52) | int(rng.integers(0, 1 << 52))
    return BigReal.from_dyadic(mant, e - 52)


def _one_pair(rng: np.random.Generator, op: str, lo: int, hi: int) -> tuple[BigReal, BigReal]:
    if op == "add":
        e = int(rng.integers(lo, min(hi, -1) + 1))
        return _dyadic_operand(rng, e - 1), _dyadic_operand(rng, e - 1)
    for _ in range(1000):
        e = int(rng.integers(lo, min(hi, -2) + 1))
        ea = int(rng.integers(e + 1, 0))
        eb = e - ea
        if eb > -1:
            continue
        a = _dyadic_operand(rng, ea)
        b = _dyadic_operand(rng, eb)
        ma, xa = a.as_dyadic()
        mb, xb = b.as_dyadic()
        if lo <= (ma * mb).bit_length() - 1 + xa + xb <= hi:
            return a, b
    raise RuntimeError("operand sampling failed to land in range")


def forward_ensemble_specs(
    master_seed: int,
    count: int,
    target_window: tuple[int, int],
    n_states: int = 2,
    n_symbols: int = 256,
    alpha: float = 1.0,
) -> list[GenSpec]:
    """HMM specs whose targets spread across a log2-likelihood window."""
    lo, hi = target_window
    if lo > hi or count < 1:
        raise ValueError("need a non-empty window and a positive count")
    margin = max((hi - lo) // 20, 32)
    specs = []
    for i in range(count):
        rng = _rng(master_seed, "hmm", i, sub=255)
        target = int(rng.integers(lo + margin, hi - margin + 1))
        specs.append(
            GenSpec(
                master_seed,
                "hmm",
                i,
                n_states=n_states,
                n_symbols=n_symbols,
                alpha=alpha,
                target_log2=target,
            )
        )
    return specs
