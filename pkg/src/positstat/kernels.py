"""The two statistical workloads, written once against NumericSystem.

The HMM forward algorithm multiplies transition and emission probabilities
into alpha states and sums paths; the Poisson-binomial kernel runs the
double-buffered success-count recurrence and accumulates the tail p-value.
Accumulation order is fixed (ascending indices) in every system so results
are bit-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, TextIO

import numpy as np

from . import oracle
from .oracle import BigReal, DEFAULT_PRECISION, Precision, exponent_of
from .systems import NumericSystem, OracleSystem

__all__ = [
    "HmmModel",
    "PbdInstance",
    "forward",
    "forward_likelihood",
    "pbd_pvalue",
    "pbd_exact_reference",
    "pbd_enumerate",
    "exponent_trace",
    "save_hmm",
    "load_hmm",
    "save_pbd",
    "load_pbd",
]

_ROW_SUM_TOL = 1e-12


@dataclass
class HmmModel:
    """A hidden Markov model plus one observation sequence.

    transition[p][q] is the probability of moving from state p to state q;
    emission[q][o] of seeing symbol o in state q.  Treated as immutable.
    """

    transition: np.ndarray
    emission: np.ndarray
    observations: np.ndarray
    initial: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.transition = np.asarray(self.transition, dtype=np.float64)
        self.emission = np.asarray(self.emission, dtype=np.float64)
        self.observations = np.asarray(self.observations, dtype=np.int64)
        h = self.transition.shape[0]
        if self.initial is None:
            self.initial = np.full(h, 1.0 / h)
        self.initial = np.asarray(self.initial, dtype=np.float64)
        self._validate()

    def _validate(self) -> None:
        h, m = self.emission.shape
        if self.transition.shape != (h, h):
            raise ValueError("transition matrix must be square and match emission rows")
        if self.observations.ndim != 1 or len(self.observations) < 1:
            raise ValueError("need at least one observation")
        if self.initial.shape != (h,):
            raise ValueError("initial distribution length must equal the state count")
        for name, mat in (("transition", self.transition), ("emission", self.emission)):
            if np.any(mat < 0.0) or np.any(mat > 1.0):
                raise ValueError(f"{name} entries must lie in [0, 1]")
            if np.max(np.abs(mat.sum(axis=1) - 1.0)) > _ROW_SUM_TOL:
                raise ValueError(f"every {name} row must sum to 1")
        if abs(self.initial.sum() - 1.0) > _ROW_SUM_TOL:
            raise ValueError("initial distribution must sum to 1")
        if np.any(self.observations < 0) or np.any(self.observations >= m):
            raise ValueError("observations must index emission columns")

    @property
    def n_states(self) -> int:
        return self.transition.shape[0]

    @property
    def n_symbols(self) -> int:
        return self.emission.shape[1]

    @property
    def n_obs(self) -> int:
        return len(self.observations)


@dataclass
class PbdInstance:
    """Success probabilities for independent trials plus a tail threshold."""

    success_probs: np.ndarray
    threshold: int

    def __post_init__(self) -> None:
        self.success_probs = np.asarray(self.success_probs, dtype=np.float64)
        if self.success_probs.ndim != 1 or len(self.success_probs) < 1:
            raise ValueError("need at least one trial")
        if np.any(self.success_probs < 0.0) or np.any(self.success_probs > 1.0):
            raise ValueError("success probabilities must lie in [0, 1]")
        if not 1 <= self.threshold <= len(self.success_probs):
            raise ValueError("threshold must lie in [1, n_trials]")

    @property
    def n_trials(self) -> int:
        return len(self.success_probs)


def _encode_matrix(mat: np.ndarray, sys: NumericSystem) -> list[list[Any]]:
    return [[sys.from_real(BigReal.from_float(float(x))) for x in row] for row in mat]


def forward(model: HmmModel, sys: NumericSystem) -> Any:
    """Observation-sequence likelihood of the model, in sys arithmetic.

    Returns the raw system value: a linear likelihood for linear systems,
    the natural-log likelihood for log-space systems.  Decode with
    sys.to_real to compare across systems.
    """
    a = _encode_matrix(model.transition, sys)
    b = _encode_matrix(model.emission, sys)
    pi = [sys.from_real(BigReal.from_float(float(x))) for x in model.initial]
    obs = model.observations
    h = model.n_states

    alpha = [sys.mul(pi[q], b[q][obs[0]]) for q in range(h)]
    for t in range(1, model.n_obs):
        ot = obs[t]
        alpha = [
            sys.mul(sys.sum([sys.mul(alpha[p], a[p][q]) for p in range(h)]), b[q][ot])
            for q in range(h)
        ]
    return sys.sum(alpha)


def forward_likelihood(model: HmmModel, sys: NumericSystem) -> BigReal:
    """forward() decoded to ground truth (log systems are exponentiated)."""
    return sys.to_real(forward(model, sys))


def pbd_pvalue(inst: PbdInstance, sys: NumericSystem, *, literal_guard: bool = False) -> Any:
    """Tail probability P(successes >= threshold), in sys arithmetic.

    States 0..K-1 are double-buffered; probability mass that would enter
    state K is accumulated into the p-value instead.  The transition into
    K is first possible at trial n = K (1-indexed), so the accumulation
    guard is n >= K.  literal_guard=True reproduces the off-by-one n > K
    variant for comparison; it drops the all-of-the-first-K-successes path.
    """
    k_top = inst.threshold
    one = BigReal.from_int(1)
    enc = []
    for p in inst.success_probs:
        pb = BigReal.from_float(float(p))
        qb = oracle.sub(one, pb, getattr(sys, "precision", DEFAULT_PRECISION))
        enc.append((sys.from_real(pb), sys.from_real(qb)))

    pr = [sys.one()] + [sys.zero()] * (k_top - 1)
    pvalue = sys.zero()
    for n, (pn, qn) in enumerate(enc, start=1):
        new = [sys.zero()] * k_top
        for k in range(1, k_top):
            new[k] = sys.add(sys.mul(pr[k], qn), sys.mul(pr[k - 1], pn))
        new[0] = sys.mul(pr[0], qn)
        if n > k_top if literal_guard else n >= k_top:
            pvalue = sys.add(pvalue, sys.mul(pr[k_top - 1], pn))
        pr = new
    return pvalue


def pbd_exact_reference(inst: PbdInstance, p: Precision | int = DEFAULT_PRECISION) -> BigReal:
    """Independent tail reference: full DP over states 0..K in the oracle.

    State K holds all mass with at least K successes and is carried to the
    end rather than accumulated along the way, so it exercises a different
    code path than pbd_pvalue.
    """
    k_top = inst.threshold
    one = BigReal.from_int(1)
    dp = [one] + [BigReal.zero()] * k_top
    for prob in inst.success_probs:
        pb = BigReal.from_float(float(prob))
        qb = oracle.sub(one, pb, p)
        new = [oracle.mul(dp[0], qb, p)]
        for k in range(1, k_top):
            new.append(oracle.add(oracle.mul(dp[k], qb, p), oracle.mul(dp[k - 1], pb, p), p))
        new.append(oracle.add(dp[k_top], oracle.mul(dp[k_top - 1], pb, p), p))
        dp = new
    return dp[k_top]


def pbd_enumerate(inst: PbdInstance, p: Precision | int = DEFAULT_PRECISION) -> BigReal:
    """Brute-force tail probability over all 2^N outcomes (N small)."""
    n = inst.n_trials
    if n > 20:
        raise ValueError("enumeration is limited to 20 trials")
    one = BigReal.from_int(1)
    probs = [BigReal.from_float(float(x)) for x in inst.success_probs]
    comps = [oracle.sub(one, x, p) for x in probs]
    total = BigReal.zero()
    for mask in range(1 << n):
        if mask.bit_count() < inst.threshold:
            continue
        w = one
        for i in range(n):
            w = oracle.mul(w, probs[i] if (mask >> i) & 1 else comps[i], p)
        total = oracle.add(total, w, p)
    return total


def exponent_trace(model: HmmModel, p: Precision | int = DEFAULT_PRECISION) -> list[tuple[int, int]]:
    """(t, E) pairs: the largest alpha exponent after t observations.

    Runs the forward recurrence in the oracle; t counts processed
    observations starting at 1, so a model that halves alpha each step
    traces the line E = -t.
    """
    sys = OracleSystem(p if isinstance(p, Precision) else Precision(p))
    a = _encode_matrix(model.transition, sys)
    b = _encode_matrix(model.emission, sys)
    pi = [sys.from_real(BigReal.from_float(float(x))) for x in model.initial]
    obs = model.observations
    h = model.n_states

    def max_exponent(alpha: list[BigReal]) -> int:
        live = [x for x in alpha if not x.is_zero()]
        if not live:
            raise ValueError("all alpha states are zero; exponent undefined")
        return max(exponent_of(x) for x in live)

    alpha = [sys.mul(pi[q], b[q][obs[0]]) for q in range(h)]
    trace = [(1, max_exponent(alpha))]
    for t in range(1, model.n_obs):
        ot = obs[t]
        alpha = [
            sys.mul(sys.sum([sys.mul(alpha[p_], a[p_][q]) for p_ in range(h)]), b[q][ot])
            for q in range(h)
        ]
        trace.append((t + 1, max_exponent(alpha)))
    return trace


# -- plain-text serialization ------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".20g")


def save_hmm(model: HmmModel, f: TextIO) -> None:
    """header "hmm H M T", then A rows, B rows, pi, O."""
    h, m, t = model.n_states, model.n_symbols, model.n_obs
    f.write(f"hmm {h} {m} {t}\n")
    for row in model.transition:
        f.write(" ".join(_fmt(x) for x in row) + "\n")
    for row in model.emission:
        f.write(" ".join(_fmt(x) for x in row) + "\n")
    f.write(" ".join(_fmt(x) for x in model.initial) + "\n")
    f.write(" ".join(str(int(o)) for o in model.observations) + "\n")


def load_hmm(f: TextIO) -> HmmModel:
    header = f.readline().split()
    if len(header) != 4 or header[0] != "hmm":
        raise ValueError("expected an 'hmm H M T' header")
    h, m, t = (int(x) for x in header[1:])
    tokens = f.read().split()
    need = h * h + h * m + h + t
    if len(tokens) != need:
        raise ValueError(f"expected {need} values, found {len(tokens)}")
    vals = [float(x) for x in tokens[: h * h + h * m + h]]
    obs = [int(x) for x in tokens[h * h + h * m + h:]]
    a = np.array(vals[: h * h]).reshape(h, h)
    b = np.array(vals[h * h: h * h + h * m]).reshape(h, m)
    pi = np.array(vals[h * h + h * m:])
    return HmmModel(a, b, np.array(obs), pi)


def save_pbd(inst: PbdInstance, f: TextIO) -> None:
    """header "pbd N K", then the success probabilities."""
    f.write(f"pbd {inst.n_trials} {inst.threshold}\n")
    f.write(" ".join(_fmt(x) for x in inst.success_probs) + "\n")


def load_pbd(f: TextIO) -> PbdInstance:
    header = f.readline().split()
    if len(header) != 3 or header[0] != "pbd":
        raise ValueError("expected a 'pbd N K' header")
    n, k = int(header[1]), int(header[2])
    probs = [float(x) for x in f.read().split()]
    if len(probs) != n:
        raise ValueError(f"expected {n} probabilities, found {len(probs)}")
    return PbdInstance(np.array(probs), k)
