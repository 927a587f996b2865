"""The number systems the kernels are instantiated with.

Every system exposes the same tiny surface: encode a ground-truth value,
do add/mul/n-ary sum in its own arithmetic, and decode back to ground
truth.  Linear systems sum by left-to-right accumulation from zero;
log-space systems sum with the max-shifted stable form.  Log-space
encoding takes the natural log in the oracle first, then rounds, so the
conversion error is the oracle's, not the system's.
"""

from __future__ import annotations

import math
import re
from abc import ABC, abstractmethod
from typing import Any, Sequence

import gmpy2

from . import logspace, oracle, posit
from .logspace import LOG_ZERO, LogNum
from .oracle import BigReal, DEFAULT_PRECISION, Precision
from .posit import PositConfig, PositValue

__all__ = [
    "NumericSystem",
    "Binary64System",
    "LogSpaceSystem",
    "PositSystem",
    "OracleSystem",
    "OracleLogSystem",
    "get_system",
    "DEFAULT_SYSTEM_NAMES",
]

DEFAULT_SYSTEM_NAMES = ("binary64", "log", "posit64e9", "posit64e12", "posit64e18")


class NumericSystem(ABC):
    """One way of carrying probabilities through a computation."""

    name: str

    @abstractmethod
    def zero(self) -> Any: ...

    @abstractmethod
    def one(self) -> Any: ...

    @abstractmethod
    def add(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def mul(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def from_real(self, x: BigReal) -> Any: ...

    @abstractmethod
    def to_real(self, v: Any) -> BigReal: ...

    def sum(self, terms: Sequence[Any]) -> Any:
        """Accumulate left-to-right from zero (overridden for log space)."""
        if not terms:
            raise ValueError("sum requires at least one term")
        acc = self.zero()
        for t in terms:
            acc = self.add(acc, t)
        return acc

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class Binary64System(NumericSystem):
    """Plain IEEE double precision."""

    name = "binary64"

    def zero(self) -> float:
        return 0.0

    def one(self) -> float:
        return 1.0

    def add(self, a: float, b: float) -> float:
        return a + b

    def mul(self, a: float, b: float) -> float:
        return a * b

    def from_real(self, x: BigReal) -> float:
        return x.to_float()

    def to_real(self, v: float) -> BigReal:
        return BigReal.from_float(v)


class LogSpaceSystem(NumericSystem):
    """binary64 doubles holding natural logs; adds are stable LSE."""

    name = "log"

    def __init__(self, precision: Precision = DEFAULT_PRECISION, *, tree_sum: bool = False):
        self.precision = precision
        self.tree_sum = tree_sum

    def zero(self) -> LogNum:
        return LOG_ZERO

    def one(self) -> LogNum:
        return LogNum.from_ln(0.0)

    def add(self, a: LogNum, b: LogNum) -> LogNum:
        return logspace.lse2(a, b)

    def mul(self, a: LogNum, b: LogNum) -> LogNum:
        return logspace.log_mul(a, b)

    def sum(self, terms: Sequence[LogNum]) -> LogNum:
        return logspace.lse_n(terms, tree=self.tree_sum)

    def from_real(self, x: BigReal) -> LogNum:
        if x.is_zero():
            return LOG_ZERO
        return LogNum.from_ln(oracle.ln(x, self.precision).to_float())

    def to_real(self, v: LogNum) -> BigReal:
        if v.is_zero:
            return BigReal.zero()
        if math.isinf(v.lx):
            return BigReal(gmpy2.mpfr("inf" if v.lx > 0 else "-inf"))
        return oracle.exp(BigReal.from_float(v.lx), self.precision)


class PositSystem(NumericSystem):
    """A posit(N,ES) lattice with exact-then-round arithmetic."""

    def __init__(self, config: PositConfig):
        self.config = config
        self.name = f"posit{config.n_bits}e{config.es}"

    def zero(self) -> PositValue:
        return PositValue.zero(self.config)

    def one(self) -> PositValue:
        return PositValue.one(self.config)

    def add(self, a: PositValue, b: PositValue) -> PositValue:
        return posit.add(a, b)

    def mul(self, a: PositValue, b: PositValue) -> PositValue:
        return posit.mul(a, b)

    def from_real(self, x: BigReal) -> PositValue:
        return posit.from_real(x, self.config)

    def to_real(self, v: PositValue) -> BigReal:
        return posit.to_real(v)


class OracleSystem(NumericSystem):
    """The ground-truth arithmetic itself, at a fixed working precision."""

    def __init__(self, precision: Precision = DEFAULT_PRECISION):
        self.precision = precision
        self.name = "oracle"

    def zero(self) -> BigReal:
        return BigReal.zero()

    def one(self) -> BigReal:
        return BigReal.from_int(1)

    def add(self, a: BigReal, b: BigReal) -> BigReal:
        return oracle.add(a, b, self.precision)

    def mul(self, a: BigReal, b: BigReal) -> BigReal:
        return oracle.mul(a, b, self.precision)

    def from_real(self, x: BigReal) -> BigReal:
        return oracle.round_to(x, self.precision)

    def to_real(self, v: BigReal) -> BigReal:
        return v


class OracleLogSystem(NumericSystem):
    """Log-space carried in oracle precision (the log kernels' ground truth).

    Values are natural logs as BigReal; exact zero is carried as -inf,
    which exp() maps back to zero.
    """

    def __init__(self, precision: Precision = DEFAULT_PRECISION):
        self.precision = precision
        self.name = "oracle-log"
        self._neg_inf = BigReal(gmpy2.mpfr("-inf"))

    def zero(self) -> BigReal:
        return self._neg_inf

    def one(self) -> BigReal:
        return BigReal.zero()

    def add(self, a: BigReal, b: BigReal) -> BigReal:
        return self.sum((a, b))

    def mul(self, a: BigReal, b: BigReal) -> BigReal:
        if a.is_infinite() or b.is_infinite():
            return self._neg_inf
        return oracle.add(a, b, self.precision)

    def sum(self, terms: Sequence[BigReal]) -> BigReal:
        if not terms:
            raise ValueError("sum requires at least one term")
        finite = [t for t in terms if not t.is_infinite()]
        if not finite:
            return self._neg_inf
        m = finite[0]
        for t in finite[1:]:
            if t > m:
                m = t
        total = BigReal.zero()
        for t in finite:
            total = oracle.add(total, oracle.exp(oracle.sub(t, m, self.precision), self.precision), self.precision)
        return oracle.add(m, oracle.ln(total, self.precision), self.precision)

    def from_real(self, x: BigReal) -> BigReal:
        if x.is_zero():
            return self._neg_inf
        return oracle.ln(x, self.precision)

    def to_real(self, v: BigReal) -> BigReal:
        if v.is_infinite() and v.is_negative():
            return BigReal.zero()
        return oracle.exp(v, self.precision)


_POSIT_NAME = re.compile(r"^posit(\d+)e(\d+)$")


def get_system(name: str, precision: Precision = DEFAULT_PRECISION) -> NumericSystem:
    """Build a system from its CSV/CLI name, e.g. "binary64" or "posit64e12"."""
    if name == "binary64":
        return Binary64System()
    if name == "log":
        return LogSpaceSystem(precision)
    if name == "oracle":
        return OracleSystem(precision)
    if name == "oracle-log":
        return OracleLogSystem(precision)
    m = _POSIT_NAME.match(name)
    if m:
        return PositSystem(PositConfig(int(m.group(1)), int(m.group(2))))
    raise ValueError(f"unknown number system {name!r}")
