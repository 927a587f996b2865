"""Natural-log-space arithmetic over binary64.

A non-negative real x is carried as lx = ln(x) in a double; exact zero is
a flag rather than -inf so comparisons stay total and explicit.  Multiply is
a log add; add is either the deliberately naive form (which underflows and
overflows exactly the way binary64 does) or the max-shifted stable form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "LogNum",
    "LOG_ZERO",
    "log_mul",
    "naive_log_add",
    "lse2",
    "lse_n",
    "to_csv_field",
]


@dataclass(frozen=True)
class LogNum:
    """A probability-like magnitude stored as its natural log."""

    lx: float = 0.0
    is_zero: bool = False

    @classmethod
    def zero(cls) -> "LogNum":
        return cls(0.0, True)

    @classmethod
    def from_ln(cls, lx: float) -> "LogNum":
        return cls(float(lx), False)


LOG_ZERO = LogNum.zero()


def _exp64(x: float) -> float:
    # math.exp raises instead of returning inf past ~709.78
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def log_mul(a: LogNum, b: LogNum) -> LogNum:
    """Multiply: add the logs; zero is absorbing."""
    if a.is_zero or b.is_zero:
        return LOG_ZERO
    return LogNum(a.lx + b.lx)


def naive_log_add(a: LogNum, b: LogNum) -> LogNum:
    """log(exp(lx) + exp(ly)) evaluated literally in binary64.

    Intentionally unstable: both exponentials can underflow to zero (the
    result is then the zero flag) and large inputs overflow to +inf.
    """
    s = (0.0 if a.is_zero else _exp64(a.lx)) + (0.0 if b.is_zero else _exp64(b.lx))
    if s == 0.0:
        return LOG_ZERO
    return LogNum(math.log(s) if math.isfinite(s) else math.inf)


def lse2(a: LogNum, b: LogNum) -> LogNum:
    """Stable two-input log add: m + log(exp(lx-m) + exp(ly-m)).

    The shift makes the larger term exp(0) = 1, so overflow is impossible
    and the result is always >= max(lx, ly).
    """
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    m = a.lx if a.lx >= b.lx else b.lx
    return LogNum(m + math.log(math.exp(a.lx - m) + math.exp(b.lx - m)))


def lse_n(terms: Sequence[LogNum] | Iterable[LogNum], *, tree: bool = False) -> LogNum:
    """Stable n-input log add.

    The shifted exponentials accumulate left-to-right in input order by
    default; tree=True reduces them pairwise instead (an adder-tree order,
    differing from sequential only in rounding).  Zero terms vanish; an
    all-zero input yields the zero flag.  Empty input is a usage error.
    """
    terms = list(terms)
    if not terms:
        raise ValueError("lse_n requires at least one term")
    m = None
    for t in terms:
        if not t.is_zero and (m is None or t.lx > m):
            m = t.lx
    if m is None:
        return LOG_ZERO
    parts = [0.0 if t.is_zero else math.exp(t.lx - m) for t in terms]
    if tree:
        total = _tree_sum(parts)
    else:
        total = 0.0
        for p in parts:
            total += p
    return LogNum(m + math.log(total))


def _tree_sum(parts: Sequence[float]) -> float:
    if len(parts) == 1:
        return parts[0]
    mid = (len(parts) + 1) // 2
    return _tree_sum(parts[:mid]) + _tree_sum(parts[mid:])


def to_csv_field(a: LogNum) -> str:
    """Decimal lx, with "-inf" for the zero flag."""
    return "-inf" if a.is_zero else repr(a.lx)
