"""Arbitrary-precision binary floating point, used as ground truth.

Backed by MPFR through gmpy2.  All operations round to an explicit working
precision (default 256 significand bits) with an essentially unbounded
exponent range, so values like 2^-2,900,000 are first-class citizens.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import gmpy2

__all__ = [
    "Precision",
    "DEFAULT_PRECISION",
    "BigReal",
    "arith",
    "add",
    "sub",
    "mul",
    "div",
    "ln",
    "exp",
    "round_to",
    "relative_error",
    "exponent_of",
]

_MIN_EXP = gmpy2.get_emin_min()
_MAX_EXP = gmpy2.get_emax_max()


@dataclass(frozen=True)
class Precision:
    """Working precision of a computation context, in significand bits."""

    significand_bits: int = 256

    def __post_init__(self) -> None:
        if self.significand_bits < 64:
            raise ValueError("precision must be at least 64 significand bits")

    def widened(self, extra: int = 64) -> "Precision":
        return Precision(self.significand_bits + extra)


DEFAULT_PRECISION = Precision(256)


@functools.lru_cache(maxsize=None)
def _ctx(bits: int) -> gmpy2.context:
    return gmpy2.context(precision=bits, emin=_MIN_EXP, emax=_MAX_EXP)


def _bits(p: Precision | int) -> int:
    return p if isinstance(p, int) else p.significand_bits


class BigReal:
    """Immutable wrapper around an MPFR value with unbounded exponent.

    Construct through the classmethods; the raw mpfr is never exposed.
    Equality and ordering compare exact values, independent of the
    precision the operands were computed at.
    """

    __slots__ = ("_v",)

    def __init__(self, value: gmpy2.mpfr) -> None:
        self._v = value

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "BigReal":
        return cls(gmpy2.mpfr(0))

    @classmethod
    def from_int(cls, n: int) -> "BigReal":
        with _ctx(max(2, abs(n).bit_length())):
            return cls(gmpy2.mpfr(n))

    @classmethod
    def from_float(cls, x: float) -> "BigReal":
        # Every finite double is a dyadic rational; this conversion is exact.
        with _ctx(64):
            return cls(gmpy2.mpfr(x))

    @classmethod
    def from_dyadic(cls, mantissa: int, exp2: int) -> "BigReal":
        """Exact value mantissa * 2^exp2 (mantissa may be negative)."""
        if mantissa == 0:
            return cls.zero()
        with _ctx(max(2, abs(mantissa).bit_length())):
            return cls(gmpy2.mul_2exp(gmpy2.mpfr(mantissa), exp2))

    @classmethod
    def power_of_two(cls, exp2: int) -> "BigReal":
        return cls.from_dyadic(1, exp2)

    @classmethod
    def from_decimal(cls, text: str, p: Precision | int = DEFAULT_PRECISION) -> "BigReal":
        with _ctx(_bits(p)):
            return cls(gmpy2.mpfr(text))

    # -- predicates and accessors -------------------------------------

    def is_zero(self) -> bool:
        return self._v == 0 and not gmpy2.is_nan(self._v)

    def is_negative(self) -> bool:
        return self._v < 0

    def is_infinite(self) -> bool:
        return gmpy2.is_infinite(self._v)

    def is_finite(self) -> bool:
        return gmpy2.is_finite(self._v)

    def as_dyadic(self) -> tuple[int, int]:
        """Exact (mantissa, exp2) with value == mantissa * 2^exp2."""
        if not self.is_finite():
            raise ValueError("no dyadic form for a non-finite value")
        m, e = self._v.as_mantissa_exp()
        return int(m), int(e)

    def to_float(self) -> float:
        """Round to the nearest binary64, with IEEE underflow/overflow."""
        return float(self._v)

    # -- comparisons ---------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BigReal) and self._v == other._v

    def __lt__(self, other: "BigReal") -> bool:
        return self._v < other._v

    def __le__(self, other: "BigReal") -> bool:
        return self._v <= other._v

    def __gt__(self, other: "BigReal") -> bool:
        return self._v > other._v

    def __ge__(self, other: "BigReal") -> bool:
        return self._v >= other._v

    def __hash__(self) -> int:
        return hash((self.__class__, str(self._v)))

    def __neg__(self) -> "BigReal":
        return BigReal(-self._v)

    def __abs__(self) -> "BigReal":
        return BigReal(abs(self._v))

    def __repr__(self) -> str:
        return f"BigReal({self})"

    def __str__(self) -> str:
        """Render as "±m x 2^E" with a 20-digit decimal significand."""
        if self.is_zero():
            return "0"
        if self.is_infinite():
            return "-inf" if self.is_negative() else "+inf"
        m, e = self.as_dyadic()
        sign = "-" if m < 0 else "+"
        m = abs(m)
        top = m.bit_length() - 1
        with _ctx(80):
            sig = gmpy2.mul_2exp(gmpy2.mpfr(m), -top)
        return f"{sign}{format(sig, '.20g')} x 2^{e + top}"


# -- arithmetic --------------------------------------------------------


def add(a: BigReal, b: BigReal, p: Precision | int = DEFAULT_PRECISION) -> BigReal:
    return BigReal(_ctx(_bits(p)).add(a._v, b._v))


def sub(a: BigReal, b: BigReal, p: Precision | int = DEFAULT_PRECISION) -> BigReal:
    return BigReal(_ctx(_bits(p)).sub(a._v, b._v))


def mul(a: BigReal, b: BigReal, p: Precision | int = DEFAULT_PRECISION) -> BigReal:
    return BigReal(_ctx(_bits(p)).mul(a._v, b._v))


def div(a: BigReal, b: BigReal, p: Precision | int = DEFAULT_PRECISION) -> BigReal:
    if b.is_zero():
        raise ZeroDivisionError("division by BigReal zero")
    return BigReal(_ctx(_bits(p)).div(a._v, b._v))


_OPS = {"add": add, "sub": sub, "mul": mul, "div": div}


def arith(op: str, a: BigReal, b: BigReal, p: Precision | int = DEFAULT_PRECISION) -> BigReal:
    """Dispatch one of add/sub/mul/div, correctly rounded at precision p."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(a, b, p)


def ln(a: BigReal, p: Precision | int = DEFAULT_PRECISION) -> BigReal:
    """Natural log, correctly rounded at precision p.  Requires a > 0."""
    if a.is_zero() or a.is_negative():
        raise ValueError("ln requires a positive argument")
    return BigReal(_ctx(_bits(p)).log(a._v))


def exp(a: BigReal, p: Precision | int = DEFAULT_PRECISION) -> BigReal:
    return BigReal(_ctx(_bits(p)).exp(a._v))


def round_to(a: BigReal, p: Precision | int = DEFAULT_PRECISION) -> BigReal:
    """Re-round a value to precision p (nearest-even)."""
    return BigReal(_ctx(_bits(p)).add(a._v, gmpy2.mpfr(0)))


INFINITE_ERROR = BigReal(gmpy2.mpfr("inf"))


def relative_error(x_true: BigReal, y: BigReal, p: Precision | int = DEFAULT_PRECISION) -> BigReal:
    """|x - y| / |x| at working precision.

    A zero truth gives 0 for an exactly-zero y and the infinite-error
    marker otherwise.
    """
    if x_true.is_zero():
        return BigReal.zero() if y.is_zero() else INFINITE_ERROR
    ctx = _ctx(_bits(p))
    return BigReal(abs(ctx.div(ctx.sub(x_true._v, y._v), x_true._v)))


def exponent_of(a: BigReal) -> int:
    """The unique integer E with 1 <= |a| / 2^E < 2."""
    if a.is_zero():
        raise ValueError("zero has no base-2 exponent")
    m, e = a.as_dyadic()
    return e + abs(m).bit_length() - 1
