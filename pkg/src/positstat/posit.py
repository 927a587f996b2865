"""Bit-exact posit(N,ES) values: decoding, round-to-nearest encoding, add, mul.

A posit packs sign, a variable-length regime run, up to ES exponent bits,
and fraction bits into N bits.  The magnitude bit patterns are ordered the
same way as the values they encode, which this module exploits: encoding
first truncates the ideal unbounded pattern to find the bracketing lattice
values, then picks the nearer one exactly (ties to the even bit pattern).
Arithmetic computes exact dyadic intermediates and rounds once.

Saturation rules: finite nonzero values never round to zero or NaR;
magnitudes below minpos give minpos, above maxpos give maxpos.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .oracle import BigReal

__all__ = [
    "PositConfig",
    "PositValue",
    "PositFields",
    "ConfigProperties",
    "FieldWidths",
    "NotARealError",
    "decode_fields",
    "to_real",
    "from_real",
    "add",
    "mul",
    "config_properties",
    "field_widths_for",
]


class NotARealError(ValueError):
    """Raised when NaR reaches an operation that needs a real value."""


@dataclass(frozen=True)
class PositConfig:
    """Format descriptor: total width n_bits and max exponent width es."""

    n_bits: int
    es: int

    def __post_init__(self) -> None:
        if not 4 <= self.n_bits <= 64:
            raise ValueError(f"n_bits must be in [4, 64], got {self.n_bits}")
        if not 0 <= self.es <= 24:
            raise ValueError(f"es must be in [0, 24], got {self.es}")
        if self.n_bits < self.es + 3:
            raise ValueError(f"n_bits must be at least es + 3 ({self.es + 3})")

    @cached_property
    def useed_log2(self) -> int:
        return 1 << self.es

    @cached_property
    def minpos_log2(self) -> int:
        return -(self.n_bits - 2) * self.useed_log2

    @cached_property
    def maxpos_log2(self) -> int:
        return (self.n_bits - 2) * self.useed_log2

    @property
    def max_fraction_bits(self) -> int:
        # one sign bit, the shortest (2-bit) regime, and a full exponent field
        return self.n_bits - 3 - self.es

    def useed(self) -> BigReal:
        return BigReal.power_of_two(self.useed_log2)

    def minpos(self) -> BigReal:
        return BigReal.power_of_two(self.minpos_log2)

    def maxpos(self) -> BigReal:
        return BigReal.power_of_two(self.maxpos_log2)

    def __str__(self) -> str:
        return f"posit({self.n_bits},{self.es})"


@dataclass(frozen=True)
class PositValue:
    """An n_bits-wide pattern, right-aligned in a 64-bit word."""

    bits: int
    config: PositConfig

    def __post_init__(self) -> None:
        if not 0 <= self.bits < (1 << self.config.n_bits):
            raise ValueError(f"bit pattern out of range for {self.config}")

    @classmethod
    def zero(cls, config: PositConfig) -> "PositValue":
        return cls(0, config)

    @classmethod
    def nar(cls, config: PositConfig) -> "PositValue":
        return cls(1 << (config.n_bits - 1), config)

    @classmethod
    def one(cls, config: PositConfig) -> "PositValue":
        # k = 0, e = 0, f = 0: sign bit clear, regime '10', rest zero
        return cls(1 << (config.n_bits - 2), config)

    def is_zero(self) -> bool:
        return self.bits == 0

    def is_nar(self) -> bool:
        return self.bits == 1 << (self.config.n_bits - 1)

    def signed_int(self) -> int:
        """The pattern as a two's-complement n-bit integer (value order)."""
        n = self.config.n_bits
        return self.bits - (1 << n) if self.bits >> (n - 1) else self.bits

    def to_hex(self) -> str:
        return format(self.bits, f"0{(self.config.n_bits + 3) // 4}x")

    @classmethod
    def from_hex(cls, text: str, config: PositConfig) -> "PositValue":
        return cls(int(text, 16), config)


@dataclass(frozen=True)
class PositFields:
    """Decoded magnitude fields: value = (-1)^sign * useed^k * 2^e * (1+f)."""

    sign: int
    k: int
    e: int
    fraction_bit_count: int
    fraction: int


@dataclass(frozen=True)
class ConfigProperties:
    useed: BigReal
    minpos: BigReal
    maxpos: BigReal
    max_fraction_bits: int


@dataclass(frozen=True)
class FieldWidths:
    regime_bits: int
    exponent_bits: int
    fraction_bits: int


def _decode_body(body: int, config: PositConfig) -> tuple[int, int, int, int]:
    """Split the n-1 magnitude bits below the sign into (k, e, fbc, fraction).

    When fewer than es bits remain after the regime, the stored bits are
    the high-order bits of e and the missing low bits are zero.
    """
    n = config.n_bits
    width = n - 1
    r = (body >> (width - 1)) & 1
    run = 1
    while run < width and (body >> (width - 1 - run)) & 1 == r:
        run += 1
    k = run - 1 if r else -run
    remaining = width - run - 1  # bits after the regime terminator
    if remaining < 0:
        remaining = 0  # the run reached the end; terminator is implicit
    e_stored = min(config.es, remaining)
    fbc = remaining - e_stored
    e = ((body >> fbc) & ((1 << e_stored) - 1)) << (config.es - e_stored)
    fraction = body & ((1 << fbc) - 1)
    return k, e, fbc, fraction


def decode_fields(p: PositValue) -> PositFields:
    """Decode a non-special pattern into its sign/regime/exponent/fraction."""
    if p.is_zero():
        raise ValueError("the zero pattern has no fields")
    if p.is_nar():
        raise NotARealError("NaR has no fields")
    n = p.config.n_bits
    sign = p.bits >> (n - 1)
    mag = p.bits if sign == 0 else (1 << n) - p.bits
    body = mag & ((1 << (n - 1)) - 1)
    k, e, fbc, fraction = _decode_body(body, p.config)
    return PositFields(sign, k, e, fbc, fraction)


def _body_to_dyadic(body: int, config: PositConfig) -> tuple[int, int]:
    """Exact (mantissa, exp2) of a magnitude body; mantissa > 0."""
    k, e, fbc, fraction = _decode_body(body, config)
    m = (1 << fbc) | fraction
    return m, k * config.useed_log2 + e - fbc


def to_real(p: PositValue) -> BigReal:
    """Exact real value of a pattern; zero maps to 0, NaR raises."""
    if p.is_zero():
        return BigReal.zero()
    if p.is_nar():
        raise NotARealError("NaR is not a real value")
    f = decode_fields(p)
    m = (1 << f.fraction_bit_count) | f.fraction
    if f.sign:
        m = -m
    return BigReal.from_dyadic(m, f.k * p.config.useed_log2 + f.e - f.fraction_bit_count)


def _encode_magnitude(m: int, exp2: int, config: PositConfig) -> int:
    """Round the exact value m * 2^exp2 (m > 0) to the nearest magnitude body.

    Returns the n-1 bit body; saturates to minpos/maxpos instead of
    rounding to zero or overflowing to NaR.
    """
    n = config.n_bits
    body_width = n - 1
    length = m.bit_length()
    scale = exp2 + length - 1
    if scale < config.minpos_log2:
        return 1  # below minpos: saturate, never round to zero
    if scale > config.maxpos_log2 or (scale == config.maxpos_log2 and m != 1 << (length - 1)):
        return (1 << body_width) - 1  # at or above maxpos with excess: saturate

    k, e = divmod(scale, config.useed_log2)
    if k >= 0:
        regime = ((1 << (k + 1)) - 1) << 1  # k+1 ones then the 0 terminator
        regime_len = k + 2
    else:
        regime = 1  # -k zeros then the 1 terminator
        regime_len = -k + 1
    frac_bits = length - 1
    fraction = m - (1 << frac_bits)
    full = (((regime << config.es) | e) << frac_bits) | fraction
    full_len = regime_len + config.es + frac_bits

    if full_len <= body_width:
        return full << (body_width - full_len)

    drop = full_len - body_width
    floor_body = full >> drop
    if full & ((1 << drop) - 1) == 0:
        return floor_body  # exact
    hi_body = floor_body + 1

    # Pick the neighbor nearer in value: compare 2x against lo + hi exactly.
    ml, el = _body_to_dyadic(floor_body, config)
    mh, eh = _body_to_dyadic(hi_body, config)
    ex = exp2 + 1
    base = min(ex, el, eh)
    lhs = m << (ex - base)
    rhs = (ml << (el - base)) + (mh << (eh - base))
    if lhs < rhs:
        return floor_body
    if lhs > rhs:
        return hi_body
    return floor_body if floor_body & 1 == 0 else hi_body  # tie: even pattern


def _pack(sign: int, body: int, config: PositConfig) -> PositValue:
    bits = body if sign == 0 else ((1 << config.n_bits) - body)
    return PositValue(bits, config)


def _encode_dyadic(m: int, exp2: int, config: PositConfig) -> PositValue:
    if m == 0:
        return PositValue.zero(config)
    sign = 1 if m < 0 else 0
    return _pack(sign, _encode_magnitude(abs(m), exp2, config), config)


def from_real(x: BigReal, config: PositConfig) -> PositValue:
    """Round a finite real to the nearest posit (ties to even pattern)."""
    if x.is_zero():
        return PositValue.zero(config)
    if not x.is_finite():
        raise ValueError("cannot encode a non-finite value")
    m, e = x.as_dyadic()
    return _encode_dyadic(m, e, config)


# Top-exponent gap beyond which the smaller addend can only influence the
# sticky contribution; it is then folded into a one-unit proxy so the
# aligned integers stay small even across the full posit range.
_STICKY_MARGIN = 160


def add(a: PositValue, b: PositValue) -> PositValue:
    """Exact sum, then one correct rounding.  NaR is absorbing."""
    if a.config != b.config:
        raise ValueError("operands must share a config")
    if a.is_nar() or b.is_nar():
        return PositValue.nar(a.config)
    if a.is_zero():
        return b
    if b.is_zero():
        return a

    fa, fb = decode_fields(a), decode_fields(b)
    ma = (1 << fa.fraction_bit_count) | fa.fraction
    mb = (1 << fb.fraction_bit_count) | fb.fraction
    ea = fa.k * a.config.useed_log2 + fa.e - fa.fraction_bit_count
    eb = fb.k * b.config.useed_log2 + fb.e - fb.fraction_bit_count
    sa = -1 if fa.sign else 1
    sb = -1 if fb.sign else 1

    # Top-of-value exponents decide whether the gap is too wide to matter.
    top_a = ea + ma.bit_length() - 1
    top_b = eb + mb.bit_length() - 1
    if top_a < top_b:
        ma, ea, sa, mb, eb, sb = mb, eb, sb, ma, ea, sa
        top_a, top_b = top_b, top_a
    shift = a.config.n_bits + _STICKY_MARGIN
    if top_a - top_b > shift:
        # The small addend lies entirely below the rounding position; a
        # signed one-unit proxy well below it is exactly equivalent.
        v = ((sa * ma) << shift) + sb
        base = ea - shift
    else:
        base = min(ea, eb)
        v = ((sa * ma) << (ea - base)) + ((sb * mb) << (eb - base))
    if v == 0:
        return PositValue.zero(a.config)
    return _encode_dyadic(v, base, a.config)


def mul(a: PositValue, b: PositValue) -> PositValue:
    """Exact product, then one correct rounding.  NaR is absorbing."""
    if a.config != b.config:
        raise ValueError("operands must share a config")
    if a.is_nar() or b.is_nar():
        return PositValue.nar(a.config)
    if a.is_zero() or b.is_zero():
        return PositValue.zero(a.config)

    fa, fb = decode_fields(a), decode_fields(b)
    ma = (1 << fa.fraction_bit_count) | fa.fraction
    mb = (1 << fb.fraction_bit_count) | fb.fraction
    ea = fa.k * a.config.useed_log2 + fa.e - fa.fraction_bit_count
    eb = fb.k * b.config.useed_log2 + fb.e - fb.fraction_bit_count
    m = ma * mb
    if fa.sign != fb.sign:
        m = -m
    return _encode_dyadic(m, ea + eb, a.config)


def config_properties(config: PositConfig) -> ConfigProperties:
    """useed, minpos, maxpos, and the max fraction width of a config."""
    return ConfigProperties(
        useed=config.useed(),
        minpos=config.minpos(),
        maxpos=config.maxpos(),
        max_fraction_bits=config.max_fraction_bits,
    )


def field_widths_for(x: BigReal, config: PositConfig) -> FieldWidths:
    """Field widths the encoding of x uses (regime includes its terminator)."""
    if x.is_zero():
        raise ValueError("zero uses no fields")
    m, e = x.as_dyadic()
    m = abs(m)
    scale = e + m.bit_length() - 1
    above_max = scale > config.maxpos_log2 or (
        scale == config.maxpos_log2 and m != 1 << (m.bit_length() - 1)
    )
    if scale < config.minpos_log2 or above_max:
        raise ValueError(f"|x| outside the representable range of {config}")
    width = config.n_bits - 1
    k = scale // config.useed_log2
    regime = min(k + 2, width) if k >= 0 else min(-k + 1, width)
    exponent = min(config.es, width - regime)
    return FieldWidths(
        regime_bits=regime,
        exponent_bits=exponent,
        fraction_bits=width - regime - exponent,
    )
