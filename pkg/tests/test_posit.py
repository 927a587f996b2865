"""Posit decode/encode/arithmetic against independent brute-force oracles.

The reference decoder below works on bit strings and Fractions, sharing no
code with the library's integer paths; small widths are checked
exhaustively against it, and rounding is checked against a
nearest-value-by-table search.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_left
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from positstat import posit
from positstat.oracle import BigReal, Precision, add as oadd, exponent_of, mul as omul
from positstat.posit import PositConfig, PositValue

C82 = PositConfig(8, 2)
C162 = PositConfig(16, 2)
C640 = {es: PositConfig(64, es) for es in (9, 12, 18)}


# -- independent reference decoder (bit strings + Fractions) -------------


def ref_decode(bits: int, n: int, es: int) -> Fraction | None:
    """Fraction value of a pattern; None for NaR."""
    s = format(bits, f"0{n}b")
    if s == "0" * n:
        return Fraction(0)
    if s == "1" + "0" * (n - 1):
        return None
    negative = s[0] == "1"
    if negative:
        s = format((1 << n) - bits, f"0{n}b")
    body = s[1:]
    run = 1
    while run < len(body) and body[run] == body[0]:
        run += 1
    k = run - 1 if body[0] == "1" else -run
    rest = body[run + 1:]  # skip the terminator (absent if the run fills the body)
    e_bits = rest[:es].ljust(es, "0")
    f_bits = rest[es:]
    e = int(e_bits, 2) if e_bits else 0
    f = Fraction(int(f_bits, 2), 1 << len(f_bits)) if f_bits else Fraction(0)
    v = Fraction(2) ** (k * (1 << es) + e) * (1 + f)
    return -v if negative else v


def make_table(config: PositConfig) -> list[tuple[Fraction, int]]:
    """All (value, bits) lattice points, ascending by value, NaR excluded."""
    rows = []
    for bits in range(1 << config.n_bits):
        v = ref_decode(bits, config.n_bits, config.es)
        if v is not None:
            rows.append((v, bits))
    rows.sort()
    return rows


def ref_round(x: Fraction, table: list[tuple[Fraction, int]]) -> int:
    """Nearest nonzero lattice point (ties to the even pattern); 0 only for 0."""
    if x == 0:
        return 0
    candidates = [(v, b) for v, b in table if v != 0]
    values = [v for v, _ in candidates]
    i = bisect_left(values, x)
    if i == 0:
        return candidates[0][1]
    if i == len(values):
        return candidates[-1][1]
    lo_v, lo_b = candidates[i - 1]
    hi_v, hi_b = candidates[i]
    if x - lo_v < hi_v - x:
        return lo_b
    if x - lo_v > hi_v - x:
        return hi_b
    return lo_b if lo_b % 2 == 0 else hi_b


def as_fraction(x: BigReal) -> Fraction:
    m, e = x.as_dyadic()
    return Fraction(m) * Fraction(2) ** e


@pytest.fixture(scope="module")
def table82():
    return make_table(C82)


# -- worked examples ------------------------------------------------------


def test_decode_worked_example():
    p = PositValue(0b0_0001_10_1, C82)
    f = posit.decode_fields(p)
    assert (f.sign, f.k, f.e, f.fraction_bit_count, f.fraction) == (0, -3, 2, 1, 1)
    assert posit.to_real(p) == BigReal.from_dyadic(3, -11)  # 1.5 * 2^-10


def test_decode_one_and_minpos():
    one = PositValue(0b0_10_00_000, C82)
    f = posit.decode_fields(one)
    assert (f.sign, f.k, f.e, f.fraction) == (0, 0, 0, 0)
    assert posit.to_real(one) == BigReal.from_int(1)

    minpos = PositValue(0b0_0000001, C82)
    f = posit.decode_fields(minpos)
    assert (f.k, f.e, f.fraction_bit_count) == (-6, 0, 0)
    assert posit.to_real(minpos) == BigReal.power_of_two(-24)


def test_decode_rejects_specials():
    with pytest.raises(ValueError):
        posit.decode_fields(PositValue.zero(C82))
    with pytest.raises(posit.NotARealError):
        posit.decode_fields(PositValue.nar(C82))
    with pytest.raises(posit.NotARealError):
        posit.to_real(PositValue.nar(C82))
    assert posit.to_real(PositValue.zero(C82)).is_zero()


def test_encode_worked_example():
    assert posit.from_real(BigReal.from_dyadic(3, -11), C82).bits == 0b0_0001_10_1
    assert posit.from_real(BigReal.zero(), C82).bits == 0


def test_encode_saturates_instead_of_underflowing():
    # 2^-48 is below minpos = 2^-24 yet must not round to zero
    assert posit.from_real(BigReal.power_of_two(-48), C82).bits == 0b0_0000001
    assert posit.from_real(BigReal.power_of_two(100), C82).bits == 0b0_1111111
    assert posit.from_real(-BigReal.power_of_two(-48), C82).signed_int() == -1


def test_minpos_of_big_configs():
    assert posit.to_real(PositValue(1, C640[9])) == BigReal.power_of_two(-31_744)
    assert posit.config_properties(C640[9]).minpos == BigReal.power_of_two(-31_744)


def test_hex_serialization():
    p = PositValue(0b0_0001_10_1, C82)
    assert p.to_hex() == "0d"
    assert PositValue.from_hex("0d", C82) == p
    assert PositValue.one(C640[12]).to_hex() == "4000000000000000"


# -- exhaustive checks against the reference ------------------------------


def test_exhaustive_decode_matches_reference(table82):
    for v, bits in table82:
        assert as_fraction(posit.to_real(PositValue(bits, C82))) == v


@pytest.mark.parametrize("config", [C82, PositConfig(8, 0), PositConfig(8, 3), PositConfig(6, 1)])
def test_exhaustive_roundtrip_and_monotonicity(config):
    seen = []
    for bits in range(1 << config.n_bits):
        p = PositValue(bits, config)
        if p.is_nar():
            continue
        x = posit.to_real(p)
        assert posit.from_real(x, config).bits == bits
        seen.append((p.signed_int(), x))
    seen.sort(key=lambda t: t[0])
    for (_, a), (_, b) in zip(seen, seen[1:]):
        assert a < b


def test_exhaustive_rounding_matches_table_search(table82):
    rng = random.Random(1234)
    for _ in range(4000):
        m = rng.randint(1, (1 << 40) - 1) * (-1 if rng.random() < 0.5 else 1)
        e = rng.randint(-40, 10)
        x = Fraction(m, 1 << 30) * Fraction(2) ** e
        got = posit.from_real(BigReal.from_dyadic(m, e - 30), C82).bits
        assert got == ref_round(x, table82)


def test_exhaustive_midpoint_ties(table82):
    values = [v for v, _ in table82]
    for (v1, _), (v2, _) in zip(table82, table82[1:]):
        if v1 == 0 or v2 == 0:
            continue  # ties against zero are resolved by the no-underflow rule
        mid = (v1 + v2) / 2
        got = posit.from_real(BigReal.from_dyadic(mid.numerator, -(mid.denominator.bit_length() - 1)), C82).bits
        assert got == ref_round(mid, table82), (v1, v2)


def test_exhaustive_add_and_mul(table82):
    patterns = [b for _, b in table82]
    frac = {b: v for v, b in table82}
    for a_bits in patterns:
        a = PositValue(a_bits, C82)
        for b_bits in patterns[::5]:  # stride keeps this under a second
            b = PositValue(b_bits, C82)
            assert posit.add(a, b).bits == ref_round(frac[a_bits] + frac[b_bits], table82)
            assert posit.mul(a, b).bits == ref_round(frac[a_bits] * frac[b_bits], table82)


def test_add_mul_identities_exhaustive(table82):
    zero, one = PositValue.zero(C82), PositValue.one(C82)
    for _, bits in table82:
        p = PositValue(bits, C82)
        assert posit.add(p, zero) == p
        assert posit.mul(p, one) == p


def test_nar_is_absorbing():
    nar, one, zero = PositValue.nar(C82), PositValue.one(C82), PositValue.zero(C82)
    assert posit.add(nar, one).is_nar()
    assert posit.add(one, nar).is_nar()
    assert posit.mul(nar, zero).is_nar()
    assert posit.mul(zero, nar).is_nar()


def test_add_examples():
    one = PositValue.one(C82)
    assert posit.add(one, one).bits == 0b0_10_01_000  # 2.0
    two = posit.add(one, one)
    assert posit.mul(two, two).bits == 0b0_10_10_000  # 4.0: k=0, e=2
    minpos = PositValue(1, C82)
    assert posit.mul(minpos, minpos) == minpos  # product 2^-48 saturates


def test_config_mismatch_rejected():
    with pytest.raises(ValueError):
        posit.add(PositValue.one(C82), PositValue.one(C162))
    with pytest.raises(ValueError):
        posit.mul(PositValue.one(C82), PositValue.one(C162))


# -- 16-bit exhaustive roundtrip ------------------------------------------


def test_16bit_exhaustive_roundtrip_and_monotonicity():
    prev = None
    for bits in sorted(
        (b for b in range(1 << 16) if b != 1 << 15),
        key=lambda b: PositValue(b, C162).signed_int(),
    ):
        x = posit.to_real(PositValue(bits, C162))
        assert posit.from_real(x, C162).bits == bits
        if prev is not None:
            assert prev < x
        prev = x


# -- config properties -----------------------------------------------------


@pytest.mark.parametrize(
    "es,minpos_log2,max_frac",
    [(6, -3_968, 55), (9, -31_744, 52), (12, -253_952, 49),
     (15, -2_031_616, 46), (18, -16_252_928, 43), (21, -130_023_424, 40)],
)
def test_table_of_64bit_configs(es, minpos_log2, max_frac):
    c = PositConfig(64, es)
    props = posit.config_properties(c)
    assert c.useed_log2 == 1 << es
    assert props.minpos == BigReal.power_of_two(minpos_log2)
    assert props.maxpos == BigReal.power_of_two(-minpos_log2)
    assert props.max_fraction_bits == max_frac
    assert props.useed == BigReal.power_of_two(1 << es)


def test_config_validation():
    with pytest.raises(ValueError):
        PositConfig(3, 0)
    with pytest.raises(ValueError):
        PositConfig(65, 2)
    with pytest.raises(ValueError):
        PositConfig(8, 25)
    with pytest.raises(ValueError):
        PositConfig(4, 2)  # needs n_bits >= es + 3


def test_field_widths_examples():
    x = BigReal.power_of_two(-2_048)
    w6 = posit.field_widths_for(x, PositConfig(64, 6))
    assert (w6.regime_bits, w6.fraction_bits) == (33, 24)
    w9 = posit.field_widths_for(x, PositConfig(64, 9))
    assert (w9.regime_bits, w9.fraction_bits) == (5, 49)
    w1 = posit.field_widths_for(BigReal.from_int(1), PositConfig(64, 9))
    assert (w1.regime_bits, w1.fraction_bits) == (2, PositConfig(64, 9).max_fraction_bits)
    with pytest.raises(ValueError):
        posit.field_widths_for(BigReal.power_of_two(-40_000), PositConfig(64, 9))
    with pytest.raises(ValueError):
        posit.field_widths_for(BigReal.zero(), PositConfig(64, 9))


# -- property-based checks --------------------------------------------------


small_configs = st.integers(min_value=4, max_value=12).flatmap(
    lambda n: st.integers(min_value=0, max_value=min(3, n - 3)).map(lambda es: PositConfig(n, es))
)


@given(config=small_configs, data=st.data())
@settings(max_examples=200, deadline=None)
def test_roundtrip_any_small_config(config, data):
    bits = data.draw(st.integers(min_value=0, max_value=(1 << config.n_bits) - 1))
    p = PositValue(bits, config)
    if p.is_nar():
        return
    assert posit.from_real(posit.to_real(p), config).bits == bits


@given(
    es=st.sampled_from((9, 12, 18)),
    a_bits=st.integers(min_value=0, max_value=(1 << 64) - 1),
    b_bits=st.integers(min_value=0, max_value=(1 << 64) - 1),
)
@settings(max_examples=200, deadline=None)
def test_commutativity_64bit(es, a_bits, b_bits):
    c = C640[es]
    a, b = PositValue(a_bits, c), PositValue(b_bits, c)
    assert posit.add(a, b) == posit.add(b, a)
    assert posit.mul(a, b) == posit.mul(b, a)


@given(
    es=st.sampled_from((9, 12, 18)),
    bits=st.integers(min_value=0, max_value=(1 << 64) - 1),
)
@settings(max_examples=300, deadline=None)
def test_roundtrip_64bit(es, bits):
    c = C640[es]
    p = PositValue(bits, c)
    if p.is_nar():
        return
    assert posit.from_real(posit.to_real(p), c).bits == bits


@given(
    es=st.sampled_from((9, 12, 18)),
    ma=st.integers(min_value=1, max_value=(1 << 20) - 1),
    mb=st.integers(min_value=1, max_value=(1 << 20) - 1),
    ea=st.integers(min_value=-120, max_value=-12),
    delta=st.integers(min_value=-10, max_value=10),
    op=st.sampled_from(("add", "mul")),
)
@settings(max_examples=300, deadline=None)
def test_agreement_with_binary64_on_shared_exacts(es, ma, mb, ea, delta, op):
    """Where operands and exact result fit both formats, the results match."""
    c = C640[es]
    eb = ea + delta  # narrow gap keeps the exact sum within both formats
    a, b = BigReal.from_dyadic(ma, ea), BigReal.from_dyadic(mb, eb)
    fa, fb = a.to_float(), b.to_float()
    exact = fa + fb if op == "add" else fa * fb  # <= 41 significand bits: exact
    pa, pb = posit.from_real(a, c), posit.from_real(b, c)
    assert posit.to_real(pa) == a and posit.to_real(pb) == b
    got = posit.add(pa, pb) if op == "add" else posit.mul(pa, pb)
    assert posit.to_real(got) == BigReal.from_float(exact)


def test_sticky_proxy_matches_exact_path():
    """Huge-gap adds must agree with an encode of the wide exact sum."""
    rng = random.Random(77)
    for es in (9, 12, 18):
        c = C640[es]
        for _ in range(40):
            big = PositValue(rng.randrange(1, 1 << 63), c)
            small = PositValue(rng.randrange(1, 1 << 63), c)
            if big.is_nar() or small.is_nar():
                continue
            xb, xs = posit.to_real(big), posit.to_real(small)
            if xb.is_zero() or xs.is_zero():
                continue
            if abs(exponent_of(xb) - exponent_of(xs)) <= 64 + 160:
                continue  # only exercising the proxy branch
            if exponent_of(xb) < exponent_of(xs):
                big, small, xb, xs = small, big, xs, xb
            gap = exponent_of(xb) - exponent_of(xs)
            wide = Precision(max(64, gap + 256))
            exact_sum = oadd(xb, xs, wide)
            assert posit.add(big, small) == posit.from_real(exact_sum, c)


def test_no_hidden_underflow_or_nar():
    rng = random.Random(99)
    for es in (9, 12, 18):
        c = C640[es]
        for _ in range(200):
            e = rng.randint(c.minpos_log2 - 3 * c.useed_log2, -1)
            x = BigReal.from_dyadic((1 << 52) | rng.getrandbits(52), e - 52)
            p = posit.from_real(x, c)
            assert not p.is_zero() and not p.is_nar()
    # exact cancellation is a true zero, not an underflow
    one = PositValue.one(C82)
    neg_one = posit.from_real(BigReal.from_int(-1), C82)
    assert posit.add(one, neg_one).is_zero()
