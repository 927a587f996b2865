"""The shared numeric-system surface: naming, encode/decode, sums."""

from __future__ import annotations

import math

import pytest

from positstat import oracle
from positstat.logspace import LogNum
from positstat.oracle import BigReal, Precision, relative_error
from positstat.systems import (
    DEFAULT_SYSTEM_NAMES,
    Binary64System,
    LogSpaceSystem,
    OracleLogSystem,
    OracleSystem,
    PositSystem,
    get_system,
)


@pytest.mark.parametrize("name", DEFAULT_SYSTEM_NAMES + ("oracle", "oracle-log", "posit16e1"))
def test_get_system_roundtrips_names(name):
    assert get_system(name).name == name


@pytest.mark.parametrize("name", ["posit64", "posit64e", "float64", "posit0e0", "log2", ""])
def test_unknown_names_rejected(name):
    with pytest.raises(ValueError):
        get_system(name)


@pytest.mark.parametrize("name", DEFAULT_SYSTEM_NAMES + ("oracle", "oracle-log"))
def test_zero_and_one_decode_exactly(name):
    sys = get_system(name)
    assert sys.to_real(sys.zero()).is_zero()
    assert sys.to_real(sys.one()) == BigReal.from_int(1)
    assert sys.to_real(sys.from_real(BigReal.zero())).is_zero()


@pytest.mark.parametrize("name", DEFAULT_SYSTEM_NAMES + ("oracle",))
def test_encode_decode_loses_only_rounding(name):
    sys = get_system(name)
    x = BigReal.from_decimal("0.3721")
    back = sys.to_real(sys.from_real(x))
    assert relative_error(x, back).to_float() < 1e-12


def test_binary64_is_plain_doubles():
    sys = Binary64System()
    assert sys.add(0.1, 0.2) == 0.1 + 0.2
    assert sys.from_real(BigReal.power_of_two(-1_100)) == 0.0  # underflow
    assert sys.to_real(sys.from_real(BigReal.from_float(0.25))) == BigReal.from_float(0.25)


def test_log_system_encodes_through_oracle():
    sys = LogSpaceSystem()
    v = sys.from_real(BigReal.from_float(0.5))
    assert v.lx == oracle.ln(BigReal.from_float(0.5)).to_float()
    assert sys.to_real(LogNum.from_ln(0.0)) == BigReal.from_int(1)
    assert sys.to_real(sys.zero()).is_zero()


def test_log_system_sum_is_lse():
    sys = LogSpaceSystem()
    terms = [LogNum.from_ln(-1000.0), LogNum.from_ln(-999.0)]
    got = sys.sum(terms)
    assert math.isfinite(got.lx) and got.lx >= -999.0


def test_posit_system_zero_identity_is_bit_exact():
    sys = PositSystem(get_system("posit64e12").config)  # type: ignore[attr-defined]
    x = sys.from_real(BigReal.from_decimal("0.1"))
    assert sys.add(sys.zero(), x) == x
    assert sys.mul(sys.one(), x) == x


def test_oracle_log_system_consistency():
    lin = OracleSystem()
    log = OracleLogSystem()
    a, b = BigReal.from_decimal("0.125"), BigReal.from_decimal("0.375")
    s_lin = lin.add(a, b)
    s_log = log.to_real(log.add(log.from_real(a), log.from_real(b)))
    assert relative_error(s_lin, s_log).to_float() < 2.0 ** -200
    assert log.to_real(log.sum([log.zero(), log.zero()])).is_zero()
    assert log.to_real(log.mul(log.from_real(a), log.zero())).is_zero()


def test_sum_requires_terms():
    with pytest.raises(ValueError):
        Binary64System().sum([])
    with pytest.raises(ValueError):
        OracleLogSystem().sum([])
