"""Log-space arithmetic: worked values, stability, and the failure modes
the naive form is supposed to exhibit."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings, strategies as st

from positstat import oracle
from positstat.logspace import LOG_ZERO, LogNum, log_mul, lse2, lse_n, naive_log_add, to_csv_field
from positstat.oracle import BigReal, relative_error


def oracle_lse(*lxs: float) -> float:
    """256-bit ln(sum(exp(lx_i))) of the exact double inputs, as a double."""
    total = BigReal.zero()
    for lx in lxs:
        total = oracle.add(total, oracle.exp(BigReal.from_float(lx)))
    return oracle.ln(total).to_float()


def test_log_mul_examples():
    assert log_mul(LogNum(-402.1), LogNum(-6.0)).lx == -408.1
    assert log_mul(LOG_ZERO, LogNum(-5.0)).is_zero
    c = LogNum(-123.25)
    assert log_mul(LogNum(0.0), c) == c


def test_naive_log_add_underflows_to_zero():
    assert naive_log_add(LogNum(-1000.0), LogNum(-999.0)).is_zero
    assert naive_log_add(LogNum(-745.14), LogNum(-745.14)).is_zero
    assert naive_log_add(LOG_ZERO, LOG_ZERO).is_zero


def test_naive_log_add_overflows_to_inf():
    assert naive_log_add(LogNum(710.0), LogNum(710.0)).lx == math.inf


def test_naive_log_add_fine_in_range():
    got = naive_log_add(LogNum(math.log(2)), LogNum(math.log(3)))
    ln5 = 1.6094379124341003  # 256-bit ln(5) rounded to a double
    assert abs(got.lx - ln5) <= 4 * math.ulp(ln5)


def test_lse2_survives_where_naive_underflows():
    got = lse2(LogNum(-1000.0), LogNum(-999.0))
    want = -998.6867383124818  # 256-bit -999 + ln(1 + e^-1), to a double
    assert abs(got.lx - want) <= 4 * math.ulp(abs(want))
    assert oracle_lse(-1000.0, -999.0) == want


def test_lse2_symmetry_and_zero():
    m = LogNum(-37.5)
    assert lse2(m, m).lx == -37.5 + math.log(2.0)
    assert lse2(LOG_ZERO, m) == m
    assert lse2(m, LOG_ZERO) == m


def test_lse_n_examples():
    a = LogNum(-3.25)
    assert lse_n([a]) == a
    got = lse_n([LogNum(math.log(1)), LogNum(math.log(2)), LogNum(math.log(3))])
    ln6 = 1.791759469228055
    assert abs(got.lx - ln6) <= 8 * math.ulp(ln6)
    with_zeros = lse_n([LogNum(-1000.0), LogNum(-999.0), LOG_ZERO])
    assert with_zeros == lse2(LogNum(-1000.0), LogNum(-999.0))
    assert lse_n([LOG_ZERO, LOG_ZERO]).is_zero
    with pytest.raises(ValueError):
        lse_n([])


def test_lse_n_tree_switch():
    terms = [LogNum(-x * 7.3) for x in range(1, 40)]
    seq = lse_n(terms).lx
    tree = lse_n(terms, tree=True).lx
    assert abs(seq - tree) <= 8 * math.ulp(abs(seq))  # same sum, different rounding order


def test_csv_field():
    assert to_csv_field(LOG_ZERO) == "-inf"
    assert to_csv_field(LogNum(-1.5)) == "-1.5"


@given(
    lx=st.floats(min_value=-5_000.0, max_value=0.0),
    ly=st.floats(min_value=-5_000.0, max_value=0.0),
)
@settings(max_examples=500, deadline=None)
def test_lse2_bounds(lx, ly):
    a, b = LogNum(lx), LogNum(ly)
    m = max(lx, ly)
    got = lse2(a, b).lx
    assert math.isfinite(got)
    assert m <= got <= m + math.log(2.0)


@given(st.lists(st.floats(min_value=-2_000.0, max_value=0.0), min_size=1, max_size=24))
@settings(max_examples=300, deadline=None)
def test_lse_n_bounds(lxs):
    terms = [LogNum(x) for x in lxs]
    m = max(lxs)
    got = lse_n(terms).lx
    assert m <= got <= m + math.log(len(lxs))


@given(
    lx=st.floats(min_value=-600.0, max_value=-1.0),
    ly=st.floats(min_value=-600.0, max_value=-1.0),
    c=st.floats(min_value=-300.0, max_value=300.0),
)
@settings(max_examples=300, deadline=None)
def test_lse2_shift_invariance(lx, ly, c):
    shifted = lse2(LogNum(lx + c), LogNum(ly + c)).lx
    base = c + lse2(LogNum(lx), LogNum(ly)).lx
    ref = c + oracle_lse(lx, ly)
    tol = 1e-12 * max(1.0, abs(ref))
    assert abs(shifted - ref) <= tol and abs(base - ref) <= tol


@given(
    lx=st.floats(min_value=-700.0, max_value=0.0),
    ly=st.floats(min_value=-700.0, max_value=0.0),
)
@settings(max_examples=500, deadline=None)
def test_naive_matches_lse2_in_safe_range(lx, ly):
    naive = naive_log_add(LogNum(lx), LogNum(ly))
    stable = lse2(LogNum(lx), LogNum(ly))
    assert not naive.is_zero
    assert abs(naive.lx - stable.lx) <= 2 * math.ulp(max(abs(naive.lx), 1.0))


@given(st.lists(st.floats(min_value=-340.0, max_value=0.0), min_size=1, max_size=16))
@settings(max_examples=200, deadline=None)
def test_lse_n_oracle_consistency(lxs):
    """exp(lse_n) must match the true sum of exponentials to 1e-12."""
    got = lse_n([LogNum(x) for x in lxs]).lx
    total = BigReal.zero()
    for lx in lxs:
        total = oracle.add(total, oracle.exp(BigReal.from_float(lx)))
    rel = relative_error(total, oracle.exp(BigReal.from_float(got)))
    assert rel.to_float() < 1e-12
