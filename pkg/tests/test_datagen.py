"""Generator determinism, distribution sanity, and targeting."""

from __future__ import annotations

import math

import numpy as np
import pytest

from positstat import datagen, kernels, oracle
from positstat.datagen import ConstantLaw, GenSpec, LogUniformLaw
from positstat.oracle import BigReal, exponent_of
from positstat.systems import OracleSystem


def test_gen_hmm_bit_identical():
    spec = GenSpec(42, "hmm", 0, n_states=2, n_symbols=2, n_obs=10)
    a, b = datagen.gen_hmm(spec), datagen.gen_hmm(spec)
    assert np.array_equal(a.transition, b.transition)
    assert np.array_equal(a.emission, b.emission)
    assert np.array_equal(a.observations, b.observations)


def test_gen_hmm_rows_are_stochastic_and_positive():
    spec = GenSpec(1, "hmm", 3, n_states=5, n_symbols=7, n_obs=4, alpha=0.5)
    m = datagen.gen_hmm(spec)
    assert np.all(m.transition > 0) and np.all(m.emission > 0)
    assert np.max(np.abs(m.transition.sum(axis=1) - 1.0)) <= 1e-12
    assert np.max(np.abs(m.emission.sum(axis=1) - 1.0)) <= 1e-12


def test_gen_hmm_rejects_bad_dims():
    with pytest.raises(ValueError):
        datagen.gen_hmm(GenSpec(1, "hmm", 0, n_states=0))
    with pytest.raises(ValueError):
        datagen.gen_hmm(GenSpec(1, "hmm", 0, n_symbols=1))
    with pytest.raises(ValueError):
        datagen.gen_hmm(GenSpec(1, "pbd", 0))


def test_index_separates_streams():
    s0 = GenSpec(42, "hmm", 0, n_states=2, n_symbols=2, n_obs=10)
    s1 = GenSpec(42, "hmm", 1, n_states=2, n_symbols=2, n_obs=10)
    assert not np.array_equal(datagen.gen_hmm(s0).transition, datagen.gen_hmm(s1).transition)


def test_dirichlet_mean_sanity():
    """alpha=1 rows average to 1/dim within three standard errors."""
    draws = 10_000
    dim = 4
    rows = datagen._dirichlet_rows(datagen._rng(77, "hmm", 0), draws, dim, 1.0)
    se = math.sqrt((1 / dim) * (1 - 1 / dim) / (dim + 1)) / math.sqrt(draws)
    assert np.all(np.abs(rows.mean(axis=0) - 1 / dim) < 3 * se)


def test_gen_pbd_deterministic_and_valid():
    spec = GenSpec(7, "pbd", 2, n_trials=50, threshold=5)
    a, b = datagen.gen_pbd(spec), datagen.gen_pbd(spec)
    assert np.array_equal(a.success_probs, b.success_probs)
    assert a.threshold == 5 and a.n_trials == 50
    assert np.all(a.success_probs >= 1e-6) and np.all(a.success_probs <= 1e-1)


def test_gen_pbd_constant_law_closed_form():
    spec = GenSpec(7, "pbd", 0, n_trials=10, threshold=1, law=ConstantLaw(0.5))
    inst = datagen.gen_pbd(spec)
    got = kernels.pbd_exact_reference(inst)
    assert got == BigReal.from_float(1.0 - 2.0 ** -10)


def test_gen_pbd_rejects_bad_threshold():
    with pytest.raises(ValueError):
        datagen.gen_pbd(GenSpec(7, "pbd", 0, n_trials=5, threshold=6))


def test_log_uniform_law_bounds():
    with pytest.raises(ValueError):
        LogUniformLaw(0.0, 0.5)
    with pytest.raises(ValueError):
        LogUniformLaw(0.5, 0.1)
    law = LogUniformLaw(1e-8, 1e-2)
    assert "loguniform" in law.describe()


def test_gen_pbd_targeted_lands_in_window():
    inst, ref = datagen.gen_pbd_targeted(3, 0, -1_500, (-2_000, -1_000), threshold=64)
    assert -2_000 <= exponent_of(ref) <= -1_000
    again, ref2 = datagen.gen_pbd_targeted(3, 0, -1_500, (-2_000, -1_000), threshold=64)
    assert np.array_equal(inst.success_probs, again.success_probs)
    assert ref == ref2


def test_targeted_hmm_reaches_target():
    spec = GenSpec(5, "hmm", 1, n_states=2, n_symbols=256, target_log2=-2_500)
    model = datagen.gen_hmm(spec)
    trace = kernels.exponent_trace(model)
    assert trace[-1][1] <= -2_500
    assert trace[-2][1] > -2_500  # cut at the first crossing


def test_operand_pairs_add():
    spec = GenSpec(7, "operands", 0, op="add", count=64, exponent_range=(-64, 0))
    pairs = datagen.sample_operands(spec)
    assert pairs == datagen.sample_operands(spec)
    for a, b in pairs:
        s = oracle.add(a, b)
        assert -64 <= exponent_of(s) <= 0
        for v in (a, b):
            assert not v.is_negative() and not v.is_zero()
            assert exponent_of(v) >= -65 and v <= BigReal.from_int(1)


def test_operand_pairs_mul():
    spec = GenSpec(7, "operands", 1, op="mul", count=64, exponent_range=(-10_000, 0))
    for a, b in datagen.sample_operands(spec):
        assert -10_000 <= exponent_of(oracle.mul(a, b)) <= 0
        assert a <= BigReal.from_int(1) and b <= BigReal.from_int(1)


def test_operand_validation():
    with pytest.raises(ValueError):
        datagen.sample_operands(GenSpec(7, "operands", 0, op="div"))
    with pytest.raises(ValueError):
        datagen.sample_operands(GenSpec(7, "operands", 0, count=0))
    with pytest.raises(ValueError):
        datagen.sample_operands(GenSpec(7, "operands", 0, exponent_range=(0, -4)))
    with pytest.raises(ValueError):
        datagen.sample_operands(GenSpec(7, "operands", 0, op="mul", exponent_range=(-1, 0)))


def test_forward_ensemble_specs_cover_window():
    specs = datagen.forward_ensemble_specs(9, 8, (-4_000, -1_000))
    assert len(specs) == 8
    assert all(-4_000 < s.target_log2 < -1_000 for s in specs)
    assert len({s.target_log2 for s in specs}) > 1
