import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vqc_privacy import circuits as cz
from vqc_privacy.dla import compute_dla_basis
from vqc_privacy.errors import BudgetExceeded, DomainError, ZeroGradient
from vqc_privacy.inversion import (
    Status,
    classical_gradients,
    classical_trig_recover,
    direct_input_recovery,
    grid_search_invert,
    invert_general_pauli,
    invert_pauli_product,
    invert_pauli_product_all,
    perturbed_gd_invert,
    trig_features,
)
from vqc_privacy.inversion.common import periodic_distance, periodic_error, safe_arccos
from vqc_privacy.inversion.general_pauli import degree_bound, input_frequency
from vqc_privacy.oracle import ExpectationOracle, snapshot_of, vqc_gradients
from vqc_privacy.pauli import HermitianPauliSum


def test_periodic_distance():
    assert periodic_distance(0.1, 2 * np.pi - 0.1, 2 * np.pi) == pytest.approx(0.2)
    assert periodic_distance(1.0, 3.0, None) == 2.0
    assert periodic_error([0.0, 1.0], [2 * np.pi, 1.0], [2 * np.pi, 2 * np.pi]) < 1e-15


def test_safe_arccos_clamps_and_refuses():
    with pytest.warns(UserWarning):
        assert safe_arccos(1 + 1e-10) == 0.0
    with pytest.raises(DomainError):
        safe_arccos(1.1)


@given(st.sampled_from(["X", "Y"]), st.lists(st.floats(0, 2 * np.pi - 1e-9), min_size=1, max_size=3))
def test_pauli_product_recovers_all(axis, x):
    n = len(x)
    enc = cz.pauli_product_map(n, axis)
    basis = compute_dla_basis(cz.su2_block_generators(n))
    res = invert_pauli_product_all(snapshot_of(enc, x, basis), basis, enc, x_true=x)
    assert res.success and res.error_metric < 1e-6


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 1000))
def test_fourier_tower_recovers(d, m, seed):
    rng = np.random.default_rng(seed)
    enc = cz.fourier_tower_map(d, m)
    x = rng.uniform(0, 2 * np.pi, d)
    basis = compute_dla_basis(cz.su2_block_generators(d * m))
    res = invert_pauli_product_all(snapshot_of(enc, x, basis), basis, enc, x_true=x)
    assert res.success and res.error_metric < 1e-6


def test_pauli_product_failure_on_tfim_algebra():
    enc = cz.pauli_product_map(3)
    basis = compute_dla_basis(cz.tfim_generators(3))
    e = snapshot_of(enc, [0.3, 0.5, 0.7], basis)
    r = invert_pauli_product(e, basis, enc, 0)
    assert not r and hasattr(r, "reason")
    res = invert_pauli_product_all(e, basis, enc)
    assert all(s == Status.FAILURE for s in res.per_index_status)
    assert np.all(np.isnan(res.x_recovered))


def test_degree_bound_formula():
    assert degree_bound(2, 1) == 8
    assert degree_bound(3, 2) == math.ceil(2 * (4.5 + 3) ** 4)


@pytest.mark.parametrize("q, R", [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)])
def test_general_pauli_recovers_block(q, R):
    enc = cz.separable_block_encoder(1, q, R, seed=11)
    assert input_frequency(enc, 0) == R
    basis = compute_dla_basis(cz.block_su4_generators(1))
    x = np.random.default_rng(q * 10 + R).uniform(0, 2 * np.pi, q)
    res = invert_general_pauli(snapshot_of(enc, x, basis), basis, enc, enc.partition[0], x_true=x)
    assert res.success and res.error_metric < 1e-6
    assert res.details["ambiguity"] >= 1
    assert res.oracle_calls > 0


def test_general_pauli_two_blocks_independent():
    enc = cz.separable_block_encoder(2, 1, 2, seed=5)
    basis = compute_dla_basis(cz.block_su4_generators(2))
    x = np.array([0.9, 4.1])
    e = snapshot_of(enc, x, basis)
    for blk in enc.partition:
        r = invert_general_pauli(e, basis, enc, blk, x_true=x[list(blk.inputs)])
        assert r.error_metric < 1e-6


def test_general_pauli_failure_when_too_few_equations():
    enc = cz.separable_block_encoder(1, 2, 1, seed=0)
    basis = compute_dla_basis([HermitianPauliSum.from_pauli("ZI")])
    e = snapshot_of(enc, [0.4, 1.3], basis)
    r = invert_general_pauli(e, basis, enc, enc.partition[0])
    assert all(s == Status.FAILURE for s in r.per_index_status)
    assert not r.success


def test_grid_count_d1():
    enc = cz.pauli_product_map(1)
    basis = compute_dla_basis(cz.su2_block_generators(1))
    eps = 1e-2
    res = grid_search_invert(snapshot_of(enc, [1.234], basis), enc, basis, eps, x_true=[1.234])
    assert abs(res.oracle_calls - math.ceil(2 * np.pi / eps)) <= 1
    assert res.error_metric <= eps


def test_grid_budget_wall():
    enc = cz.pauli_product_map(8)
    basis = compute_dla_basis(cz.su2_block_generators(8))
    with pytest.raises(BudgetExceeded) as err:
        grid_search_invert(np.zeros(basis.dim), enc, basis, 1e-2)
    assert err.value.projected_calls > 1e8


def test_pgd_converges_from_nearby_start():
    enc = cz.pauli_product_map(2)
    basis = compute_dla_basis(cz.su2_block_generators(2))
    x = np.array([0.8, 2.2])
    res = perturbed_gd_invert(snapshot_of(enc, x, basis), enc, basis, x0=x + 0.3, x_true=x)
    assert res.error_metric < 1e-4


def test_pgd_escapes_stationary_start():
    enc = cz.pauli_product_map(1)
    basis = compute_dla_basis(cz.su2_block_generators(1))
    x = np.array([1.0])
    # x' = 0 is a critical point of the cost: cos is flat there
    res = perturbed_gd_invert(snapshot_of(enc, x, basis), enc, basis, x0=[0.0], x_true=x, seed=3)
    assert res.error_metric < 1e-4


def test_direct_recovery():
    enc = cz.pauli_product_map(2)
    ans = cz.su2_block_ansatz(2, 2)
    obs = HermitianPauliSum.from_terms([("ZI", 1.0), ("IZ", 1.0)])
    theta = np.random.default_rng(2).uniform(0, 2 * np.pi, ans.n_params)
    x = np.array([1.1, 0.4])
    C = vqc_gradients(enc, ans, theta, obs, x)
    res = direct_input_recovery(C, enc, ans, theta, obs, x0=x + 0.2, x_true=x)
    assert res.error_metric < 1e-4


@given(st.floats(0, 2 * np.pi - 1e-6), st.integers(0, 10**6))
@settings(max_examples=30)
def test_classical_baseline(x, seed):
    rng = np.random.default_rng(seed)
    omegas = np.array([1.0, 2.0, 3.0, 5.0])
    A = rng.normal(size=2 * omegas.size)
    C = classical_gradients(A, y=rng.normal() + 5.0, x=x, omegas=omegas)
    phi, xr = classical_trig_recover(C, omegas)
    assert np.max(np.abs(phi - trig_features(x, omegas))) < 1e-10
    assert periodic_distance(xr, x, 2 * np.pi) < 1e-8


def test_classical_odd_frequencies_leave_pi_ambiguity():
    omegas = [1.0, 3.0]
    C = classical_gradients(np.array([0.1, 0.2, 0.3, 0.4]), 2.0, 1.3, omegas)
    phi, xr = classical_trig_recover(C, omegas)
    assert min(periodic_distance(xr, 1.3, 2 * np.pi), periodic_distance(xr, 1.3 + np.pi, 2 * np.pi)) < 1e-10
    assert np.allclose(np.abs(phi), np.abs(trig_features(1.3, omegas)))


def test_classical_zero_gradient():
    with pytest.raises(ZeroGradient):
        classical_trig_recover(np.zeros(4), [1.0, 2.0])


def test_oracle_calls_are_counted_for_grid():
    enc = cz.pauli_product_map(1)
    basis = compute_dla_basis(cz.su2_block_generators(1))
    o = ExpectationOracle(enc)
    res = grid_search_invert(snapshot_of(enc, [0.5], basis), enc, basis, 0.1, oracle=o)
    assert o.calls == res.oracle_calls
