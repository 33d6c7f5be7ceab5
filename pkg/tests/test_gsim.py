import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import vqc_privacy.oracle as oracle_mod
import vqc_privacy.pauli as pauli_mod
from vqc_privacy import circuits as cz
from vqc_privacy.dla import compute_dla_basis, from_coeffs, project, structure_constants
from vqc_privacy.errors import GeneratorNotInDla, ObservableNotInDla
from vqc_privacy.gsim import (
    adjoint_derivative,
    adjoint_of,
    chi_matrix,
    expm_antisymmetric,
    gsim_gradients,
    gsim_output,
    observable_coeffs,
)
from vqc_privacy.oracle import snapshot_of, vqc_gradients, vqc_output
from vqc_privacy.pauli import HermitianPauliSum, to_dense


def _setup(kind, n, seed):
    rng = np.random.default_rng(seed)
    if kind == "tfim":
        ans = cz.tfim_ansatz(n, 2)
        obs = HermitianPauliSum.from_pauli("X" + "I" * (n - 1))
    else:
        ans = cz.su2_block_ansatz(n, 2)
        obs = sum((HermitianPauliSum.from_pauli("I" * q + "Z" + "I" * (n - q - 1)) for q in range(1, n)),
                  HermitianPauliSum.from_pauli("Z" + "I" * (n - 1)))
    basis = compute_dla_basis(ans.generators)
    sc = structure_constants(basis)
    enc = cz.pauli_product_map(n)
    theta = rng.uniform(0, 2 * np.pi, ans.n_params)
    x = rng.uniform(0, 2 * np.pi, n)
    return enc, ans, obs, basis, sc, theta, x


@given(st.integers(2, 4), st.sampled_from(["tfim", "su2"]), st.integers(0, 100))
def test_adjoint_orthogonal(n, kind, seed):
    _, ans, _, basis, sc, theta, _ = _setup(kind, n, seed)
    ad = adjoint_of(ans, theta, basis, sc).ad_u
    assert np.max(np.abs(ad @ ad.T - np.eye(basis.dim))) < 1e-8


def test_adjoint_rows_are_heisenberg_images(rng):
    enc, ans, _, basis, sc, theta, _ = _setup("tfim", 3, 5)
    U = np.eye(8, dtype=complex)
    for g in ans.gates:
        H = to_dense(g.generator)
        w, v = np.linalg.eigh(H)
        U = (v * np.exp(-1j * theta[g.binding.index] * w)) @ v.conj().T @ U
    ad = adjoint_of(ans, theta, basis, sc).ad_u
    for a in (0, 4, 9):
        rotated = U.conj().T @ to_dense(basis[a]) @ U
        coeffs = np.array([np.trace(to_dense(b) @ rotated).real / 8 for b in basis.basis])
        assert np.allclose(ad[a], coeffs, atol=1e-10)


@given(st.integers(2, 4), st.sampled_from(["tfim", "su2"]), st.integers(0, 100))
def test_output_and_gradients_match_oracle(n, kind, seed):
    enc, ans, obs, basis, sc, theta, x = _setup(kind, n, seed)
    mu = observable_coeffs(obs, basis)
    e = snapshot_of(enc, x, basis)
    assert abs(gsim_output(mu, ans, theta, basis, sc, e) - vqc_output(enc, ans, theta, obs, x)) < 1e-8
    assert np.max(np.abs(gsim_gradients(mu, ans, theta, basis, sc, e) - vqc_gradients(enc, ans, theta, obs, x))) < 1e-6


def test_adjoint_derivative_matches_fd():
    _, ans, _, basis, sc, theta, _ = _setup("tfim", 3, 2)
    j, h = 4, 1e-6
    tp, tm = theta.copy(), theta.copy()
    tp[j] += h
    tm[j] -= h
    fd = (adjoint_of(ans, tp, basis, sc).ad_u - adjoint_of(ans, tm, basis, sc).ad_u) / (2 * h)
    assert np.allclose(adjoint_derivative(ans, theta, j, basis, sc), fd, atol=1e-7)


def test_expm_antisymmetric_is_rotation(rng):
    a = rng.normal(size=(5, 5))
    m = a - a.T
    r = expm_antisymmetric(m, 0.7)
    assert np.allclose(r @ r.T, np.eye(5), atol=1e-12)
    assert np.isclose(np.linalg.det(r), 1.0)


def test_observable_outside_algebra():
    basis = compute_dla_basis(cz.tfim_generators(3))
    with pytest.raises(ObservableNotInDla):
        observable_coeffs(HermitianPauliSum.from_pauli("ZII"), basis)


def test_generator_outside_algebra():
    basis = compute_dla_basis(cz.su2_block_generators(2))
    ans = cz.tfim_ansatz(2, 1)
    with pytest.raises(GeneratorNotInDla):
        chi_matrix(np.zeros(basis.dim), ans, np.zeros(ans.n_params), basis, structure_constants(basis))


def test_no_dense_objects_at_forty_qubits(monkeypatch):
    def boom(*a, **k):
        raise AssertionError("dense object requested on the g-sim path")

    monkeypatch.setattr(pauli_mod, "to_dense", boom)
    monkeypatch.setattr(oracle_mod, "zero_state", boom)
    n = 40
    ans = cz.su2_block_ansatz(n, 1)
    basis = compute_dla_basis(ans.generators)
    sc = structure_constants(basis)
    obs = HermitianPauliSum.from_pauli("Z" + "I" * (n - 1))
    mu = observable_coeffs(obs, basis)
    rng = np.random.default_rng(0)
    e = rng.normal(size=basis.dim)
    y = gsim_output(mu, ans, rng.uniform(0, 1, ans.n_params), basis, sc, e)
    assert np.isfinite(y) and basis.dim == 3 * n


def test_snapshot_projection_consistency(rng):
    basis = compute_dla_basis(cz.su2_block_generators(2))
    k = from_coeffs(rng.normal(size=basis.dim), basis)
    c, resid = project(k, basis)
    assert resid < 1e-12 and np.allclose(from_coeffs(c, basis).norm(), np.linalg.norm(c))
