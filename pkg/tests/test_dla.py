import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vqc_privacy import circuits as cz
from vqc_privacy.dla import (
    DlaBasis,
    ad_matrix,
    compute_dla_basis,
    from_coeffs,
    in_algebra,
    project,
    structure_constants,
)
from vqc_privacy.errors import DimBudgetExceeded, NotInAlgebra
from vqc_privacy.pauli import HermitianPauliSum, bracket, inner

TOL = 1e-8


def _gram(basis):
    return np.array([[inner(a, b) for b in basis.basis] for a in basis.basis])


@pytest.mark.parametrize(
    "gens, dim",
    [
        (cz.su2_block_generators(3), 9),
        (cz.su2_block_generators(5), 15),
        (cz.tfim_generators(3), 15),  # so(6)
        (cz.tfim_generators(4), 28),  # so(8)
        (cz.block_su4_generators(2), 30),
    ],
)
def test_known_dimensions(gens, dim):
    assert compute_dla_basis(gens).dim == dim


def test_su2_single_qubit():
    basis = compute_dla_basis([HermitianPauliSum.from_pauli("X"), HermitianPauliSum.from_pauli("Y")])
    assert basis.dim == 3
    assert in_algebra(HermitianPauliSum.from_pauli("Z"), basis)


@given(st.integers(2, 4), st.sampled_from(["tfim", "su2"]))
def test_orthonormal_and_closed(n, kind):
    gens = cz.tfim_generators(n) if kind == "tfim" else cz.su2_block_generators(n)
    basis = compute_dla_basis(gens)
    assert np.max(np.abs(_gram(basis) - np.eye(basis.dim))) < TOL
    for a in basis.basis:
        for b in basis.basis:
            _, resid = project(bracket(a, b), basis)
            assert resid < TOL


@given(st.integers(2, 4))
def test_structure_constants_jacobi_and_antisymmetry(n):
    basis = compute_dla_basis(cz.tfim_generators(n))
    ad = structure_constants(basis).ad
    assert np.max(np.abs(ad + ad.transpose(0, 2, 1))) < TOL
    assert np.max(np.abs(ad + ad.transpose(2, 1, 0))) < TOL
    # ad is a representation: [ad_a, ad_b] = ad_{[a, b]}
    for a in range(basis.dim):
        for b in range(basis.dim):
            lhs = ad[a] @ ad[b] - ad[b] @ ad[a]
            coeffs = ad[a][:, b]
            rhs = np.tensordot(coeffs, ad, axes=1)
            assert np.max(np.abs(lhs - rhs)) < TOL


def test_ad_matrix_matches_bracket(rng):
    basis = compute_dla_basis(cz.tfim_generators(3))
    sc = structure_constants(basis)
    h = from_coeffs(rng.normal(size=basis.dim), basis)
    k = from_coeffs(rng.normal(size=basis.dim), basis)
    M = ad_matrix(h, basis, sc)
    kc, _ = project(k, basis)
    target, _ = project(bracket(h, k), basis)
    assert np.allclose(M @ kc, target, atol=TOL)


def test_not_in_algebra():
    basis = compute_dla_basis(cz.tfim_generators(3))
    with pytest.raises(NotInAlgebra):
        ad_matrix(HermitianPauliSum.from_pauli("ZII"), basis, structure_constants(basis))


def test_budget_exceeded():
    gens = cz.su2_block_generators(3) + cz.tfim_generators(3)[:2]
    with pytest.raises(DimBudgetExceeded):
        compute_dla_basis(gens, max_dim=40)


def test_basis_json_roundtrip():
    basis = compute_dla_basis(cz.su2_block_generators(2))
    back = DlaBasis.from_json_obj(basis.to_json_obj())
    assert back.basis == basis.basis


def test_generators_are_members():
    gens = cz.tfim_generators(4)
    basis = compute_dla_basis(gens)
    assert all(in_algebra(g, basis) for g in gens)
