import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vqc_privacy.errors import DenseCapExceeded, QubitMismatch
from vqc_privacy.pauli import (
    HermitianPauliSum,
    PauliString,
    bracket,
    inner,
    multiply,
    to_dense,
)

from strategies import pauli_strings, pauli_sums

TOL = 1e-12


def test_single_qubit_table():
    ph, r = multiply(PauliString.from_label("X"), PauliString.from_label("Y"))
    assert r.label() == "Z" and ph == 1j
    ph, r = multiply(PauliString.from_label("Y"), PauliString.from_label("X"))
    assert r.label() == "Z" and ph == -1j


def test_bracket_xy_is_2z():
    b = bracket("X", "Y")
    assert b == HermitianPauliSum.from_pauli("Z", 2.0)


def test_label_roundtrip_and_qubit_order():
    p = PauliString.from_label("XIZY")
    assert p.label() == "XIZY"
    assert p.support() == (0, 2, 3)
    # qubit 0 is the most significant tensor factor
    dense = to_dense(HermitianPauliSum.from_pauli("ZI"))
    assert np.allclose(np.diag(dense).real, [1, 1, -1, -1])


def test_invalid_label():
    with pytest.raises(ValueError):
        PauliString.from_label("XQ")


def test_qubit_mismatch():
    with pytest.raises(QubitMismatch):
        bracket("XI", "X")


def test_dense_cap():
    with pytest.raises(DenseCapExceeded):
        to_dense(HermitianPauliSum.from_pauli("I" * 13))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(pauli_strings(n), pauli_strings(n))))
def test_multiply_matches_dense(pq):
    p, q = pq
    ph, r = multiply(p, q)
    lhs = to_dense(HermitianPauliSum.from_pauli(p)) @ to_dense(HermitianPauliSum.from_pauli(q))
    assert np.max(np.abs(lhs - ph * to_dense(HermitianPauliSum.from_pauli(r)))) < TOL


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(pauli_sums(n), pauli_sums(n))))
def test_bracket_matches_dense(ab):
    a, b = ab
    A, B = to_dense(a), to_dense(b)
    assert np.max(np.abs(to_dense(bracket(a, b)) - (-1j) * (A @ B - B @ A))) < TOL * 10


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(pauli_sums(n), pauli_sums(n))))
def test_inner_matches_trace(ab):
    a, b = ab
    n = a.n_qubits
    assert abs(inner(a, b) - np.trace(to_dense(a) @ to_dense(b)).real / 2**n) < TOL * 10


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(pauli_sums(n), pauli_sums(n), pauli_sums(n))))
def test_jacobi(abc):
    a, b, c = abc
    total = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
    assert total.max_abs_coeff() < 1e-10


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(pauli_sums(n), pauli_sums(n))))
def test_bracket_antisymmetric(ab):
    a, b = ab
    assert (bracket(a, b) + bracket(b, a)).max_abs_coeff() < TOL


@given(st.integers(1, 4).flatmap(pauli_sums))
def test_json_roundtrip(a):
    assert HermitianPauliSum.from_json_obj(a.to_json_obj(), a.n_qubits) == a


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(pauli_strings(n), pauli_strings(n))))
def test_commutes_with_matches_phase(pq):
    p, q = pq
    ph1, _ = multiply(p, q)
    ph2, _ = multiply(q, p)
    assert p.commutes_with(q) == (ph1 == ph2)


def test_pruning_drops_tiny_terms():
    a = HermitianPauliSum.from_terms([("X", 1.0), ("Z", 1e-14)])
    assert len(a) == 1
