"""Dense statevector simulation: ground-truth states, snapshots, outputs, gradients.

This is the stand-in for a quantum device. Everything here allocates
``2^n`` objects and is capped at ``pauli.DENSE_CAP`` qubits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuits import AnsatzCircuit, EncodingCircuit, Gate, check_len, gate_unitary
from .dla import DlaBasis
from .errors import DenseCapExceeded
from .pauli import DENSE_CAP, HermitianPauliSum, PauliString, as_sum

FD_STEP = 1e-5


@dataclass(frozen=True)
class QuantumState:
    n_qubits: int
    vector: np.ndarray

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.vector, self.vector.conj())

    def expectation(self, op) -> float:
        return expectation(self.vector, as_sum(op))


@dataclass(frozen=True)
class Snapshot:
    values: np.ndarray
    basis_id: str | None = None

    def __len__(self):
        return len(self.values)


def zero_state(n: int) -> np.ndarray:
    if n > DENSE_CAP:
        raise DenseCapExceeded(f"{n} qubits exceeds dense cap {DENSE_CAP}")
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1.0
    return psi


def apply_local(psi: np.ndarray, n: int, qubits: Sequence[int], u: np.ndarray) -> np.ndarray:
    """Apply ``u`` (on ``qubits``, first = most significant) to the register."""
    if not qubits:
        return psi * u[0, 0]
    k = len(qubits)
    t = psi.reshape((2,) * n)
    ut = u.reshape((2,) * (2 * k))
    t = np.tensordot(ut, t, axes=(list(range(k, 2 * k)), list(qubits)))
    t = np.moveaxis(t, list(range(k)), list(qubits))
    return t.reshape(-1)


def run_gates(psi, n, gates: Sequence[Gate], angles: Sequence[float]) -> np.ndarray:
    for g, a in zip(gates, angles):
        qs, u = gate_unitary(g, a)
        psi = apply_local(psi, n, qs, u)
    return psi


def expectation(psi: np.ndarray, op: HermitianPauliSum) -> float:
    """``<psi| op |psi>`` for a Pauli sum, without building the matrix."""
    idx = np.arange(psi.size)
    total = 0.0
    for p, c in op.items():
        total += c * _pauli_expectation(psi, idx, p)
    return float(total)


def _pauli_expectation(psi, idx, p: PauliString) -> float:
    sign = 1 - 2 * (np.bitwise_count(idx & p.z_mask) & 1).astype(np.int64)
    phase = 1j ** ((p.x_mask & p.z_mask).bit_count() % 4)
    # P|b> = phase (-1)^{|z&b|} |b^x>
    val = phase * np.vdot(psi[idx ^ p.x_mask], sign * psi)
    return float(val.real)


def encoding_angles(enc: EncodingCircuit, x) -> list[float]:
    return [g.angle(x=x) for g in enc.gates]


def encode(enc: EncodingCircuit, x) -> QuantumState:
    """``V(x)|0...0>`` with gates applied in list order."""
    x = np.asarray(x, dtype=float)
    check_len(x, enc.input_dim, "x")
    psi = run_gates(zero_state(enc.n_qubits), enc.n_qubits, enc.gates, encoding_angles(enc, x))
    return QuantumState(enc.n_qubits, psi)


def snapshot_of(enc: EncodingCircuit, x, basis: DlaBasis) -> Snapshot:
    """``values[b] = Tr(B_b rho(x))`` from the dense state."""
    psi = encode(enc, x).vector
    return Snapshot(state_snapshot(psi, basis))


def state_snapshot(psi, basis: DlaBasis) -> np.ndarray:
    idx = np.arange(psi.size)
    cache: dict[PauliString, float] = {}
    out = np.zeros(basis.dim)
    for a, b in enumerate(basis.basis):
        acc = 0.0
        for p, c in b.items():
            if p not in cache:
                cache[p] = _pauli_expectation(psi, idx, p)
            acc += c * cache[p]
        out[a] = acc
    return out


def _ansatz_output(psi0, ans: AnsatzCircuit, angles, obs) -> float:
    psi = run_gates(psi0, ans.n_qubits, ans.gates, angles)
    return expectation(psi, obs)


def vqc_output(enc: EncodingCircuit, ans: AnsatzCircuit, theta, obs, x) -> float:
    """``Tr(U(theta)^dag O U(theta) rho(x))``."""
    theta = np.asarray(theta, dtype=float)
    check_len(theta, ans.n_params, "theta")
    psi0 = encode(enc, x).vector
    return _ansatz_output(psi0, ans, [g.angle(theta=theta) for g in ans.gates], as_sum(obs))


def _single_pauli_coeff(gen) -> float | None:
    if isinstance(gen, HermitianPauliSum) and len(gen) == 1:
        (p, c), = gen.items()
        if not p.is_identity:
            return c
    return None


def vqc_gradients(enc: EncodingCircuit, ans: AnsatzCircuit, theta, obs, x) -> np.ndarray:
    """``dy/dtheta_j``; parameter shift for single-Pauli generators, central FD otherwise.

    A generator ``c P`` has eigenvalues ``+-c`` so the shift rule reads
    ``d/da f = c [f(a + pi/(4c)) - f(a - pi/(4c))]``.
    """
    theta = np.asarray(theta, dtype=float)
    check_len(theta, ans.n_params, "theta")
    obs = as_sum(obs)
    psi0 = encode(enc, x).vector
    base = [g.angle(theta=theta) for g in ans.gates]
    grad = np.zeros(ans.n_params)
    for k, g in enumerate(ans.gates):
        c = _single_pauli_coeff(g.generator)
        if c is not None:
            s = np.pi / (4 * abs(c))
            w = abs(c)
        else:
            s = FD_STEP
            w = 1.0 / (2 * FD_STEP)
        plus = list(base)
        minus = list(base)
        plus[k] += s
        minus[k] -= s
        grad[g.binding.index] += w * (_ansatz_output(psi0, ans, plus, obs) - _ansatz_output(psi0, ans, minus, obs))
    return grad


def finite_difference_gradients(enc, ans, theta, obs, x, step: float = FD_STEP) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    out = np.zeros(ans.n_params)
    for j in range(ans.n_params):
        e = np.zeros_like(theta)
        e[j] = step
        out[j] = (vqc_output(enc, ans, theta + e, obs, x) - vqc_output(enc, ans, theta - e, obs, x)) / (2 * step)
    return out


class ExpectationOracle:
    """Quantum-assisted access to ``Tr(B rho(x'))`` for chosen probe inputs.

    Block-level queries split a basis element ``B = B_J + B_rest`` where
    ``B_J`` holds the terms acting as identity outside the block ``J``.
    ``local`` evaluates ``Tr(B_J rho_J(x'))`` and ``complement`` evaluates
    ``Tr(B_rest rho(x'))``.
    """

    def __init__(self, enc: EncodingCircuit):
        self.enc = enc
        self.calls = 0

    def state(self, x) -> np.ndarray:
        self.calls += 1
        return encode(self.enc, x).vector

    def snapshot(self, x, basis: DlaBasis) -> np.ndarray:
        return state_snapshot(self.state(x), basis)

    def expectations(self, x, ops: Sequence[HermitianPauliSum]) -> np.ndarray:
        psi = self.state(x)
        return np.array([expectation(psi, o) for o in ops])

    @staticmethod
    def split(op: HermitianPauliSum, qubits) -> tuple[HermitianPauliSum, HermitianPauliSum]:
        allowed = set(qubits)
        inside = {p: c for p, c in op.items() if set(p.support()) <= allowed}
        rest = {p: c for p, c in op.items() if p not in inside}
        return HermitianPauliSum(op.n_qubits, inside), HermitianPauliSum(op.n_qubits, rest)

    def local(self, x, ops, qubits) -> np.ndarray:
        return self.expectations(x, [self.split(o, qubits)[0] for o in ops])

    def complement(self, x, ops, qubits) -> np.ndarray:
        return self.expectations(x, [self.split(o, qubits)[1] for o in ops])
