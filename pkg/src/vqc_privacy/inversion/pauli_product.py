"""Closed-form inversion for single-qubit Pauli-rotation encodings.

For ``R_P(phi)|0>`` the single-qubit Bloch vector stays in the plane of
``Z`` and the Pauli orthogonal to both ``Z`` and ``P``. If the algebra
contains a unit vector ``W = alpha Z + beta P_perp`` of that plane, then
``gamma . e = Tr(W rho)`` is a shifted cosine of ``phi`` and can be
inverted. If both directions are present the sine is available too and
``atan2`` removes the arccos branch ambiguity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..circuits import EncodingCircuit, Input
from ..dla import DlaBasis
from ..oracle import Snapshot
from ..pauli import HermitianPauliSum, PauliString
from .common import Failure, InversionResult, Status, periodic_error, safe_arccos

UNIT_TOL = 1e-8

# R_P(phi) maps Z to cos(phi) Z + sign * sin(phi) P_perp
_PLANE = {"X": ("Y", -1.0), "Y": ("X", 1.0)}


@dataclass(frozen=True)
class RotationQubit:
    qubit: int
    axis: str
    frequency: float


def rotation_qubits(enc: EncodingCircuit, j: int) -> list[RotationQubit]:
    """Qubits whose only gates are same-axis single-qubit rotations of ``x_j``.

    Sorted by increasing frequency, since the lowest frequency has the
    longest unambiguous range.
    """
    by_qubit: dict[int, list] = {}
    for g in enc.gates:
        for q in g.qubits():
            by_qubit.setdefault(q, []).append(g)
    out = []
    for q, gates in by_qubit.items():
        axis = None
        freq = 0.0
        ok = True
        for g in gates:
            gen = g.generator
            if not (isinstance(gen, HermitianPauliSum) and len(gen) == 1 and isinstance(g.binding, Input)):
                ok = False
                break
            (p, c), = gen.items()
            if p.support() != (q,) or g.binding.index != j:
                ok = False
                break
            a = p.label()[q]
            if axis is not None and a != axis:
                ok = False
                break
            axis = a
            freq += 2.0 * c * g.binding.scale
        if ok and axis in _PLANE and freq != 0.0:
            out.append(RotationQubit(q, axis, freq))
    return sorted(out, key=lambda r: abs(r.frequency))


def _plane_overlap(basis: DlaBasis, strings):
    pos_strings, bmat = basis.coefficient_matrix(sorted(basis.pauli_support | set(strings)))
    pos = {p: i for i, p in enumerate(pos_strings)}
    cmat = np.zeros((len(pos_strings), len(strings)))
    for k, p in enumerate(strings):
        cmat[pos[p], k] = 1.0
    return bmat.T @ cmat


def span_intersection(basis: DlaBasis, strings) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """SVD of ``A^T C`` for the basis matrix ``A`` and unit Pauli columns ``C``.

    Returns ``(u, s, vt)``; singular values equal to one mark directions of
    ``span(strings)`` lying inside the algebra.
    """
    return np.linalg.svd(_plane_overlap(basis, strings), full_matrices=False)


def _values(e):
    return np.asarray(e.values if isinstance(e, Snapshot) else e, dtype=float)


def invert_rotation_angle(e, basis: DlaBasis, n_qubits: int, qubit: int, axis: str) -> float | Failure:
    """Angle ``phi`` of ``R_axis(phi)|0>`` on ``qubit`` in ``[0, 2 pi)``, or ``Failure``."""
    e = _values(e)
    perp, sign = _PLANE[axis]
    z = PauliString.single(n_qubits, qubit, "Z")
    p = PauliString.single(n_qubits, qubit, perp)
    u, s, vt = span_intersection(basis, [z, p])
    units = int(np.sum(np.abs(s - 1.0) <= UNIT_TOL))
    if units == 0:
        return Failure(f"span(Z, {perp}) on qubit {qubit} does not meet the algebra")
    if units == 2:
        # columns of A^T C are the basis coefficients of Z and P_perp
        m = _plane_overlap(basis, [z, p])
        c = float(m[:, 0] @ e)
        sn = sign * float(m[:, 1] @ e)
        return float(np.arctan2(sn, c) % (2 * np.pi))
    gamma = u[:, 0] * s[0]
    alpha, beta = vt[0]
    # gamma . e = alpha cos(phi) + sign beta sin(phi) = alpha cos(phi) - b sin(phi)
    b = -sign * beta
    t = float(gamma @ e)
    if abs(alpha) > 1e-12:
        amp = np.sign(alpha) * np.hypot(alpha, b)
        phi = safe_arccos(t / amp) - np.arctan(b / alpha)
    else:
        phi = safe_arccos(t / np.hypot(alpha, b)) - np.arctan2(b, alpha)
    return float(phi % (2 * np.pi))


def invert_pauli_product(e, basis: DlaBasis, enc: EncodingCircuit, j: int) -> float | Failure:
    """Estimate ``x_j`` from a snapshot, up to the encoding's periodicity.

    Tries every qubit that carries a pure rotation of ``x_j``, lowest
    frequency first, and returns ``Failure`` if none of their Bloch planes
    meets the algebra.
    """
    cands = rotation_qubits(enc, j)
    if not cands:
        return Failure(f"input {j} is not encoded by single-qubit Pauli rotations")
    reasons = []
    for rq in cands:
        phi = invert_rotation_angle(e, basis, enc.n_qubits, rq.qubit, rq.axis)
        if isinstance(phi, Failure):
            reasons.append(phi.reason)
            continue
        period = 2 * np.pi / abs(rq.frequency)
        return float((phi / rq.frequency) % period)
    return Failure("; ".join(reasons))


def invert_pauli_product_all(e, basis: DlaBasis, enc: EncodingCircuit, x_true=None) -> InversionResult:
    xs = np.full(enc.input_dim, np.nan)
    status = []
    reasons = {}
    for j in range(enc.input_dim):
        r = invert_pauli_product(e, basis, enc, j)
        if isinstance(r, Failure):
            status.append(Status.FAILURE)
            reasons[j] = r.reason
        else:
            xs[j] = r
            status.append(Status.RECOVERED)
    err = None
    if x_true is not None and all(s == Status.RECOVERED for s in status):
        err = periodic_error(xs, x_true, [enc.period(j) for j in range(enc.input_dim)])
    return InversionResult(xs, tuple(status), err, 0, {"failures": reasons})
