"""Snapshot recovery from gradients: the chi linear system and its ratio variant.

A single gradient vector at one ``theta`` never pins the snapshot down:
row ``j`` of the chi matrix is ``nu^T ad(H'_j)`` with ``nu = Ad_U^T mu``, so
every ``e`` in the centralizer of ``nu`` (``nu`` itself included) lies in
the kernel. The ``*_rounds`` functions stack gradients taken at several
parameter settings, which generically restores full column rank.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .circuits import AnsatzCircuit
from .dla import MEMBER_TOL, DlaBasis, StructureConstants, project
from .errors import DimensionMismatch, NullspaceDim, PivotZero, RankDeficient, Underdetermined
from .gsim import chi_matrix, observable_coeffs
from .oracle import Snapshot
from .pauli import HermitianPauliSum, PauliString

RANK_TOL = 1e-8
PIVOT_TOL = 1e-12


@dataclass(frozen=True)
class RecoveryResult:
    snapshot: Snapshot
    residual: float
    rank: int
    condition_estimate: float
    up_to_scale: bool = False
    scale_fixed_by_identity: bool = False

    @property
    def values(self) -> np.ndarray:
        return self.snapshot.values

    def to_json_obj(self) -> dict:
        return {
            "snapshot": self.snapshot.values.tolist(),
            "residual": self.residual,
            "rank": self.rank,
            "condition_estimate": self.condition_estimate,
            "up_to_scale": self.up_to_scale,
            "scale_fixed_by_identity": self.scale_fixed_by_identity,
        }


def _numerical_rank(s: np.ndarray, tol: float) -> int:
    if not s.size or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def solve_chi_system(A, C, tol: float = RANK_TOL) -> RecoveryResult:
    """Least-squares solve of ``A e = C`` (QR), refusing rank-deficient systems.

    Raises
    ------
    Underdetermined
        Fewer rows than unknowns.
    RankDeficient
        Numerical rank below the column count (relative tolerance ``tol``).
    """
    A = np.asarray(A, dtype=float)
    C = np.asarray(C, dtype=float)
    rows, dim = A.shape
    if C.shape != (rows,):
        raise DimensionMismatch(f"gradient length {C.shape} does not match {rows} chi rows")
    if rows < dim:
        raise Underdetermined(f"{rows} gradient equations for {dim} unknowns")
    s = np.linalg.svd(A, compute_uv=False)
    rank = _numerical_rank(s, tol)
    cond = float(s[0] / s[-1]) if s[-1] > 0 else float("inf")
    if rank < dim:
        raise RankDeficient(f"chi matrix has rank {rank} < {dim}", rank=rank, dim=dim)
    q, r = np.linalg.qr(A)
    e = solve_triangular(r, q.T @ C)
    resid = float(np.linalg.norm(A @ e - C))
    return RecoveryResult(Snapshot(e), resid, rank, cond)


def recover_snapshot(C, ans: AnsatzCircuit, theta, obs, basis: DlaBasis, sc: StructureConstants) -> RecoveryResult:
    """Recover ``e_snap`` from the gradient vector at a single ``theta``."""
    if ans.n_params < basis.dim:
        raise Underdetermined(f"D = {ans.n_params} < dim g = {basis.dim}")
    mu = observable_coeffs(obs, basis)
    A = chi_matrix(mu, ans, theta, basis, sc).A
    return solve_chi_system(A, C)


def recover_snapshot_rounds(
    Cs: Sequence, ans: AnsatzCircuit, thetas: Sequence, obs, basis: DlaBasis, sc: StructureConstants
) -> RecoveryResult:
    """Recover ``e_snap`` from gradients observed at several parameter settings.

    This is the setting of an adversary watching more than one training
    step on the same input.
    """
    if len(Cs) != len(thetas):
        raise DimensionMismatch("need one gradient vector per theta")
    mu = observable_coeffs(obs, basis)
    A = np.vstack([chi_matrix(mu, ans, t, basis, sc).A for t in thetas])
    return solve_chi_system(A, np.concatenate([np.asarray(c, dtype=float) for c in Cs]))


def _ratio_rows(Ct, A, pivot):
    Ct = np.asarray(Ct, dtype=float)
    if Ct.shape != (A.shape[0],):
        raise DimensionMismatch(f"gradient length {Ct.shape} does not match {A.shape[0]} chi rows")
    p = int(np.argmax(np.abs(Ct))) if pivot is None else int(pivot)
    if abs(Ct[p]) < PIVOT_TOL:
        raise PivotZero(f"pivot gradient {Ct[p]:.3g} is numerically zero")
    ratios = Ct / Ct[p]
    keep = np.arange(len(Ct)) != p
    return A[keep] - np.outer(ratios[keep], A[p])


def _identity_weights(basis: DlaBasis) -> np.ndarray | None:
    ident = HermitianPauliSum.from_pauli(PauliString.identity(basis.n_qubits))
    w, resid = project(ident, basis)
    return w if resid < MEMBER_TOL else None


def _null_direction(H: np.ndarray, dim: int, basis: DlaBasis, tol: float) -> RecoveryResult:
    _, s, vt = np.linalg.svd(H, full_matrices=True)
    rank = _numerical_rank(s, tol)
    nullity = dim - rank
    if nullity != 1:
        raise NullspaceDim(f"homogeneous system has nullspace of dimension {nullity}", nullity=nullity)
    v = vt[-1]
    cond = float(s[0] / s[rank - 1]) if rank else float("inf")
    w = _identity_weights(basis)
    if w is not None and abs(w @ v) > 1e-10:
        # Tr(rho) = 1 fixes the scale
        v = v / (w @ v)
        return RecoveryResult(Snapshot(v), float(np.linalg.norm(H @ v)), rank, cond, False, True)
    k = int(np.argmax(np.abs(v)))
    v = v * np.sign(v[k])
    return RecoveryResult(Snapshot(v), float(np.linalg.norm(H @ v)), rank, cond, True, False)


def recover_snapshot_ratio(
    Ct, ans: AnsatzCircuit, theta, obs, basis: DlaBasis, sc: StructureConstants, pivot: int | None = None,
    tol: float = RANK_TOL,
) -> RecoveryResult:
    """Snapshot direction from gradients of an unknown scalar cost ``f(y_theta)``.

    Every cost gradient is ``f'(y) C_j``; the ratios ``R_j = Ct_j / Ct_p``
    cancel ``f'`` and leave the homogeneous system
    ``(chi_j - R_j chi_p) e = 0``. The pivot ``p`` defaults to the largest
    ``|Ct_j|``. The result is unit-norm with its largest entry positive
    unless the identity lies in the algebra, in which case ``Tr(rho) = 1``
    fixes the scale.

    Raises
    ------
    Underdetermined
        ``D < dim g + 1``.
    PivotZero
        The pivot gradient is below ``1e-12``.
    NullspaceDim
        The nullspace is not one-dimensional.
    """
    if ans.n_params < basis.dim + 1:
        raise Underdetermined(f"D = {ans.n_params} < dim g + 1 = {basis.dim + 1}")
    mu = observable_coeffs(obs, basis)
    A = chi_matrix(mu, ans, theta, basis, sc).A
    return _null_direction(_ratio_rows(Ct, A, pivot), basis.dim, basis, tol)


def recover_snapshot_ratio_rounds(
    Cts: Sequence, ans: AnsatzCircuit, thetas: Sequence, obs, basis: DlaBasis, sc: StructureConstants,
    tol: float = RANK_TOL,
) -> RecoveryResult:
    """Ratio variant with one pivot per round; each round may have its own ``f'``."""
    if len(Cts) != len(thetas):
        raise DimensionMismatch("need one gradient vector per theta")
    mu = observable_coeffs(obs, basis)
    H = np.vstack([_ratio_rows(c, chi_matrix(mu, ans, t, basis, sc).A, None) for c, t in zip(Cts, thetas)])
    if H.shape[0] < basis.dim - 1:
        raise Underdetermined(f"{H.shape[0]} ratio equations for a {basis.dim}-dimensional direction")
    return _null_direction(H, basis.dim, basis, tol)


def direction_angle(a, b) -> float:
    """Angle between the lines spanned by ``a`` and ``b`` (sign-blind)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = abs(a @ b) / (np.linalg.norm(a) * np.linalg.norm(b))
    return float(np.arccos(min(1.0, c)))
