"""Dynamical Lie algebra basis, projections and structure constants.

The closure works on Hermitian representatives with ``bracket = -i[., .]``.
Under the isomorphism ``H -> -iH`` this bracket is the ordinary commutator of
the anti-Hermitian algebra, so ``ad[a]`` below is the matrix of
``ad_{-iB_a}`` in the basis ``{-iB_b}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimBudgetExceeded, NotInAlgebra, QubitMismatch, SupportBudgetExceeded
from .pauli import HermitianPauliSum, PauliString, as_sum, bracket

INDEP_TOL = 1e-10
MEMBER_TOL = 1e-8


class _PauliSpace:
    """Orthonormal rows over a growing Pauli-string coordinate system."""

    def __init__(self):
        self.index: dict[PauliString, int] = {}
        self.rows = np.zeros((0, 0))

    def _vec(self, a: HermitianPauliSum) -> np.ndarray:
        for p in a:
            if p not in self.index:
                self.index[p] = len(self.index)
        if self.rows.shape[1] < len(self.index):
            pad = len(self.index) - self.rows.shape[1]
            self.rows = np.hstack([self.rows, np.zeros((self.rows.shape[0], pad))])
        v = np.zeros(len(self.index))
        for p, c in a.items():
            v[self.index[p]] = c
        return v

    def try_add(self, a: HermitianPauliSum) -> np.ndarray | None:
        """Gram-Schmidt (twice) against the rows; append if the residual survives."""
        nrm = a.norm()
        if nrm == 0.0:
            return None
        v = self._vec(a) / nrm
        for _ in range(2):
            if self.rows.shape[0]:
                v = v - self.rows.T @ (self.rows @ v)
        r = np.linalg.norm(v)
        if r <= INDEP_TOL:
            return None
        v = v / r
        self.rows = np.vstack([self.rows, v[None, :]])
        return v

    def to_sum(self, v: np.ndarray, n_qubits: int) -> HermitianPauliSum:
        keys = list(self.index)
        return HermitianPauliSum(n_qubits, {keys[i]: float(v[i]) for i in np.flatnonzero(np.abs(v) > 1e-14)})


@dataclass(frozen=True)
class DlaBasis:
    """Frobenius-orthonormal basis ``B_1..B_dim`` of the algebra."""

    basis: tuple[HermitianPauliSum, ...]
    n_qubits: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __getitem__(self, i):
        return self.basis[i]

    @property
    def pauli_support(self) -> frozenset[PauliString]:
        out = set()
        for b in self.basis:
            out.update(b)
        return frozenset(out)

    def coefficient_matrix(self, strings: Sequence[PauliString] | None = None):
        """``(strings, M)`` with ``M[s, a]`` the coefficient of ``strings[s]`` in ``B_a``."""
        strings = list(strings) if strings is not None else sorted(self.pauli_support)
        pos = {p: i for i, p in enumerate(strings)}
        mat = np.zeros((len(strings), self.dim))
        for a, b in enumerate(self.basis):
            for p, c in b.items():
                mat[pos[p], a] = c
        return strings, mat

    def to_json_obj(self):
        return {"n_qubits": self.n_qubits, "basis": [b.to_json_obj() for b in self.basis]}

    @classmethod
    def from_json_obj(cls, obj) -> "DlaBasis":
        n = obj["n_qubits"]
        return cls(tuple(HermitianPauliSum.from_json_obj(b, n) for b in obj["basis"]), n)

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj())


@dataclass(frozen=True)
class StructureConstants:
    """``ad[a][b, c] = inner(B_b, bracket(B_a, B_c))``."""

    ad: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.ad.shape[0]

    def to_json_obj(self):
        return {"ad": self.ad.tolist()}

    @classmethod
    def from_json_obj(cls, obj) -> "StructureConstants":
        return cls(np.asarray(obj["ad"], dtype=float))


def compute_dla_basis(
    generators: Sequence[HermitianPauliSum],
    max_dim: int | None = None,
    max_pauli_support: int | None = None,
) -> DlaBasis:
    """Lie closure of ``generators`` by breadth-first pairwise brackets.

    Each round brackets every pair that involves at least one element added
    in the previous round, so all pairs of the current basis are covered
    without repeating work. Candidates are admitted when their projection
    residual (after normalization) exceeds ``INDEP_TOL``.

    Raises
    ------
    DimBudgetExceeded
        The dimension grew past ``max_dim``.
    SupportBudgetExceeded
        A basis element needs more than ``max_pauli_support`` Pauli strings.
    """
    gens = [as_sum(g) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].n_qubits
    for g in gens:
        if g.n_qubits != n:
            raise QubitMismatch("generators act on different qubit counts")
        if g.is_zero():
            raise ValueError("zero generator")
    if max_dim is None:
        max_dim = 4**n - 1
    if max_pauli_support is None:
        max_pauli_support = 4**n

    space = _PauliSpace()
    elems: list[HermitianPauliSum] = []

    def admit(cand: HermitianPauliSum) -> bool:
        v = space.try_add(cand)
        if v is None:
            return False
        b = space.to_sum(v, n)
        if len(b) > max_pauli_support:
            raise SupportBudgetExceeded(
                f"basis element {len(elems)} needs {len(b)} Pauli strings (> {max_pauli_support})"
            )
        elems.append(b)
        if len(elems) > max_dim:
            raise DimBudgetExceeded(f"algebra dimension exceeded budget {max_dim}")
        return True

    for g in gens:
        admit(g)
    fresh = set(range(len(elems)))
    while fresh:
        size = len(elems)
        for i in range(size):
            for j in range(i + 1, size):
                if i in fresh or j in fresh:
                    admit(bracket(elems[i], elems[j]))
        fresh = set(range(size, len(elems)))
    return DlaBasis(tuple(elems), n)


def project(a, basis: DlaBasis) -> tuple[np.ndarray, float]:
    """Coefficients ``inner(B_a, a)`` and the norm of the orthogonal remainder."""
    a = as_sum(a)
    if a.n_qubits != basis.n_qubits:
        raise QubitMismatch("operator and basis act on different qubit counts")
    coeffs = np.array([sum(c * a.coeff(p) for p, c in b.items()) for b in basis.basis])
    acc = dict(a.terms)
    for k, b in zip(coeffs, basis.basis):
        if k == 0.0:
            continue
        for p, c in b.items():
            acc[p] = acc.get(p, 0.0) - k * c
    resid = float(np.sqrt(sum(v * v for v in acc.values())))
    return coeffs, resid


def from_coeffs(coeffs, basis: DlaBasis) -> HermitianPauliSum:
    acc: dict[PauliString, float] = {}
    for k, b in zip(coeffs, basis.basis):
        for p, c in b.items():
            acc[p] = acc.get(p, 0.0) + float(k) * c
    return HermitianPauliSum(basis.n_qubits, acc)


def structure_constants(basis: DlaBasis) -> StructureConstants:
    dim = basis.dim
    ad = np.zeros((dim, dim, dim))
    for a in range(dim):
        for c in range(a + 1, dim):
            coeffs, _ = project(bracket(basis[a], basis[c]), basis)
            ad[a, :, c] = coeffs
            ad[c, :, a] = -coeffs
    return StructureConstants(ad)


def ad_matrix(h, basis: DlaBasis, sc: StructureConstants) -> np.ndarray:
    """Matrix ``M`` with ``M @ coeffs(k) == coeffs(bracket(h, k))`` on the algebra."""
    coeffs, resid = project(h, basis)
    if resid > MEMBER_TOL:
        raise NotInAlgebra(f"operator has residual {resid:.3g} outside the algebra")
    return np.tensordot(coeffs, sc.ad, axes=1)


def in_algebra(a, basis: DlaBasis, tol: float = MEMBER_TOL) -> bool:
    return project(a, basis)[1] < tol
