"""Lie-algebraic simulation of LASA circuits in ``dim(g)``-dimensional space.

Conventions (checked against the dense oracle in the tests):

* gates act in list order, ``U = G_D ... G_1`` with ``G_k = exp(-i theta_k H_k)``;
* ``E_k = exp(theta_k * M_k)`` with ``M_k = ad_matrix(H_k)`` (the bracket
  ``-i[., .]``), which is ``exp(-theta_k ad_{iH_k})`` in the anti-Hermitian
  picture;
* ``Ad_U = E_D ... E_1`` and row ``a`` of ``Ad_U`` holds the coefficients of
  ``U^dag B_a U``, so ``y = mu^T Ad_U e`` for ``O = sum_a mu_a B_a``.

Nothing on this path touches a ``2^n`` object.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuits import AnsatzCircuit, check_len
from .dla import MEMBER_TOL, DlaBasis, StructureConstants, ad_matrix, project
from .errors import DimensionMismatch, GeneratorNotInDla, NotInAlgebra, ObservableNotInDla
from .oracle import Snapshot


def expm_antisymmetric(m: np.ndarray, t: float = 1.0) -> np.ndarray:
    """``exp(t m)`` for real antisymmetric ``m`` via eigh of the Hermitian ``i m``."""
    if not m.size:
        return np.eye(0)
    lam, v = np.linalg.eigh(1j * m)
    # m = -i (i m) = -i V diag(lam) V^dag
    out = (v * np.exp(-1j * t * lam)) @ v.conj().T
    return out.real


@dataclass(frozen=True)
class AdjointFactors:
    factors: tuple[np.ndarray, ...]
    generators_ad: tuple[np.ndarray, ...]
    param_index: tuple[int, ...]
    ad_u: np.ndarray

    @property
    def dim(self):
        return self.ad_u.shape[0]


@dataclass(frozen=True)
class ChiMatrix:
    A: np.ndarray


class _GeneratorCache:
    """ad-matrices of the ansatz generators, keyed by the basis object."""

    def __init__(self):
        self._store: dict = {}

    def get(self, ans: AnsatzCircuit, basis: DlaBasis, sc: StructureConstants):
        key = (id(ans), id(basis), id(sc))
        hit = self._store.get(key)
        if hit is not None and hit[0] is ans and hit[1] is basis:
            return hit[2]
        mats = []
        for k, g in enumerate(ans.gates):
            try:
                mats.append(ad_matrix(g.generator, basis, sc))
            except NotInAlgebra as err:
                raise GeneratorNotInDla(f"generator {k} is not in the algebra: {err}") from None
        mats = tuple(mats)
        if len(self._store) > 256:
            self._store.clear()
        self._store[key] = (ans, basis, mats)
        return mats


_CACHE = _GeneratorCache()


def generator_ads(ans, basis, sc):
    return _CACHE.get(ans, basis, sc)


def adjoint_of(ans: AnsatzCircuit, theta, basis: DlaBasis, sc: StructureConstants) -> AdjointFactors:
    theta = np.asarray(theta, dtype=float)
    check_len(theta, ans.n_params, "theta")
    mats = generator_ads(ans, basis, sc)
    idx = tuple(g.binding.index for g in ans.gates)
    facs = tuple(expm_antisymmetric(m, theta[k]) for m, k in zip(mats, idx))
    ad_u = np.eye(basis.dim)
    for f in facs:
        ad_u = f @ ad_u
    return AdjointFactors(facs, mats, idx, ad_u)


def observable_coeffs(obs, basis: DlaBasis) -> np.ndarray:
    mu, resid = project(obs, basis)
    if resid > MEMBER_TOL:
        raise ObservableNotInDla(f"observable residual {resid:.3g} outside the algebra")
    return mu


def model_output(mu, adj: AdjointFactors, e: Snapshot | np.ndarray) -> float:
    """``mu^T Ad_U e``."""
    e = _values(e)
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (adj.dim,) or e.shape != (adj.dim,):
        raise DimensionMismatch("mu, snapshot and adjoint dimensions disagree")
    return float(mu @ adj.ad_u @ e)


def _values(e):
    return np.asarray(e.values if isinstance(e, Snapshot) else e, dtype=float)


def _prefix_suffix(facs):
    dim = facs[0].shape[0] if facs else 0
    pre = [np.eye(dim)]  # pre[k] = E_{k-1} ... E_0
    for f in facs:
        pre.append(f @ pre[-1])
    suf = [np.eye(dim)]  # suf[k] = E_{G-1} ... E_{G-k}
    for f in reversed(facs):
        suf.append(suf[-1] @ f)
    return pre, suf


def gate_derivatives(adj: AdjointFactors) -> list[np.ndarray]:
    """``d Ad_U / d(angle of gate g)`` for every gate."""
    facs = adj.factors
    G = len(facs)
    pre, suf = _prefix_suffix(facs)
    return [suf[G - 1 - g] @ adj.generators_ad[g] @ pre[g + 1] for g in range(G)]


def adjoint_derivative(ans: AnsatzCircuit, theta, j: int, basis: DlaBasis, sc: StructureConstants) -> np.ndarray:
    """``d Ad_U / d theta_j`` (0-based ``j``), summed over gates sharing ``theta_j``."""
    if not 0 <= j < ans.n_params:
        raise IndexError(f"parameter index {j} out of range")
    adj = adjoint_of(ans, theta, basis, sc)
    out = np.zeros((basis.dim, basis.dim))
    for g, d in enumerate(gate_derivatives(adj)):
        if adj.param_index[g] == j:
            out += d
    return out


def chi_matrix(mu, ans: AnsatzCircuit, theta, basis: DlaBasis, sc: StructureConstants) -> ChiMatrix:
    """``A[j, b] = sum_a mu_a (d Ad_U / d theta_j)[a, b]``."""
    adj = adjoint_of(ans, theta, basis, sc)
    mu = np.asarray(mu, dtype=float)
    # row vector propagation keeps this O(G dim^2)
    facs = adj.factors
    G = len(facs)
    left = [mu]  # left[k] = mu^T E_{G-1} ... E_{G-k}
    for f in reversed(facs):
        left.append(left[-1] @ f)
    pre, _ = _prefix_suffix(facs)
    A = np.zeros((ans.n_params, basis.dim))
    for g in range(G):
        A[adj.param_index[g]] += left[G - 1 - g] @ adj.generators_ad[g] @ pre[g + 1]
    return ChiMatrix(A)


def gsim_gradients(mu, ans, theta, basis, sc, e) -> np.ndarray:
    return chi_matrix(mu, ans, theta, basis, sc).A @ _values(e)


def gsim_output(mu, ans, theta, basis, sc, e) -> float:
    return model_output(mu, adjoint_of(ans, theta, basis, sc), e)


def stacked_chi(mu, ans, thetas: Sequence, basis, sc) -> np.ndarray:
    return np.vstack([chi_matrix(mu, ans, t, basis, sc).A for t in thetas])
