"""Trigonometric interpolation of block expectations and the Chebyshev rewrite."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as cheb

from ..errors import SingularSystem
from .groebner import Poly

FIT_TOL = 1e-8


@dataclass(frozen=True)
class TrigPolynomial:
    """Real trig series ``sum_r alpha_r exp(i r . x)`` over ``r in [-R, R]^dims``.

    ``coeffs`` has shape ``(2R+1,) * dims`` and entry ``[r + R]`` holds
    ``alpha_r``.
    """

    dims: int
    R: int
    coeffs: np.ndarray

    def frequencies(self):
        return itertools.product(range(-self.R, self.R + 1), repeat=self.dims)

    def alpha(self, r) -> complex:
        return complex(self.coeffs[tuple(k + self.R for k in r)])

    def _flat(self):
        # cached (frequencies, coefficients) for vectorized evaluation
        cache = self.__dict__.get("_flat_cache")
        if cache is None:
            F = np.array(list(self.frequencies()), dtype=float).reshape(-1, self.dims)
            cache = (F, self.coeffs.reshape(-1))
            object.__setattr__(self, "_flat_cache", cache)
        return cache

    def __call__(self, x) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        F, a = self._flat()
        return float((a @ np.exp(1j * (F @ x))).real)

    def gradient(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        F, a = self._flat()
        w = a * np.exp(1j * (F @ x))
        return (1j * (w @ F)).real

    def amplitude(self) -> float:
        """Norm of the non-constant part; how informative the function is."""
        c = self.coeffs.copy()
        c[(self.R,) * self.dims] = 0.0
        return float(np.linalg.norm(c))

    def max_order(self) -> int:
        """Largest ``|r_i|`` carrying a coefficient above ``FIT_TOL``."""
        best = 0
        for r in self.frequencies():
            if abs(self.alpha(r)) > FIT_TOL:
                best = max(best, max(abs(k) for k in r))
        return best

    def to_chebyshev(self, prune: float = 1e-12) -> Poly:
        """Polynomial in ``(u_1, v_1, ..., u_q, v_q)`` with ``u = cos x``, ``v = sin x``.

        Uses ``exp(i r x) = T_|r|(u) + i sign(r) v U_{|r|-1}(u)``, so every
        variable ``v_i`` appears with degree at most one.
        """
        acc: dict[tuple[int, ...], complex] = {}
        for r in self.frequencies():
            a = self.alpha(r)
            if abs(a) <= prune:
                continue
            term = {(0,) * (2 * self.dims): a}
            for i, ri in enumerate(r):
                term = _mul_dicts(term, _euler_factor(ri, i, self.dims))
            for m, c in term.items():
                acc[m] = acc.get(m, 0.0) + c
        return Poly({m: float(c.real) for m, c in acc.items() if abs(c.real) > prune}, 2 * self.dims)


def _euler_factor(r: int, i: int, dims: int) -> dict:
    nv = 2 * dims
    out: dict[tuple[int, ...], complex] = {}

    def mono(pu, pv):
        e = [0] * nv
        e[2 * i] = pu
        e[2 * i + 1] = pv
        return tuple(e)

    k = abs(r)
    t = cheb.cheb2poly([0] * k + [1])
    for p, c in enumerate(t):
        if c:
            out[mono(p, 0)] = out.get(mono(p, 0), 0) + c
    if k:
        # U_{k-1}(u) = T'_k(u) / k
        u = np.polynomial.polynomial.polyder(t) / k
        s = 1j * np.sign(r)
        for p, c in enumerate(u):
            if c:
                out[mono(p, 1)] = out.get(mono(p, 1), 0) + s * c
    return out


def _mul_dicts(a: dict, b: dict) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return out


def trig_grid(dims: int, R: int) -> np.ndarray:
    """Uniform grid ``{2 pi r / (2R + 1)}^dims`` as an ``(N, dims)`` array."""
    axis = 2 * np.pi * np.arange(2 * R + 1) / (2 * R + 1)
    return np.array(list(itertools.product(axis, repeat=dims)), dtype=float).reshape(-1, dims)


def fit_trig(samples, dims: int, R: int) -> TrigPolynomial:
    """Fit a degree-``R`` real trig series through ``(x, value)`` samples.

    Parameters
    ----------
    samples : sequence of (point, value)
        At least ``(2R+1)**dims`` distinct points; the uniform grid from
        :func:`trig_grid` makes the system a unitary DFT.
    dims, R : int
        Input dimension and maximal order per coordinate.

    Raises
    ------
    SingularSystem
        The Vandermonde system is rank-deficient (e.g. duplicated points).
    """
    pts = np.array([np.atleast_1d(np.asarray(p, dtype=float)) for p, _ in samples]).reshape(-1, dims)
    vals = np.array([float(v) for _, v in samples])
    freqs = np.array(list(itertools.product(range(-R, R + 1), repeat=dims))).reshape(-1, dims)
    if len(pts) < len(freqs):
        raise SingularSystem(f"{len(pts)} samples cannot fix {len(freqs)} coefficients")
    V = np.exp(1j * pts @ freqs.T)
    s = np.linalg.svd(V, compute_uv=False)
    if s[-1] <= 1e-10 * s[0]:
        raise SingularSystem("trig Vandermonde matrix is singular (duplicate or aliased points)")
    alpha, *_ = np.linalg.lstsq(V, vals.astype(complex), rcond=None)
    shape = (2 * R + 1,) * dims
    c = alpha.reshape(shape)
    # enforce alpha_{-r} = conj(alpha_r)
    flipped = np.conj(c[(slice(None, None, -1),) * dims])
    c = (c + flipped) / 2
    return TrigPolynomial(dims, R, c)
