"""Expectation landscapes in one input and the spacing of their stationary points."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from ..circuits import EncodingCircuit, dressed_rotation_encoder, random_hermitian_encoder
from ..oracle import encode, expectation
from ..pauli import HermitianPauliSum, PauliString, as_sum

MIN_POINTS_PER_PERIOD = 4096
ROOT_XTOL = 1e-8
DERIV_STEP = 1e-5
FLAT_TOL = 1e-12


@dataclass
class LandscapeRecord:
    n: int
    seed: int
    x: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    stationary: np.ndarray
    r: float | None
    periodic: bool = False

    @property
    def degenerate(self) -> bool:
        return self.r is None

    def to_json_obj(self, include_curve: bool = True) -> dict:
        obj = {
            "n": self.n,
            "seed": self.seed,
            "stationary": self.stationary.tolist(),
            "r": self.r,
            "degenerate": self.degenerate,
        }
        if include_curve:
            obj["x"] = self.x.tolist()
            obj["values"] = self.values.tolist()
        return obj


def _curve(enc: EncodingCircuit, obs: HermitianPauliSum):
    def f(x: float) -> float:
        return expectation(encode(enc, [x]).vector, obs)

    return f


def stationary_points(f, xs: np.ndarray, values: np.ndarray, periodic: bool) -> np.ndarray:
    """Sign changes of the central-difference derivative, refined by bracketing root search."""
    h = xs[1] - xs[0]
    if periodic:
        d = (np.roll(values, -1) - np.roll(values, 1)) / (2 * h)
    else:
        d = np.gradient(values, h)
    deriv = lambda x: (f(x + DERIV_STEP) - f(x - DERIV_STEP)) / (2 * DERIV_STEP)  # noqa: E731
    out = []
    last = len(xs) if periodic else len(xs) - 1
    for i in range(last):
        j = (i + 1) % len(xs)
        if d[i] == 0.0:
            out.append(xs[i])
            continue
        if np.sign(d[i]) != np.sign(d[j]) and d[j] != 0.0:
            a = xs[i]
            b = xs[i] + h
            fa, fb = deriv(a), deriv(b)
            if np.sign(fa) == np.sign(fb):
                out.append(a - fa * (b - a) / (fb - fa))
            else:
                out.append(brentq(deriv, a, b, xtol=ROOT_XTOL))
    return np.array(sorted(out))


def min_gap(points: np.ndarray, period: float | None) -> float | None:
    if len(points) < 2:
        if period is not None and len(points) == 1:
            return float(period)
        return None
    gaps = np.diff(points)
    if period is not None:
        gaps = np.append(gaps, period - (points[-1] - points[0]))
    return float(np.min(gaps))


def landscape_record(
    enc: EncodingCircuit, obs, x_range=(0.0, 2 * np.pi), samples: int = MIN_POINTS_PER_PERIOD, n: int | None = None,
    seed: int = 0, period: float | None = None,
) -> LandscapeRecord:
    """Sample ``Tr(O rho(x))`` and locate its stationary points.

    If ``period`` is given and equals the width of ``x_range``, the grid is
    treated as cyclic.
    """
    obs = as_sum(obs)
    lo, hi = map(float, x_range)
    periodic = period is not None and np.isclose(hi - lo, period)
    if period is not None:
        samples = max(samples, int(np.ceil(MIN_POINTS_PER_PERIOD * (hi - lo) / period)))
    xs = np.linspace(lo, hi, samples, endpoint=not periodic)
    f = _curve(enc, obs)
    vals = np.array([f(x) for x in xs])
    if np.ptp(vals) < FLAT_TOL:
        return LandscapeRecord(n or enc.n_qubits, seed, xs, vals, np.array([]), None, periodic)
    pts = stationary_points(f, xs, vals, periodic)
    if periodic:
        pts = np.unique(np.round((pts - lo) % period + lo, 12))
    r = min_gap(pts, period if periodic else None)
    return LandscapeRecord(n or enc.n_qubits, seed, xs, vals, pts, r, periodic)


def landscape_sweep(
    encoder: str,
    qubits,
    seeds,
    x_range=(0.0, 2 * np.pi),
    samples: int = MIN_POINTS_PER_PERIOD,
    observable_qubit: int = 0,
) -> list[LandscapeRecord]:
    """One record per ``(n, seed)`` for the ``gue`` or ``dressed_rotation`` encoders.

    The observable is ``Z`` on ``observable_qubit``.
    """
    out = []
    for n in qubits:
        obs = HermitianPauliSum.from_pauli(PauliString.single(n, observable_qubit, "Z"))
        for s in seeds:
            if encoder == "gue":
                enc, period = random_hermitian_encoder(n, 1, seed=s), None
            elif encoder == "dressed_rotation":
                enc, period = dressed_rotation_encoder(n, seed=s), 2 * np.pi
            else:
                raise ValueError(f"unknown encoder {encoder!r}")
            out.append(landscape_record(enc, obs, x_range, samples, n=n, seed=s, period=period))
    return out


def mean_r_by_n(records) -> dict[int, float]:
    acc: dict[int, list[float]] = {}
    for rec in records:
        if rec.r is not None:
            acc.setdefault(rec.n, []).append(rec.r)
    return {n: float(np.mean(v)) for n, v in sorted(acc.items())}
