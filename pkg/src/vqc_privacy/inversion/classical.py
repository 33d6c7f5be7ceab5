"""Closed-form input recovery for a classical linear model on trig features.

The model is ``y_hat = A . phi(x)`` with the unit-norm feature map
``phi(x) = [cos(w_k x), sin(w_k x)]_k / sqrt(|Omega|)``. For the squared
loss the weight gradient is ``C = -2 (y - y_hat) phi(x)``, a multiple of
``phi(x)``.
"""

from __future__ import annotations

import numpy as np

from ..errors import ZeroGradient

ZERO_TOL = 1e-14


def trig_features(x: float, omegas) -> np.ndarray:
    w = np.asarray(omegas, dtype=float)
    out = np.empty(2 * w.size)
    out[0::2] = np.cos(w * x)
    out[1::2] = np.sin(w * x)
    return out / np.sqrt(w.size)


def classical_gradients(A, y: float, x: float, omegas) -> np.ndarray:
    """``d/dA (y - A . phi(x))^2``."""
    phi = trig_features(x, omegas)
    return -2.0 * (y - np.asarray(A) @ phi) * phi


def classical_trig_recover(C, omegas) -> tuple[np.ndarray, float]:
    """Recover ``phi(x)`` and ``x`` from one weight gradient.

    ``phi = +-C / ||C||``; the sign is the one for which the angle read off
    the lowest nonzero frequency reproduces every other component. With a
    single frequency, or whenever every frequency is odd, ``phi(x + pi) =
    -phi(x)`` and both signs are consistent: ``x`` is then determined only
    modulo ``pi`` and the ``+`` sign is kept.
    The angle comes from ``atan2`` of the cos/sin pair of the lowest
    frequency and is returned in ``[0, 2 pi / w_min)``.

    Raises
    ------
    ZeroGradient
        ``C`` vanishes, so the prediction was exact and nothing leaks.
    """
    C = np.asarray(C, dtype=float)
    w = np.asarray(omegas, dtype=float)
    if C.shape != (2 * w.size,):
        raise ValueError("gradient must hold one cos and one sin entry per frequency")
    nrm = np.linalg.norm(C)
    if nrm < ZERO_TOL:
        raise ZeroGradient("gradient is zero")
    usable = np.flatnonzero(w != 0)
    if not usable.size:
        raise ValueError("need a nonzero frequency")
    k = usable[np.argmin(np.abs(w[usable]))]
    best = None
    for sign in (1.0, -1.0):
        phi = sign * C / nrm
        scaled = phi * np.sqrt(w.size)
        period = 2 * np.pi / abs(w[k])
        x = float((np.arctan2(scaled[2 * k + 1], scaled[2 * k]) / w[k]) % period)
        res = float(np.linalg.norm(trig_features(x, w) - phi))
        if best is None or res < best[0] - 1e-12:
            best = (res, phi, x)
    return best[1], best[2]
