"""Black-box inversion: grid search and perturbed gradient descent.

Both minimize the snapshot mismatch
``f(x') = sum_k (e_k - Tr(B_k rho(x')))^2`` using only oracle access to
``rho(x')``. Direct input recovery uses the same descent on
``||C(x') - C||^2`` instead.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..circuits import AnsatzCircuit, EncodingCircuit
from ..dla import DlaBasis
from ..errors import BudgetExceeded
from ..oracle import ExpectationOracle, vqc_gradients
from .common import InversionResult, Status, encoding_periods, periodic_error
from .pauli_product import _values

GRID_BUDGET = 10**7
FD_STEP = 1e-6


def snapshot_cost(x, e, basis: DlaBasis, oracle: ExpectationOracle) -> float:
    d = oracle.snapshot(x, basis) - _values(e)
    return float(d @ d)


def default_bounds(enc: EncodingCircuit) -> list[tuple[float, float]]:
    return [(0.0, p if p is not None else 2 * np.pi) for p in encoding_periods(enc)]


def lipschitz_estimate(enc: EncodingCircuit) -> list[float]:
    """Per-input top frequency ``sum |scale| (lambda_max - lambda_min)``."""
    return [enc.max_frequency(j) for j in range(enc.input_dim)]


def grid_shape(enc: EncodingCircuit, eps: float, bounds) -> list[int]:
    """Points per axis: spacing ``eps / L_j`` over the width ``P_j``."""
    out = []
    for (lo, hi), L in zip(bounds, lipschitz_estimate(enc)):
        width = hi - lo
        out.append(1 if L == 0 or width == 0 else math.ceil(width * L / eps) + 1)
    return out


def grid_search_invert(
    e,
    enc: EncodingCircuit,
    basis: DlaBasis,
    eps: float,
    bounds=None,
    oracle: ExpectationOracle | None = None,
    budget: int = GRID_BUDGET,
    x_true=None,
) -> InversionResult:
    """Exhaustive search on a grid fine enough for accuracy ``eps``.

    Raises
    ------
    BudgetExceeded
        The grid would need more than ``budget`` oracle calls; the projected
        count is attached as ``projected_calls``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    bounds = list(bounds) if bounds is not None else default_bounds(enc)
    if len(bounds) != enc.input_dim:
        raise ValueError("need one (lo, hi) pair per input")
    shape = grid_shape(enc, eps, bounds)
    projected = math.prod(shape)
    if projected > budget:
        raise BudgetExceeded(f"grid needs {projected:.3e} oracle calls (budget {budget:.1e})", projected)
    oracle = oracle or ExpectationOracle(enc)
    calls0 = oracle.calls
    axes = [np.linspace(lo, hi, k) if k > 1 else np.array([lo]) for (lo, hi), k in zip(bounds, shape)]
    best_f, best_x = np.inf, None
    # lexicographic iteration plus strict '<' keeps the lexicographically first minimizer
    for pt in itertools.product(*axes):
        f = snapshot_cost(np.array(pt), e, basis, oracle)
        if f < best_f:
            best_f, best_x = f, np.array(pt)
    err = None if x_true is None else periodic_error(best_x, x_true, encoding_periods(enc))
    return InversionResult(
        best_x,
        (Status.RECOVERED,) * enc.input_dim,
        err,
        oracle.calls - calls0,
        {"cost": best_f, "grid_shape": shape, "spacing": [eps / L if L else None for L in lipschitz_estimate(enc)]},
    )


@dataclass
class DescentTrace:
    x: np.ndarray
    f: float
    calls: int
    iterations: int
    perturbations: int


def _fd_grad(fun, x, h):
    g = np.zeros_like(x)
    for i in range(x.size):
        d = np.zeros_like(x)
        d[i] = h
        g[i] = (fun(x + d) - fun(x - d)) / (2 * h)
    return g


def perturbed_descent(
    fun: Callable[[np.ndarray], float],
    x0,
    step: float,
    noise_radius: float,
    iters: int,
    rng: np.random.Generator,
    grad_tol: float = 1e-8,
    f_tol: float = 1e-16,
    fd_step: float = FD_STEP,
    max_halvings: int = 30,
) -> DescentTrace:
    """Backtracking gradient descent with uniform-ball kicks at stalls.

    A stall is a gradient below ``grad_tol`` or a line search that finds no
    decrease after ``max_halvings`` halvings of ``step``.
    """
    x = np.array(x0, dtype=float)
    calls = 0

    def f(z):
        nonlocal calls
        calls += 1
        return fun(z)

    fx = f(x)
    best = (fx, x.copy())
    kicks = 0
    it = 0
    for it in range(1, iters + 1):
        if fx <= f_tol:
            break
        g = _fd_grad(f, x, fd_step)
        moved = False
        if np.linalg.norm(g) >= grad_tol:
            # backtrack until the cost drops; the fixed step alone oscillates on stiff costs
            t = step
            for _ in range(max_halvings):
                trial = x - t * g
                ft = f(trial)
                if ft < fx:
                    x, fx, moved = trial, ft, True
                    break
                t /= 2
        if not moved:
            d = rng.normal(size=x.size)
            r = noise_radius * rng.uniform() ** (1.0 / x.size)
            x = x + r * d / np.linalg.norm(d)
            kicks += 1
            fx = f(x)
        if fx < best[0]:
            best = (fx, x.copy())
    return DescentTrace(best[1], best[0], calls, it, kicks)


def _descent_restarts(fun, enc_dim, bounds, x0, step, noise_radius, iters, restarts, seed, **kw):
    rng = np.random.default_rng(seed)
    best = None
    calls = 0
    runs = []
    for k in range(restarts):
        if k == 0 and x0 is not None:
            start = np.asarray(x0, dtype=float)
        else:
            start = np.array([rng.uniform(lo, hi) for lo, hi in bounds])
        tr = perturbed_descent(fun, start, step, noise_radius, iters, rng, **kw)
        calls += tr.calls
        runs.append({"start": start.tolist(), "f": tr.f, "perturbations": tr.perturbations})
        if best is None or tr.f < best.f:
            best = tr
        if best.f <= kw.get("f_tol", 1e-16):
            break
    return best, calls, runs


def perturbed_gd_invert(
    e,
    enc: EncodingCircuit,
    basis: DlaBasis,
    step: float = 0.2,
    noise_radius: float = 0.5,
    iters: int = 300,
    restarts: int = 5,
    seed: int = 0,
    oracle: ExpectationOracle | None = None,
    x0=None,
    bounds=None,
    x_true=None,
    success_tol: float = 1e-4,
) -> InversionResult:
    """Best-effort local search on the snapshot cost; nothing is guaranteed."""
    oracle = oracle or ExpectationOracle(enc)
    bounds = list(bounds) if bounds is not None else default_bounds(enc)
    fun = lambda z: snapshot_cost(z, e, basis, oracle)  # noqa: E731
    best, calls, runs = _descent_restarts(fun, enc.input_dim, bounds, x0, step, noise_radius, iters, restarts, seed)
    periods = encoding_periods(enc)
    x = np.array([v % p if p else v for v, p in zip(best.x, periods)])
    err = None if x_true is None else periodic_error(x, x_true, periods)
    details = {"cost": best.f, "runs": runs, "success": None if err is None else err < success_tol}
    return InversionResult(x, (Status.RECOVERED,) * enc.input_dim, err, calls, details)


def direct_input_recovery(
    C,
    enc: EncodingCircuit,
    ans: AnsatzCircuit,
    theta,
    obs,
    step: float = 0.2,
    noise_radius: float = 0.5,
    iters: int = 300,
    restarts: int = 5,
    seed: int = 0,
    gradient_oracle: Callable | None = None,
    x0=None,
    bounds=None,
    x_true=None,
    success_tol: float = 1e-4,
) -> InversionResult:
    """Fit ``x'`` so that the model gradients at ``x'`` match the observed ``C``."""
    C = np.asarray(C, dtype=float)
    grad = gradient_oracle or (lambda z: vqc_gradients(enc, ans, theta, obs, z))
    bounds = list(bounds) if bounds is not None else default_bounds(enc)

    def fun(z):
        d = grad(z) - C
        return float(d @ d)

    best, calls, runs = _descent_restarts(fun, enc.input_dim, bounds, x0, step, noise_radius, iters, restarts, seed)
    periods = encoding_periods(enc)
    x = np.array([v % p if p else v for v, p in zip(best.x, periods)])
    err = None if x_true is None else periodic_error(x, x_true, periods)
    details = {"mismatch": best.f, "runs": runs, "success": None if err is None else err < success_tol}
    return InversionResult(x, (Status.RECOVERED,) * enc.input_dim, err, calls, details)
