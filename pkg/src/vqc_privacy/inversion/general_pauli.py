"""Inversion of separable encodings through trig interpolation and Groebner bases.

For a block ``J`` of a separable encoding, every basis element whose
expectation depends only on ``rho_J`` gives an equation
``f_k(x_J) = e_k`` with ``f_k`` a trig polynomial of known maximal order.
The trig polynomials are fitted from oracle probes, rewritten in
``u = cos x``, ``v = sin x`` and solved together with ``u^2 + v^2 = 1``.
"""

from __future__ import annotations

import itertools
import time

import numpy as np

from ..circuits import Block, EncodingCircuit
from ..dla import DlaBasis
from ..errors import NoRealSolution
from ..oracle import ExpectationOracle, expectation
from .common import InversionResult, Status, periodic_distance, periodic_error
from .groebner import Poly, buchberger, solve_triangular_lex
from .pauli_product import _values
from .trig import TrigPolynomial, fit_trig, trig_grid

PROBE_TOL = 1e-9
SOLUTION_TOL = 1e-6
MAX_BLOCK_INPUTS = 2


def input_frequency(enc: EncodingCircuit, i: int) -> int:
    """Integer upper bound on the frequencies of ``x_i`` in any expectation.

    Raises ``ValueError`` if some generator has non-integer scaled gaps, in
    which case the expectation is not a finite integer trig series.
    """
    total = 0.0
    for g in enc.gates_for_input(i):
        ev = g.spectrum() * g.binding.scale
        gaps = np.abs(ev[:, None] - ev[None, :])
        if not np.allclose(gaps, np.round(gaps), atol=1e-9):
            raise ValueError(f"input {i} has non-integer frequencies; trig interpolation needs integer gaps")
        total += float(gaps.max())
    return int(round(total))


def degree_bound(delta: int, q: int) -> int:
    """``M = 2 (Delta^2/2 + Delta)^(2^(Q-2))`` with ``Q = 2 q`` variables."""
    big_q = 2 * q
    return int(np.ceil(2 * (delta**2 / 2 + delta) ** (2 ** (big_q - 2))))


def block_support_split(basis: DlaBasis, block: Block):
    return [ExpectationOracle.split(b, block.qubits) for b in basis.basis]


def select_block_indices(basis, enc, block, oracle: ExpectationOracle, probes: int = 3, seed: int = 0,
                         tol: float = PROBE_TOL) -> list[int]:
    """Indices ``k`` whose element is visible only through ``rho_J``.

    ``Tr(B_k^J rho)`` must be nonzero at some probe and ``Tr(B_k^rest rho)``
    must vanish at every probe.
    """
    rng = np.random.default_rng(seed)
    splits = block_support_split(basis, block)
    inside = [s[0] for s in splits]
    rest = [s[1] for s in splits]
    loc = np.zeros(basis.dim)
    comp = np.zeros(basis.dim)
    for _ in range(probes):
        x = rng.uniform(0, 2 * np.pi, enc.input_dim)
        psi = oracle.state(x)
        loc = np.maximum(loc, [abs(expectation(psi, o)) if not o.is_zero() else 0.0 for o in inside])
        comp = np.maximum(comp, [abs(expectation(psi, o)) if not o.is_zero() else 0.0 for o in rest])
    return [k for k in range(basis.dim) if loc[k] > tol and comp[k] <= tol]


def fit_block_functions(basis, enc, block, indices, R: int, oracle: ExpectationOracle) -> list[TrigPolynomial]:
    q = len(block.inputs)
    grid = trig_grid(q, R)
    ops = [ExpectationOracle.split(basis[k], block.qubits)[0] for k in indices]
    vals = np.zeros((len(grid), len(ops)))
    for r, pt in enumerate(grid):
        x = np.zeros(enc.input_dim)
        x[list(block.inputs)] = pt
        vals[r] = oracle.expectations(x, ops)
    return [fit_trig(list(zip(grid, vals[:, c])), q, R) for c in range(len(ops))]


def _circle(i: int, nv: int) -> Poly:
    u = Poly.var(2 * i, nv)
    v = Poly.var(2 * i + 1, nv)
    return u * u + v * v - Poly.constant(1.0, nv)


def _polish(x0, funcs, targets, iters: int = 30):
    """Gauss-Newton on all block equations, started from an algebraic root."""
    x = np.array(x0, dtype=float)
    for _ in range(iters):
        r = np.array([f(x) - t for f, t in zip(funcs, targets)])
        J = np.array([f.gradient(x) for f in funcs])
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        x = x + step
        if np.linalg.norm(step) < 1e-15:
            break
    return x


def _residual(x, funcs, targets) -> float:
    return float(max(abs(f(x) - t) for f, t in zip(funcs, targets)))


def invert_general_pauli(
    e,
    basis: DlaBasis,
    enc: EncodingCircuit,
    block: Block,
    oracle: ExpectationOracle | None = None,
    *,
    exact: bool = True,
    probes: int = 3,
    seed: int = 0,
    max_subsets: int = 10,
    x_true=None,
) -> InversionResult:
    """Recover the inputs ``x_J`` of one separable block.

    Returns an :class:`InversionResult` over ``block.inputs`` whose
    ``details`` list every consistent root (``candidates``) ranked by
    residual, the ambiguity count, the trig order ``R`` and the Groebner
    statistics. Statuses are ``FAILURE`` when fewer than ``dim x_J`` basis
    elements are visible through the block alone.

    The Groebner step runs in exact rational arithmetic on the (float)
    interpolated coefficients by default; with ``exact=False`` lex bases of
    two-input blocks tend to collapse to the unit ideal from roundoff.

    Raises
    ------
    NoRealSolution
        No algebraic root satisfies all block equations within ``1e-6``.
    DegreeBudgetExceeded
        The Groebner computation passed the a priori degree bound.
    """
    t0 = time.perf_counter()
    e = _values(e)
    oracle = oracle or ExpectationOracle(enc)
    calls0 = oracle.calls
    q = len(block.inputs)
    if q > MAX_BLOCK_INPUTS:
        raise ValueError(f"blocks with {q} inputs exceed the cap of {MAX_BLOCK_INPUTS}")
    if q == 0:
        raise ValueError("block has no inputs")
    R = max(input_frequency(enc, i) for i in block.inputs)
    S = select_block_indices(basis, enc, block, oracle, probes=probes, seed=seed)
    details = {"R": R, "S_J": S}
    if len(S) < q:
        details["reason"] = f"|S_J| = {len(S)} < dim x_J = {q}"
        return InversionResult(np.full(q, np.nan), (Status.FAILURE,) * q, None, oracle.calls - calls0, details)

    funcs = fit_block_functions(basis, enc, block, S, R, oracle)
    targets = [e[k] for k in S]
    nv = 2 * q
    polys = [f.to_chebyshev() - Poly.constant(t, nv) for f, t in zip(funcs, targets)]
    circles = [_circle(i, nv) for i in range(q)]
    delta = max(R**q, max(p.degree() for p in polys + circles))
    bound = degree_bound(delta, q)
    details.update(delta=delta, degree_bound=bound)

    order = sorted(range(len(S)), key=lambda c: -funcs[c].amplitude())
    subsets = itertools.islice(itertools.combinations(order, q), max_subsets)
    cands: list[tuple[float, np.ndarray]] = []
    gb_stats = []
    for sub in subsets:
        system = [polys[c] for c in sub] + circles
        try:
            G = buchberger(system, order="lex", exact=exact, degree_bound=bound)
            roots = solve_triangular_lex(G)
        except ValueError:
            # positive-dimensional subsystem: try the next one
            continue
        gb_stats.append({"subset": [S[c] for c in sub], "size": len(G), "max_degree": G.max_degree})
        for root in roots:
            uv = np.asarray(root)
            if np.any(np.abs(uv) > 1 + 1e-8):
                continue
            x0 = np.array([np.arctan2(uv[2 * i + 1], uv[2 * i]) for i in range(q)])
            x = _polish(x0, funcs, targets) % (2 * np.pi)
            res = _residual(x, funcs, targets)
            if res < SOLUTION_TOL:
                _add_unique(cands, res, x)
        if cands:
            break
    details["groebner"] = gb_stats
    if not cands:
        raise NoRealSolution("no real root satisfies every block equation")
    cands.sort(key=lambda rx: (rx[0], tuple(rx[1])))
    best = cands[0][1]
    details["candidates"] = [{"x": x.tolist(), "residual": r} for r, x in cands]
    details["ambiguity"] = len(cands)
    details["seconds"] = time.perf_counter() - t0
    err = None
    if x_true is not None:
        xt = np.asarray(x_true, dtype=float)
        periods = [enc.period(i) for i in block.inputs]
        err = periodic_error(best, xt, periods)
    return InversionResult(best, (Status.RECOVERED,) * q, err, oracle.calls - calls0, details)


def _add_unique(cands, res, x, tol: float = 1e-6):
    for k, (r, y) in enumerate(cands):
        if max(periodic_distance(a, b, 2 * np.pi) for a, b in zip(x, y)) < tol:
            if res < r:
                cands[k] = (res, x)
            return
    cands.append((res, x))
