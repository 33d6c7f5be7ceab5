"""Multivariate polynomials and Buchberger's algorithm for small systems.

Polynomials are dictionaries from exponent tuples to coefficients. Two
coefficient domains are supported: floats, with relative cancellation
pruning, and :class:`fractions.Fraction` for exact arithmetic. Only the
orders ``grevlex`` and ``lex`` are implemented; variable 0 is the largest.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ..errors import CoefficientBlowup, DegreeBudgetExceeded

ZERO_TOL = 1e-10
PIVOT_TOL = 1e-12
ORDERS = ("grevlex", "lex")


def _order_key(order: str):
    if order == "lex":
        return lambda m: m
    if order == "grevlex":
        return lambda m: (sum(m), tuple(-e for e in reversed(m)))
    raise ValueError(f"unknown monomial order {order!r}")


class Poly:
    """Sparse polynomial in ``nvars`` variables."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms: dict, nvars: int):
        self.nvars = nvars
        self.terms = {m: c for m, c in terms.items() if c != 0}

    @classmethod
    def constant(cls, c, nvars: int) -> "Poly":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int) -> "Poly":
        m = [0] * nvars
        m[i] = 1
        return cls({tuple(m): 1}, nvars)

    @classmethod
    def from_string_terms(cls, pairs: Iterable[tuple[Sequence[int], object]]) -> "Poly":
        pairs = [(tuple(m), c) for m, c in pairs]
        return cls(dict(pairs), len(pairs[0][0]))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def variables(self) -> set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def lead(self, order: str):
        key = _order_key(order)
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def max_abs(self) -> float:
        return max((abs(c if not isinstance(c, Fraction) else float(c)) for c in self.terms.values()), default=0.0)

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out, self.nvars)

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly({m: c * other for m, c in self.terms.items()}, self.nvars)
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                out[m] = out.get(m, 0) + ca * cb
        return Poly(out, self.nvars)

    __rmul__ = __mul__

    def __call__(self, point) -> complex:
        total = 0
        for m, c in self.terms.items():
            t = complex(c) if not isinstance(c, Fraction) else float(c)
            for x, e in zip(point, m):
                if e:
                    t *= x**e
            total += t
        return total

    def substitute(self, values: dict[int, complex]) -> "Poly":
        """Plug numeric values into some variables (result keeps ``nvars``)."""
        out: dict = {}
        for m, c in self.terms.items():
            f = complex(float(c)) if isinstance(c, Fraction) else complex(c)
            mm = list(m)
            for i, v in values.items():
                if mm[i]:
                    f *= v ** mm[i]
                    mm[i] = 0
            key = tuple(mm)
            out[key] = out.get(key, 0) + f
        return Poly(out, self.nvars)

    def univariate(self, i: int) -> np.ndarray:
        """Coefficients, highest degree first, of a polynomial in variable ``i`` only."""
        deg = max(m[i] for m in self.terms)
        c = np.zeros(deg + 1, dtype=complex)
        for m, v in self.terms.items():
            if any(e for k, e in enumerate(m) if k != i):
                raise ValueError("polynomial is not univariate")
            c[deg - m[i]] += complex(float(v)) if isinstance(v, Fraction) else v
        return c

    def to_exact(self) -> "Poly":
        return Poly({m: Fraction(c) for m, c in self.terms.items()}, self.nvars)

    def to_float(self) -> "Poly":
        return Poly({m: float(c) for m, c in self.terms.items()}, self.nvars)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def allclose(self, other: "Poly", atol: float = 1e-9) -> bool:
        return (self - other).max_abs() <= atol

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        parts = [f"{float(c):.6g}*x^{m}" for m, c in sorted(self.terms.items(), reverse=True)]
        return "Poly(" + " + ".join(parts) + ")"


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _is_exact(polys) -> bool:
    return any(isinstance(c, Fraction) for p in polys for c in p.terms.values())


def _prune(terms: dict, scale: float) -> dict:
    cut = ZERO_TOL * scale
    return {m: c for m, c in terms.items() if abs(c) > cut}


def _monic(p: Poly, order: str, exact: bool) -> Poly:
    m, lc = p.lead(order)
    if not exact and abs(lc) < PIVOT_TOL * p.max_abs():
        raise CoefficientBlowup(f"leading coefficient {lc:.3g} too small relative to {p.max_abs():.3g}")
    return Poly({k: c / lc for k, c in p.terms.items()}, p.nvars)


def reduce(f: Poly, G: Sequence[Poly], order: str = "grevlex") -> Poly:
    """Full reduction of ``f`` modulo ``G`` (each element monic)."""
    exact = _is_exact([f, *G])
    key = _order_key(order)
    leads = [(g.lead(order)[0], g) for g in G if not g.is_zero()]
    p = dict(f.terms)
    rem: dict = {}
    scale = f.max_abs() if not exact else 0.0
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, g in leads:
            if _divides(lm, m):
                shift = tuple(x - y for x, y in zip(m, lm))
                glc = g.terms[lm]
                q = c / glc
                for gm, gc in g.terms.items():
                    k = tuple(x + y for x, y in zip(gm, shift))
                    p[k] = p.get(k, 0) - q * gc
                p.pop(m, None)
                if exact:
                    p = {k: v for k, v in p.items() if v != 0}
                else:
                    scale = max(scale, abs(q) * g.max_abs())
                    p = _prune(p, scale)
                break
        else:
            rem[m] = c
            del p[m]
    return Poly(rem, f.nvars)


def s_polynomial(f: Poly, g: Poly, order: str = "grevlex") -> Poly:
    mf, cf = f.lead(order)
    mg, cg = g.lead(order)
    l = _lcm(mf, mg)
    tf = Poly({tuple(a - b for a, b in zip(l, mf)): 1 / cf}, f.nvars)
    tg = Poly({tuple(a - b for a, b in zip(l, mg)): 1 / cg}, g.nvars)
    out = tf * f - tg * g
    if not _is_exact([f, g]):
        out = Poly(_prune(out.terms, max(f.max_abs() / abs(cf), g.max_abs() / abs(cg))), f.nvars)
    return out


@dataclass(frozen=True)
class GroebnerBasis:
    polys: tuple[Poly, ...]
    order: str
    max_degree: int
    s_pairs: int

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def is_unit(self) -> bool:
        return any(p.degree() == 0 for p in self.polys)


def buchberger(
    system: Sequence[Poly],
    order: str = "grevlex",
    exact: bool = False,
    degree_bound: int | None = None,
    max_pairs: int = 200_000,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``system``.

    Pairs are processed by smallest lcm degree; pairs with coprime leading
    monomials are skipped (Buchberger's first criterion).

    Raises
    ------
    DegreeBudgetExceeded
        An intermediate basis element has total degree above ``degree_bound``.
    CoefficientBlowup
        Float mode hit a leading coefficient below ``PIVOT_TOL`` relative to
        the rest of its polynomial.
    """
    if order not in ORDERS:
        raise ValueError(f"unknown monomial order {order!r}")
    polys = [p.to_exact() if exact else p.to_float() for p in system if not p.is_zero()]
    if not polys:
        return GroebnerBasis((), order, 0, 0)
    G = [_monic(p, order, exact) for p in polys]
    pairs = [(i, j) for i in range(len(G)) for j in range(i + 1, len(G))]
    max_deg = max(p.degree() for p in G)
    n_pairs = 0

    def check(p):
        nonlocal max_deg
        max_deg = max(max_deg, p.degree())
        if degree_bound is not None and p.degree() > degree_bound:
            raise DegreeBudgetExceeded(f"basis degree {p.degree()} exceeds bound {degree_bound}")

    for p in G:
        check(p)
    while pairs:
        pairs.sort(key=lambda ij: sum(_lcm(G[ij[0]].lead(order)[0], G[ij[1]].lead(order)[0])))
        i, j = pairs.pop(0)
        n_pairs += 1
        if n_pairs > max_pairs:
            raise DegreeBudgetExceeded(f"more than {max_pairs} S-pairs processed")
        mi, mj = G[i].lead(order)[0], G[j].lead(order)[0]
        if all(a == 0 or b == 0 for a, b in zip(mi, mj)):
            continue
        h = reduce(s_polynomial(G[i], G[j], order), G, order)
        if h.is_zero():
            continue
        h = _monic(h, order, exact)
        check(h)
        G.append(h)
        k = len(G) - 1
        pairs.extend((a, k) for a in range(k))
        if h.degree() == 0:
            break
    return GroebnerBasis(tuple(_reduced(G, order, exact)), order, max_deg, n_pairs)


def _reduced(G: list[Poly], order: str, exact: bool) -> list[Poly]:
    if any(g.degree() == 0 for g in G):
        return [Poly.constant(Fraction(1) if exact else 1.0, G[0].nvars)]
    key = _order_key(order)
    G = sorted(G, key=lambda g: key(g.lead(order)[0]))
    minimal: list[Poly] = []
    for g in G:
        lm = g.lead(order)[0]
        if not any(_divides(h.lead(order)[0], lm) for h in minimal):
            minimal.append(g)
    out = []
    for k, g in enumerate(minimal):
        rest = minimal[:k] + minimal[k + 1 :]
        r = reduce(g, rest, order)
        out.append(_monic(r, order, exact))
    return sorted(out, key=lambda g: key(g.lead(order)[0]))


def is_groebner(G: Sequence[Poly], order: str = "grevlex", atol: float = 1e-8) -> bool:
    """Every S-polynomial of ``G`` reduces to zero modulo ``G``."""
    G = list(G)
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            r = reduce(s_polynomial(G[i], G[j], order), G, order)
            if r.max_abs() > atol:
                return False
    return True


def solve_triangular_lex(G: GroebnerBasis, imag_tol: float = 1e-6, root_tol: float = 1e-6) -> list[tuple[float, ...]]:
    """Real points of a zero-dimensional ideal from its lex Groebner basis.

    Works from the last variable up: each stage finds the polynomials that
    only involve already-solved variables plus the current one, takes the
    real roots of the lowest-degree one and keeps those annihilating the
    others. Returns an empty list for the unit ideal.
    """
    if G.order != "lex":
        raise ValueError("back-substitution needs a lex basis")
    if G.is_unit() or not len(G):
        return []
    nv = G.polys[0].nvars
    partial: list[dict[int, complex]] = [{}]
    for i in reversed(range(nv)):
        stage = [g for g in G.polys if i in g.variables() and g.variables() <= set(range(i, nv))]
        if not stage:
            raise ValueError(f"ideal is not zero-dimensional in variable {i}")
        nxt = []
        for vals in partial:
            polys = [g.substitute(vals) for g in stage]
            polys = [p for p in polys if p.max_abs() > 1e-12]
            unis = [p.univariate(i) for p in polys if p.variables() <= {i}]
            unis = [np.trim_zeros(u / np.max(np.abs(u)), "f") for u in unis if np.max(np.abs(u)) > 0]
            unis = [u for u in unis if len(u) > 1 and np.max(np.abs(u)) > 1e-10]
            if not unis:
                continue
            unis.sort(key=len)
            for z in np.roots(unis[0]):
                if abs(z.imag) > imag_tol * max(1.0, abs(z)):
                    continue
                z = complex(z.real, 0.0)
                if all(abs(np.polyval(u, z)) <= root_tol * max(1.0, np.sum(np.abs(u))) for u in unis[1:]):
                    d = dict(vals)
                    d[i] = z
                    nxt.append(d)
        partial = nxt
    return [tuple(float(d[i].real) for i in range(nv)) for d in partial]
