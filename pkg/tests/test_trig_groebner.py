from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vqc_privacy.errors import DegreeBudgetExceeded, SingularSystem
from vqc_privacy.inversion.groebner import Poly, buchberger, is_groebner, reduce, s_polynomial, solve_triangular_lex
from vqc_privacy.inversion.trig import TrigPolynomial, fit_trig, trig_grid


def _random_trig(dims, R, seed):
    rng = np.random.default_rng(seed)
    shape = (2 * R + 1,) * dims
    c = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    c = (c + np.conj(c[(slice(None, None, -1),) * dims])) / 2
    return TrigPolynomial(dims, R, c)


@given(st.integers(1, 2), st.integers(0, 3), st.integers(0, 10**6))
def test_fit_trig_interpolates_exactly(dims, R, seed):
    f = _random_trig(dims, R, seed)
    g = fit_trig([(p, f(p)) for p in trig_grid(dims, R)], dims, R)
    assert np.max(np.abs(g.coeffs - f.coeffs)) < 1e-8
    probe = np.random.default_rng(seed + 1).uniform(0, 2 * np.pi, dims)
    assert abs(g(probe) - f(probe)) < 1e-8


def test_fit_trig_singular():
    with pytest.raises(SingularSystem):
        fit_trig([(0.0, 1.0), (0.0, 1.0), (0.0, 1.0)], 1, 1)


@given(st.integers(1, 2), st.integers(1, 3), st.integers(0, 10**6))
def test_chebyshev_form_agrees(dims, R, seed):
    f = _random_trig(dims, R, seed)
    p = f.to_chebyshev()
    x = np.random.default_rng(seed).uniform(0, 2 * np.pi, dims)
    uv = [v for xi in x for v in (np.cos(xi), np.sin(xi))]
    assert abs(complex(p(uv)).real - f(x)) < 1e-9


def test_trig_gradient_matches_fd():
    f = _random_trig(2, 2, 7)
    x, h = np.array([0.4, 1.9]), 1e-6
    fd = [(f(x + h * np.eye(2)[i]) - f(x - h * np.eye(2)[i])) / (2 * h) for i in range(2)]
    assert np.allclose(f.gradient(x), fd, atol=1e-7)


def _p(terms, nv):
    return Poly({tuple(m): c for m, c in terms}, nv)


def test_line_circle():
    u, v = Poly.var(0, 2), Poly.var(1, 2)
    one = Poly.constant(1, 2)
    G = buchberger([u * u + v * v - one, u - v], order="lex", exact=True)
    assert is_groebner(G.polys, "lex")
    roots = sorted(solve_triangular_lex(G))
    r = 1 / np.sqrt(2)
    assert np.allclose(roots, [(-r, -r), (r, r)])


def test_unit_ideal():
    u = Poly.var(0, 1)
    G = buchberger([u, u - Poly.constant(1, 1)], exact=True)
    assert G.is_unit()
    assert solve_triangular_lex(buchberger([u, u - Poly.constant(1, 1)], order="lex", exact=True)) == []


def test_reduced_basis_of_textbook_example():
    # x^2 - y, x y - 1 under lex x > y
    x, y = Poly.var(0, 2), Poly.var(1, 2)
    one = Poly.constant(1, 2)
    G = buchberger([x * x - y, x * y - one], order="lex", exact=True)
    expected = [y * y * y - one, x - y * y]
    assert len(G.polys) == 2
    assert all(any(g == e for g in G.polys) for e in expected)


_SMALL = st.lists(
    st.tuples(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(-3, 3).filter(bool)),
    min_size=1,
    max_size=4,
)


@given(st.lists(_SMALL, min_size=1, max_size=3), st.sampled_from(["grevlex", "lex"]))
def test_every_emitted_basis_is_groebner(systems, order):
    polys = [_p([(m, Fraction(c)) for m, c in terms], 2) for terms in systems]
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return
    G = buchberger(polys, order=order, exact=True)
    for i in range(len(G.polys)):
        for j in range(i + 1, len(G.polys)):
            assert reduce(s_polynomial(G.polys[i], G.polys[j], order), G.polys, order).is_zero()
    # every input reduces to zero modulo its basis
    for p in polys:
        assert reduce(p, G.polys, order).is_zero()


def test_degree_budget():
    x, y = Poly.var(0, 2), Poly.var(1, 2)
    with pytest.raises(DegreeBudgetExceeded):
        buchberger([x * x * x - y, y * y * y - x], order="lex", exact=True, degree_bound=3)


def test_float_mode_matches_exact_on_simple_system():
    u, v = Poly.var(0, 2), Poly.var(1, 2)
    sys_ = [u * u + v * v - Poly.constant(1.0, 2), u * Poly.constant(2.0, 2) - Poly.constant(1.0, 2)]
    a = buchberger(sys_, order="lex", exact=False)
    b = buchberger(sys_, order="lex", exact=True)
    assert all(p.allclose(q.to_float()) for p, q in zip(a.polys, b.polys))
