import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from holozero.demos import grid100, polynomial_handle
from holozero.geometry import Edge, Rectangle, split
from holozero.handle import FunctionHandle
from holozero.quadrature import (
    EdgeCache,
    Integer,
    NonInteger,
    QuadConfig,
    QuadratureFailure,
    count_zeros,
    gk_integrate_edge,
    GAUSS_WEIGHTS,
    GK_NODES,
    KRONROD_WEIGHTS,
)

from conftest import exp_handle, power_handle

UNIT = Rectangle(0, 1, 0, 1)
BOX = Rectangle(-1, 1, -1, 1)


def test_rule_constants():
    gauss_nodes = GK_NODES[GAUSS_WEIGHTS != 0]
    x, w = np.polynomial.legendre.leggauss(10)
    assert np.allclose(gauss_nodes, x, atol=1e-15)
    assert np.allclose(GAUSS_WEIGHTS[GAUSS_WEIGHTS != 0], w, atol=1e-15)
    # Kronrod rule is exact for polynomials up to degree 31
    for k in range(0, 32):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert np.dot(KRONROD_WEIGHTS, GK_NODES**k) == pytest.approx(exact, abs=1e-14)


def test_constant_integrand():
    res = gk_integrate_edge(lambda z: np.ones_like(z), Edge(0j, 1 + 1j))
    assert res.converged
    assert res.value == pytest.approx(1 + 1j, abs=1e-14)


def test_reciprocal_quarter_turn():
    res = gk_integrate_edge(lambda z: 1 / z, Edge(1 + 0j, 1j))
    assert res.converged
    assert abs(res.value - 1j * math.pi / 2) < 1e-9


def test_singularity_on_edge_fails():
    # the pole sits at the panel split point, so it is never sampled, yet quadrature cannot converge
    res = gk_integrate_edge(lambda z: 1 / z, Edge(-1j, 1j))
    assert not res.converged
    assert res.error_estimate > QuadConfig().abs_tol


def test_nonfinite_integrand_fails():
    res = gk_integrate_edge(lambda z: np.full_like(z, np.nan), Edge(0j, 1 + 0j))
    assert not res.converged and math.isinf(res.error_estimate)


def test_against_scipy_quad():
    g = lambda z: np.exp(3 * z) * np.cos(z)
    e = Edge(-0.3 + 0.2j, 0.8 - 0.5j)
    d = e.end - e.start
    re = integrate.quad(lambda t: (g(e.start + t * d) * d).real, 0, 1, epsabs=1e-13, epsrel=1e-13)[0]
    im = integrate.quad(lambda t: (g(e.start + t * d) * d).imag, 0, 1, epsabs=1e-13, epsrel=1e-13)[0]
    assert gk_integrate_edge(g, e).value == pytest.approx(re + 1j * im, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(
    st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
)
def test_linearity_and_reversal(a, b, c):
    if abs(b - a) < 1e-3:
        return
    e = Edge(a, b)
    g1 = lambda z: np.sin(z)
    g2 = lambda z: z**3 - 2j * z
    v1 = gk_integrate_edge(g1, e).value
    v2 = gk_integrate_edge(g2, e).value
    v = gk_integrate_edge(lambda z: g1(z) + c * g2(z), e).value
    assert abs(v - (v1 + c * v2)) <= 1e-12 * max(1.0, abs(v1) + abs(c * v2))
    fwd = gk_integrate_edge(g1, e).value
    back = gk_integrate_edge(g1, e.reversed()).value
    assert abs(fwd + back) <= 1e-12 * max(1.0, abs(fwd))


def test_count_triple_zero():
    out = count_zeros(power_handle(3), BOX)
    assert isinstance(out, Integer) and out.value == 3


def test_count_exp_no_zeros():
    out = count_zeros(exp_handle(), Rectangle(-3, 2, -7, 1))
    assert isinstance(out, Integer) and out.value == 0


def test_count_grid():
    prob = grid100()
    out = count_zeros(prob.handle, prob.rect)
    assert isinstance(out, Integer) and out.value == 100


def test_corner_zero_is_failure():
    out = count_zeros(power_handle(1), UNIT)
    assert isinstance(out, QuadratureFailure)
    assert out.edge in UNIT.edges()


def test_pole_gives_noninteger():
    fh = FunctionHandle(lambda z: 1 / z, lambda z: -1 / z**2)
    out = count_zeros(fh, BOX)
    assert isinstance(out, NonInteger)
    assert out.value == pytest.approx(-1, abs=1e-9)


def test_scale_invariance():
    prob = grid100()
    base = count_zeros(prob.handle, prob.rect)
    scaled = count_zeros(prob.handle.scaled(1e6 - 3e5j), prob.rect)
    assert isinstance(scaled, Integer) and scaled.value == base.value


@pytest.mark.parametrize("frac", [0.5, 0.37, 0.61])
def test_child_counts_add_up(frac):
    rng = np.random.default_rng(3)
    roots = rng.uniform(-0.9, 0.9, 9) + 1j * rng.uniform(-0.9, 0.9, 9)
    fh = polynomial_handle(roots)
    r = BOX
    for _ in range(3):
        a, b, _ = split(r, frac)
        na, nb, n = (count_zeros(fh, x) for x in (a, b, r))
        assert na.value + nb.value == n.value
        assert na.value == int(np.sum(a.contains(roots)))
        r = a if na.value >= nb.value else b


def test_edge_cache_reuses_reversed_edge():
    fh = polynomial_handle([0.3 + 0.4j, -0.2 - 0.1j])
    cache = EdgeCache()
    a, b, _ = split(BOX)
    na = count_zeros(fh, a, cache=cache)
    evals = fh.fprime_evals
    nb = count_zeros(fh, b, cache=cache)
    assert cache.hits == 1
    # the shared edge is not integrated a second time
    assert fh.fprime_evals - evals < evals
    assert na.value + nb.value == 2
