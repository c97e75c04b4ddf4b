import numpy as np
import pytest

from holozero.numderiv import (
    DerivConfig,
    NonFiniteDerivativeSample,
    cauchy_derivative,
    cauchy_derivative_full,
    wrap_derivative_free,
)


def test_exp_at_zero():
    assert abs(cauchy_derivative(np.exp, 0) - 1) < 1e-13


def test_square_at_one():
    assert abs(cauchy_derivative(lambda z: z**2, 1) - 2) < 1e-13


def test_funcchoice_product_rule():
    a = 0.6 + 0.3j
    f = lambda z: np.exp(z) * (z - a) ** 2
    z = 0.1 + 0.1j
    exact = np.exp(z) * (z - a) * ((z - a) + 2)
    assert abs(cauchy_derivative(f, z) - exact) <= 1e-12 * abs(exact)


def test_vectorized_matches_scalar():
    z = np.array([0.1, 0.3 + 0.2j, -1j])
    est = cauchy_derivative_full(np.sin, z)
    assert np.all(est.converged)
    assert np.allclose(est.value, np.cos(z), atol=1e-13)
    assert abs(cauchy_derivative(np.sin, z[1]) - est.value[1]) < 1e-15


def test_doubling_converges_exponentially():
    z = 0.3 + 0.1j
    for f, fp in ((np.exp, np.exp), (np.sin, np.cos)):
        errs = []
        for m in (4, 8, 16):
            cfg = DerivConfig(radius=0.5, max_nodes=m, m0=m, rel_tol=1e-300)
            errs.append(abs(cauchy_derivative_full(f, z, cfg).value[0] - fp(z)))
        assert errs[2] <= errs[1] / 10 and errs[1] <= errs[0] / 10


def test_deterministic():
    z = np.linspace(0, 1, 7) + 0.3j
    a = cauchy_derivative_full(np.tan, z).value
    b = cauchy_derivative_full(np.tan, z).value
    assert np.array_equal(a, b)


def test_nonconvergence_flagged():
    # 1/(z - 0.005) has a pole inside the default 1e-2 circle: no agreement
    est = cauchy_derivative_full(lambda z: 1 / (z - 0.005), 0.0, DerivConfig(max_nodes=64))
    assert not est.converged[0]


def test_nonfinite_sample_raises():
    with pytest.raises(NonFiniteDerivativeSample):
        cauchy_derivative(lambda z: 1 / (z - 0.01), 0.0)


def test_wrapped_handle():
    fh = wrap_derivative_free(np.exp)
    assert fh.derivative_free
    assert abs(complex(fh.fprime(1.0)) - np.e) < 1e-13


def test_wrapped_handle_counts_derivative_samples():
    fh = wrap_derivative_free(np.exp, DerivConfig(max_nodes=8, m0=8))
    fh.fprime(np.array([0.1, 0.2]))
    assert fh.counts() == {"f": 16, "fprime": 2}
    fh.fprime(0.5)
    assert fh.counts() == {"f": 24, "fprime": 3}


def test_config_validation():
    with pytest.raises(ValueError):
        DerivConfig(max_nodes=100, m0=8)
    with pytest.raises(ValueError):
        DerivConfig(radius=0)
