"""Derivatives from the trapezium rule applied to Cauchy's integral formula.

``f'(z) ~ 1/(m r) * sum_j exp(-2 pi i j/m) f(z + r exp(2 pi i j/m))``, with the
node count doubled from ``m0`` until two successive estimates agree. Nodes of
the previous level are the even-indexed nodes of the next, so their values
are reused.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .handle import FunctionHandle

_EPS = np.finfo(float).eps
# successive estimates closer than this many roundoff units are "equal"
_ROUNDOFF_FACTOR = 10.0


@dataclass(frozen=True)
class DerivConfig:
    radius: float = 1e-2
    rel_tol: float = 1e-15
    max_nodes: int = 2**12
    m0: int = 8

    def __post_init__(self):
        if self.radius <= 0 or self.rel_tol <= 0:
            raise ValueError("radius and rel_tol must be positive")
        ratio = self.max_nodes / self.m0
        if self.m0 < 1 or ratio < 1 or ratio != 2 ** int(np.log2(ratio)):
            raise ValueError("max_nodes must be m0 times a power of two")


@dataclass
class DerivativeEstimate:
    value: np.ndarray
    nodes: np.ndarray  # node count used per point
    converged: np.ndarray


class NonFiniteDerivativeSample(ValueError):
    def __init__(self, z: complex):
        super().__init__(f"non-finite function value at derivative sample z={z!r}")
        self.z = z


def cauchy_derivative_full(f, z, cfg: DerivConfig = DerivConfig()) -> DerivativeEstimate:
    """Vectorized derivative estimate at every point of ``z``.

    ``f`` must accept complex arrays. Points converge independently; a point
    that has converged is not evaluated again.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    npts = z.size
    r = cfg.radius
    m = cfg.m0
    theta = np.exp(2j * np.pi * np.arange(m) / m)
    vals = _checked(f, z[:, None] + r * theta[None, :])
    # running sums of exp(-i theta_j) f_j, and of |f_j| for the roundoff floor
    acc = vals @ theta.conj()
    mag = np.max(np.abs(vals), axis=1)
    est = acc / (m * r)
    value = est.copy()
    used = np.full(npts, m)
    done = np.zeros(npts, dtype=bool)
    active = np.arange(npts)
    while m < cfg.max_nodes and active.size:
        m2 = 2 * m
        odd = np.exp(2j * np.pi * np.arange(1, m2, 2) / m2)
        new_vals = _checked(f, z[active, None] + r * odd[None, :])
        acc[active] += new_vals @ odd.conj()
        mag[active] = np.maximum(mag[active], np.max(np.abs(new_vals), axis=1))
        new_est = acc[active] / (m2 * r)
        diff = np.abs(new_est - est[active])
        tol = np.maximum(
            cfg.rel_tol * np.maximum(1.0, np.abs(new_est)),
            _ROUNDOFF_FACTOR * _EPS * mag[active] / r,
        )
        est[active] = new_est
        used[active] = m2
        ok = diff <= tol
        value[active] = new_est
        done[active[ok]] = True
        active = active[~ok]
        m = m2
    return DerivativeEstimate(value, used, done)


def _checked(f, pts):
    with np.errstate(all="ignore"):
        v = np.asarray(f(pts.ravel()), dtype=complex).reshape(pts.shape)
    bad = ~np.isfinite(v)
    if bad.any():
        raise NonFiniteDerivativeSample(complex(pts[bad][0]))
    return v


def cauchy_derivative(f, z, cfg: DerivConfig = DerivConfig()):
    """Approximate ``f'(z)``; scalar in, scalar out; arrays keep their shape."""
    zv = np.asarray(z, dtype=complex)
    est = cauchy_derivative_full(f, zv, cfg)
    if zv.ndim == 0:
        return complex(est.value[0])
    return est.value.reshape(zv.shape)


def wrap_derivative_free(f, cfg: DerivConfig = DerivConfig(), name: str = "f") -> FunctionHandle:
    """A :class:`FunctionHandle` whose derivative channel uses ``cauchy_derivative``.

    Evaluations of ``f`` made while estimating derivatives are added to the
    handle's ``f`` counter. The handle is flagged ``derivative_free`` so the
    engine loosens the AAA tolerance.
    """
    fh = FunctionHandle(f, f, name=name)
    fh._fprime = lambda z: cauchy_derivative(fh.f, z, cfg)
    fh.derivative_free = True
    fh.deriv_config = cfg
    return fh
