"""The AAA greedy rational approximation algorithm.

Two drivers share the same weight solve: ``aaa_discrete`` works on a fixed
sample set, ``aaa_continuum`` adaptively samples a rectangle boundary with
``max(3, 16 - m)`` test points between consecutive support points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import BoundaryParam
from .rational import BarycentricRational

INITIAL_BOUNDARY_SAMPLES = 16


@dataclass(frozen=True)
class AAAConfig:
    rel_tol: float = 1e-13
    max_degree: int = 150
    gap_samples_max: int = 16
    gap_samples_min: int = 3

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise ValueError("rel_tol must lie in (0, 1)")
        if self.max_degree < 1:
            raise ValueError("max_degree must be at least 1")

    def samples_per_gap(self, m: int) -> int:
        return max(self.gap_samples_min, self.gap_samples_max - m)


@dataclass
class AAAResult:
    approximation: BarycentricRational
    achieved_error: float
    converged: bool
    iterations: int


class NonFiniteSampleError(ValueError):
    """The target function was not finite at a boundary sample."""

    def __init__(self, z: complex):
        super().__init__(f"non-finite function value at boundary sample z={z!r}")
        self.z = z


def _weights(Z, F, zs, fs):
    """Minimal right singular vector of the Loewner matrix."""
    m = len(zs)
    if m == 1:
        return np.ones(1, dtype=complex)
    C = 1.0 / (Z[:, None] - zs[None, :])
    A = (F[:, None] - fs[None, :]) * C
    _, _, vh = np.linalg.svd(A, full_matrices=True)
    return vh[-1].conj()


def _rational_on(Z, zs, fs, ws):
    if len(zs) == 1:
        return np.full(len(Z), fs[0], dtype=complex)
    C = 1.0 / (Z[:, None] - zs[None, :])
    return (C @ (ws * fs)) / (C @ ws)


def aaa_discrete(Z, F, cfg: AAAConfig = AAAConfig()) -> AAAResult:
    """AAA on fixed samples ``F = f(Z)``."""
    Z = np.asarray(Z, dtype=complex).ravel()
    F = np.asarray(F, dtype=complex).ravel()
    if len(Z) < 2 or len(Z) != len(F):
        raise ValueError("need at least two sample points with matching values")
    if not np.all(np.isfinite(F)):
        raise ValueError("sample values must be finite")
    fmax = float(np.max(np.abs(F)))
    remaining = np.ones(len(Z), dtype=bool)
    R = np.full(len(Z), np.mean(F))
    support: list[int] = []
    result = None
    while True:
        j = int(np.argmax(np.where(remaining, np.abs(F - R), -1.0)))
        support.append(j)
        remaining[j] = False
        if not remaining.any():
            # every sample became a support point: no error left to measure
            result.converged = False
            return result
        zs, fs = Z[support], F[support]
        m = len(support)
        Zr, Fr = Z[remaining], F[remaining]
        w = _weights(Zr, Fr, zs, fs)
        R = F.copy()
        with np.errstate(all="ignore"):
            R[remaining] = _rational_on(Zr, zs, fs, w)
        abs_err = float(np.max(np.abs(F - R)))
        err = abs_err / fmax if fmax > 0 else 0.0
        result = AAAResult(BarycentricRational(zs, fs, w), err, err <= cfg.rel_tol, m)
        if result.converged or m - 1 >= cfg.max_degree:
            return result


def _gap_parameters(ts: np.ndarray, length: float, n: int) -> np.ndarray:
    """``n`` equispaced parameters strictly inside each cyclic gap of sorted ``ts``."""
    nxt = np.append(ts[1:], ts[0] + length)
    frac = np.arange(1, n + 1) / (n + 1)
    t = ts[:, None] + (nxt - ts)[:, None] * frac[None, :]
    return np.mod(t.ravel(), length)


def aaa_continuum(g: Callable, boundary: BoundaryParam, cfg: AAAConfig = AAAConfig()) -> AAAResult:
    """AAA approximation of ``g`` on a closed rectangle boundary.

    ``g`` must accept complex arrays. Values are cached by boundary parameter,
    so a sample point is never evaluated twice.

    Raises:
        NonFiniteSampleError: if ``g`` is not finite at some sample.
    """
    length = boundary.length
    cache: dict[float, complex] = {}

    def sample(t: np.ndarray) -> np.ndarray:
        new = [x for x in dict.fromkeys(t.tolist()) if x not in cache]
        if new:
            z_new = boundary(np.array(new))
            with np.errstate(all="ignore"):
                v = np.asarray(g(z_new), dtype=complex)
            bad = ~np.isfinite(v)
            if bad.any():
                raise NonFiniteSampleError(complex(z_new[np.argmax(bad)]))
            cache.update(zip(new, v.tolist()))
        return np.array([cache[x] for x in t.tolist()], dtype=complex)

    t0 = np.arange(INITIAL_BOUNDARY_SAMPLES) * (length / INITIAL_BOUNDARY_SAMPLES)
    F0 = sample(t0)
    j = int(np.argmax(np.abs(F0 - np.mean(F0))))
    ts = np.array([t0[j]])
    while True:
        m = len(ts)
        zs = boundary(ts)
        fs = sample(ts)
        tt = _gap_parameters(ts, length, cfg.samples_per_gap(m))
        Zt = boundary(tt)
        Ft = sample(tt)
        w = _weights(Zt, Ft, zs, fs)
        with np.errstate(all="ignore"):
            Rt = _rational_on(Zt, zs, fs, w)
        abs_err = np.abs(Ft - Rt)
        abs_err[~np.isfinite(abs_err)] = np.inf
        scale = max(float(np.max(np.abs(Ft))), float(np.max(np.abs(fs))))
        err = float(np.max(abs_err)) / scale if scale > 0 else 0.0
        r = BarycentricRational(zs, fs, w)
        if err <= cfg.rel_tol:
            return AAAResult(r, err, True, m)
        if m - 1 >= cfg.max_degree:
            return AAAResult(r, err, False, m)
        t_new = tt[int(np.argmax(abs_err))]
        ts = np.sort(np.append(ts, t_new))
