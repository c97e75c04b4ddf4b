"""Reproducible numerical experiments shared by the CLI and the acceptance suite."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .aaa import AAAConfig, aaa_continuum
from .delves_lyness import MomentError, delves_lyness
from .demos import compfunc, funcchoice, grid100
from .engine import DERIVATIVE_FREE_AAA_TOL
from .geometry import Rectangle
from .numderiv import DerivConfig, wrap_derivative_free
from .quadrature import QuadConfig


def logderiv_poles(fh, rect: Rectangle, cfg: AAAConfig = AAAConfig(), residue_tol: float = 1e-2):
    """Single-region pipeline: AAA of ``f'/f``, keep poles in ``rect`` with integer residues.

    Returns ``(locations, multiplicities, aaa_result)``.
    """
    res = aaa_continuum(fh.logderiv, rect.boundary(), cfg)
    locs, mult = [], []
    for p in res.approximation.poles():
        k = int(round(p.residue.real))
        if rect.contains(p.location) and k >= 1 and abs(p.residue - k) < residue_tol:
            locs.append(p.location)
            mult.append(k)
    return np.array(locs, dtype=complex), np.array(mult, dtype=int), res


def direct_zeros(f, rect: Rectangle, cfg: AAAConfig = AAAConfig()) -> np.ndarray:
    """Zeros inside ``rect`` of an AAA approximation to ``f`` itself."""
    res = aaa_continuum(f, rect.boundary(), cfg)
    z = res.approximation.zeros()
    return z[rect.contains(z)]


def _nearest_error(found: np.ndarray, target: complex) -> float:
    if found.size == 0:
        return math.inf
    return float(np.min(np.abs(found - target)))


def funcchoice_errors(alpha: int, samples: int, mode: str = "logderiv", seed: int = 0) -> np.ndarray:
    """Zero-location errors for ``exp(z)(z-a)^alpha`` over random ``a`` in the unit square.

    ``mode`` is ``"logderiv"`` (exact derivative), ``"derivative_free"``
    (Cauchy-integral derivative, AAA tolerance loosened) or ``"direct"``
    (AAA of ``f`` itself). The error is the distance from ``a`` to the
    nearest computed zero.
    """
    rng = np.random.default_rng(seed)
    errors = np.empty(samples)
    for i in range(samples):
        a = complex(rng.uniform(), rng.uniform())
        prob = funcchoice(alpha=alpha, a=a)
        rect = prob.rect
        if mode == "direct":
            found = direct_zeros(prob.handle.f, rect)
        elif mode == "logderiv":
            found, _, _ = logderiv_poles(prob.handle, rect)
        elif mode == "derivative_free":
            fh = wrap_derivative_free(prob.handle._f, DerivConfig())
            found, _, _ = logderiv_poles(fh, rect, AAAConfig(rel_tol=DERIVATIVE_FREE_AAA_TOL))
        else:
            raise ValueError(f"unknown mode {mode!r}")
        errors[i] = _nearest_error(found, a)
    return errors


def single_region_grid(max_degree: int = 150):
    """AAA of ``f'/f`` for the 100-zero grid on the whole square, no subdivision.

    Returns ``(number of grid zeros recovered to 1e-6, aaa_result)``.
    """
    prob = grid100()
    found, _, res = logderiv_poles(prob.handle, prob.rect, AAAConfig(max_degree=max_degree))
    hit = sum(1 for a in prob.known_zeros if found.size and np.min(np.abs(found - a)) < 1e-6)
    return hit, res


@dataclass
class BenchmarkRow:
    method: str
    tolerance: float
    eval_count: int
    max_zero_error: float

    def as_tuple(self):
        return (self.method, self.tolerance, self.eval_count, self.max_zero_error)


def _max_zero_error(found: np.ndarray, exact: np.ndarray) -> float:
    """Largest distance from an exact zero to its computed match; inf on count mismatch."""
    if len(found) != len(exact):
        return math.inf
    return max(float(np.min(np.abs(found - a))) for a in exact)


def benchmark(n: int, tolerances) -> list[BenchmarkRow]:
    """Evaluations of ``f'/f`` and accuracy for AAA versus Delves-Lyness on one region.

    Each method runs on the line of ``n + 1`` zeros in the unit square with
    no subdivision and no polishing. For AAA the tolerance is the relative
    approximation tolerance; for Delves-Lyness it is the relative (and
    absolute) quadrature tolerance.
    """
    rows = []
    for tol in tolerances:
        prob = compfunc(n=n)
        try:
            found, _, _ = logderiv_poles(prob.handle, prob.rect, AAAConfig(rel_tol=tol))
            err = _max_zero_error(found, prob.known_zeros)
        except Exception:  # noqa: BLE001 - any failure is recorded, not raised
            err = math.inf
        rows.append(BenchmarkRow("aaa", tol, prob.handle.fprime_evals, err))

        prob = compfunc(n=n)
        try:
            found = delves_lyness(prob.handle, prob.rect, QuadConfig(rel_tol=tol, abs_tol=tol))
            err = _max_zero_error(found, prob.known_zeros)
        except (MomentError, np.linalg.LinAlgError):
            err = math.inf
        rows.append(BenchmarkRow("delves-lyness", tol, prob.handle.fprime_evals, err))
    return rows
