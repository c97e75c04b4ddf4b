"""Barycentric rational functions: evaluation, poles, zeros and residues."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

# eigenvalues beyond this multiple of the support-point scale count as infinite
_INFINITE_EIGENVALUE_FACTOR = 1e13


class EigenSolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class PoleInfo:
    location: complex
    residue: complex


class BarycentricRational:
    """``r(z) = sum(w_j f_j / (z - z_j)) / sum(w_j / (z - z_j))``.

    Args:
        nodes: support points ``z_j`` (pairwise distinct).
        values: values ``f_j`` at the support points.
        weights: barycentric weights ``w_j``.
    """

    def __init__(self, nodes, values, weights):
        self.nodes = np.atleast_1d(np.asarray(nodes, dtype=complex))
        self.values = np.atleast_1d(np.asarray(values, dtype=complex))
        self.weights = np.atleast_1d(np.asarray(weights, dtype=complex))
        if not (len(self.nodes) == len(self.values) == len(self.weights)):
            raise ValueError("nodes, values and weights must have equal length")
        if len(self.nodes) == 0:
            raise ValueError("a barycentric rational needs at least one support point")

    @property
    def m(self) -> int:
        return len(self.nodes)

    @property
    def degree(self) -> int:
        return self.m - 1

    def __call__(self, z):
        return evaluate(self, z)

    def poles(self) -> list[PoleInfo]:
        return poles(self)

    def zeros(self) -> np.ndarray:
        return zeros(self)

    def __repr__(self):
        return f"BarycentricRational(m={self.m})"


def evaluate(r: BarycentricRational, z):
    """Evaluate ``r`` at scalar or array ``z``; support points return ``f_j``."""
    zv = np.asarray(z, dtype=complex)
    flat = zv.ravel()
    diff = flat[:, None] - r.nodes[None, :]
    hit_row, hit_col = np.nonzero(diff == 0)
    diff[hit_row, hit_col] = 1.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        c = 1.0 / diff
        out = (c @ (r.weights * r.values)) / (c @ r.weights)
    out[hit_row] = r.values[hit_col]
    if zv.ndim == 0:
        return complex(out[0])
    return out.reshape(zv.shape)


def _pencil_eigenvalues(top_row: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    m = len(nodes)
    E = np.zeros((m + 1, m + 1), dtype=complex)
    E[0, 1:] = top_row
    E[1:, 0] = 1.0
    E[1:, 1:] = np.diag(nodes)
    B = np.eye(m + 1, dtype=complex)
    B[0, 0] = 0.0
    try:
        with np.errstate(all="ignore"):
            lam = scipy.linalg.eigvals(E, B)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenSolverError(f"generalized eigensolver failed: {exc}") from exc
    scale = max(float(np.max(np.abs(nodes))), 1.0)
    keep = np.isfinite(lam) & (np.abs(lam) <= _INFINITE_EIGENVALUE_FACTOR * scale)
    return lam[keep]


def residues_at(r: BarycentricRational, a) -> np.ndarray:
    """Residues ``n(a)/d'(a)`` of ``r`` at the (simple) poles ``a``."""
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    if a.size == 0:
        return np.zeros(0, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        c = 1.0 / (a[:, None] - r.nodes[None, :])
        num = c @ (r.weights * r.values)
        dprime = -(c**2) @ r.weights
        return num / dprime


def poles(r: BarycentricRational) -> list[PoleInfo]:
    """Finite poles of ``r`` with their residues."""
    if r.m < 2:
        return []
    lam = _pencil_eigenvalues(r.weights, r.nodes)
    res = residues_at(r, lam)
    return [PoleInfo(complex(p), complex(q)) for p, q in zip(lam, res)]


def zeros(r: BarycentricRational) -> np.ndarray:
    """Finite zeros of ``r`` (zeros of its numerator)."""
    if r.m < 2:
        return np.zeros(0, dtype=complex)
    return _pencil_eigenvalues(r.weights * r.values, r.nodes)
