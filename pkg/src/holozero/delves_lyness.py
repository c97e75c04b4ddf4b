"""The Delves-Lyness quadrature-moment method, used as a benchmark baseline.

Moments ``s_k = (1/2 pi i) oint z^k f'/f dz`` give the power sums of the
zeros; Newton's identities turn them into the coefficients of the monic
polynomial with the same zeros, whose companion matrix eigenvalues are the
zeros. No subdivision is done here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Rectangle
from .handle import FunctionHandle
from .quadrature import (
    INTEGER_TOL,
    Integer,
    NonInteger,
    QuadConfig,
    QuadratureFailure,
    count_zeros,
    gk_integrate_edge,
)


class MomentError(RuntimeError):
    pass


@dataclass
class MomentVector:
    s: np.ndarray  # s[0] is the zero count

    @property
    def count(self) -> int:
        return int(round(self.s[0].real))


@dataclass
class EquivalentPolynomial:
    sigma: np.ndarray  # p(z) = z^N + sigma_1 z^{N-1} + ... + sigma_N

    @property
    def degree(self) -> int:
        return len(self.sigma)

    def coefficients(self) -> np.ndarray:
        """Coefficients in descending powers, leading 1 included."""
        return np.concatenate([[1.0 + 0j], self.sigma])

    def __call__(self, z):
        return np.polyval(self.coefficients(), z)


def moment(fh: FunctionHandle, r: Rectangle, k: int, cfg: QuadConfig = QuadConfig()) -> complex:
    """``s_k`` by adaptive Gauss-Kronrod quadrature on each edge of ``r``."""

    def integrand(z):
        return z**k * fh.logderiv(z)

    total = 0j
    for e in r.edges():
        res = gk_integrate_edge(integrand, e, cfg)
        if not res.converged:
            raise MomentError(f"quadrature for moment s_{k} failed on edge {e.start} -> {e.end}")
        total += res.value
    return total / (2j * math.pi)


def moments(fh: FunctionHandle, r: Rectangle, N: int, cfg: QuadConfig = QuadConfig()) -> MomentVector:
    """``s_0 .. s_N``, each from its own adaptive quadrature; ``s_0`` is rounded.

    Raises:
        MomentError: if any quadrature fails or ``s_0`` is not an integer.
    """
    s0 = moment(fh, r, 0, cfg)
    n0 = round(s0.real)
    if abs(s0 - n0) > INTEGER_TOL or n0 < 0:
        raise MomentError(f"s_0 = {s0} is not a nonnegative integer")
    s = [complex(n0)] + [moment(fh, r, k, cfg) for k in range(1, N + 1)]
    return MomentVector(np.array(s, dtype=complex))


def newton_identities(s: MomentVector) -> EquivalentPolynomial:
    """Coefficients from ``s_k + s_{k-1} sigma_1 + ... + s_1 sigma_{k-1} + k sigma_k = 0``."""
    N = s.count
    sk = s.s
    if len(sk) < N + 1:
        raise ValueError(f"need moments up to s_{N}")
    sigma = np.zeros(N, dtype=complex)
    for k in range(1, N + 1):
        acc = sk[k]
        for j in range(1, k):
            acc += sk[k - j] * sigma[j - 1]
        sigma[k - 1] = -acc / k
    return EquivalentPolynomial(sigma)


def companion_roots(p: EquivalentPolynomial) -> np.ndarray:
    """Eigenvalues of the companion matrix of the monic ``p``."""
    N = p.degree
    if N < 1:
        raise ValueError("polynomial degree must be at least 1")
    C = np.zeros((N, N), dtype=complex)
    C[0, :] = -p.sigma
    C[1:, :-1] = np.eye(N - 1)
    return np.linalg.eigvals(C)


def delves_lyness(fh: FunctionHandle, r: Rectangle, cfg: QuadConfig = QuadConfig()) -> np.ndarray:
    """Zeros of ``fh`` in ``r`` (repeated by multiplicity) without subdivision."""
    outcome = count_zeros(fh, r, cfg)
    if isinstance(outcome, QuadratureFailure):
        raise MomentError(f"quadrature failed on edge {outcome.edge.start} -> {outcome.edge.end}")
    if isinstance(outcome, NonInteger):
        raise MomentError(f"argument principle gave non-integer {outcome.value}")
    assert isinstance(outcome, Integer)
    N = outcome.value
    if N == 0:
        return np.zeros(0, dtype=complex)
    s = np.array([complex(N)] + [moment(fh, r, k, cfg) for k in range(1, N + 1)])
    return companion_roots(newton_identities(MomentVector(s)))
