"""Adaptive Gauss-Kronrod contour integration and the argument-principle count.

Edges are integrated with the 10-point Gauss / 21-point Kronrod pair under
global adaptivity: the subinterval with the largest error estimate is always
the next one to be bisected. The count of zeros inside a rectangle is the sum
of its four directed edge integrals of ``f'/f`` divided by ``2*pi*i``.
"""

from __future__ import annotations

import heapq
import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .geometry import Edge, Rectangle
from .handle import FunctionHandle

# Kronrod abscissae on [-1, 1] (non-negative half, decreasing); odd entries
# are the 10-point Gauss nodes.
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600059575880,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

# full 21-point rule on [-1, 1], ordered left to right
GK_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(21)
_gauss_idx = np.concatenate([np.arange(1, 10, 2), 20 - np.arange(1, 10, 2)])
GAUSS_WEIGHTS[_gauss_idx] = np.concatenate([_WG, _WG])

_EPS = np.finfo(float).eps

INTEGER_TOL = 1e-3


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-9
    max_interval_subdivisions: int = 50

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("quadrature tolerances must be positive")
        if self.max_interval_subdivisions < 1:
            raise ValueError("max_interval_subdivisions must be at least 1")


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error_estimate: float
    evaluations: int
    converged: bool


def _gk21(g, a: complex, b: complex):
    """One GK21 panel on the segment [a, b]; returns (value, error, finite)."""
    half = 0.5 * (b - a)
    z = 0.5 * (a + b) + half * GK_NODES
    with np.errstate(all="ignore"):
        y = np.asarray(g(z), dtype=complex)
    if not np.all(np.isfinite(y)):
        return complex("nan"), math.inf, False
    kron = np.dot(KRONROD_WEIGHTS, y)
    gauss = np.dot(GAUSS_WEIGHTS, y)
    scale = abs(half)
    result = complex(kron * half)
    # QUADPACK-style error estimate
    mean = kron / 2.0
    resasc = scale * float(np.dot(KRONROD_WEIGHTS, np.abs(y - mean)))
    resabs = scale * float(np.dot(KRONROD_WEIGHTS, np.abs(y)))
    err = abs((kron - gauss) * half)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    if resabs > np.finfo(float).tiny / (50 * _EPS):
        err = max(50 * _EPS * resabs, err)
    return result, err, True


def gk_integrate_edge(g: Callable, e: Edge, cfg: QuadConfig = QuadConfig()) -> QuadResult:
    """Integrate ``g(z) dz`` along the directed edge ``e``.

    ``g`` is called with arrays of 21 points strictly inside a subinterval,
    so neither the endpoints nor the midpoint of the edge are ever sampled.
    A non-finite integrand value stops the integration and yields a
    non-converged result with infinite error.
    """
    a, b = complex(e.start), complex(e.end)
    # start from two panels: a single panel symmetric about the edge midpoint
    # integrates an odd integrand to zero with zero error, hiding poles on the edge
    mid = 0.5 * (a + b)
    v1, e1, ok1 = _gk21(g, a, mid)
    v2, e2, ok2 = _gk21(g, mid, b)
    evaluations = 42
    if not (ok1 and ok2):
        return QuadResult(complex("nan"), math.inf, evaluations, False)
    # max-heap on error, keyed by negated error; counter breaks ties deterministically
    heap = [(-e1, 0, a, mid, v1), (-e2, 1, mid, b, v2)]
    total_val, total_err = v1 + v2, e1 + e2
    counter = 2
    subdivisions = 0
    while total_err > max(cfg.abs_tol, cfg.rel_tol * abs(total_val)):
        if subdivisions >= cfg.max_interval_subdivisions:
            break
        neg_err, _, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1, ok1 = _gk21(g, lo, mid)
        v2, e2, ok2 = _gk21(g, mid, hi)
        evaluations += 42
        subdivisions += 1
        if not (ok1 and ok2):
            return QuadResult(complex("nan"), math.inf, evaluations, False)
        heapq.heappush(heap, (-e1, counter, lo, mid, v1))
        heapq.heappush(heap, (-e2, counter + 1, mid, hi, v2))
        counter += 2
        # recompute sums to avoid drift from repeated subtraction
        total_val = complex(sum(item[4] for item in heap))
        total_err = float(sum(-item[0] for item in heap))
    converged = bool(total_err <= max(cfg.abs_tol, cfg.rel_tol * abs(total_val)))
    return QuadResult(total_val, float(total_err), evaluations, converged)


# ---------------------------------------------------------------------------
# argument principle


@dataclass(frozen=True)
class Integer:
    """The count converged to a nonnegative integer."""

    value: int
    raw: complex


@dataclass(frozen=True)
class QuadratureFailure:
    """Quadrature along ``edge`` failed to converge."""

    edge: Edge
    result: QuadResult


@dataclass(frozen=True)
class NonInteger:
    """Converged, but the count is not near a nonnegative integer."""

    value: complex


ArgPrincipleOutcome = Union[Integer, QuadratureFailure, NonInteger]


class EdgeCache:
    """Directed-edge integrals of ``f'/f`` keyed on exact endpoint coordinates.

    A lookup for the reverse of a stored edge returns the negated value.
    """

    def __init__(self):
        self._store: dict[tuple, QuadResult] = {}
        self._lock = threading.Lock()
        self.hits = 0

    def get(self, e: Edge) -> QuadResult | None:
        with self._lock:
            hit = self._store.get(e.key)
            if hit is not None:
                self.hits += 1
                return hit
            hit = self._store.get(e.reversed().key)
            if hit is not None:
                self.hits += 1
                return QuadResult(-hit.value, hit.error_estimate, 0, hit.converged)
        return None

    def put(self, e: Edge, res: QuadResult) -> None:
        with self._lock:
            self._store[e.key] = res

    def __len__(self):
        return len(self._store)


def integrate_logderiv(fh: FunctionHandle, e: Edge, cfg: QuadConfig, cache: EdgeCache | None = None) -> QuadResult:
    if cache is not None:
        hit = cache.get(e)
        if hit is not None:
            return hit
    res = gk_integrate_edge(fh.logderiv, e, cfg)
    if cache is not None:
        cache.put(e, res)
    return res


def count_zeros(
    fh: FunctionHandle,
    r: Rectangle,
    cfg: QuadConfig = QuadConfig(),
    cache: EdgeCache | None = None,
    integer_tol: float = INTEGER_TOL,
) -> ArgPrincipleOutcome:
    """Number of zeros of ``fh`` inside ``r`` by the argument principle."""
    total = 0j
    for e in r.edges():
        res = integrate_logderiv(fh, e, cfg, cache)
        if not res.converged:
            return QuadratureFailure(e, res)
        total += res.value
    n = total / (2j * math.pi)
    nearest = round(n.real)
    if nearest >= 0 and abs(n - nearest) <= integer_tol:
        return Integer(int(nearest), n)
    return NonInteger(n)
