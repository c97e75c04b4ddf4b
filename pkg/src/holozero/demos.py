"""Built-in test problems.

Every builder returns a :class:`Problem`; anything random is drawn from a
``numpy`` generator seeded by the caller, so problems are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.stats import qmc

from .geometry import Rectangle
from .handle import FunctionHandle
from .quadrature import QuadConfig


@dataclass
class Problem:
    name: str
    handle: FunctionHandle
    rect: Rectangle
    known_zeros: Optional[np.ndarray] = None
    mode: str = "zeros"  # or "poles": manual subdivision, no count verification
    depth: int = 0
    label: Optional[Callable[[complex], str]] = None
    quad: Optional[QuadConfig] = None  # overrides the default quadrature budget
    extra: dict = field(default_factory=dict)


def polynomial_handle(roots, name: str = "poly") -> FunctionHandle:
    """``prod(z - roots)`` with its exact derivative."""
    roots = np.asarray(roots, dtype=complex)

    def f(z):
        return np.prod(z[..., None] - roots, axis=-1)

    def fp(z):
        d = z[..., None] - roots
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.prod(d, axis=-1) * np.sum(1.0 / d, axis=-1)

    return FunctionHandle(f, fp, name=name)


def grid_points() -> np.ndarray:
    """The 10x10 grid ``(x + iy)/10`` with ``x, y`` odd in ``[-9, 9]``."""
    odd = np.arange(-9, 10, 2)
    return ((odd[:, None] + 1j * odd[None, :]) / 10).ravel()


def grid100(seed: int = 0) -> Problem:
    pts = grid_points()
    return Problem("grid100", polynomial_handle(pts, "grid100"), Rectangle(-1, 1, -1, 1), pts)


def quasirandom_points(n: int = 100, seed: int = 0) -> np.ndarray:
    """First ``n`` points of a scrambled 2-d Sobol' sequence in the unit square."""
    m = int(np.ceil(np.log2(max(n, 2))))
    pts = qmc.Sobol(d=2, scramble=True, seed=seed).random_base2(m)[:n]
    return pts[:, 0] + 1j * pts[:, 1]


def quasirandom100(seed: int = 0) -> Problem:
    pts = quasirandom_points(100, seed)
    return Problem("quasirandom100", polynomial_handle(pts, "quasirandom100"), Rectangle(0, 1, 0, 1), pts)


ANNULAR_CONSTANTS = {"A": -0.19435, "B": 1000.41, "C": 522463.0, "T": 0.005}


def annular(seed: int = 0) -> Problem:
    """``z^2 + A z + B exp(-T z) + C`` from the combustion-chamber stability model."""
    A, B, C, T = (ANNULAR_CONSTANTS[k] for k in "ABCT")

    def f(z):
        return z**2 + A * z + B * np.exp(-T * z) + C

    def fp(z):
        return 2 * z + A - B * T * np.exp(-T * z)

    return Problem(
        "annular", FunctionHandle(f, fp, name="annular"), Rectangle(-2500, 10, -15000, 15000),
        # the zero chain runs ~36 units from the 30000-long left edge
        quad=QuadConfig(max_interval_subdivisions=200),
        extra=dict(ANNULAR_CONSTANTS),
    )


def _principal_sqrt(w):
    # put values on the cut onto its upper side
    w = np.where(w.imag == 0, w.real + 0j, w)
    return np.sqrt(w)


def sheet_plus(z):
    return np.sin(_principal_sqrt(z**2 + 1)) - z


def sheet_minus(z):
    return -np.sin(_principal_sqrt(z**2 + 1)) - z


def sheets(seed: int = 0) -> Problem:
    """Product of the two Riemann sheets of ``sin(sqrt(z^2 + 1)) - z``.

    ``F = z^2 - sin(w)^2`` with ``w^2 = z^2 + 1`` is entire; its derivative
    ``2z - z sin(2w)/w`` is continuous across the square-root cut.
    """

    def F(z):
        return sheet_plus(z) * sheet_minus(z)

    def Fp(z):
        w = _principal_sqrt(z**2 + 1)
        with np.errstate(all="ignore"):
            ratio = np.where(w == 0, 2.0 + 0j, np.sin(2 * w) / np.where(w == 0, 1, w))
        return 2 * z - z * ratio

    def label(z):
        return "+" if abs(sheet_plus(np.asarray(z))) <= abs(sheet_minus(np.asarray(z))) else "-"

    return Problem("sheets", FunctionHandle(F, Fp, name="sheets"), Rectangle(-5, 5, -5, 5), label=label)


CIRCULANT_RECT = Rectangle(-5.1, 5, -4.9, 4.7)


def circulant_matrix(n: int = 50, seed: int = 0, rect: Rectangle | None = CIRCULANT_RECT) -> np.ndarray:
    """Circulant matrix whose first row is drawn uniformly from {-0.4, 0.4}.

    With ``rect`` given, rows are redrawn from the same generator until the
    whole spectrum lies inside ``rect``.
    """
    rng = np.random.default_rng(seed)
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    while True:
        A = rng.choice([-0.4, 0.4], size=n)[idx]
        if rect is None or np.all(rect.contains(np.linalg.eigvals(A))):
            return A


def _shifted(A, z):
    n = A.shape[0]
    return A[None, :, :] - z.ravel()[:, None, None] * np.eye(n)[None, :, :]


def circulant_det(seed: int = 0) -> Problem:
    """``det(A - zI)``; zeros are the eigenvalues of ``A``."""
    A = circulant_matrix(seed=seed)

    def f(z):
        return np.linalg.det(_shifted(A, z)).reshape(z.shape)

    def fp(z):
        # Jacobi's formula: -tr(adj(A - zI)) = -det * tr((A - zI)^{-1})
        M = _shifted(A, z)
        sign, logdet = np.linalg.slogdet(M)
        det = sign * np.exp(logdet)
        tr = np.trace(np.linalg.inv(M), axis1=1, axis2=2)
        return (-det * tr).reshape(z.shape)

    return Problem(
        "circulant-det", FunctionHandle(f, fp, name="circulant-det"), CIRCULANT_RECT,
        known_zeros=np.linalg.eigvals(A), extra={"matrix": A},
    )


def circulant_resolvent(seed: int = 0, depth: int = 6) -> Problem:
    """Scalarized resolvent ``u^* (A - zI)^{-1} v``; poles at the eigenvalues of ``A``."""
    A = circulant_matrix(seed=seed)
    rng = np.random.default_rng([seed, 1])
    u = rng.standard_normal(A.shape[0])
    v = rng.standard_normal(A.shape[0])

    def f(z):
        x = np.linalg.solve(_shifted(A, z), np.broadcast_to(v, (z.size, len(v)))[..., None])[..., 0]
        return (x @ u.conj()).reshape(z.shape)

    def fp(z):
        # d/dz (A - zI)^{-1} = (A - zI)^{-2}
        M = _shifted(A, z)
        x = np.linalg.solve(M, np.broadcast_to(v, (z.size, len(v)))[..., None])
        y = np.linalg.solve(M, x)[..., 0]
        return (y @ u.conj()).reshape(z.shape)

    return Problem(
        "circulant-resolvent", FunctionHandle(f, fp, name="circulant-resolvent"), CIRCULANT_RECT,
        known_zeros=np.linalg.eigvals(A), mode="poles", depth=depth,
        extra={"matrix": A, "u": u, "v": v},
    )


def funcchoice(seed: int = 0, alpha: int = 2, a: complex | None = None) -> Problem:
    """``exp(z) (z - a)^alpha`` on the unit square; ``a`` random if not given."""
    if a is None:
        rng = np.random.default_rng(seed)
        a = complex(rng.uniform(), rng.uniform())
    a = complex(a)

    def f(z):
        return np.exp(z) * (z - a) ** alpha

    def fp(z):
        return np.exp(z) * (z - a) ** (alpha - 1) * ((z - a) + alpha)

    return Problem(
        "funcchoice", FunctionHandle(f, fp, name="funcchoice"), Rectangle(0, 1, 0, 1),
        known_zeros=np.array([a]), extra={"alpha": alpha, "a": a},
    )


def compfunc_points(n: int) -> np.ndarray:
    """Zeros ``0.1 + 0.8 j/n + 0.5i`` for ``j = 0..n`` (a single zero when n = 0)."""
    if n == 0:
        return np.array([0.1 + 0.5j])
    j = np.arange(n + 1)
    return 0.1 + 0.8 * j / n + 0.5j


def compfunc(seed: int = 0, n: int = 3) -> Problem:
    pts = compfunc_points(n)
    return Problem("compfunc", polynomial_handle(pts, f"compfunc{n}"), Rectangle(0, 1, 0, 1), pts, extra={"n": n})


DEMOS: dict[str, tuple[Callable[..., Problem], str]] = {
    "grid100": (grid100, "product of (z - a) over a 10x10 grid in [-1,1]^2 (100 zeros)"),
    "quasirandom100": (quasirandom100, "100 scrambled-Sobol' simple zeros in the unit square"),
    "annular": (annular, "z^2 + Az + B exp(-Tz) + C, A=-0.19435 B=1000.41 C=522463 T=0.005"),
    "sheets": (sheets, "product of the Riemann sheets of sin(sqrt(z^2+1)) - z on [-5,5]^2"),
    "circulant-det": (circulant_det, "det(A - zI) for a seeded 50x50 circulant matrix with entries +-0.4"),
    "circulant-resolvent": (circulant_resolvent, "u^*(A - zI)^{-1} v for the same matrix; pole finding, depth 6"),
    "funcchoice": (funcchoice, "exp(z)(z - a)^alpha on the unit square (--alpha, --a)"),
    "compfunc": (compfunc, "line of n+1 zeros 0.1+0.8j/n+0.5i in the unit square (--n)"),
}


def get_demo(name: str, seed: int = 0, **params) -> Problem:
    try:
        builder, _ = DEMOS[name]
    except KeyError:
        raise KeyError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}") from None
    return builder(seed=seed, **params)
