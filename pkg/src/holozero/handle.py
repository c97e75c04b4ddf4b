"""User functions together with their derivative and evaluation counters."""

from __future__ import annotations

import threading
from typing import Callable

import numpy as np

ComplexFunc = Callable[[np.ndarray], np.ndarray]


def _as_complex_array(z) -> np.ndarray:
    return np.asarray(z, dtype=complex)


class FunctionHandle:
    """A holomorphic function ``f`` with its derivative.

    Both callables must accept complex numpy arrays and return arrays of the
    same shape. Every point at which ``f`` or ``fprime`` is evaluated is
    counted; the counters only ever grow and are safe to update from several
    threads.

    Args:
        f: the function whose zeros are sought.
        fprime: its derivative (exact, or a numerical approximation).
        name: label used in reports.
    """

    def __init__(self, f: ComplexFunc, fprime: ComplexFunc, name: str = "f"):
        self._f = f
        self._fprime = fprime
        self.name = name
        self.derivative_free = False
        self._lock = threading.Lock()
        self._f_evals = 0
        self._fprime_evals = 0

    @property
    def f_evals(self) -> int:
        return self._f_evals

    @property
    def fprime_evals(self) -> int:
        return self._fprime_evals

    def add_f_evals(self, n: int) -> None:
        with self._lock:
            self._f_evals += int(n)

    def add_fprime_evals(self, n: int) -> None:
        with self._lock:
            self._fprime_evals += int(n)

    def counts(self) -> dict[str, int]:
        return {"f": self._f_evals, "fprime": self._fprime_evals}

    def f(self, z):
        z = _as_complex_array(z)
        self.add_f_evals(z.size)
        return np.asarray(self._f(z), dtype=complex)

    def fprime(self, z):
        z = _as_complex_array(z)
        self.add_fprime_evals(z.size)
        return np.asarray(self._fprime(z), dtype=complex)

    def logderiv(self, z):
        """The logarithmic derivative ``f'(z)/f(z)``; non-finite where f vanishes."""
        z = _as_complex_array(z)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return self.fprime(z) / self.f(z)

    def scaled(self, c: complex) -> "FunctionHandle":
        """A fresh handle for ``c * f`` (fresh counters)."""
        f, fp = self._f, self._fprime
        return FunctionHandle(lambda z: c * f(z), lambda z: c * fp(z), name=f"{c}*{self.name}")

    def __repr__(self):
        return f"FunctionHandle({self.name!r}, f_evals={self._f_evals}, fprime_evals={self._fprime_evals})"
