"""Axis-aligned rectangles in the complex plane and their oriented boundaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Edge:
    """A directed straight segment from ``start`` to ``end``."""

    start: complex
    end: complex

    def __post_init__(self):
        if self.start == self.end:
            raise ValueError("degenerate edge: start == end")

    def reversed(self) -> "Edge":
        return Edge(self.end, self.start)

    @property
    def key(self) -> tuple[float, float, float, float]:
        s, e = complex(self.start), complex(self.end)
        return (s.real, s.imag, e.real, e.imag)

    @property
    def length(self) -> float:
        return abs(self.end - self.start)


@dataclass(frozen=True)
class Rectangle:
    """Closed rectangle ``[re_min, re_max] + [im_min, im_max]i``."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"rectangle must have positive area: {self}")

    @property
    def width(self) -> float:
        return self.re_max - self.re_min

    @property
    def height(self) -> float:
        return self.im_max - self.im_min

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def diameter(self) -> float:
        return float(np.hypot(self.width, self.height))

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    @property
    def corners(self) -> tuple[complex, complex, complex, complex]:
        """Corners in counterclockwise order starting at the lower-left."""
        return (
            complex(self.re_min, self.im_min),
            complex(self.re_max, self.im_min),
            complex(self.re_max, self.im_max),
            complex(self.re_min, self.im_max),
        )

    def edges(self) -> tuple[Edge, Edge, Edge, Edge]:
        """The four boundary edges, positively oriented (interior on the left)."""
        c = self.corners
        return tuple(Edge(c[k], c[(k + 1) % 4]) for k in range(4))

    def contains(self, z, tol: float = 0.0):
        """Closed containment test, optionally enlarged by ``tol`` on every side.

        Works elementwise on arrays.
        """
        z = np.asarray(z)
        inside = (
            (z.real >= self.re_min - tol)
            & (z.real <= self.re_max + tol)
            & (z.imag >= self.im_min - tol)
            & (z.imag <= self.im_max + tol)
        )
        return bool(inside) if inside.ndim == 0 else inside

    def boundary(self) -> "BoundaryParam":
        return BoundaryParam(self)

    def split(self, offset_fraction: float = 0.5):
        return split(self, offset_fraction)

    def as_list(self) -> list[float]:
        return [self.re_min, self.re_max, self.im_min, self.im_max]


def split(r: Rectangle, offset_fraction: float = 0.5) -> tuple[Rectangle, Rectangle, Edge]:
    """Cut ``r`` perpendicular to its longer side.

    The cut sits at ``offset_fraction`` of the longer side, measured from the
    lower (left or bottom) end. Squares are cut by a vertical line. Returns the
    two children and the inserted edge, oriented as it appears on the first
    child's boundary; the second child traverses it in reverse.
    """
    if not 0.0 < offset_fraction < 1.0:
        raise ValueError("offset_fraction must lie strictly between 0 and 1")
    if r.width >= r.height:
        x = r.re_min + offset_fraction * r.width
        left = Rectangle(r.re_min, x, r.im_min, r.im_max)
        right = Rectangle(x, r.re_max, r.im_min, r.im_max)
        # the right side of ``left`` runs upward
        return left, right, Edge(complex(x, r.im_min), complex(x, r.im_max))
    y = r.im_min + offset_fraction * r.height
    bottom = Rectangle(r.re_min, r.re_max, r.im_min, y)
    top = Rectangle(r.re_min, r.re_max, y, r.im_max)
    # the top side of ``bottom`` runs leftward
    return bottom, top, Edge(complex(r.re_max, y), complex(r.re_min, y))


class BoundaryParam:
    """Arclength parametrization of a rectangle boundary.

    ``t = 0`` is the lower-left corner and the boundary is traversed
    counterclockwise; ``t`` is taken modulo the perimeter.
    """

    def __init__(self, rect: Rectangle):
        self.rect = rect
        self._corners = np.array(rect.corners + (rect.corners[0],), dtype=complex)
        sides = np.array([rect.width, rect.height, rect.width, rect.height])
        self._breaks = np.concatenate([[0.0], np.cumsum(sides)])
        self.length = float(self._breaks[-1])

    def __call__(self, t):
        return boundary_point(self, t)


def boundary_point(p: BoundaryParam, t):
    """Point(s) on the boundary at parameter ``t`` (scalar or array)."""
    t = np.mod(np.asarray(t, dtype=float), p.length)
    k = np.clip(np.searchsorted(p._breaks, t, side="right") - 1, 0, 3)
    start = p._corners[k]
    direction = (p._corners[k + 1] - start) / np.abs(p._corners[k + 1] - start)
    z = start + (t - p._breaks[k]) * direction
    return complex(z) if z.ndim == 0 else z
