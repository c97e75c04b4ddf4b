import numpy as np
import pytest
from hypothesis import given, strategies as st

from holozero.geometry import BoundaryParam, Edge, Rectangle, boundary_point, split

UNIT = Rectangle(0, 1, 0, 1)


def test_rejects_zero_area():
    with pytest.raises(ValueError):
        Rectangle(0, 0, 0, 1)
    with pytest.raises(ValueError):
        Rectangle(0, 1, 1, 0)


def test_contains_is_closed():
    assert UNIT.contains(0j) and UNIT.contains(1 + 1j) and UNIT.contains(0.5 + 1j)
    assert not UNIT.contains(1.0000001 + 0.5j)
    mask = UNIT.contains(np.array([0.5 + 0.5j, -0.1 + 0j, 1 + 0j]))
    assert mask.tolist() == [True, False, True]


def test_edges_are_counterclockwise_and_closed():
    edges = UNIT.edges()
    assert [e.start for e in edges] == [0j, 1 + 0j, 1 + 1j, 1j]
    for a, b in zip(edges, edges[1:] + edges[:1]):
        assert a.end == b.start


def test_edge_reversal():
    e = Edge(0j, 1 + 1j)
    assert e.reversed().start == e.end and e.reversed().end == e.start
    assert e.reversed().reversed() == e


def test_square_splits_vertically():
    left, right, edge = split(UNIT, 0.5)
    assert left == Rectangle(0, 0.5, 0, 1) and right == Rectangle(0.5, 1, 0, 1)
    assert edge == Edge(0.5 + 0j, 0.5 + 1j)


def test_wide_rectangle_split_even():
    left, right, edge = split(Rectangle(0, 2, 0, 1), 0.5)
    assert left == Rectangle(0, 1, 0, 1) and right == Rectangle(1, 2, 0, 1)
    assert edge == Edge(1 + 0j, 1 + 1j)


def test_wide_rectangle_split_offset():
    left, right, _ = split(Rectangle(0, 2, 0, 1), 0.6)
    assert left == Rectangle(0, 1.2, 0, 1) and right == Rectangle(1.2, 2, 0, 1)


def test_tall_rectangle_splits_horizontally():
    bottom, top, edge = split(Rectangle(0, 1, 0, 3), 0.5)
    assert bottom == Rectangle(0, 1, 0, 1.5) and top == Rectangle(0, 1, 1.5, 3)
    assert edge.start.imag == edge.end.imag == 1.5


def test_shared_edge_orientation():
    # the inserted edge runs along the first child's boundary and backwards on the second
    for r in (UNIT, Rectangle(0, 1, 0, 3)):
        a, b, edge = split(r)
        assert edge in a.edges()
        assert edge.reversed() in b.edges()


@pytest.mark.parametrize("t, expected", [(0.0, 0j), (0.5, 0.5 + 0j), (2.5, 0.5 + 1j), (4.0, 0j), (3.5, 0.5j)])
def test_boundary_point(t, expected):
    assert boundary_point(BoundaryParam(UNIT), t) == pytest.approx(expected, abs=1e-15)


def test_boundary_param_vectorized_and_periodic():
    p = UNIT.boundary()
    assert p.length == 4
    t = np.linspace(0, 8, 33)
    z = p(t)
    assert np.allclose(z, p(t % 4))
    assert np.all(UNIT.contains(z, tol=1e-15))


coord = st.floats(-1e3, 1e3, allow_nan=False)
size = st.floats(1e-3, 1e3, allow_nan=False)


@given(coord, coord, size, size, st.floats(0.05, 0.95))
def test_children_areas_sum(x, y, w, h, frac):
    r = Rectangle(x, x + w, y, y + h)
    a, b, _ = split(r, frac)
    assert a.area + b.area == pytest.approx(r.area, rel=1e-12)
    # children tile the parent
    assert a.re_min == r.re_min and b.re_max == r.re_max
    assert a.im_min == r.im_min and b.im_max == r.im_max


@given(coord, coord, size, size, st.floats(0, 1))
def test_boundary_points_on_boundary(x, y, w, h, s):
    r = Rectangle(x, x + w, y, y + h)
    p = r.boundary()
    z = complex(p(s * p.length))
    tol = 1e-9 * max(1.0, abs(x) + abs(y) + w + h)
    on_vertical = min(abs(z.real - r.re_min), abs(z.real - r.re_max)) <= tol
    on_horizontal = min(abs(z.imag - r.im_min), abs(z.imag - r.im_max)) <= tol
    assert r.contains(z, tol=tol) and (on_vertical or on_horizontal)
