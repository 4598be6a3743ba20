import pytest
from hypothesis import given
from hypothesis import strategies as st

from geocover.errors import PreconditionError
from geocover.geometry import AxisBox, contains
from geocover.transforms import (
    point_to_cube,
    point_to_dual,
    rect_to_cube,
    rect_to_point,
    round_weight,
    weight_classes,
)


class TestRectToCube:
    def test_interval(self):
        lifted = rect_to_cube(AxisBox((1,), (3,)), source_id=7)
        assert lifted.cube == AxisBox((-3, 1), (-1, 3))
        assert lifted.side == 2
        assert lifted.source_id == 7

    def test_rectangle(self):
        lifted = rect_to_cube(AxisBox((0, 0), (2, 1)))
        assert lifted.cube == AxisBox((-2, -2, 0, -1), (0, 0, 2, 1))
        assert lifted.side == 2

    def test_degenerate(self):
        lifted = rect_to_cube(AxisBox((5,), (5,)))
        assert lifted.cube == AxisBox((-5, 5), (-5, 5))
        assert lifted.side == 0


def test_point_to_dual():
    assert point_to_dual((2,)) == (-2, 2)
    assert point_to_dual((1, 3)) == (-1, -3, 1, 3)


def test_point_to_cube():
    assert point_to_cube((1,), 4) == AxisBox((-1, 1), (3, 5))
    assert point_to_cube((0,), 4) == AxisBox((0, 0), (4, 4))
    assert point_to_cube((1, 2), 4) == AxisBox((-1, -2, 1, 2), (3, 2, 5, 6))


def test_rect_to_point():
    assert rect_to_point(AxisBox((1,), (3,))) == (-1, 3)
    assert rect_to_point(AxisBox((0, 2), (5, 4))) == (0, -2, 5, 4)


rect_1d = st.tuples(st.integers(0, 30), st.integers(0, 30)).map(
    lambda t: AxisBox((min(t),), (max(t),))
)


@st.composite
def rect_2d(draw):
    x = sorted((draw(st.integers(0, 30)), draw(st.integers(0, 30))))
    y = sorted((draw(st.integers(0, 30)), draw(st.integers(0, 30))))
    return AxisBox((x[0], y[0]), (x[1], y[1]))


@given(rect_1d, st.integers(-5, 35))
def test_cover_duality_1d(rect, x):
    """p in R exactly when R's lifted cube contains p's dual point."""
    assert contains(rect_to_cube(rect).cube, point_to_dual((x,))) == contains(rect, (x,))


@given(rect_2d(), st.tuples(st.integers(-5, 35), st.integers(-5, 35)))
def test_cover_duality_2d(rect, p):
    assert contains(rect_to_cube(rect).cube, point_to_dual(p)) == contains(rect, p)


@given(rect_1d, st.integers(0, 32))
def test_hitting_duality_1d(rect, x):
    """p stabs R exactly when R's dual point lands in p's lifted cube."""
    N = 32
    got = contains(point_to_cube((x,), N), rect_to_point(rect))
    assert got == contains(rect, (x,))


@given(rect_2d(), st.tuples(st.integers(0, 32), st.integers(0, 32)))
def test_hitting_duality_2d(rect, p):
    got = contains(point_to_cube(p, 32), rect_to_point(rect))
    assert got == contains(rect, p)


class TestWeights:
    def test_round_weight(self):
        assert [round_weight(w) for w in (1, 2, 3, 4, 5, 7, 8, 9)] == [1, 2, 4, 4, 8, 8, 8, 16]

    def test_round_weight_ratio_band(self):
        for w in range(1, 2000):
            r = round_weight(w)
            assert 1 <= r / w < 2

    def test_round_weight_rejects_nonpositive(self):
        with pytest.raises(PreconditionError):
            round_weight(0)

    def test_weight_classes(self):
        classes = weight_classes({10: 3, 11: 4, 12: 1, 13: 8})
        assert classes == {4: [10, 11], 1: [12], 8: [13]}
