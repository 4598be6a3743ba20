import pytest
from hypothesis import given
from hypothesis import strategies as st

from geocover.errors import GeometryError
from geocover.geometry import (
    AxisBox,
    Point,
    RankMap,
    contains,
    intersect,
    intersection_volume,
    next_pow2,
    overlap_length,
    project,
    rank_space_reduce,
)


def box(*pairs, closed=True):
    lo = tuple(p[0] for p in pairs)
    hi = tuple(p[1] for p in pairs)
    return AxisBox(lo, hi, closed=closed)


class TestAxisBox:
    def test_basic(self):
        b = box((0, 4), (1, 3))
        assert b.dim == 2
        assert b.side_lengths() == (4, 2)
        assert not b.is_cube()
        assert box((0, 2), (5, 7)).is_cube()

    def test_degenerate_closed_ok(self):
        b = box((3, 3))
        assert contains(b, (3,))

    def test_rejects_inverted(self):
        with pytest.raises(GeometryError):
            box((4, 0))

    def test_rejects_empty_half_open(self):
        with pytest.raises(GeometryError):
            box((3, 3), closed=False)

    def test_rejects_mixed_dims(self):
        with pytest.raises(GeometryError):
            AxisBox((0, 0), (1,))


class TestContains:
    def test_closed_includes_boundary(self):
        b = box((0, 4), (0, 4))
        for p in [(0, 0), (4, 4), (0, 4), (2, 2)]:
            assert contains(b, p)
        assert not contains(b, (5, 2))

    def test_half_open_excludes_hi(self):
        b = box((0, 4), (0, 4), closed=False)
        assert contains(b, (0, 0))
        assert contains(b, (3, 3))
        assert not contains(b, (4, 0))
        assert not contains(b, (0, 4))

    def test_accepts_point_objects(self):
        assert contains(box((0, 2)), Point((1,)))


class TestIntersect:
    def test_overlap(self):
        got = intersect(box((0, 4), (0, 4)), box((2, 6), (1, 3)))
        assert got == box((2, 4), (1, 3))

    def test_disjoint(self):
        assert intersect(box((0, 1)), box((3, 4))) is None

    def test_closed_touching_is_degenerate(self):
        got = intersect(box((0, 2)), box((2, 4)))
        assert got == box((2, 2))

    def test_half_open_touching_is_empty(self):
        a = box((0, 2), closed=False)
        b = box((2, 4), closed=False)
        assert intersect(a, b) is None

    def test_volume(self):
        assert intersection_volume(box((0, 4), (0, 4)), box((2, 8), (3, 9))) == 2 * 1
        assert intersection_volume(box((0, 1)), box((5, 6))) == 0
        assert overlap_length(0, 4, 2, 8) == 2


def test_project():
    b = box((0, 4), (1, 3), (5, 9))
    assert project(b, [0, 2]) == box((0, 4), (5, 9))
    assert project(b, [1]) == box((1, 3))


def test_next_pow2():
    assert [next_pow2(x) for x in (1, 2, 3, 4, 5, 17)] == [1, 2, 4, 4, 8, 32]


class TestRankMap:
    def setup_method(self):
        boxes = [box((3, 17), (-2, 5)), box((17, 40), (5, 5))]
        self.reduced, self.rm = rank_space_reduce(boxes)

    def test_plain_ranks(self):
        # axis 0 endpoints 3,17,40 -> ranks 0,1,2; axis 1 endpoints -2,5
        assert self.reduced[0] == box((0, 1), (0, 1))
        assert self.reduced[1] == box((1, 2), (1, 1))

    def test_rank_requires_known_endpoint(self):
        assert self.rm.rank(0, 17) == 1
        with pytest.raises(GeometryError):
            self.rm.rank(0, 18)

    def test_slot(self):
        assert self.rm.slot(0, 17) == (1, True)
        assert self.rm.slot(0, 20) == (1, False)
        assert self.rm.slot(0, 2) == (-1, False)

    def test_embed_box_doubles(self):
        assert self.rm.embed_box(box((3, 40), (5, 5))) == box((0, 4), (2, 2))

    def test_embed_point_parity(self):
        # exact endpoints get even coords, in-between points odd
        assert self.rm.embed_point((17, 5)) == (2, 2)
        assert self.rm.embed_point((20, 0)) == (3, 1)


coord = st.integers(min_value=-50, max_value=50)


@st.composite
def boxes_1d(draw, n=4):
    out = []
    for _ in range(n):
        a, b = sorted((draw(coord), draw(coord)))
        out.append(AxisBox((a,), (b,)))
    return out


@given(boxes_1d(), st.integers(-60, 60))
def test_embed_preserves_containment(bs, x):
    """Doubled rank embedding keeps every box/point incidence, exactly."""
    _, rm = rank_space_reduce(bs)
    ep = rm.embed_point((x,))
    for b in bs:
        assert contains(rm.embed_box(b), ep) == contains(b, (x,))


@given(boxes_1d(n=5))
def test_plain_ranks_preserve_endpoint_incidence(bs):
    reduced, rm = rank_space_reduce(bs)
    endpoints = sorted({b.lo[0] for b in bs} | {b.hi[0] for b in bs})
    for x in endpoints:
        r = rm.rank(0, x)
        for b, rb in zip(bs, reduced):
            assert contains(rb, (r,)) == contains(b, (x,))
