import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geocover.errors import InfeasibleError, PreconditionError
from geocover.evaluation import gen_unitsquare_lb, opt_set_cover, play_halving_adversary
from geocover.gen import random_square_cover
from geocover.geometry import AxisBox, contains
from geocover.quadcover import QuadtreeCover, offline_cover


def three_squares():
    return {
        0: AxisBox((0, 0), (2, 2)),
        1: AxisBox((1, 1), (3, 3)),
        2: AxisBox((2, 2), (4, 4)),
    }


class TestHandTraced:
    def test_corner_point_picks_enclosing_square(self):
        st8 = QuadtreeCover(4, three_squares())
        assert st8.insert((0, 0)) == [0]
        assert st8.chosen_ids() == [0]
        # the root has no edge-covering square, so only the quadrant selects
        assert st8.explored[(0, 0, 0)] == ()
        assert st8.explored[(1, 0, 0)] == (0,)

    def test_full_trace(self):
        st8 = QuadtreeCover(4, three_squares())
        assert st8.insert((0, 0)) == [0]
        assert st8.insert((3, 3)) == [2]
        assert st8.insert((1, 1)) == []  # already covered at the quadrant
        assert st8.chosen_ids() == [0, 2]
        assert st8.cost() == 2
        assert len(st8.explored) == 3

    def test_leaf_fallback(self):
        st8 = QuadtreeCover(2, {5: AxisBox((1, 1), (1, 1))})
        assert st8.insert((1, 1)) == [5]
        assert st8.explored[(1, 1, 1)] == (5,)

    def test_uncoverable_point_raises(self):
        st8 = QuadtreeCover(2, {0: AxisBox((0, 0), (0, 0))})
        with pytest.raises(InfeasibleError):
            st8.insert((1, 1))

    def test_input_validation(self):
        with pytest.raises(PreconditionError):
            QuadtreeCover(5, {})
        with pytest.raises(PreconditionError):
            QuadtreeCover(4, {0: AxisBox((0, 0), (1, 2))})
        st8 = QuadtreeCover(4, three_squares())
        with pytest.raises(PreconditionError):
            st8.insert((4, 0))


def run_instance(N, squares, points):
    state = QuadtreeCover(N, squares)
    for p in points:
        state.insert(p)
    return state


class TestRandomized:
    def test_every_inserted_point_covered(self):
        rng = random.Random(7)
        for _ in range(40):
            N = rng.choice([4, 8, 16, 32])
            squares, points = random_square_cover(rng, N, rng.randint(1, 12), rng.randint(1, 20))
            state = run_instance(N, squares, points)
            for p in points:
                assert state.is_covered(p)

    def test_order_independence(self):
        rng = random.Random(8)
        for _ in range(25):
            N = rng.choice([4, 8, 16])
            squares, points = random_square_cover(rng, N, rng.randint(1, 10), rng.randint(1, 12))
            base = run_instance(N, squares, points)
            for _ in range(3):
                shuffled = points[:]
                rng.shuffle(shuffled)
                assert run_instance(N, squares, shuffled).chosen == base.chosen

    def test_online_equals_offline(self):
        rng = random.Random(9)
        for _ in range(25):
            N = rng.choice([4, 8, 16])
            squares, points = random_square_cover(rng, N, rng.randint(1, 10), rng.randint(1, 12))
            assert offline_cover(N, squares, points).chosen == run_instance(N, squares, points).chosen

    def test_monotone_in_the_point_set(self):
        rng = random.Random(10)
        for _ in range(40):
            N = rng.choice([4, 8, 16])
            squares, points = random_square_cover(rng, N, rng.randint(1, 10), rng.randint(2, 12))
            prefix = offline_cover(N, squares, points[:-1]).chosen
            full = offline_cover(N, squares, points).chosen
            assert prefix <= full

    def test_competitive_ratio_sample(self):
        rng = random.Random(11)
        for _ in range(20):
            N = rng.choice([8, 16, 32])
            squares, points = random_square_cover(rng, N, rng.randint(2, 12), rng.randint(2, 15))
            state = run_instance(N, squares, points)
            opt = opt_set_cover(points, squares).value
            assert state.cost() <= 80 * math.log2(N) * opt


@st.composite
def square_instances(draw):
    N = draw(st.sampled_from([4, 8]))
    m = draw(st.integers(1, 6))
    squares = {}
    for sid in range(m):
        side = draw(st.integers(1, N))
        x = draw(st.integers(0, N - side))
        y = draw(st.integers(0, N - side))
        squares[sid] = AxisBox((x, y), (x + side, y + side))
    coverable = [
        (x, y)
        for x in range(N)
        for y in range(N)
        if any(contains(sq, (x, y)) for sq in squares.values())
    ]
    if not coverable:
        return N, squares, [], None
    pts = draw(st.lists(st.sampled_from(coverable), min_size=1, max_size=8))
    extra = draw(st.sampled_from(coverable))
    return N, squares, pts, extra


@given(square_instances())
@settings(max_examples=80)
def test_one_more_point_only_grows_the_cover(inst):
    N, squares, pts, extra = inst
    if extra is None:
        return
    assert offline_cover(N, squares, pts).chosen <= offline_cover(N, squares, pts + [extra]).chosen


class TestAdversary:
    def test_halving_forces_growth(self):
        inst = gen_unitsquare_lb(16)
        trace = play_halving_adversary(QuadtreeCover(inst.N, inst.sets), inst)
        assert trace.opt == 1
        assert trace.final_cost >= 2
        assert trace.final_cost <= 80 * math.log2(inst.N)
        costs = [r.cost_after for r in trace.rounds]
        assert costs == sorted(costs)
