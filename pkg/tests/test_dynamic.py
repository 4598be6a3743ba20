import random

import pytest

from geocover.dynamic import DynamicHittingSet, DynamicSetCover
from geocover.errors import InfeasibleError, PreconditionError
from geocover.evaluation import opt_hitting_set, opt_set_cover
from geocover.geometry import AxisBox, contains


def rect(lo, hi):
    return AxisBox(tuple(lo), tuple(hi), closed=True)


class TestSetCoverBasics:
    def test_single_rect_cover(self):
        h = DynamicSetCover({7: rect((0,), (4,))})
        delta = h.insert_point((2,))
        assert delta.added == (7,)
        assert h.cover() == ((7,), 1)
        h.check_invariants()

    def test_point_in_unique_rect(self):
        h = DynamicSetCover({0: rect((0,), (4,)), 1: rect((3,), (7,))})
        h.insert_point((6,))
        assert h.cover()[0] == (1,)
        h.insert_point((4,))
        h.check_invariants()
        ids, _ = h.cover()
        assert all(any(contains(h.rects[i], p) for i in ids) for p in h.live_points)

    def test_weight_classes_built(self):
        h = DynamicSetCover(
            {0: rect((0,), (2,)), 1: rect((1,), (5,)), 2: rect((4,), (9,))},
            weights={0: 1, 1: 3, 2: 5},
        )
        assert sorted(h.core.indexes) == [1, 4, 8]
        assert h.rounded == {0: 1, 1: 4, 2: 8}

    def test_uncoverable_point(self):
        h = DynamicSetCover({0: rect((0,), (4,))})
        with pytest.raises(InfeasibleError):
            h.insert_point((9,))

    def test_duplicate_and_unknown(self):
        h = DynamicSetCover({0: rect((0,), (4,))})
        h.insert_point((1,))
        with pytest.raises(PreconditionError):
            h.insert_point((1,))
        with pytest.raises(PreconditionError):
            h.delete_point((3,))

    def test_delete_returns_to_empty(self):
        h = DynamicSetCover({0: rect((0, 0), (4, 4)), 1: rect((2, 2), (8, 8))})
        h.insert_point((1, 1))
        h.insert_point((5, 5))
        h.delete_point((1, 1))
        h.delete_point((5, 5))
        assert h.cover() == ((), 0)
        assert h.live_points == ()
        h.check_invariants()

    def test_wrong_dimension(self):
        h = DynamicSetCover({0: rect((0,), (4,))})
        with pytest.raises(PreconditionError):
            h.insert_point((1, 2))

    def test_empty_family(self):
        with pytest.raises(PreconditionError):
            DynamicSetCover({})


def fuzz_setcover(seed, d, ops, n_rects, weighted, check_every=40):
    rng = random.Random(seed)
    span = 40
    rects = {}
    for sid in range(n_rects):
        lo = tuple(rng.randrange(0, span) for _ in range(d))
        hi = tuple(c + rng.randrange(1, 12) for c in lo)
        rects[sid] = rect(lo, hi)
    weights = {sid: rng.randrange(1, 9) for sid in rects} if weighted else None
    h = DynamicSetCover(rects, weights=weights)
    live = []
    for step in range(ops):
        if live and rng.random() < 0.4:
            p = live.pop(rng.randrange(len(live)))
            h.delete_point(p)
        else:
            sid = rng.randrange(n_rects)
            box = rects[sid]
            p = tuple(rng.randint(box.lo[k], box.hi[k]) for k in range(d))
            if p in live:
                continue
            h.insert_point(p)
            live.append(p)
        h.check_invariants()
        if live and step % check_every == 0:
            opt = opt_set_cover(live, rects, weights=h.rounded)
            f, mu = h.f_mu()
            assert h.cost <= 2 * f * mu * opt.value
    return h


class TestSetCoverFuzz:
    @pytest.mark.parametrize("seed,d", [(1, 1), (2, 1), (3, 2)])
    def test_unweighted(self, seed, d):
        h = fuzz_setcover(seed, d, ops=160, n_rects=10, weighted=False)
        assert len(h.touched_log) >= 1

    def test_weighted_2d(self):
        fuzz_setcover(9, 2, ops=120, n_rects=8, weighted=True)

    def test_deltas_replay(self):
        rng = random.Random(5)
        rects = {s: rect((s, 0), (s + 3, 5)) for s in range(6)}
        h = DynamicSetCover(rects)
        shadow = set()
        live = []
        for _ in range(150):
            if live and rng.random() < 0.45:
                p = live.pop(rng.randrange(len(live)))
                delta = h.delete_point(p)
            else:
                p = (rng.randrange(0, 9), rng.randrange(0, 6))
                if p in live:
                    continue
                delta = h.insert_point(p)
                live.append(p)
            shadow -= set(delta.removed)
            shadow |= set(delta.added)
            assert shadow == set(h.cover()[0])


class TestHittingBasics:
    def test_two_points_trace(self):
        h = DynamicHittingSet({0: (1,), 1: (3,)}, bound=4)
        d1 = h.insert_rect(rect((0,), (2,)))
        assert d1.added == (0,)
        h.insert_rect(rect((2,), (4,)))
        ids, w = h.hitting_set()
        assert ids == (0, 1) and w == 2
        h.check_invariants()
        opt = opt_hitting_set([(1,), (3,)], {0: rect((0,), (2,)), 1: rect((2,), (4,))})
        f, mu = h.f_mu()
        assert w <= 2 * f * mu * opt.value

    def test_single_point_hits_everything_or_rejects(self):
        h = DynamicHittingSet({0: (2, 2)}, bound=4)
        h.insert_rect(rect((1, 1), (3, 3)))
        assert h.hitting_set()[0] == (0,)
        with pytest.raises(InfeasibleError):
            h.insert_rect(rect((3, 3), (4, 4)))

    def test_rect_validation(self):
        h = DynamicHittingSet({0: (1, 1)}, bound=4)
        with pytest.raises(PreconditionError):
            h.insert_rect(rect((0,), (2,)))
        with pytest.raises(PreconditionError):
            h.insert_rect(rect((0, 0), (5, 5)))
        with pytest.raises(PreconditionError):
            h.delete_rect(rect((0, 0), (1, 1)))

    def test_duplicate_rect(self):
        h = DynamicHittingSet({0: (1, 1)}, bound=4)
        h.insert_rect(rect((0, 0), (2, 2)))
        with pytest.raises(PreconditionError):
            h.insert_rect(rect((0, 0), (2, 2)))

    def test_weighted_points(self):
        h = DynamicHittingSet(
            {0: (0,), 1: (2,), 2: (4,)}, weights={0: 5, 1: 1, 2: 3}, bound=8
        )
        assert sorted(h.core.indexes) == [1, 4, 8]
        h.insert_rect(rect((0,), (4,)))
        ids, w = h.hitting_set()
        assert len(ids) >= 1
        h.check_invariants()


def fuzz_hitting(seed, d, ops, n_points, weighted, check_every=40):
    rng = random.Random(seed)
    bound = 32
    points = {}
    while len(points) < n_points:
        p = tuple(rng.randrange(0, bound + 1) for _ in range(d))
        points[len(points)] = p
    weights = {i: rng.randrange(1, 9) for i in points} if weighted else None
    h = DynamicHittingSet(points, weights=weights, bound=bound)
    live = []
    for step in range(ops):
        if live and rng.random() < 0.4:
            box = live.pop(rng.randrange(len(live)))
            h.delete_rect(box)
        else:
            anchor = points[rng.randrange(n_points)]
            lo = tuple(max(0, c - rng.randrange(0, 6)) for c in anchor)
            hi = tuple(min(bound, c + rng.randrange(0, 6)) for c in anchor)
            box = rect(lo, hi)
            if (box.lo, box.hi) in {(b.lo, b.hi) for b in live}:
                continue
            h.insert_rect(box)
            live.append(box)
        h.check_invariants()
        if live and step % check_every == 0:
            pts = [points[i] for i in sorted(points)]
            opt = opt_hitting_set(pts, {k: b for k, b in enumerate(live)}, weights=h.rounded)
            f, mu = h.f_mu()
            assert h.cost <= 2 * f * mu * opt.value
    return h


class TestHittingFuzz:
    @pytest.mark.parametrize("seed,d", [(11, 1), (12, 2)])
    def test_unweighted(self, seed, d):
        fuzz_hitting(seed, d, ops=140, n_points=7, weighted=False)

    def test_weighted_1d(self):
        fuzz_hitting(13, 1, ops=120, n_points=6, weighted=True)

    def test_hit_relation_end_to_end(self):
        # chosen points must stab every live rectangle in original space
        rng = random.Random(21)
        points = {i: (rng.randrange(0, 16), rng.randrange(0, 16)) for i in range(5)}
        h = DynamicHittingSet(points, bound=16)
        inserted = 0
        for _ in range(60):
            pid = rng.randrange(5)
            ax, ay = points[pid]
            box = rect(
                (max(0, ax - rng.randrange(0, 4)), max(0, ay - rng.randrange(0, 4))),
                (min(16, ax + rng.randrange(0, 4)), min(16, ay + rng.randrange(0, 4))),
            )
            if (box.lo, box.hi) in dict(h._live):
                continue
            h.insert_rect(box)
            inserted += 1
            ids = h.hitting_set()[0]
            for b in h._live.values():
                assert any(contains(b, points[i]) for i in ids)
        assert inserted > 10
