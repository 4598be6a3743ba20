"""Dynamic geometric covering front ends.

Two symmetric handles built from the same parts:

- DynamicSetCover: a fixed family of closed rectangles, points arriving and
  leaving.  Rectangles are rank-reduced, lifted to equal-sided boxes in twice
  the dimension, translated to the nonnegative orthant, and indexed per
  rounded weight by a FragmentIndex.  A point becomes its dual vector, is
  snapped into the doubled rank grid, and its incident fragments feed the
  primal-dual engine.  Chosen fragments are reported as their source
  rectangle ids.

- DynamicHittingSet: a fixed weighted point set, rectangles arriving and
  leaving.  Each point owns a side-N box in twice the dimension; a rectangle
  dualizes to a vector that lands in exactly the boxes of the points stabbing
  it, which turns hitting into covering with roles swapped.

Both report per-update deltas in source ids and keep the materialized
solution; approximation quality is governed by the engine bound times the
measured fragment frequency and decomposition size.
"""

from __future__ import annotations

import time
from typing import Mapping, Optional, Sequence

from .engine import CoverDelta, CoverEngine
from .errors import InfeasibleError, PreconditionError
from .extquad import FragmentIndex
from .geometry import AxisBox, InstanceMeta, contains, next_pow2, rank_space_reduce
from .transforms import (
    point_to_cube,
    point_to_dual,
    rect_to_cube,
    rect_to_point,
    round_weight,
    weight_classes,
)


def _normalize_family(family, what: str) -> dict:
    if isinstance(family, Mapping):
        out = dict(family)
    else:
        out = dict(enumerate(family))
    if not out:
        raise PreconditionError(f"no {what} given")
    return out


def _rounded_weights(ids, weights) -> dict:
    if weights is None:
        return {i: 1 for i in ids}
    missing = [i for i in ids if i not in weights]
    if missing:
        raise PreconditionError(f"weights missing for ids {missing[:5]}")
    return {i: round_weight(weights[i]) for i in ids}


class _FragmentedCover:
    """Shared core: weight-class fragment indexes in front of the engine."""

    def __init__(self, cubes: dict, rounded: dict, bound: int, epsilon: float):
        self.engine = CoverEngine(epsilon=epsilon)
        self.indexes: dict[int, FragmentIndex] = {}
        self._frag_source: dict[tuple, object] = {}
        self._source_count: dict = {}
        self._solution: set = set()
        self._mu_cache: Optional[int] = None
        self.f_meas = 0
        start = time.monotonic()
        for w, ids in sorted(weight_classes(rounded).items()):
            idx = FragmentIndex({i: cubes[i] for i in ids}, bound=bound)
            self.indexes[w] = idx
            for fid, frag in idx.fragments.items():
                sid = (w, fid)
                self.engine.register_set(sid, w)
                self._frag_source[sid] = frag.source_id
        self.build_micros = int((time.monotonic() - start) * 1_000_000)

    def incident_fragments(self, query_point) -> list[tuple]:
        return [
            (w, fid)
            for w, idx in self.indexes.items()
            for fid in idx.sets_containing(query_point)
        ]

    def _translate(self, delta: CoverDelta) -> CoverDelta:
        added, removed = [], []
        for sid in delta.added:
            src = self._frag_source[sid]
            n = self._source_count.get(src, 0) + 1
            self._source_count[src] = n
            if n == 1:
                self._solution.add(src)
                added.append(src)
        for sid in delta.removed:
            src = self._frag_source[sid]
            n = self._source_count[src] - 1
            self._source_count[src] = n
            if n == 0:
                self._solution.discard(src)
                removed.append(src)
        return CoverDelta(added=tuple(sorted(added)), removed=tuple(sorted(removed)))

    def _insert(self, eid, query_point, entity) -> CoverDelta:
        incident = self.incident_fragments(query_point)
        if not incident:
            raise InfeasibleError(f"{entity} is not covered by any input", entity)
        self.f_meas = max(self.f_meas, len(incident))
        return self._translate(self.engine.insert_element(eid, incident))

    def _delete(self, eid) -> CoverDelta:
        return self._translate(self.engine.delete_element(eid))

    def solution_ids(self) -> tuple:
        return tuple(sorted(self._solution))

    @property
    def mu_meas(self) -> int:
        # the fragment indexes are frozen after construction, so this only
        # has to be computed once
        if self._mu_cache is None:
            mu = 1
            for idx in self.indexes.values():
                for src in idx.boxes:
                    mu = max(mu, len(idx.cover_decomposition(src)))
            self._mu_cache = mu
        return self._mu_cache

    @property
    def touched_log(self) -> list[int]:
        return self.engine.touched_log


class DynamicSetCover:
    """Fixed closed rectangles, dynamic points."""

    def __init__(self, rects, weights=None, epsilon: float = 1.0):
        self.rects = _normalize_family(rects, "rectangles")
        dims = {b.dim for b in self.rects.values()}
        if len(dims) != 1:
            raise PreconditionError("rectangles of mixed dimension")
        self.d = dims.pop()
        for sid, b in self.rects.items():
            if not b.closed:
                raise PreconditionError(f"rectangle {sid} must be closed")
        self.rounded = _rounded_weights(self.rects, weights)
        order = sorted(self.rects)
        _, self.rank_map = rank_space_reduce([self.rects[i] for i in order])
        # doubled rank coordinates stay below E; the lift negates the first
        # d axes and pads every axis by the cube side, also below E
        E = 2 * max(len(eps) for eps in self.rank_map.axis_endpoints)
        self.shift = tuple([2 * E] * self.d + [E] * self.d)
        self.bound = 2 * E
        cubes = {}
        for sid in order:
            lifted = rect_to_cube(self.rank_map.embed_box(self.rects[sid]), sid).cube
            cubes[sid] = AxisBox(
                tuple(c + s for c, s in zip(lifted.lo, self.shift)),
                tuple(c + s for c, s in zip(lifted.hi, self.shift)),
            )
        self.core = _FragmentedCover(cubes, self.rounded, self.bound, epsilon)
        self.meta = InstanceMeta(
            N=next_pow2(self.bound + 1),
            d=self.d,
            m=len(self.rects),
            W=max(self.rounded.values()),
            shift=self.shift,
        )
        self._live: dict[tuple, tuple] = {}

    def _transform(self, p) -> tuple:
        key = tuple(p)
        if len(key) != self.d:
            raise PreconditionError(f"point {p} has dimension {len(key)} != {self.d}")
        dual = point_to_dual(self.rank_map.embed_point(key))
        return tuple(c + s for c, s in zip(dual, self.shift))

    def insert_point(self, p) -> CoverDelta:
        key = tuple(p)
        q = self._transform(key)
        delta = self.core._insert(key, q, key)
        self._live[key] = q
        return delta

    def delete_point(self, p) -> CoverDelta:
        key = tuple(p)
        delta = self.core._delete(key)
        self._live.pop(key, None)
        return delta

    def cover(self) -> tuple[tuple, int]:
        ids = self.core.solution_ids()
        return ids, sum(self.rounded[i] for i in ids)

    @property
    def cost(self) -> int:
        return self.cover()[1]

    @property
    def live_points(self) -> tuple:
        return tuple(sorted(self._live))

    def f_mu(self) -> tuple[int, int]:
        return max(self.core.f_meas, 1), self.core.mu_meas

    @property
    def touched_log(self):
        return self.core.touched_log

    def check_invariants(self):
        self.core.engine.check_invariants()
        ids = self.core.solution_ids()
        for p in self._live:
            assert any(
                contains(self.rects[i], p) for i in ids
            ), f"live point {p} not covered by any chosen rectangle"


class DynamicHittingSet:
    """Fixed weighted points, dynamic closed rectangles."""

    def __init__(self, points, weights=None, bound: Optional[int] = None, epsilon: float = 1.0):
        self.points = {
            pid: tuple(p) for pid, p in _normalize_family(points, "points").items()
        }
        dims = {len(p) for p in self.points.values()}
        if len(dims) != 1:
            raise PreconditionError("points of mixed dimension")
        self.d = dims.pop()
        top = max(max(p) for p in self.points.values())
        low = min(min(p) for p in self.points.values())
        if low < 0:
            raise PreconditionError("point coordinates must be nonnegative")
        self.N = bound if bound is not None else next_pow2(max(top, 1))
        if top > self.N:
            raise PreconditionError(f"point above bound {self.N}")
        self.rounded = _rounded_weights(self.points, weights)
        order = sorted(self.points)
        own_cubes = [point_to_cube(self.points[pid], self.N) for pid in order]
        _, self.rank_map = rank_space_reduce(own_cubes)
        cubes = {
            pid: self.rank_map.embed_box(own_cubes[k]) for k, pid in enumerate(order)
        }
        self.bound = 2 * max(len(eps) for eps in self.rank_map.axis_endpoints)
        self.core = _FragmentedCover(cubes, self.rounded, self.bound, epsilon)
        self.meta = InstanceMeta(
            N=next_pow2(self.N),
            d=self.d,
            n=len(self.points),
            W=max(self.rounded.values()),
        )
        self._live: dict[tuple, AxisBox] = {}

    def _validate(self, box: AxisBox) -> tuple:
        if not isinstance(box, AxisBox) or box.dim != self.d or not box.closed:
            raise PreconditionError(f"expected a closed {self.d}-dim rectangle")
        if min(box.lo) < 0 or max(box.hi) > self.N:
            raise PreconditionError(f"rectangle leaves [0,{self.N}]^{self.d}")
        return (box.lo, box.hi)

    def insert_rect(self, box: AxisBox) -> CoverDelta:
        key = self._validate(box)
        q = self.rank_map.embed_point(rect_to_point(box))
        delta = self.core._insert(key, q, key)
        self._live[key] = box
        return delta

    def delete_rect(self, box: AxisBox) -> CoverDelta:
        key = self._validate(box)
        delta = self.core._delete(key)
        self._live.pop(key, None)
        return delta

    def hitting_set(self) -> tuple[tuple, int]:
        ids = self.core.solution_ids()
        return ids, sum(self.rounded[i] for i in ids)

    @property
    def cost(self) -> int:
        return self.hitting_set()[1]

    @property
    def live_rects(self) -> tuple:
        return tuple(sorted(self._live))

    def f_mu(self) -> tuple[int, int]:
        return max(self.core.f_meas, 1), self.core.mu_meas

    @property
    def touched_log(self):
        return self.core.touched_log

    def check_invariants(self):
        self.core.engine.check_invariants()
        ids = self.core.solution_ids()
        hit_pts = [self.points[i] for i in ids]
        for box in self._live.values():
            assert any(
                contains(box, p) for p in hit_pts
            ), f"live rectangle {box} not hit by any chosen point"
