"""Exact optima, the 1-D baseline, and adversarial lower-bound instances.

The oracle is a plain branch-and-bound over set incidences: greedy gives the
first upper bound, and subtrees are pruned with the LP-free bound
(uncovered count / best coverage) * (cheapest remaining weight).  It is
meant for desk-scale verification, so it carries explicit node and time
budgets instead of clever data structures.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .errors import InfeasibleError, PreconditionError
from .geometry import AxisBox, Point, contains, next_pow2


@dataclass
class OracleResult:
    value: int | float
    ids: tuple
    nodes: int
    timed_out: bool

    @property
    def optimal(self) -> bool:
        return not self.timed_out


def opt_cover_system(
    elements: Sequence,
    sets: Mapping,
    weights: Mapping | None = None,
    node_budget: int = 10_000_000,
    time_budget: float = 10.0,
) -> OracleResult:
    """Minimum-weight cover of ``elements`` by the given id -> member-set map.

    Returns the exact optimum unless a budget is hit, in which case the best
    cover found so far is returned with ``timed_out=True``.
    """
    universe = list(dict.fromkeys(elements))
    if not universe:
        return OracleResult(0, (), 0, False)
    uset = set(universe)
    order = {e: i for i, e in enumerate(universe)}
    live = {}
    for sid in sorted(sets):
        members = frozenset(e for e in sets[sid] if e in uset)
        if members:
            live[sid] = members
    wt = {sid: (weights[sid] if weights else 1) for sid in live}
    candidates: dict = {e: [] for e in universe}
    for sid, members in live.items():
        for e in members:
            candidates[e].append(sid)
    for e, cands in candidates.items():
        if not cands:
            raise InfeasibleError(f"element {e!r} is not coverable", entity=e)

    # Greedy upper bound: cheapest weight per newly covered element.
    uncovered = set(universe)
    greedy_ids = []
    greedy_cost = 0
    while uncovered:
        best_sid, best_ratio = None, None
        for sid, members in live.items():
            gain = len(members & uncovered)
            if gain == 0:
                continue
            ratio = wt[sid] / gain
            if best_ratio is None or ratio < best_ratio or (ratio == best_ratio and sid < best_sid):
                best_sid, best_ratio = sid, ratio
        greedy_ids.append(best_sid)
        greedy_cost += wt[best_sid]
        uncovered -= live[best_sid]

    best = {"cost": greedy_cost, "ids": tuple(sorted(greedy_ids))}
    start = time.monotonic()
    state = {"nodes": 0, "timed_out": False}
    min_weight = min(wt.values())
    max_cover = max(len(m) for m in live.values())

    def lower_bound(n_uncovered: int) -> float:
        return -(-n_uncovered // max_cover) * min_weight

    def search(uncov: frozenset, cost, chosen: tuple):
        state["nodes"] += 1
        if state["nodes"] > node_budget:
            state["timed_out"] = True
            return
        if state["nodes"] % 4096 == 0 and time.monotonic() - start > time_budget:
            state["timed_out"] = True
            return
        if not uncov:
            if cost < best["cost"] or (cost == best["cost"] and tuple(sorted(chosen)) < best["ids"]):
                best["cost"] = cost
                best["ids"] = tuple(sorted(chosen))
            return
        if cost + lower_bound(len(uncov)) >= best["cost"]:
            return
        # Branch on the uncovered element with the fewest candidates.
        pivot = min(uncov, key=lambda e: (len(candidates[e]), order[e]))
        opts = sorted(candidates[pivot], key=lambda sid: (wt[sid], -len(live[sid]), sid))
        for sid in opts:
            if state["timed_out"]:
                return
            search(uncov - live[sid], cost + wt[sid], chosen + (sid,))

    search(frozenset(universe), 0, ())
    return OracleResult(best["cost"], best["ids"], state["nodes"], state["timed_out"])


def _point_tuple(p) -> tuple[int, ...]:
    return p.coords if isinstance(p, Point) else tuple(p)


def opt_set_cover(points: Sequence, boxes: Mapping[int, AxisBox], weights=None, **budgets) -> OracleResult:
    """Exact minimum (weight) number of boxes covering all points."""
    pts = [_point_tuple(p) for p in points]
    sets = {sid: {i for i, p in enumerate(pts) if contains(box, p)} for sid, box in boxes.items()}
    return opt_cover_system(range(len(pts)), sets, weights=weights, **budgets)


def opt_hitting_set(points: Sequence, boxes: Mapping[int, AxisBox], weights=None, **budgets) -> OracleResult:
    """Exact minimum (weight) number of points stabbing all boxes."""
    pts = [_point_tuple(p) for p in points]
    sets = {i: {sid for sid, box in boxes.items() if contains(box, p)} for i, p in enumerate(pts)}
    return opt_cover_system(sorted(boxes), sets, weights=weights, **budgets)


# ---------------------------------------------------------------------------
# 1-D baseline: cover arriving points with intervals.


class IntervalCoverState:
    """Online interval cover: on an uncovered point take both extremes.

    For every uncovered point the interval reaching furthest right and the
    interval reaching furthest left (among those containing the point) are
    both chosen, which caps the total cost at twice the offline optimum.
    """

    def __init__(self, intervals: Mapping[int, tuple[int, int]]):
        for iid, (lo, hi) in intervals.items():
            if lo > hi:
                raise PreconditionError(f"interval {iid} inverted")
        self.intervals = dict(intervals)
        self.chosen: list[int] = []
        self._chosen_set: set[int] = set()
        self.points: list[int] = []

    def covered(self, x: int) -> bool:
        return any(self.intervals[i][0] <= x <= self.intervals[i][1] for i in self._chosen_set)

    def insert(self, x: int) -> list[int]:
        self.points.append(x)
        if self.covered(x):
            return []
        cands = [i for i, (lo, hi) in self.intervals.items() if lo <= x <= hi]
        if not cands:
            raise InfeasibleError(f"point {x} not inside any interval", entity=x)
        right = min(cands, key=lambda i: (-self.intervals[i][1], i))
        left = min(cands, key=lambda i: (self.intervals[i][0], i))
        added = sorted({left, right})
        self.chosen.extend(added)
        self._chosen_set.update(added)
        return added

    def mass(self, sid) -> int:
        """1 when the interval is chosen; the probe game reads this."""
        return 1 if sid in self._chosen_set else 0

    def cost(self) -> int:
        return len(self._chosen_set)


TIGHT_INTERVALS = {0: (0, 1), 1: (1, 2), 2: (2, 3), 3: (3, 4)}


# ---------------------------------------------------------------------------
# Lower-bound instance families (all coordinates pre-doubled to stay integral:
# the classic half-integer points become odd integers).


@dataclass
class LowerBoundInstance:
    """A family of ranges plus the lattice of probe points p(i, j).

    Probe point (i, j) with 1 <= i <= j <= m lies in exactly the ranges
    i..j, so an adversary can halve the candidate range with each probe.
    """

    kind: str
    m: int
    N: int
    sets: dict[int, AxisBox] = field(default_factory=dict)
    _point_fn: Callable[[int, int], tuple[int, int]] | None = None

    def point(self, i: int, j: int) -> tuple[int, int]:
        if not (1 <= i <= j <= self.m):
            raise PreconditionError(f"probe ({i},{j}) outside 1..{self.m}")
        return self._point_fn(i, j)


def gen_quadrant_lb(m: int) -> LowerBoundInstance:
    """m nested-corner rectangles ("quadrants" clipped to the grid)."""
    if m < 2 or (m & (m - 1)) != 0:
        raise PreconditionError("m must be a power of two >= 2")
    N = next_pow2(2 * m + 1)
    sets = {k: AxisBox((0, 0), (2 * k, 2 * (m - k + 1))) for k in range(1, m + 1)}

    def point(i, j):
        return (2 * i - 1, 2 * (m - j) + 1)

    return LowerBoundInstance("quadrant", m, N, sets, point)


def gen_unitsquare_lb(m: int) -> LowerBoundInstance:
    """m congruent squares on a diagonal, same probe-point incidence pattern.

    Squares have side 2m in the stored (doubled, translated) coordinates;
    square k sits at bottom-left (2k-2, 2m-2k).
    """
    if m < 2 or (m & (m - 1)) != 0:
        raise PreconditionError("m must be a power of two >= 2")
    N = next_pow2(4 * m - 1)
    shift = 2 * (m - 1)
    sets = {}
    for k in range(1, m + 1):
        lo = (2 * (k - m) + shift, 2 * (1 - k) + shift)
        sets[k] = AxisBox(lo, (lo[0] + 2 * m, lo[1] + 2 * m))

    def point(i, j):
        return (2 * i - 1 + shift, 2 * (m - j) + 1 + shift)

    return LowerBoundInstance("unitsquare", m, N, sets, point)


# ---------------------------------------------------------------------------
# Adversary drivers.  A player exposes insert(point), mass(set_id) and
# cost(); chosen-or-not algorithms report mass 1/0.


@dataclass
class AdversaryRound:
    point: tuple[int, int]
    cost_after: float


@dataclass
class AdversaryTrace:
    rounds: list[AdversaryRound]
    final_cost: float
    opt: int
    surviving_set: int

    @property
    def ratio(self) -> float:
        return self.final_cost / self.opt


def play_halving_adversary(player, instance: LowerBoundInstance, verify_opt: bool = True) -> AdversaryTrace:
    """Probe, then repeatedly re-probe the half carrying less algorithm mass."""
    lo, hi = 1, instance.m
    rounds = []
    pts = []

    def present(i, j):
        p = instance.point(i, j)
        pts.append(p)
        player.insert(p)
        rounds.append(AdversaryRound(p, player.cost()))

    present(lo, hi)
    while lo < hi:
        mid = (lo + hi) // 2
        left = sum(player.mass(k) for k in range(lo, mid + 1))
        right = sum(player.mass(k) for k in range(mid + 1, hi + 1))
        if left >= right:
            lo = mid + 1
        else:
            hi = mid
        present(lo, hi)

    opt = 1
    if verify_opt:
        res = opt_set_cover(pts, instance.sets)
        opt = res.value
    return AdversaryTrace(rounds, player.cost(), opt, lo)


def play_interval_adversary(player) -> AdversaryTrace:
    """Fixed four-interval script that forces cost 2 against any online cover.

    Intervals are [0,1],[1,2],[2,3],[3,4] (ids 0..3).  After the probe at 2
    the follow-up goes to whichever side the player left exposed.
    """
    rounds = []

    def present(x):
        player.insert(x)
        rounds.append(AdversaryRound((x,), player.cost()))

    present(2)
    picked_b = player.mass(1) > 0
    picked_c = player.mass(2) > 0
    if not (picked_b and picked_c):
        present(3 if picked_b else 1)
    return AdversaryTrace(rounds, player.cost(), 1, -1)


class GreedyAllPlayer:
    """Strawman: picks every set containing each new point."""

    def __init__(self, sets: Mapping[int, AxisBox]):
        self.sets = dict(sets)
        self.chosen: set[int] = set()

    def insert(self, p):
        for sid, box in self.sets.items():
            if contains(box, p):
                self.chosen.add(sid)

    def mass(self, sid) -> int:
        return 1 if sid in self.chosen else 0

    def cost(self) -> int:
        return len(self.chosen)
