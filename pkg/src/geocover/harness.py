"""Event replay: run an algorithm over an instance file's event log.

Each event is applied, feasibility of the current solution is re-checked,
and one CSV row with the fixed column set is recorded.  With the oracle flag
the exact optimum of the live configuration is computed after every event
and the cost ratio is reported alongside.

Algorithms are selected by name:

    interval   1-d online interval cover (insert-only points)
    quadcover  2-d online square cover on a power-of-two grid (insert-only)
    bbd        2-d online square cover over an upfront candidate point set
    hitcover   2-d online hitting set (insert-only ranges)
    dynsc      dynamic weighted set cover: fixed boxes, +P/-P point events
    dynhs      dynamic weighted hitting set: fixed points, +S/-S box events

The dynamic handles key elements by geometry, so live points (dynsc) or live
boxes (dynhs) must be pairwise distinct while live.
"""

import time
from dataclasses import dataclass
from typing import Optional

from .bbdcover import BBDCover
from .dynamic import DynamicHittingSet, DynamicSetCover
from .errors import InfeasibleError, PreconditionError
from .evaluation import IntervalCoverState, opt_hitting_set, opt_set_cover
from .hitcover import HittingState
from .instancefile import CSV_COLUMNS, Instance
from .quadcover import QuadtreeCover


@dataclass
class RunMetrics:
    run_id: str
    algo: str
    rows: list
    final_cost: float
    opt: Optional[float]
    ratio: Optional[float]
    f_meas: Optional[int]
    mu_meas: Optional[int]


def _require(cond, message):
    if not cond:
        raise PreconditionError(message)


class _IntervalAdapter:
    ops = {"+P"}

    def __init__(self, inst: Instance):
        _require(inst.mode == "set_cover", "interval runs set_cover instances")
        _require(inst.dim == 1, "interval is 1-d")
        _require(inst.sets, "interval needs SET records")
        self.state = IntervalCoverState(
            {sid: (b.lo[0], b.hi[0]) for sid, b in inst.sets.items()}
        )
        self.sets = inst.sets
        self.live = {}

    def apply(self, ev):
        added = self.state.insert(ev[2][0])
        self.live[ev[1]] = ev[2]
        return len(added)

    def check(self):
        for pid, p in self.live.items():
            if not self.state.covered(p[0]):
                raise InfeasibleError(f"live point {p} uncovered", entity=pid)

    def cost(self):
        return self.state.cost()

    def oracle(self):
        return opt_set_cover(list(self.live.values()), self.sets)

    def f_mu(self):
        return None


class _QuadAdapter:
    ops = {"+P"}

    def __init__(self, inst: Instance):
        _require(inst.mode == "set_cover", "quadcover runs set_cover instances")
        _require(inst.dim == 2, "quadcover is 2-d")
        self.state = QuadtreeCover(inst.grid, inst.sets)
        self.sets = inst.sets
        self.live = {}

    def apply(self, ev):
        added = self.state.insert(ev[2])
        self.live[ev[1]] = ev[2]
        return len(added)

    def check(self):
        for pid, p in self.live.items():
            if not self.state.is_covered(p):
                raise InfeasibleError(f"live point {p} uncovered", entity=pid)

    def cost(self):
        return self.state.cost()

    def oracle(self):
        return opt_set_cover(list(self.live.values()), self.sets)

    def f_mu(self):
        return None


class _BBDAdapter(_QuadAdapter):
    def __init__(self, inst: Instance):
        _require(inst.mode == "set_cover", "bbd runs set_cover instances")
        _require(inst.dim == 2, "bbd is 2-d")
        _require(inst.points, "bbd needs upfront POINT candidates")
        self.state = BBDCover(inst.grid, list(inst.points.values()), inst.sets)
        self.sets = inst.sets
        self.live = {}


class _HitAdapter:
    ops = {"+S"}

    def __init__(self, inst: Instance):
        _require(inst.mode == "hitting_set", "hitcover runs hitting_set instances")
        _require(inst.dim == 2, "hitcover is 2-d")
        _require(inst.points, "hitcover needs POINT candidates")
        self.state = HittingState(inst.grid, list(inst.points.values()))
        self.candidates = sorted(inst.points.values())
        self.live = {}

    def apply(self, ev):
        added = self.state.insert_range(ev[2])
        self.live[ev[1]] = ev[2]
        return len(added)

    def check(self):
        for sid, box in self.live.items():
            if not self.state.is_hit(box):
                raise InfeasibleError(f"live range {sid} unhit", entity=sid)

    def cost(self):
        return self.state.cost()

    def oracle(self):
        return opt_hitting_set(self.candidates, self.live)

    def f_mu(self):
        return None


class _DynScAdapter:
    ops = {"+P", "-P"}

    def __init__(self, inst: Instance):
        _require(inst.mode == "set_cover", "dynsc runs set_cover instances")
        _require(inst.sets, "dynsc needs SET records")
        weights = None
        if inst.weights:
            weights = {sid: inst.weights.get(sid, 1) for sid in inst.sets}
        self.handle = DynamicSetCover(inst.sets, weights=weights)
        self.live = {}

    def apply(self, ev):
        if ev[0] == "+P":
            delta = self.handle.insert_point(ev[2])
            self.live[ev[1]] = ev[2]
        else:
            delta = self.handle.delete_point(self.live.pop(ev[1]))
        return len(delta.added) + len(delta.removed)

    def check(self):
        self.handle.check_invariants()

    def cost(self):
        return self.handle.cost

    def oracle(self):
        return opt_set_cover(
            list(self.live.values()), self.handle.rects, weights=self.handle.rounded
        )

    def f_mu(self):
        return self.handle.f_mu()


class _DynHsAdapter:
    ops = {"+S", "-S"}

    def __init__(self, inst: Instance):
        _require(inst.mode == "hitting_set", "dynhs runs hitting_set instances")
        _require(inst.points, "dynhs needs POINT records")
        weights = None
        if inst.point_weights:
            weights = {
                pid: inst.point_weights.get(pid, 1) for pid in inst.points
            }
        self.handle = DynamicHittingSet(inst.points, weights=weights, bound=inst.grid)
        self.order = sorted(inst.points)
        self.live = {}

    def apply(self, ev):
        if ev[0] == "+S":
            delta = self.handle.insert_rect(ev[2])
            self.live[ev[1]] = ev[2]
        else:
            delta = self.handle.delete_rect(self.live.pop(ev[1]))
        return len(delta.added) + len(delta.removed)

    def check(self):
        self.handle.check_invariants()

    def cost(self):
        return self.handle.cost

    def oracle(self):
        pts = [self.handle.points[pid] for pid in self.order]
        weights = {k: self.handle.rounded[pid] for k, pid in enumerate(self.order)}
        return opt_hitting_set(pts, self.live, weights=weights)

    def f_mu(self):
        return self.handle.f_mu()


ALGORITHMS = {
    "interval": _IntervalAdapter,
    "quadcover": _QuadAdapter,
    "bbd": _BBDAdapter,
    "hitcover": _HitAdapter,
    "dynsc": _DynScAdapter,
    "dynhs": _DynHsAdapter,
}


def make_adapter(algo: str, inst: Instance):
    if algo not in ALGORITHMS:
        raise PreconditionError(
            f"unknown algorithm {algo!r}; choose from {','.join(sorted(ALGORITHMS))}"
        )
    return ALGORITHMS[algo](inst)


def run_experiment(
    inst: Instance,
    algo: str,
    oracle: bool = False,
    timing: str = "wall",
    run_id: Optional[str] = None,
) -> RunMetrics:
    """Replay the event log; returns per-event rows plus final figures."""
    adapter = make_adapter(algo, inst)
    rid = run_id if run_id is not None else f"{inst.name}:{algo}"
    rows = []
    opt_val = ratio_val = None
    for idx, ev in enumerate(inst.events):
        if ev[0] not in adapter.ops:
            raise PreconditionError(f"{algo} does not support {ev[0]} events")
        t0 = time.perf_counter()
        delta = adapter.apply(ev)
        micros = 0 if timing == "zero" else int((time.perf_counter() - t0) * 1e6)
        try:
            adapter.check()
        except AssertionError as exc:
            raise InfeasibleError(
                f"feasibility violation at event {idx}: {exc}", entity=idx
            ) from exc
        cost = adapter.cost()
        opt_s = ratio_s = ""
        if oracle:
            res = adapter.oracle()
            if res.optimal:
                opt_val = res.value
                ratio_val = cost / opt_val if opt_val else None
                opt_s = str(opt_val)
                ratio_s = "" if ratio_val is None else f"{ratio_val:.6f}"
        fm = adapter.f_mu()
        rows.append(
            {
                "run_id": rid,
                "algo": algo,
                "event_idx": idx,
                "op": ev[0],
                "cost": cost,
                "delta": delta,
                "opt": opt_s,
                "ratio": ratio_s,
                "f_meas": "" if fm is None else fm[0],
                "mu_meas": "" if fm is None else fm[1],
                "micros": micros,
            }
        )
    fm = adapter.f_mu()
    return RunMetrics(
        run_id=rid,
        algo=algo,
        rows=rows,
        final_cost=adapter.cost(),
        opt=opt_val,
        ratio=ratio_val,
        f_meas=None if fm is None else fm[0],
        mu_meas=None if fm is None else fm[1],
    )


def write_csv(rows, out) -> None:
    """Write rows (dicts with the fixed columns) to a file-like object."""
    import csv

    writer = csv.DictWriter(out, fieldnames=list(CSV_COLUMNS), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
