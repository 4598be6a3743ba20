"""Dynamic weighted set cover engine over an abstract incidence structure.

Primal-dual scheme with lazy eviction.  Every live element carries an integer
charge; a set's paid amount is the sum of charges over its live incident
elements.  Inserting an uncovered element raises its charge by the minimum
slack among its incident sets, which makes at least one set fully paid and
therefore chosen.  Deleting an element withdraws its charge; chosen sets whose
paid amount falls below weight/(1+eps) are evicted and any member left
uncovered is re-raised on the spot.

Charges never exceed any live set's weight, so the total charge is a feasible
fractional dual and the chosen weight stays within (1+eps)*f times the optimum,
f being the largest incidence count among live elements.  Weights must be
powers of two; rounding happens upstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import PreconditionError


@dataclass(frozen=True)
class CoverDelta:
    added: tuple[int, ...] = ()
    removed: tuple[int, ...] = ()

    @property
    def empty(self) -> bool:
        return not self.added and not self.removed


def _is_pow2(w: int) -> bool:
    return isinstance(w, int) and w >= 1 and (w & (w - 1)) == 0


class CoverEngine:
    def __init__(self, weights: Optional[Mapping[int, int]] = None, epsilon: float = 1.0):
        if not 0 < epsilon <= 1:
            raise PreconditionError(f"epsilon {epsilon} outside (0,1]")
        self.epsilon = epsilon
        self.weights: dict[int, int] = {}
        self.paid: dict[int, int] = {}
        self.chosen: set[int] = set()
        self._members: dict[int, set[int]] = {}
        self._elements: dict[int, tuple[tuple[int, ...], int]] = {}
        self.touched_log: list[int] = []
        if weights:
            for sid, w in weights.items():
                self.register_set(sid, w)

    # -- set table ------------------------------------------------------

    def register_set(self, sid: int, weight: int):
        if not _is_pow2(weight):
            raise PreconditionError(f"set {sid} weight {weight} is not a power of two")
        old = self.weights.get(sid)
        if old is not None:
            if old != weight:
                raise PreconditionError(f"set {sid} re-registered with weight {weight} != {old}")
            return
        self.weights[sid] = weight
        self.paid[sid] = 0
        self._members[sid] = set()

    # -- views ------------------------------------------------------------

    def current_cover(self) -> tuple[tuple[int, ...], int]:
        ids = tuple(sorted(self.chosen))
        return ids, sum(self.weights[s] for s in ids)

    @property
    def total_weight(self) -> int:
        return sum(self.weights[s] for s in self.chosen)

    @property
    def live_elements(self) -> tuple[int, ...]:
        return tuple(sorted(self._elements))

    @property
    def frequency(self) -> int:
        if not self._elements:
            return 0
        return max(len(inc) for inc, _ in self._elements.values())

    def charge_of(self, eid: int) -> int:
        return self._elements[eid][1]

    def is_covered(self, eid: int) -> bool:
        inc, _ = self._elements[eid]
        return any(s in self.chosen for s in inc)

    # -- operations ---------------------------------------------------------

    def insert_element(self, eid: int, incident) -> CoverDelta:
        if eid in self._elements:
            raise PreconditionError(f"duplicate element {eid}")
        if isinstance(incident, Mapping):
            for sid, w in incident.items():
                self.register_set(sid, w)
            inc = tuple(sorted(incident))
        else:
            inc = tuple(sorted(set(incident)))
            for sid in inc:
                if sid not in self.weights:
                    raise PreconditionError(f"unknown set {sid}")
        if not inc:
            raise PreconditionError(f"element {eid} has no incident sets")
        before = set(self.chosen)
        self._elements[eid] = (inc, 0)
        for sid in inc:
            self._members[sid].add(eid)
        touched = len(inc)
        if not any(s in self.chosen for s in inc):
            self._raise(eid)
        self.touched_log.append(touched)
        return self._delta(before)

    def delete_element(self, eid: int) -> CoverDelta:
        entry = self._elements.get(eid)
        if entry is None:
            raise PreconditionError(f"unknown element {eid}")
        inc, charge = entry
        before = set(self.chosen)
        touched = len(inc)
        del self._elements[eid]
        for sid in inc:
            self._members[sid].discard(eid)
        if charge:
            for sid in inc:
                self.paid[sid] -= charge
                assert self.paid[sid] >= 0
        evicted = []
        for sid in inc:
            if sid in self.chosen and self.paid[sid] * (1 + self.epsilon) < self.weights[sid]:
                self.chosen.discard(sid)
                evicted.append(sid)
        affected = sorted(
            {e for sid in evicted for e in self._members[sid] if not self.is_covered(e)}
        )
        for e in affected:
            touched += len(self._elements[e][0])
            if not self.is_covered(e):
                # an earlier re-raise may have already re-covered e
                self._raise(e)
        self.touched_log.append(touched)
        return self._delta(before)

    # -- internals ------------------------------------------------------

    def _raise(self, eid: int):
        inc, charge = self._elements[eid]
        delta = min(self.weights[s] - self.paid[s] for s in inc)
        assert delta > 0, "raising a covered or overpaid element"
        self._elements[eid] = (inc, charge + delta)
        for sid in inc:
            self.paid[sid] += delta
            assert self.paid[sid] <= self.weights[sid]
            if self.paid[sid] == self.weights[sid]:
                self.chosen.add(sid)

    def _delta(self, before: set[int]) -> CoverDelta:
        return CoverDelta(
            added=tuple(sorted(self.chosen - before)),
            removed=tuple(sorted(before - self.chosen)),
        )

    # -- diagnostics ----------------------------------------------------

    def check_invariants(self):
        """Full sweep; meant for tests, cost is linear in the instance."""
        tally = {sid: 0 for sid in self.weights}
        for inc, charge in self._elements.values():
            for sid in inc:
                tally[sid] += charge
        for sid, w in self.weights.items():
            assert self.paid[sid] == tally[sid], f"paid drift on set {sid}"
            assert 0 <= self.paid[sid] <= w
            if sid in self.chosen:
                assert self.paid[sid] * (1 + self.epsilon) >= w
        for eid in self._elements:
            assert self.is_covered(eid), f"element {eid} uncovered"
