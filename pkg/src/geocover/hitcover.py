"""Online hitting set for axis-parallel boxes over a fixed candidate point set.

Candidate points live on the integer grid [0,N)^2, N a power of two.  Boxes
arrive one at a time; the maintained hitting set only ever grows.  A missed
box is anchored at its coarsest-level candidate point q and split into four
corner pieces at q.  Each piece scans grid cells coarse to fine (cells are
CLOSED here, so a point on a cell border belongs to up to four cells per
level; with half-open cells a thin box hugging the grid boundary can fail to
match any cell at all).  The first cell that (a) sits inside the piece's
quadrant, (b) has a full edge inside the piece, and (c) has one of its
per-edge closest candidates inside the piece gets "activated": all its
per-edge closest candidates join the hitting set.

Activation adds at most four points per piece, so a round adds at most 16,
and an activated cell never activates again: its closest candidates are
already in the hitting set, so condition (c) would certify the box as hit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import InfeasibleError, PreconditionError
from .geometry import AxisBox, contains

_QUADRANTS = ((-1, -1), (1, -1), (-1, 1), (1, 1))


@dataclass
class Activation:
    quadrant: Optional[tuple[int, int]]
    cell: Optional[tuple[int, int, int]]  # (level, ix, iy); None for a direct point
    added: tuple[tuple[int, int], ...]


@dataclass
class RoundReport:
    box: AxisBox
    anchor: tuple[int, int]
    activations: list[Activation] = field(default_factory=list)

    @property
    def added_points(self) -> list[tuple[int, int]]:
        out = []
        for act in self.activations:
            out.extend(act.added)
        return out


class HittingState:
    def __init__(self, N: int, points: Iterable[tuple[int, int]]):
        if N < 2 or (N & (N - 1)) != 0:
            raise PreconditionError(f"grid bound {N} must be a power of two >= 2")
        self.N = N
        self.levels = N.bit_length() - 1
        pts = sorted(set(map(tuple, points)))
        for p in pts:
            if len(p) != 2 or not all(isinstance(c, int) and 0 <= c < N for c in p):
                raise PreconditionError(f"candidate {p} outside [0,{N})^2")
        if not pts:
            raise PreconditionError("empty candidate point set")
        self.points = pts
        self.hitting: list[tuple[int, int]] = []
        self._hit_set: set[tuple[int, int]] = set()
        self._closest_cache: dict[tuple[int, int, int], tuple] = {}
        self._point_cells: dict[int, list[tuple[int, int]]] = {}
        self._activated_cells: set = set()
        self.round_log: list[RoundReport] = []
        self.boxes_seen = 0

    # -- level machinery ----------------------------------------------------

    def level_of(self, p) -> int:
        """Coarsest refinement level at which both coordinates are on-grid."""
        s = self.N
        for c in p:
            if c:
                s = min(s, c & -c)
        return (self.N // s).bit_length() - 1

    def _cells_containing(self, p, level: int):
        """Closed cells at a level containing p: up to 4 via border sharing."""
        s = self.N >> level
        out = []
        for ix in {p[0] // s} | ({p[0] // s - 1} if p[0] % s == 0 and p[0] > 0 else set()):
            for iy in {p[1] // s} | ({p[1] // s - 1} if p[1] % s == 0 and p[1] > 0 else set()):
                out.append((ix, iy))
        return out

    def _closest_points(self, level: int, ix: int, iy: int) -> tuple:
        """Per-edge nearest candidates inside the closed cell; cached, P is fixed."""
        key = (level, ix, iy)
        got = self._closest_cache.get(key)
        if got is not None:
            return got
        s = self.N >> level
        x0, y0, x1, y1 = ix * s, iy * s, (ix + 1) * s, (iy + 1) * s
        inside = [p for p in self.points if x0 <= p[0] <= x1 and y0 <= p[1] <= y1]
        picks = ()
        if inside:
            picks = tuple(
                sorted(
                    {
                        min(inside, key=lambda p: (p[1] - y0, p)),
                        min(inside, key=lambda p: (y1 - p[1], p)),
                        min(inside, key=lambda p: (p[0] - x0, p)),
                        min(inside, key=lambda p: (x1 - p[0], p)),
                    }
                )
            )
        self._closest_cache[key] = picks
        return picks

    # -- round machinery ----------------------------------------------------

    def _cells_with_points(self, level: int) -> list[tuple[int, int]]:
        """Row-major closed cells holding at least one candidate; cached."""
        got = self._point_cells.get(level)
        if got is None:
            cells = set()
            for p in self.points:
                cells.update(self._cells_containing(p, level))
            got = sorted(cells, key=lambda c: (c[1], c[0]))
            self._point_cells[level] = got
        return got

    def _scan_piece(self, piece: AxisBox, q, dx: int, dy: int):
        """First (level, row-major) closed cell qualifying for this piece.

        Cells without candidates can never satisfy the closest-point test,
        so only candidate-holding cells are enumerated.
        """
        for level in range(self.levels + 1):
            s = self.N >> level
            for ix, iy in self._cells_with_points(level):
                x0, y0, x1, y1 = ix * s, iy * s, (ix + 1) * s, (iy + 1) * s
                if (x1 <= q[0] if dx < 0 else x0 >= q[0]) and (
                    y1 <= q[1] if dy < 0 else y0 >= q[1]
                ):
                    lo, hi = piece.lo, piece.hi
                    horiz_x = lo[0] <= x0 and x1 <= hi[0]
                    vert_y = lo[1] <= y0 and y1 <= hi[1]
                    has_edge = (
                        (horiz_x and (lo[1] <= y0 <= hi[1] or lo[1] <= y1 <= hi[1]))
                        or (vert_y and (lo[0] <= x0 <= hi[0] or lo[0] <= x1 <= hi[0]))
                    )
                    if not has_edge:
                        continue
                    closest = self._closest_points(level, ix, iy)
                    if any(contains(piece, w) for w in closest):
                        return (level, ix, iy), closest
        return None, ()

    def insert_range(self, box: AxisBox) -> list[tuple[int, int]]:
        """Feed one box; returns candidates newly added to the hitting set."""
        if box.dim != 2 or not box.closed:
            raise PreconditionError("ranges must be closed 2-d boxes")
        if not all(0 <= lo and hi <= self.N for lo, hi in zip(box.lo, box.hi)):
            raise PreconditionError(f"range {box} leaves [0,{self.N}]^2")
        self.boxes_seen += 1
        if any(contains(box, p) for p in self.hitting):
            return []
        inside = [p for p in self.points if contains(box, p)]
        if not inside:
            raise InfeasibleError(f"no candidate point inside {box}", entity=box)
        q = min(inside, key=lambda p: (self.level_of(p), p))
        report = RoundReport(box, q)
        newly: list[tuple[int, int]] = []

        def admit(pts):
            added = []
            for p in pts:
                if p not in self._hit_set:
                    self._hit_set.add(p)
                    self.hitting.append(p)
                    added.append(p)
            newly.extend(added)
            return tuple(added)

        if box.lo == box.hi:
            # Degenerate single-point box: no cell edge can fit inside it.
            report.activations.append(Activation(None, None, admit([q])))
        else:
            for dx, dy in _QUADRANTS:
                lo = (box.lo[0] if dx < 0 else q[0], box.lo[1] if dy < 0 else q[1])
                hi = (q[0] if dx < 0 else box.hi[0], q[1] if dy < 0 else box.hi[1])
                piece = AxisBox(lo, hi)
                cell, closest = self._scan_piece(piece, q, dx, dy)
                if cell is None:
                    continue
                assert cell not in self._activated_cells, "cell activated twice"
                self._activated_cells.add(cell)
                report.activations.append(Activation((dx, dy), cell, admit(closest)))
        self.round_log.append(report)
        if not any(contains(box, p) for p in self.hitting):
            raise InfeasibleError(f"round failed to hit {box}", entity=box)
        return sorted(newly)

    # -- reporting ----------------------------------------------------------

    def cost(self) -> int:
        return len(self.hitting)

    def hitting_points(self) -> list[tuple[int, int]]:
        return sorted(self.hitting)

    def is_hit(self, box: AxisBox) -> bool:
        return any(contains(box, p) for p in self.hitting)
