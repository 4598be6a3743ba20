"""Online square cover on a power-of-two grid, driven by a quad tree.

The grid [0,N)^2 is refined into half-open cells down to unit size.  A cell
gets worked on ("explored") when some arrived point inside it is not yet
covered by the squares selected at the cell's proper ancestors.  What gets
selected at a cell depends on the cell alone: for each of its four edges,
the input square that contains the whole edge and overlaps the cell in the
largest area; at a unit cell additionally a direct cover for the cell's one
grid point if the edge picks miss it.  Because the selection is a pure
function of the cell, the chosen set can only grow as points arrive, and
the final answer does not depend on arrival order.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .errors import InfeasibleError, PreconditionError
from .geometry import AxisBox, contains, overlap_length


class QuadtreeCover:
    """Online state: feed points with insert(), read off chosen square ids."""

    def __init__(self, N: int, squares: Mapping[int, AxisBox]):
        if N < 1 or (N & (N - 1)) != 0:
            raise PreconditionError(f"grid bound {N} must be a power of two")
        for sid, sq in squares.items():
            if sq.dim != 2:
                raise PreconditionError(f"square {sid} is not 2-d")
            if not sq.is_cube():
                raise PreconditionError(f"square {sid} has unequal sides")
        self.N = N
        self.levels = N.bit_length() - 1
        self.squares = dict(squares)
        self._ids = sorted(squares)
        self.explored: dict[tuple[int, int, int], tuple[int, ...]] = {}
        self.chosen: set[int] = set()
        self.points: list[tuple[int, int]] = []

    # -- geometry helpers ---------------------------------------------------

    def _cell(self, level: int, ix: int, iy: int):
        side = self.N >> level
        return ix * side, iy * side, side

    def _covers_segment(self, sq: AxisBox, ax, ay, bx, by) -> bool:
        return sq.lo[0] <= ax and bx <= sq.hi[0] and sq.lo[1] <= ay and by <= sq.hi[1]

    def _select_for_cell(self, level: int, ix: int, iy: int) -> tuple[int, ...]:
        """Selection is a function of the cell only; never of arrived points."""
        x0, y0, side = self._cell(level, ix, iy)
        x1, y1 = x0 + side, y0 + side
        edges = (
            (x0, y0, x1, y0),
            (x0, y1, x1, y1),
            (x0, y0, x0, y1),
            (x1, y0, x1, y1),
        )
        picks = []
        for ax, ay, bx, by in edges:
            best_id, best_area = None, -1
            for sid in self._ids:
                sq = self.squares[sid]
                if self._covers_segment(sq, ax, ay, bx, by):
                    area = overlap_length(x0, x1, sq.lo[0], sq.hi[0]) * overlap_length(
                        y0, y1, sq.lo[1], sq.hi[1]
                    )
                    if area > best_area:
                        best_id, best_area = sid, area
            if best_id is not None:
                picks.append(best_id)
        if side == 1:
            pt = (x0, y0)
            if not any(contains(self.squares[s], pt) for s in picks):
                for sid in self._ids:
                    if contains(self.squares[sid], pt):
                        picks.append(sid)
                        break
                else:
                    raise InfeasibleError(f"no input square covers {pt}", entity=pt)
        return tuple(sorted(set(picks)))

    # -- online interface ---------------------------------------------------

    def insert(self, p) -> list[int]:
        """Feed one point; returns square ids newly added to the cover."""
        p = tuple(p)
        if len(p) != 2 or not all(isinstance(c, int) and 0 <= c < self.N for c in p):
            raise PreconditionError(f"point {p} outside [0,{self.N})^2 grid")
        self.points.append(p)
        newly = []
        above: set[int] = set()
        for level in range(self.levels + 1):
            if any(contains(self.squares[s], p) for s in above):
                return newly
            ix, iy = p[0] >> (self.levels - level), p[1] >> (self.levels - level)
            key = (level, ix, iy)
            if key not in self.explored:
                self.explored[key] = self._select_for_cell(level, ix, iy)
            for sid in self.explored[key]:
                if sid not in self.chosen:
                    self.chosen.add(sid)
                    newly.append(sid)
            above.update(self.explored[key])
        assert any(contains(self.squares[s], p) for s in above)
        return newly

    # -- reporting ----------------------------------------------------------

    def chosen_ids(self) -> list[int]:
        return sorted(self.chosen)

    def cost(self) -> int:
        return len(self.chosen)

    def mass(self, sid: int) -> int:
        return 1 if sid in self.chosen else 0

    def is_covered(self, p) -> bool:
        return any(contains(self.squares[s], tuple(p)) for s in self.chosen)


def offline_cover(N: int, squares: Mapping[int, AxisBox], points: Iterable) -> QuadtreeCover:
    """Cover a fixed point set; equals the online run in any arrival order."""
    state = QuadtreeCover(N, squares)
    for p in sorted(set(map(tuple, points))):
        state.insert(p)
    return state
