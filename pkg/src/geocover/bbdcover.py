"""Online square cover over a balanced box decomposition of the point set.

The decomposition recursively partitions a padded power-of-two box.  Every
box is dyadic (reachable from the root by exact halvings), so inner boxes
nest without slivers and each box has side ratio at most two.  A node either
splits its outer box at the midpoint of the longest side, or shrinks to a
descendant dyadic box holding between a third and two thirds of its points;
a shrink leaves the complement behind as a "donut" node whose inner box is
the shrunk region.  The heavy half is descended only while it keeps the
current hole inside it, so the depth stays logarithmic in the point count
for anything but deliberately nested hole-hugging inputs; a guard asserts
the documented depth cap and raises if an input exceeds it.

Selection at a node covers its box from the input squares: the four maximal
edge-covering squares, then greedy passes of squares crossing the box (the
shorter dimension first), then around the hole the four side strips get a
crossing pass each and the four corner strips one hole-anchored square.
Per-call selections are hard-capped at 30.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .errors import GeometryError, InfeasibleError, PreconditionError
from .geometry import AxisBox, contains, next_pow2, overlap_length

SELECT_CAP = 30


def depth_guard(n: int) -> int:
    """Documented cap on tree depth for an n-point build."""
    n = max(n, 2)
    return 8 * (n - 1).bit_length() + 8


def _halve(box: AxisBox) -> tuple[AxisBox, AxisBox]:
    """Split at the exact midpoint of the longest side; ties pick the x axis."""
    sides = box.side_lengths()
    axis = 0 if sides[0] >= sides[1] else 1
    mid = (box.lo[axis] + box.hi[axis]) // 2
    lo_hi = list(box.hi)
    lo_hi[axis] = mid
    hi_lo = list(box.lo)
    hi_lo[axis] = mid
    return (
        AxisBox(box.lo, tuple(lo_hi), closed=False),
        AxisBox(tuple(hi_lo), box.hi, closed=False),
    )


def _inside(inner: AxisBox, outer: AxisBox) -> bool:
    return all(o <= i for i, o in zip(inner.lo, outer.lo)) and all(
        i <= o for i, o in zip(inner.hi, outer.hi)
    )


def _clip_hole(hole: Optional[AxisBox], box: AxisBox) -> Optional[AxisBox]:
    if hole is None:
        return None
    lo = tuple(max(h, b) for h, b in zip(hole.lo, box.lo))
    hi = tuple(min(h, b) for h, b in zip(hole.hi, box.hi))
    if any(a >= b for a, b in zip(lo, hi)):
        return None
    return AxisBox(lo, hi, closed=False)


@dataclass
class BBDNode:
    outer: AxisBox
    inner: Optional[AxisBox]
    depth: int
    kind: str = "leaf"  # leaf | split | shrink
    children: tuple = ()
    point: Optional[tuple[int, int]] = None
    leaf_square: Optional[int] = None
    selections: list[int] = field(default_factory=list)
    _selected: set = field(default_factory=set)

    def in_region(self, p) -> bool:
        if not contains(self.outer, p):
            return False
        return self.inner is None or not contains(self.inner, p)

    def select(self, sid: int) -> bool:
        if sid in self._selected:
            return False
        self._selected.add(sid)
        self.selections.append(sid)
        return True


class BBDTree:
    """Static decomposition of a fixed point set inside [0,N)^2."""

    def __init__(self, N: int, points: Iterable, squares: Mapping[int, AxisBox]):
        if N < 1 or (N & (N - 1)) != 0:
            raise PreconditionError(f"grid bound {N} must be a power of two")
        for sid, sq in squares.items():
            if sq.dim != 2 or not sq.is_cube():
                raise PreconditionError(f"square {sid} is not an axis square")
        self.N = N
        self.squares = dict(squares)
        self._ids = sorted(squares)
        pts = sorted(set(map(tuple, points)))
        for p in pts:
            if len(p) != 2 or not all(isinstance(c, int) and 0 <= c < N for c in p):
                raise PreconditionError(f"point {p} outside [0,{N})^2")
        self.points = pts
        self.max_depth = 0
        self.node_count = 0
        self._guard = depth_guard(len(pts))
        root_box = AxisBox((0, 0), (N, N), closed=False)
        self.root = self._build(root_box, None, pts, 0)

    def _smallest_cover(self, p) -> int:
        for sid in self._ids:
            if contains(self.squares[sid], p):
                return sid
        raise InfeasibleError(f"no input square covers {p}", entity=p)

    def _build(self, outer: AxisBox, inner: Optional[AxisBox], pts, depth: int) -> BBDNode:
        if depth > self._guard:
            raise GeometryError(
                f"decomposition depth {depth} exceeds guard {self._guard}"
            )
        self.max_depth = max(self.max_depth, depth)
        self.node_count += 1
        n = len(pts)
        if n <= 1:
            node = BBDNode(outer, inner, depth, "leaf")
            if pts:
                node.point = pts[0]
                node.leaf_square = self._smallest_cover(pts[0])
            return node

        lo_half, hi_half = _halve(outer)
        lo_pts = [p for p in pts if contains(lo_half, p)]
        hi_pts = [p for p in pts if not contains(lo_half, p)]
        heavy, heavy_pts = (
            (lo_half, lo_pts) if len(lo_pts) >= len(hi_pts) else (hi_half, hi_pts)
        )
        hole_stays = inner is None or _inside(inner, heavy)

        if 3 * len(heavy_pts) <= 2 * n or not hole_stays:
            node = BBDNode(outer, inner, depth, "split")
            node.children = (
                self._build(lo_half, _clip_hole(inner, lo_half), lo_pts, depth + 1),
                self._build(hi_half, _clip_hole(inner, hi_half), hi_pts, depth + 1),
            )
            return node

        # Shrink: follow the heavy half while it stays too heavy and keeps
        # the hole; the landing box holds in (n/3, 2n/3] unless the hole
        # pinned the descent early.
        box, box_pts = heavy, heavy_pts
        while 3 * len(box_pts) > 2 * n:
            lo_b, hi_b = _halve(box)
            lo_p = [p for p in box_pts if contains(lo_b, p)]
            hi_p = [p for p in box_pts if not contains(lo_b, p)]
            nxt, nxt_pts = (lo_b, lo_p) if len(lo_p) >= len(hi_p) else (hi_b, hi_p)
            if inner is not None and not _inside(inner, nxt):
                break
            box, box_pts = nxt, nxt_pts
        rest = [p for p in pts if not contains(box, p)]
        node = BBDNode(outer, inner, depth, "shrink")
        node.children = (
            self._build(box, inner, box_pts, depth + 1),
            self._build(outer, box, rest, depth + 1),
        )
        return node

    # -- traversal ----------------------------------------------------------

    def nodes(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children)

    def path_to(self, p) -> list[BBDNode]:
        p = tuple(p)
        node = self.root
        if not node.in_region(p):
            raise PreconditionError(f"point {p} outside the decomposed region")
        path = [node]
        while node.kind != "leaf":
            for child in node.children:
                if child.in_region(p):
                    node = child
                    break
            else:
                raise GeometryError(f"no child region holds {p}")
            path.append(node)
        return path

    def leaf_of(self, p) -> BBDNode:
        return self.path_to(p)[-1]


# ---------------------------------------------------------------------------
# Crossing greedy.


def crossing_candidates(rect: AxisBox, squares: Mapping[int, AxisBox], span_axis: int):
    """Squares spanning rect's full extent along span_axis and overlapping it."""
    out = {}
    walk = 1 - span_axis
    for sid in sorted(squares):
        sq = squares[sid]
        if sq.lo[span_axis] <= rect.lo[span_axis] and rect.hi[span_axis] <= sq.hi[span_axis]:
            if overlap_length(rect.lo[walk], rect.hi[walk], sq.lo[walk], sq.hi[walk]) > 0 or (
                sq.lo[walk] <= rect.lo[walk] <= sq.hi[walk]
            ):
                out[sid] = sq
    return out


def greedy_crossing(
    rect: AxisBox,
    points: Iterable,
    squares: Mapping[int, AxisBox],
    span_axis: int,
    strict: bool = True,
) -> list[int]:
    """Sweep points along the walk axis, always taking the furthest-reaching
    crossing square through the first uncovered point.

    With strict=True a point no crossing candidate contains raises; otherwise
    such points are skipped (the caller handles them elsewhere).
    """
    walk = 1 - span_axis
    cands = crossing_candidates(rect, squares, span_axis)
    todo = sorted(set(map(tuple, points)), key=lambda p: (p[walk], p))
    picks: list[int] = []
    idx = 0
    while idx < len(todo):
        pivot = todo[idx]
        best = None
        for sid, sq in cands.items():
            if contains(sq, pivot) and (best is None or sq.hi[walk] > cands[best].hi[walk]):
                best = sid
        if best is None:
            if strict:
                raise PreconditionError(f"no crossing square covers {pivot}")
            idx += 1
            continue
        picks.append(best)
        reach = cands[best]
        idx += 1
        while idx < len(todo) and contains(reach, todo[idx]):
            idx += 1
    return picks


def max_disjoint_crossing(rect: AxisBox, squares: Mapping[int, AxisBox], span_axis: int) -> int:
    """Largest pairwise-disjoint family of crossing candidates (interval greedy)."""
    walk = 1 - span_axis
    spans = sorted(
        (sq.hi[walk], sq.lo[walk]) for sq in crossing_candidates(rect, squares, span_axis).values()
    )
    count, frontier = 0, None
    for hi, lo in spans:
        if frontier is None or lo > frontier:
            count += 1
            frontier = hi
    return count


# ---------------------------------------------------------------------------
# Per-node selection.


def _edge_picks(rect: AxisBox, squares: Mapping[int, AxisBox], ids) -> list[int]:
    x0, y0 = rect.lo
    x1, y1 = rect.hi
    edges = ((x0, y0, x1, y0), (x0, y1, x1, y1), (x0, y0, x0, y1), (x1, y0, x1, y1))
    picks = []
    for ax, ay, bx, by in edges:
        best_id, best_area = None, -1
        for sid in ids:
            sq = squares[sid]
            if sq.lo[0] <= ax and bx <= sq.hi[0] and sq.lo[1] <= ay and by <= sq.hi[1]:
                area = overlap_length(x0, x1, sq.lo[0], sq.hi[0]) * overlap_length(
                    y0, y1, sq.lo[1], sq.hi[1]
                )
                if area > best_area:
                    best_id, best_area = sid, area
        if best_id is not None:
            picks.append(best_id)
    return picks


class BBDCover:
    """Online cover of an upfront point set; points arrive in any order."""

    def __init__(self, N: int, points: Iterable, squares: Mapping[int, AxisBox]):
        self.tree = BBDTree(N, points, squares)
        self.squares = self.tree.squares
        self._ids = self.tree._ids
        self._known = set(self.tree.points)
        self.chosen: set[int] = set()
        self.inserted: list[tuple[int, int]] = []
        self.select_calls: list[int] = []
        self.crossing_stats: list[tuple[int, int]] = []  # (picked, disjoint bound)

    # helpers -----------------------------------------------------------

    def _covered(self, p, ids) -> bool:
        return any(contains(self.squares[s], p) for s in ids)

    def _crossing_pass(self, rect: AxisBox, p, span_axis: int, acc) -> list[int]:
        if self._covered(p, acc):
            return []
        cands = crossing_candidates(rect, self.squares, span_axis)
        live = {sid: sq for sid, sq in cands.items() if contains(sq, p)}
        if not live:
            return []
        picks = greedy_crossing(rect, [p], live, span_axis, strict=True)
        self.crossing_stats.append((len(picks), max_disjoint_crossing(rect, self.squares, span_axis)))
        return picks

    def _hole_strips(self, outer: AxisBox, hole: AxisBox):
        ox0, oy0 = outer.lo
        ox1, oy1 = outer.hi
        ix0, iy0 = hole.lo
        ix1, iy1 = hole.hi
        strips = []  # (box or None, span_axis)
        strips.append((ox0 < ix0 and AxisBox((ox0, iy0), (ix0, iy1), closed=False), 0))
        strips.append((ix1 < ox1 and AxisBox((ix1, iy0), (ox1, iy1), closed=False), 0))
        strips.append((oy0 < iy0 and AxisBox((ix0, oy0), (ix1, iy0), closed=False), 1))
        strips.append((iy1 < oy1 and AxisBox((ix0, iy1), (ix1, oy1), closed=False), 1))
        corners = []
        if ox0 < ix0 and oy0 < iy0:
            corners.append(AxisBox((ox0, oy0), (ix0, iy0), closed=False))
        if ix1 < ox1 and oy0 < iy0:
            corners.append(AxisBox((ix1, oy0), (ox1, iy0), closed=False))
        if ox0 < ix0 and iy1 < oy1:
            corners.append(AxisBox((ox0, iy1), (ix0, oy1), closed=False))
        if ix1 < ox1 and iy1 < oy1:
            corners.append(AxisBox((ix1, iy1), (ox1, oy1), closed=False))
        return [(b, ax) for b, ax in strips if b], corners

    def _corner_pick(self, corner: AxisBox, hole: AxisBox) -> Optional[int]:
        for sid in self._ids:
            sq = self.squares[sid]
            if not _inside(corner, sq):
                continue
            sq_corners = (
                (sq.lo[0], sq.lo[1]),
                (sq.lo[0], sq.hi[1]),
                (sq.hi[0], sq.lo[1]),
                (sq.hi[0], sq.hi[1]),
            )
            if any(
                hole.lo[0] <= cx <= hole.hi[0] and hole.lo[1] <= cy <= hole.hi[1]
                for cx, cy in sq_corners
            ):
                return sid
        return None

    def _select_for_node(self, node: BBDNode, p, acc: set) -> list[int]:
        """Append selections for the one uncovered point p; returns new ids."""
        new_ids: list[int] = []

        def take(ids):
            for sid in ids:
                if node.select(sid):
                    new_ids.append(sid)
                acc.add(sid)

        if node.kind == "leaf":
            if node.leaf_square is not None:
                take([node.leaf_square])
            assert len(new_ids) <= SELECT_CAP
            self.select_calls.append(len(new_ids))
            return new_ids

        rect = node.outer
        take(_edge_picks(rect, self.squares, self._ids))
        w, h = rect.side_lengths()
        order = (1, 0) if w >= h else (0, 1)
        for span_axis in order:
            take(self._crossing_pass(rect, p, span_axis, acc))
        if node.inner is not None and not self._covered(p, acc):
            strips, corners = self._hole_strips(rect, node.inner)
            for strip, span_axis in strips:
                if contains(strip, p):
                    take(self._crossing_pass(strip, p, span_axis, acc))
            for corner in corners:
                if contains(corner, p) and not self._covered(p, acc):
                    pick = self._corner_pick(corner, node.inner)
                    if pick is not None:
                        take([pick])
        assert len(new_ids) <= SELECT_CAP
        self.select_calls.append(len(new_ids))
        return new_ids

    # online interface ----------------------------------------------------

    def insert(self, p) -> list[int]:
        p = tuple(p)
        if p not in self._known:
            raise PreconditionError(f"point {p} was not part of the decomposed set")
        self.inserted.append(p)
        path = self.tree.path_to(p)
        newly: list[int] = []
        acc: set[int] = set()
        for node in path:
            acc.update(node._selected)
            if self._covered(p, acc):
                break
            appended = self._select_for_node(node, p, acc)
            for sid in appended:
                if sid not in self.chosen:
                    self.chosen.add(sid)
                    newly.append(sid)
            if self._covered(p, acc):
                break
        assert self._covered(p, acc), "leaf fallback must cover the new point"
        return newly

    def cost(self) -> int:
        return len(self.chosen)

    def chosen_ids(self) -> list[int]:
        return sorted(self.chosen)

    def mass(self, sid: int) -> int:
        return 1 if sid in self.chosen else 0

    def is_covered(self, p) -> bool:
        return any(contains(self.squares[s], tuple(p)) for s in self.chosen)
