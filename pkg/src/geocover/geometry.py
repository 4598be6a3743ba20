"""Exact integer geometry primitives shared by every algorithm module.

All coordinates are Python ints kept within a 64-bit guard so that scaled
copies (doubling tricks used by several modules) never overflow native
arithmetic in downstream tooling.  Boxes are axis-parallel.  A box is either
closed (input squares/rectangles contain their boundary) or half-open
(tree cells: lo included, hi excluded), chosen per use site.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import GeometryError

# Guard well below 2**63 so doubling/shifting stays safe.
_COORD_LIMIT = 1 << 62


def _check_coords(coords: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(c) for c in coords)
    if not out:
        raise GeometryError("zero-dimensional coordinates")
    for c in out:
        if abs(c) >= _COORD_LIMIT:
            raise GeometryError(f"coordinate {c} outside 64-bit guard")
    return out


@dataclass(frozen=True)
class Point:
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", _check_coords(self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> int:
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)


@dataclass(frozen=True)
class AxisBox:
    """Axis-parallel box given by lower and upper corner.

    ``closed=True`` means every face belongs to the box; ``closed=False``
    means half-open ([lo, hi) per axis), the convention used for tree cells
    so that sibling cells tile space without overlap.
    """

    lo: tuple[int, ...]
    hi: tuple[int, ...]
    closed: bool = True

    def __post_init__(self):
        lo = _check_coords(self.lo)
        hi = _check_coords(self.hi)
        if len(lo) != len(hi):
            raise GeometryError(f"corner dimensions differ: {len(lo)} vs {len(hi)}")
        for a, b in zip(lo, hi):
            if a > b:
                raise GeometryError(f"inverted box: lo {lo} hi {hi}")
            if not self.closed and a == b:
                raise GeometryError("empty half-open box")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    def side_lengths(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.lo, self.hi))

    def is_cube(self) -> bool:
        sides = self.side_lengths()
        return all(s == sides[0] for s in sides)


def contains(box: AxisBox, point: Point | Sequence[int]) -> bool:
    coords = point.coords if isinstance(point, Point) else tuple(point)
    if len(coords) != box.dim:
        raise GeometryError(f"point dim {len(coords)} != box dim {box.dim}")
    if box.closed:
        return all(a <= x <= b for a, x, b in zip(box.lo, coords, box.hi))
    return all(a <= x < b for a, x, b in zip(box.lo, coords, box.hi))


def intersect(a: AxisBox, b: AxisBox) -> AxisBox | None:
    """Componentwise intersection, or None when empty.

    The result is closed only when both operands are closed; a degenerate
    (zero-width) slice of a half-open operand counts as empty.
    """
    if a.dim != b.dim:
        raise GeometryError(f"box dims differ: {a.dim} vs {b.dim}")
    lo = tuple(max(x, y) for x, y in zip(a.lo, b.lo))
    hi = tuple(min(x, y) for x, y in zip(a.hi, b.hi))
    closed = a.closed and b.closed
    for x, y in zip(lo, hi):
        if x > y or (not closed and x >= y):
            return None
    return AxisBox(lo, hi, closed=closed)


def overlap_length(alo: int, ahi: int, blo: int, bhi: int) -> int:
    """Length of [alo,ahi] ∩ [blo,bhi]; 0 when they only touch or miss."""
    return max(0, min(ahi, bhi) - max(alo, blo))


def intersection_volume(a: AxisBox, b: AxisBox) -> int:
    """Product of per-axis overlap lengths (treats both boxes as regions)."""
    if a.dim != b.dim:
        raise GeometryError(f"box dims differ: {a.dim} vs {b.dim}")
    vol = 1
    for alo, ahi, blo, bhi in zip(a.lo, a.hi, b.lo, b.hi):
        piece = overlap_length(alo, ahi, blo, bhi)
        if piece == 0:
            return 0
        vol *= piece
    return vol


def project(box: AxisBox, keep_dims: Iterable[int]) -> AxisBox:
    """Keep only the given 0-based axes of the box."""
    dims = sorted(set(keep_dims))
    if not dims:
        raise GeometryError("projection onto empty axis set")
    for d in dims:
        if d < 0 or d >= box.dim:
            raise GeometryError(f"axis {d} out of range for dim {box.dim}")
    return AxisBox(
        tuple(box.lo[d] for d in dims),
        tuple(box.hi[d] for d in dims),
        closed=box.closed,
    )


class RankMap:
    """Per-axis monotone maps produced by rank-space reduction.

    Boxes map onto the plain rank grid (endpoint k-th smallest -> k).  For
    later point queries the map also offers a doubled embedding in which
    endpoint coordinates become even values 2k and positions strictly
    between endpoints k and k+1 become the odd value 2k+1; the doubled
    embedding preserves closed containment exactly for arbitrary points.
    """

    def __init__(self, axis_endpoints: list[tuple[int, ...]]):
        self.axis_endpoints = axis_endpoints

    @property
    def dim(self) -> int:
        return len(self.axis_endpoints)

    def rank(self, axis: int, coord: int) -> int:
        eps = self.axis_endpoints[axis]
        i = bisect.bisect_left(eps, coord)
        if i == len(eps) or eps[i] != coord:
            raise GeometryError(f"coordinate {coord} is not an endpoint on axis {axis}")
        return i

    def slot(self, axis: int, coord: int) -> tuple[int, bool]:
        """(index of largest endpoint <= coord, exact-hit flag); index -1 if below all."""
        eps = self.axis_endpoints[axis]
        i = bisect.bisect_right(eps, coord) - 1
        return i, (i >= 0 and eps[i] == coord)

    def map_box(self, box: AxisBox) -> AxisBox:
        lo = tuple(self.rank(d, box.lo[d]) for d in range(box.dim))
        hi = tuple(self.rank(d, box.hi[d]) for d in range(box.dim))
        return AxisBox(lo, hi, closed=box.closed)

    def embed_box(self, box: AxisBox) -> AxisBox:
        ranked = self.map_box(box)
        return AxisBox(
            tuple(2 * c for c in ranked.lo),
            tuple(2 * c for c in ranked.hi),
            closed=box.closed,
        )

    def embed_point(self, point: Point | Sequence[int]) -> tuple[int, ...]:
        coords = point.coords if isinstance(point, Point) else tuple(point)
        if len(coords) != self.dim:
            raise GeometryError(f"point dim {len(coords)} != map dim {self.dim}")
        out = []
        for axis, x in enumerate(coords):
            k, exact = self.slot(axis, x)
            out.append(2 * k if exact else 2 * k + 1)
        return tuple(out)


def rank_space_reduce(boxes: Sequence[AxisBox]) -> tuple[list[AxisBox], RankMap]:
    """Replace every endpoint coordinate by its per-axis rank.

    With m boxes each axis has at most 2m distinct endpoints, so reduced
    corners lie on [0, 2m-1] per axis while all containment and overlap
    relations between the boxes are preserved.
    """
    if not boxes:
        raise GeometryError("rank reduction of an empty family")
    dim = boxes[0].dim
    for b in boxes:
        if b.dim != dim:
            raise GeometryError("mixed dimensions in rank reduction")
    axis_endpoints = []
    for d in range(dim):
        coords = set()
        for b in boxes:
            coords.add(b.lo[d])
            coords.add(b.hi[d])
        axis_endpoints.append(tuple(sorted(coords)))
    rank_map = RankMap(axis_endpoints)
    return [rank_map.map_box(b) for b in boxes], rank_map


@dataclass
class InstanceMeta:
    """Declared bounds of an instance: grid size N, counts, and weight cap."""

    N: int
    d: int = 2
    m: int = 0
    n: int = 0
    W: int = 1
    shift: tuple[int, ...] | None = field(default=None)

    def __post_init__(self):
        if self.N < 1 or (self.N & (self.N - 1)) != 0:
            raise GeometryError(f"grid size N={self.N} must be a power of two")
        if self.d < 1:
            raise GeometryError("dimension must be positive")
        if self.W < 1:
            raise GeometryError("weight cap must be >= 1")


def next_pow2(x: int) -> int:
    if x < 1:
        return 1
    return 1 << (x - 1).bit_length()
