"""Dimension-lifting transforms and weight rounding.

Two dualities are provided, both exact on integer inputs:

* Set cover lifting: a d-dimensional axis rectangle S = [a, b] becomes a
  2d-dimensional hypercube whose side is the longest edge of S and whose
  upper corner is (-a_1, ..., -a_d, b_1, ..., b_d).  A point p becomes
  (-p_1, ..., -p_d, p_1, ..., p_d).  Then p lies in S iff the lifted point
  lies in the lifted cube, so covering problems over rectangles of mixed
  shapes reduce to covering problems over same-role hypercubes.

* Hitting set duality: for a fixed grid bound N, a point p becomes the
  2d-dimensional hypercube of side N with lower corner
  (-p_1, ..., -p_d, p_1, ..., p_d), and a rectangle S = [a, b] becomes the
  point (-a_1, ..., -a_d, b_1, ..., b_d).  Then p lies in S iff the
  rectangle's point lies in the point's cube, which swaps the roles of
  points and ranges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import GeometryError, PreconditionError
from .geometry import AxisBox, Point


@dataclass(frozen=True)
class LiftedCube:
    """A 2d-dimensional hypercube produced from a d-dimensional rectangle."""

    cube: AxisBox
    source_id: int
    side: int

    def __post_init__(self):
        if not self.cube.is_cube():
            raise GeometryError("lifted cube has unequal sides")


def rect_to_cube(rect: AxisBox, source_id: int = 0) -> LiftedCube:
    """Lift a closed d-dim rectangle to its 2d-dim hypercube."""
    if not rect.closed:
        raise PreconditionError("lifting is defined for closed rectangles")
    delta = max(rect.side_lengths())
    upper = tuple(-a for a in rect.lo) + tuple(rect.hi)
    lower = tuple(u - delta for u in upper)
    return LiftedCube(AxisBox(lower, upper), source_id, delta)


def point_to_dual(p: Point | Sequence[int]) -> tuple[int, ...]:
    """Lift a d-dim point to the 2d-dim point (-p, p)."""
    coords = p.coords if isinstance(p, Point) else tuple(p)
    return tuple(-x for x in coords) + tuple(coords)


def point_to_cube(p: Point | Sequence[int], N: int) -> AxisBox:
    """Hitting-set duality: the side-N cube owned by a fixed point."""
    coords = p.coords if isinstance(p, Point) else tuple(p)
    if N < 1:
        raise PreconditionError("grid bound must be positive")
    lower = tuple(-x for x in coords) + tuple(coords)
    upper = tuple(v + N for v in lower)
    return AxisBox(lower, upper)


def rect_to_point(rect: AxisBox) -> tuple[int, ...]:
    """Hitting-set duality: the query point owned by a rectangle."""
    if not rect.closed:
        raise PreconditionError("duality is defined for closed rectangles")
    return tuple(-a for a in rect.lo) + tuple(rect.hi)


def round_weight(w) -> int:
    """Smallest power of two >= w; powers of two are kept as-is."""
    if w < 1:
        raise PreconditionError(f"weight {w} below 1")
    k = 1
    while k < w:
        k <<= 1
    return k


def weight_classes(weights) -> dict[int, list]:
    """Group ids (mapping keys, or sequence indices) by rounded weight."""
    items = weights.items() if isinstance(weights, Mapping) else enumerate(weights)
    classes: dict[int, list] = {}
    for key, w in items:
        classes.setdefault(round_weight(w), []).append(key)
    return classes
