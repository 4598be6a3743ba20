"""Seeded random instance generators shared by tests, benchmarks and the CLI."""

from __future__ import annotations

import random

from .errors import PreconditionError
from .geometry import AxisBox


def _check_grid(N: int):
    if N < 2 or (N & (N - 1)) != 0:
        raise PreconditionError(f"grid bound {N} must be a power of two >= 2")


def random_square_cover(rng: random.Random, N: int, m: int, n: int):
    """m random squares in [0,N]^2 plus n points, each point inside a square."""
    _check_grid(N)
    squares = {}
    for sid in range(m):
        cap = N if sid % 2 == 0 else max(1, N // 8)
        side = rng.randint(1, cap)
        x = rng.randint(0, N - side)
        y = rng.randint(0, N - side)
        squares[sid] = AxisBox((x, y), (x + side, y + side))
    points = []
    for _ in range(n):
        sq = squares[rng.randrange(m)]
        px = rng.randint(sq.lo[0], min(sq.hi[0], N - 1))
        py = rng.randint(sq.lo[1], min(sq.hi[1], N - 1))
        points.append((px, py))
    return squares, points


def random_hitting_instance(rng: random.Random, N: int, n_points: int, n_boxes: int):
    """n_points candidate stabbers plus n_boxes rectangles, each containing one."""
    _check_grid(N)
    n_points = min(n_points, N * N)
    points = []
    seen = set()
    while len(points) < n_points:
        p = (rng.randrange(N), rng.randrange(N))
        if p not in seen:
            seen.add(p)
            points.append(p)
    boxes = {}
    for bid in range(n_boxes):
        px, py = points[rng.randrange(n_points)]
        lo = (rng.randint(max(0, px - N // 4), px), rng.randint(max(0, py - N // 4), py))
        hi = (rng.randint(px, min(N, px + N // 4)), rng.randint(py, min(N, py + N // 4)))
        boxes[bid] = AxisBox(lo, hi)
    return points, boxes


def random_rects(rng: random.Random, N: int, m: int, d: int = 2):
    """m random closed boxes inside [0,N]^d."""
    _check_grid(N)
    rects = {}
    for rid in range(m):
        lo, hi = [], []
        for _ in range(d):
            a = rng.randint(0, N)
            b = rng.randint(0, N)
            lo.append(min(a, b))
            hi.append(max(a, b))
        rects[rid] = AxisBox(tuple(lo), tuple(hi))
    return rects


def random_weights(rng: random.Random, ids, max_weight: int):
    return {i: rng.randint(1, max_weight) for i in ids}


def points_inside(rng: random.Random, rects, N: int, n: int, d: int = 2):
    """n grid points, each drawn from the interior lattice of a random rect."""
    ids = sorted(rects)
    pts = []
    for _ in range(n):
        r = rects[ids[rng.randrange(len(ids))]]
        pts.append(tuple(rng.randint(r.lo[k], min(r.hi[k], N - 1)) for k in range(d)))
    return pts
