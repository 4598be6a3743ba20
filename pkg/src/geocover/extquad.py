"""Sparse hierarchical decomposition of integer boxes into path-aligned fragments.

The index answers two questions about a fixed family of closed integer boxes:
which registered fragments contain a grid point (stabbing), and which
fragments jointly cover a given source box (decomposition).  Fragments are
pieces of source boxes clipped so that each one lives on a single root-to-leaf
cell path, which caps the number of fragments containing any one point by a
polylogarithmic function of the input instead of the input size itself.

Coordinates are doubled internally: a closed box [a, b] becomes the even
half-open box [2a, 2b+2) and a grid point x becomes the odd point 2x+1.
Closed containment is preserved exactly, points never lie on cell boundaries,
and a box containing a point always covers the point's side-2 cell, so
subdivision stops at side 2 on its own.

Structure: a cell of the d-dimensional tree subdivides only while some box
endpoint falls strictly inside it.  A box is registered at the first cell on
a path whose extent it fully covers in some axis; registration strips that
axis and hands the clipped box to a (d-1)-dimensional secondary structure
over the cell, bottoming out in a 1-d assignment tree.  There an interval is
stored at the deepest dyadic endpoint it straddles (or at the root when it
reaches either root boundary), attached to the one or two incident cells by
the cell end it touches.  Only the maximal assignment per cell end (largest
overlap with the cell, ties to the smallest source id) becomes a fragment;
an interval that is not maximal anywhere is covered by the maximal picks of
its own assignment cells, which is what decompositions return.

Fragment regions are the source box clipped by every cell of the chain that
spawned them, including the 1-d assignment cell, and are exposed in the
doubled coordinate scale.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import PreconditionError
from .geometry import AxisBox, contains, next_pow2


@dataclass(frozen=True)
class Fragment:
    fid: int
    source_id: int
    region: AxisBox  # half-open, doubled scale


@dataclass
class FreqMetrics:
    max_frequency: int
    max_decomposition: int
    fragment_count: int
    node_count: int
    incidence_count: int
    build_micros: int
    histogram: dict[int, int] = field(default_factory=dict)


def _raw_box(lo: tuple, hi: tuple) -> AxisBox:
    """Half-open box without re-validation; for internal cells and clips
    whose coordinates derive from already-checked input boxes."""
    box = object.__new__(AxisBox)
    object.__setattr__(box, "lo", lo)
    object.__setattr__(box, "hi", hi)
    object.__setattr__(box, "closed", False)
    return box


def _double_box(box: AxisBox) -> AxisBox:
    return _raw_box(tuple(2 * c for c in box.lo), tuple(2 * c + 2 for c in box.hi))


def _double_point(p) -> tuple[int, ...]:
    return tuple(2 * c + 1 for c in p)


def _clip(region: AxisBox, dims, cell_lo, cell_hi) -> Optional[AxisBox]:
    """Clip region (full-dim box) to a cell's corners over the listed dims."""
    lo = list(region.lo)
    hi = list(region.hi)
    for k, g in enumerate(dims):
        lo[g] = max(lo[g], cell_lo[k])
        hi[g] = min(hi[g], cell_hi[k])
        if lo[g] >= hi[g]:
            return None
    return _raw_box(tuple(lo), tuple(hi))


def _covers_axis(region: AxisBox, g: int, lo: int, hi: int) -> bool:
    return region.lo[g] <= lo and region.hi[g] >= hi


class _Slot:
    __slots__ = ("left", "right", "best_left", "best_right")

    def __init__(self):
        self.left: list[tuple[int, AxisBox]] = []
        self.right: list[tuple[int, AxisBox]] = []
        self.best_left: Optional[int] = None
        self.best_right: Optional[int] = None


class _OneDim:
    """Assignment tree over one remaining axis; mints the fragments."""

    def __init__(self, owner: "FragmentIndex", dim: int, lo: int, hi: int):
        self.owner = owner
        self.dim = dim
        self.lo = lo
        self.hi = hi
        self.slots: dict[tuple[int, int], _Slot] = {}
        owner._onedims.append(self)

    def _slot(self, lo, hi) -> _Slot:
        got = self.slots.get((lo, hi))
        if got is None:
            got = _Slot()
            self.slots[(lo, hi)] = got
            self.owner._node_count += 1
        return got

    def register(self, src: int, region: AxisBox):
        j = self.dim
        rlo, rhi = region.lo[j], region.hi[j]
        self.owner._incidence_count += 1
        if rlo <= self.lo or rhi >= self.hi:
            piece = _clip(region, (j,), (self.lo,), (self.hi,))
            slot = self._slot(self.lo, self.hi)
            if rlo <= self.lo:
                slot.left.append((src, piece))
            if rhi >= self.hi:
                slot.right.append((src, piece))
            return
        x, y = self.lo, self.hi
        while True:
            if rlo == x and rhi == y:
                # exact cell fit straddles no interior dyadic point; it
                # touches both ends of its own cell
                slot = self._slot(x, y)
                slot.left.append((src, region))
                slot.right.append((src, region))
                return
            mid = (x + y) // 2
            if rhi <= mid:
                y = mid
            elif rlo >= mid:
                x = mid
            else:
                break
        if rlo < mid:
            piece = _clip(region, (j,), (x,), (mid,))
            self._slot(x, mid).right.append((src, piece))
        if rhi > mid:
            piece = _clip(region, (j,), (mid,), (y,))
            self._slot(mid, y).left.append((src, piece))

    def finalize(self):
        """Mint fragments for the per-end maximal assignments only."""
        j = self.dim

        def best(entries):
            src, region = min(
                entries, key=lambda e: (-(e[1].hi[j] - e[1].lo[j]), e[0])
            )
            return self.owner._mint(src, region)

        for slot in self.slots.values():
            if slot.left:
                slot.best_left = best(slot.left)
            if slot.right:
                slot.best_right = best(slot.right)

    def query(self, p, out: set):
        x, y = self.lo, self.hi
        pj = p[self.dim]
        frag = self.owner.fragments
        while True:
            slot = self.slots.get((x, y))
            if slot is not None:
                for fid in (slot.best_left, slot.best_right):
                    if fid is not None and contains(frag[fid].region, p):
                        out.add(fid)
            if y - x <= 2:
                return
            mid = (x + y) // 2
            x, y = (x, mid) if pj < mid else (mid, y)

    def decompose(self, region: AxisBox, out: set):
        j = self.dim
        rlo, rhi = max(region.lo[j], self.lo), min(region.hi[j], self.hi)
        if rlo >= rhi:
            return
        if rlo <= self.lo or rhi >= self.hi:
            # a boundary-touching pick has maximal overlap from that end, so
            # it covers the whole extent of any interval sharing the end
            slot = self.slots[(self.lo, self.hi)]
            if rlo <= self.lo:
                out.add(slot.best_left)
            if rhi >= self.hi:
                out.add(slot.best_right)
            return
        x, y = self.lo, self.hi
        while True:
            if rlo == x and rhi == y:
                slot = self.slots[(x, y)]
                out.add(slot.best_left)
                out.add(slot.best_right)
                return
            mid = (x + y) // 2
            if rhi <= mid:
                y = mid
            elif rlo >= mid:
                x = mid
            else:
                break
        if rlo < mid:
            out.add(self.slots[(x, mid)].best_right)
        if rhi > mid:
            out.add(self.slots[(mid, y)].best_left)


class _MNode:
    __slots__ = ("cell", "secondaries", "children")

    def __init__(self, cell: AxisBox):
        self.cell = cell
        self.secondaries: dict[int, object] = {}
        self.children: dict[tuple, "_MNode"] = {}


class _Multi:
    """Tree over >= 2 axes; hands coverage transitions to secondaries."""

    def __init__(self, owner: "FragmentIndex", dims: Sequence[int], root_cell: AxisBox):
        self.owner = owner
        self.dims = tuple(dims)
        self.root_cell = root_cell
        self.root: Optional[_MNode] = None

    def build(self, items):
        """items: (source_id, region) pairs positively meeting the root cell."""
        masks = [(src, region, (False,) * len(self.dims)) for src, region in items]
        self.root = self._build(self.root_cell, masks)

    def _build(self, cell: AxisBox, items) -> _MNode:
        owner = self.owner
        owner._node_count += 1
        owner._incidence_count += len(items)
        node = _MNode(cell)
        k = len(self.dims)
        buckets: dict[int, list] = {}
        survivors = []
        for src, region, mask in items:
            cov = tuple(
                _covers_axis(region, g, cell.lo[i], cell.hi[i])
                for i, g in enumerate(self.dims)
            )
            for i, g in enumerate(self.dims):
                if cov[i] and not mask[i]:
                    buckets.setdefault(i, []).append(
                        (src, _clip(region, self.dims, cell.lo, cell.hi))
                    )
            if not all(cov):
                survivors.append((src, region, cov))

        def pierces(region):
            # a survivor forces a split only when one of its corners lies
            # strictly inside the cell: an endpoint per axis, each interior.
            # A box merely sliced by a facet is axis-covering below and is
            # picked up by a secondary structure instead.
            for i, g in enumerate(self.dims):
                lo, hi = cell.lo[i], cell.hi[i]
                if not (lo < region.lo[g] < hi or lo < region.hi[g] < hi):
                    return False
            return True

        for i, bucket in buckets.items():
            g = self.dims[i]
            rest = tuple(d for d in self.dims if d != g)
            sub_cell = _raw_box(
                tuple(cell.lo[j] for j, d in enumerate(self.dims) if d != g),
                tuple(cell.hi[j] for j, d in enumerate(self.dims) if d != g),
            )
            sub = _make_structure(owner, rest, sub_cell)
            _feed(sub, bucket)
            node.secondaries[g] = sub
        if cell.hi[0] - cell.lo[0] > 2 and any(
            pierces(region) for _, region, _ in survivors
        ):
            mid = tuple((lo + hi) // 2 for lo, hi in zip(cell.lo, cell.hi))
            for key in _orthants(k):
                lo = tuple(cell.lo[i] if key[i] == 0 else mid[i] for i in range(k))
                hi = tuple(mid[i] if key[i] == 0 else cell.hi[i] for i in range(k))
                child_items = []
                for src, region, cov in survivors:
                    ok = all(
                        max(region.lo[g], lo[i]) < min(region.hi[g], hi[i])
                        for i, g in enumerate(self.dims)
                    )
                    if ok:
                        child_items.append((src, region, cov))
                if child_items:
                    node.children[key] = self._build(_raw_box(lo, hi), child_items)
        return node

    def query(self, p, out: set):
        node = self.root
        while node is not None:
            for sub in node.secondaries.values():
                sub.query(p, out)
            if not node.children:
                return
            cell = node.cell
            mid = tuple((lo + hi) // 2 for lo, hi in zip(cell.lo, cell.hi))
            key = tuple(
                0 if p[g] < mid[i] else 1 for i, g in enumerate(self.dims)
            )
            node = node.children.get(key)

    def decompose(self, region: AxisBox, out: set):
        self._decompose(self.root, region, (False,) * len(self.dims), out)

    def _decompose(self, node: _MNode, region: AxisBox, mask, out: set):
        cell = node.cell
        cov = tuple(
            _covers_axis(region, g, cell.lo[i], cell.hi[i])
            for i, g in enumerate(self.dims)
        )
        for i, g in enumerate(self.dims):
            if cov[i] and not mask[i]:
                node.secondaries[g].decompose(
                    _clip(region, self.dims, cell.lo, cell.hi), out
                )
        if all(cov):
            return
        for child in node.children.values():
            ok = all(
                max(region.lo[g], child.cell.lo[i]) < min(region.hi[g], child.cell.hi[i])
                for i, g in enumerate(self.dims)
            )
            if ok:
                self._decompose(child, region, cov, out)


def _orthants(k: int):
    out = [()]
    for _ in range(k):
        out = [key + (b,) for key in out for b in (0, 1)]
    return out


def _make_structure(owner, dims, cell: AxisBox):
    if len(dims) == 1:
        return _OneDim(owner, dims[0], cell.lo[0], cell.hi[0])
    return _Multi(owner, dims, cell)


def _feed(structure, items):
    if isinstance(structure, _OneDim):
        for src, region in items:
            structure.register(src, region)
    else:
        structure.build(items)


class FragmentIndex:
    """Stabbing and decomposition index over a fixed family of integer boxes.

    Boxes are closed with integer corners inside [0, bound] per axis; query
    points are integer grid points in the same range.  Fragment regions are
    reported in the internal doubled scale (see the module docstring).
    """

    def __init__(
        self,
        boxes: Mapping[int, AxisBox],
        bound: Optional[int] = None,
        dim: Optional[int] = None,
    ):
        if not boxes:
            if dim is None or bound is None:
                raise PreconditionError("empty family needs explicit dim and bound")
            self.dim = dim
            self.bound = bound
        else:
            dims = {box.dim for box in boxes.values()}
            if len(dims) != 1:
                raise PreconditionError("boxes of mixed dimension")
            self.dim = dims.pop()
            if dim is not None and dim != self.dim:
                raise PreconditionError("dim does not match the boxes")
            hi_max = max(max(box.hi) for box in boxes.values())
            lo_min = min(min(box.lo) for box in boxes.values())
            if lo_min < 0:
                raise PreconditionError("box coordinates must be nonnegative")
            self.bound = bound if bound is not None else hi_max
            if hi_max > self.bound:
                raise PreconditionError(f"box leaves [0,{self.bound}]")
        self.boxes = dict(boxes)
        self.fragments: dict[int, Fragment] = {}
        self._by_key: dict[tuple, int] = {}
        self._by_source: dict[int, list[int]] = {}
        self._onedims: list[_OneDim] = []
        self._node_count = 0
        self._incidence_count = 0
        self._runtime_max_freq = 0
        self._decomp_cache: dict[int, tuple[int, ...]] = {}
        start = time.monotonic()
        side = next_pow2(2 * self.bound + 2)
        root = AxisBox((0,) * self.dim, (side,) * self.dim, closed=False)
        self.root_cell = root
        items = []
        for sid in sorted(boxes):
            region = _double_box(boxes[sid])
            clipped = _clip(region, tuple(range(self.dim)), root.lo, root.hi)
            if clipped is not None:
                items.append((sid, clipped))
        self._structure = _make_structure(self, tuple(range(self.dim)), root)
        _feed(self._structure, items)
        for od in self._onedims:
            od.finalize()
        self.build_micros = int((time.monotonic() - start) * 1_000_000)

    # -- fragment registry --------------------------------------------------

    def _mint(self, src: int, region: AxisBox) -> int:
        key = (src, region.lo, region.hi)
        fid = self._by_key.get(key)
        if fid is None:
            fid = len(self.fragments)
            self.fragments[fid] = Fragment(fid, src, region)
            self._by_key[key] = fid
            self._by_source.setdefault(src, []).append(fid)
        return fid

    def fragments_of(self, source_id: int) -> list[int]:
        return list(self._by_source.get(source_id, ()))

    # -- queries ------------------------------------------------------------

    def sets_containing(self, point) -> list[int]:
        """Fragment ids whose region contains the (undoubled) grid point."""
        p = _double_point(point)
        if len(p) != self.dim:
            raise PreconditionError(f"point {point} has wrong dimension")
        out: set[int] = set()
        self._structure.query(p, out)
        if len(out) > self._runtime_max_freq:
            self._runtime_max_freq = len(out)
        return sorted(out)

    def sources_containing(self, point) -> list[int]:
        return sorted({self.fragments[f].source_id for f in self.sets_containing(point)})

    def cover_decomposition(self, source_id: int) -> list[int]:
        """Fragment ids whose union covers the source box on the grid."""
        got = self._decomp_cache.get(source_id)
        if got is None:
            if source_id not in self.boxes:
                raise PreconditionError(f"unknown source {source_id}")
            region = _clip(
                _double_box(self.boxes[source_id]),
                tuple(range(self.dim)),
                self.root_cell.lo,
                self.root_cell.hi,
            )
            out: set[int] = set()
            if region is not None:
                self._structure.decompose(region, out)
            got = tuple(sorted(out))
            self._decomp_cache[source_id] = got
        return list(got)

    # -- metrics ------------------------------------------------------------

    def metrics(self, sample: Optional[Iterable] = None) -> FreqMetrics:
        histogram: dict[int, int] = {}
        max_freq = self._runtime_max_freq
        if sample is not None:
            for p in sample:
                f = len(self.sets_containing(p))
                histogram[f] = histogram.get(f, 0) + 1
                max_freq = max(max_freq, f)
        max_mu = 0
        for sid in self.boxes:
            max_mu = max(max_mu, len(self.cover_decomposition(sid)))
        return FreqMetrics(
            max_frequency=max_freq,
            max_decomposition=max_mu,
            fragment_count=len(self.fragments),
            node_count=self._node_count,
            incidence_count=self._incidence_count,
            build_micros=self.build_micros,
            histogram=histogram,
        )
