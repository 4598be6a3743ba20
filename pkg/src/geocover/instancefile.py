"""Plain-text instance files: parsing, validation, serialization.

One record per line, whitespace separated; `#` starts a comment that runs to
the end of the line.  Records:

    META dim=<d> N=<int> mode=<set_cover|hitting_set>
    SET <id> lo1..lod hi1..hid [w=<int>]
    POINT <id> x1..xd [w=<int>]
    +P <id> x1..xd
    -P <id>
    +S <id> lo1..lod hi1..hid
    -S <id>

Weights attach to the objects a solution pays for: SET records in set_cover
mode, POINT records in hitting_set mode (both are accepted anywhere and
ignored by algorithms that do not price them).

META must come first.  SET/POINT records declare the fixed geometry; +P/-P
and +S/-S form the event log.  All coordinates are integers inside the
[0, N]^dim grid, boxes are closed, and removal events must reference a live
id inserted by an earlier event.  Serialization is canonical (sorted fixed
geometry, events in order), so parse -> serialize -> parse is an identity.
"""

from dataclasses import dataclass, field
from typing import Optional

from .errors import ParseError
from .geometry import AxisBox

MODES = ("set_cover", "hitting_set")

CSV_COLUMNS = (
    "run_id",
    "algo",
    "event_idx",
    "op",
    "cost",
    "delta",
    "opt",
    "ratio",
    "f_meas",
    "mu_meas",
    "micros",
)


@dataclass
class Instance:
    dim: int
    grid: int
    mode: str
    sets: dict = field(default_factory=dict)
    weights: dict = field(default_factory=dict)
    points: dict = field(default_factory=dict)
    point_weights: dict = field(default_factory=dict)
    events: list = field(default_factory=list)
    name: str = "instance"


def _int(tok: str, what: str, line_no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} {tok!r} is not an integer", line_no) from None


def _coords(tokens, dim, what, line_no):
    if len(tokens) != dim:
        raise ParseError(
            f"{what} needs {dim} coordinates, got {len(tokens)}", line_no
        )
    return tuple(_int(t, f"{what} coordinate", line_no) for t in tokens)


def _box(tokens, dim, grid, what, line_no) -> AxisBox:
    if len(tokens) != 2 * dim:
        raise ParseError(
            f"{what} needs {2 * dim} corner coordinates, got {len(tokens)}", line_no
        )
    lo = tuple(_int(t, f"{what} corner", line_no) for t in tokens[:dim])
    hi = tuple(_int(t, f"{what} corner", line_no) for t in tokens[dim:])
    for a, b in zip(lo, hi):
        if a > b:
            raise ParseError(f"{what} has inverted corners {lo}..{hi}", line_no)
    if min(lo) < 0 or max(hi) > grid:
        raise ParseError(f"{what} leaves the [0,{grid}] grid", line_no)
    return AxisBox(lo, hi, closed=True)


def _point(coords, grid, what, line_no):
    if min(coords) < 0 or max(coords) > grid:
        raise ParseError(f"{what} {coords} leaves the [0,{grid}] grid", line_no)
    return coords


def _split_weight(body, line_no):
    if body and body[-1].startswith("w="):
        w = _int(body[-1][2:], "weight", line_no)
        if w < 1:
            raise ParseError(f"weight must be >= 1, got {w}", line_no)
        return body[:-1], w
    return body, None


def parse_text(text: str, name: str = "instance") -> Instance:
    inst: Optional[Instance] = None
    live_points: set[int] = set()
    live_sets: set[int] = set()
    for line_no, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        kind, rest = tokens[0], tokens[1:]
        if inst is None:
            if kind != "META":
                raise ParseError(f"first record must be META, got {kind!r}", line_no)
            fields = {}
            for tok in rest:
                key, sep, value = tok.partition("=")
                if not sep or key in fields:
                    raise ParseError(f"bad META token {tok!r}", line_no)
                fields[key] = value
            if set(fields) != {"dim", "N", "mode"}:
                raise ParseError(
                    "META needs exactly dim=, N= and mode=", line_no
                )
            dim = _int(fields["dim"], "dim", line_no)
            grid = _int(fields["N"], "N", line_no)
            if dim < 1 or grid < 1:
                raise ParseError("dim and N must be positive", line_no)
            if fields["mode"] not in MODES:
                raise ParseError(
                    f"mode must be one of {'|'.join(MODES)}, got {fields['mode']!r}",
                    line_no,
                )
            inst = Instance(dim=dim, grid=grid, mode=fields["mode"], name=name)
            continue
        if kind == "META":
            raise ParseError("duplicate META record", line_no)
        if kind == "SET":
            if not rest:
                raise ParseError("SET needs an id", line_no)
            sid = _int(rest[0], "set id", line_no)
            if sid in inst.sets:
                raise ParseError(f"duplicate SET id {sid}", line_no)
            body, w = _split_weight(rest[1:], line_no)
            if w is not None:
                inst.weights[sid] = w
            inst.sets[sid] = _box(body, inst.dim, inst.grid, f"set {sid}", line_no)
        elif kind == "POINT":
            if not rest:
                raise ParseError("POINT needs an id", line_no)
            pid = _int(rest[0], "point id", line_no)
            if pid in inst.points:
                raise ParseError(f"duplicate POINT id {pid}", line_no)
            body, w = _split_weight(rest[1:], line_no)
            if w is not None:
                inst.point_weights[pid] = w
            coords = _coords(body, inst.dim, f"point {pid}", line_no)
            inst.points[pid] = _point(coords, inst.grid, f"point {pid}", line_no)
        elif kind == "+P":
            if not rest:
                raise ParseError("+P needs an id", line_no)
            pid = _int(rest[0], "point id", line_no)
            if pid in live_points:
                raise ParseError(f"+P id {pid} is already live", line_no)
            coords = _coords(rest[1:], inst.dim, "+P point", line_no)
            _point(coords, inst.grid, "+P point", line_no)
            live_points.add(pid)
            inst.events.append(("+P", pid, coords))
        elif kind == "-P":
            if len(rest) != 1:
                raise ParseError("-P takes exactly an id", line_no)
            pid = _int(rest[0], "point id", line_no)
            if pid not in live_points:
                raise ParseError(f"-P id {pid} is not live", line_no)
            live_points.discard(pid)
            inst.events.append(("-P", pid))
        elif kind == "+S":
            if not rest:
                raise ParseError("+S needs an id", line_no)
            sid = _int(rest[0], "set id", line_no)
            if sid in live_sets or sid in inst.sets:
                raise ParseError(f"+S id {sid} is already taken", line_no)
            box = _box(rest[1:], inst.dim, inst.grid, "+S box", line_no)
            live_sets.add(sid)
            inst.events.append(("+S", sid, box))
        elif kind == "-S":
            if len(rest) != 1:
                raise ParseError("-S takes exactly an id", line_no)
            sid = _int(rest[0], "set id", line_no)
            if sid not in live_sets:
                raise ParseError(f"-S id {sid} is not live", line_no)
            live_sets.discard(sid)
            inst.events.append(("-S", sid))
        else:
            raise ParseError(f"unknown record type {kind!r}", line_no)
    if inst is None:
        raise ParseError("empty file: missing META record", 1)
    return inst


def parse_instance(path) -> Instance:
    import pathlib

    p = pathlib.Path(path)
    return parse_text(p.read_text(), name=p.stem)


def serialize(inst: Instance) -> str:
    lines = [f"META dim={inst.dim} N={inst.grid} mode={inst.mode}"]
    for sid in sorted(inst.sets):
        box = inst.sets[sid]
        parts = ["SET", str(sid), *map(str, box.lo), *map(str, box.hi)]
        if sid in inst.weights:
            parts.append(f"w={inst.weights[sid]}")
        lines.append(" ".join(parts))
    for pid in sorted(inst.points):
        parts = ["POINT", str(pid), *map(str, inst.points[pid])]
        if pid in inst.point_weights:
            parts.append(f"w={inst.point_weights[pid]}")
        lines.append(" ".join(parts))
    for ev in inst.events:
        if ev[0] == "+P":
            lines.append(" ".join(["+P", str(ev[1]), *map(str, ev[2])]))
        elif ev[0] == "-P":
            lines.append(f"-P {ev[1]}")
        elif ev[0] == "+S":
            box = ev[2]
            lines.append(" ".join(["+S", str(ev[1]), *map(str, box.lo), *map(str, box.hi)]))
        else:
            lines.append(f"-S {ev[1]}")
    return "\n".join(lines) + "\n"
