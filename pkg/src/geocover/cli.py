"""Command line front end.

Subcommands:

    run        replay an instance file through an algorithm, emit CSV
    gen        write instance files (fixed families and seeded random ones)
    oracle     exact optimum of an instance's final live configuration
    adversary  play the adaptive probe games against a live algorithm
    bench      dynamic-cover update-cost trends across instance sizes
    plot       chart a CSV column pair to a PNG (batch, non-interactive)

Exit codes: 0 success, 2 infeasible event stream, 3 malformed instance file,
1 other precondition failures.  GEOCOVER_SEED supplies the default seed.
"""

import argparse
import csv
import os
import random
import sys

from .errors import GeometryError, InfeasibleError, ParseError, PreconditionError
from .evaluation import (
    TIGHT_INTERVALS,
    GreedyAllPlayer,
    IntervalCoverState,
    gen_quadrant_lb,
    gen_unitsquare_lb,
    opt_hitting_set,
    opt_set_cover,
    play_halving_adversary,
    play_interval_adversary,
)
from .geometry import AxisBox
from .harness import ALGORITHMS, make_adapter, run_experiment, write_csv
from .instancefile import Instance, parse_instance, serialize
from .quadcover import QuadtreeCover


def _default_seed() -> int:
    return int(os.environ.get("GEOCOVER_SEED", "0"))


# ---------------------------------------------------------------------------
# instance generators


def gen_lowerbound_instance(family: str, m: int) -> Instance:
    """Nested-range family plus the diagonal probe workload."""
    fam = gen_quadrant_lb(m) if family == "quadrant" else gen_unitsquare_lb(m)
    inst = Instance(dim=2, grid=fam.N, mode="set_cover", name=f"{family}{m}")
    inst.sets = dict(fam.sets)
    for i in range(1, m + 1):
        inst.events.append(("+P", i, fam.point(i, i)))
    return inst


def gen_interval_instance() -> Instance:
    """The four-interval chain whose middle probe pins the ratio at 2."""
    inst = Instance(dim=1, grid=4, mode="set_cover", name="intervals")
    inst.sets = {
        iid: AxisBox((lo,), (hi,), closed=True)
        for iid, (lo, hi) in TIGHT_INTERVALS.items()
    }
    inst.events = [("+P", 0, (2,))]
    return inst


def gen_random_setcover(
    dim: int,
    m: int,
    events: int,
    seed: int,
    span: int = 32,
    max_side: int = 8,
    delete_frac: float = 0.25,
    weight_cap: int = 0,
) -> Instance:
    """Random cubes plus a feasible insert/delete point stream."""
    rng = random.Random(seed)
    sets = {}
    for sid in range(m):
        side = rng.randrange(1, min(max_side, span) + 1)
        lo = tuple(rng.randrange(0, span - side + 1) for _ in range(dim))
        sets[sid] = AxisBox(lo, tuple(c + side for c in lo), closed=True)
    inst = Instance(
        dim=dim, grid=span, mode="set_cover", sets=sets, name=f"rsc{m}x{events}"
    )
    if weight_cap:
        inst.weights = {sid: rng.randrange(1, weight_cap + 1) for sid in sets}
    live: dict[int, tuple] = {}
    taken: set[tuple] = set()
    next_id = 0
    for _ in range(events):
        if live and rng.random() < delete_frac:
            pid = rng.choice(sorted(live))
            taken.discard(live.pop(pid))
            inst.events.append(("-P", pid))
            continue
        for _ in range(64):
            box = sets[rng.randrange(m)]
            p = tuple(
                rng.randrange(lo, min(hi, span - 1) + 1)
                for lo, hi in zip(box.lo, box.hi)
            )
            if p not in taken:
                live[next_id] = p
                taken.add(p)
                inst.events.append(("+P", next_id, p))
                next_id += 1
                break
    return inst


def gen_random_hitting(
    dim: int,
    n: int,
    events: int,
    seed: int,
    span: int = 32,
    max_grow: int = 6,
    delete_frac: float = 0.25,
    weight_cap: int = 0,
) -> Instance:
    """Random fixed points plus a feasible box insert/delete stream."""
    rng = random.Random(seed)
    points: dict[int, tuple] = {}
    seen: set[tuple] = set()
    while len(points) < n:
        p = tuple(rng.randrange(0, span) for _ in range(dim))
        if p not in seen:
            seen.add(p)
            points[len(points)] = p
    inst = Instance(
        dim=dim,
        grid=span,
        mode="hitting_set",
        points=points,
        name=f"rhs{n}x{events}",
    )
    if weight_cap:
        inst.point_weights = {
            pid: rng.randrange(1, weight_cap + 1) for pid in points
        }
    live: dict[int, AxisBox] = {}
    taken: set[tuple] = set()
    next_id = 0
    for _ in range(events):
        if live and rng.random() < delete_frac:
            sid = rng.choice(sorted(live))
            box = live.pop(sid)
            taken.discard((box.lo, box.hi))
            inst.events.append(("-S", sid))
            continue
        for _ in range(64):
            anchor = points[rng.randrange(n)]
            lo = tuple(max(0, c - rng.randrange(0, max_grow + 1)) for c in anchor)
            hi = tuple(
                min(span - 1, c + rng.randrange(0, max_grow + 1)) for c in anchor
            )
            if (lo, hi) not in taken:
                box = AxisBox(lo, hi, closed=True)
                live[next_id] = box
                taken.add((lo, hi))
                inst.events.append(("+S", next_id, box))
                next_id += 1
                break
    return inst


# ---------------------------------------------------------------------------
# subcommands


def _cmd_run(args) -> int:
    inst = parse_instance(args.instance)
    metrics = run_experiment(
        inst, args.algo, oracle=args.oracle, timing=args.timing, run_id=args.run_id
    )
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            write_csv(metrics.rows, fh)
        line = f"run {metrics.run_id}: events={len(metrics.rows)} cost={metrics.final_cost}"
        if metrics.ratio is not None:
            line += f" opt={metrics.opt} ratio={metrics.ratio:.4f}"
        print(line)
    else:
        write_csv(metrics.rows, sys.stdout)
    return 0


def _cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.kind in ("quadrant", "unitsquare"):
        inst = gen_lowerbound_instance(args.kind, args.m)
    elif args.kind == "interval":
        inst = gen_interval_instance()
    elif args.kind == "random-sc":
        inst = gen_random_setcover(
            args.dim,
            args.m,
            args.events,
            seed,
            span=args.span,
            delete_frac=args.delete_frac,
            weight_cap=args.weight_cap,
        )
    else:
        inst = gen_random_hitting(
            args.dim,
            args.n,
            args.events,
            seed,
            span=args.span,
            delete_frac=args.delete_frac,
            weight_cap=args.weight_cap,
        )
    text = serialize(inst)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _final_config(inst: Instance):
    live_points: dict[int, tuple] = {}
    live_sets: dict[int, AxisBox] = {}
    for ev in inst.events:
        if ev[0] == "+P":
            live_points[ev[1]] = ev[2]
        elif ev[0] == "-P":
            live_points.pop(ev[1])
        elif ev[0] == "+S":
            live_sets[ev[1]] = ev[2]
        else:
            live_sets.pop(ev[1])
    return live_points, live_sets


def _cmd_oracle(args) -> int:
    inst = parse_instance(args.instance)
    live_points, live_sets = _final_config(inst)
    if inst.mode == "set_cover":
        boxes = dict(inst.sets)
        boxes.update(live_sets)
        weights = None
        if inst.weights:
            weights = {sid: inst.weights.get(sid, 1) for sid in boxes}
        res = opt_set_cover(list(live_points.values()), boxes, weights=weights)
    else:
        order = sorted(inst.points)
        pts = [inst.points[pid] for pid in order]
        weights = None
        if inst.point_weights:
            weights = {
                k: inst.point_weights.get(pid, 1) for k, pid in enumerate(order)
            }
        res = opt_hitting_set(pts, live_sets, weights=weights)
    status = "exact" if res.optimal else "timed_out"
    print(f"opt={res.value} status={status} nodes={res.nodes} ids={list(res.ids)}")
    return 0 if res.optimal else 1


def _cmd_adversary(args) -> int:
    rows = []
    if args.kind == "interval":
        trace = play_interval_adversary(IntervalCoverState(TIGHT_INTERVALS))
        print(
            f"interval: cost={trace.final_cost} opt={trace.opt} ratio={trace.ratio:.4f}"
        )
        rows.append(
            {
                "m": 4,
                "algo": "interval",
                "cost": trace.final_cost,
                "opt": trace.opt,
                "ratio": f"{trace.ratio:.6f}",
            }
        )
    else:
        for m in args.m_list:
            fam = (
                gen_quadrant_lb(m)
                if args.family == "quadrant"
                else gen_unitsquare_lb(m)
            )
            if args.algo == "quadcover":
                player = QuadtreeCover(fam.N, fam.sets)
            else:
                player = GreedyAllPlayer(fam.sets)
            trace = play_halving_adversary(player, fam)
            print(
                f"m={m}: cost={trace.final_cost} opt={trace.opt} "
                f"ratio={trace.ratio:.4f} rounds={len(trace.rounds)}"
            )
            rows.append(
                {
                    "m": m,
                    "algo": args.algo,
                    "cost": trace.final_cost,
                    "opt": trace.opt,
                    "ratio": f"{trace.ratio:.6f}",
                }
            )
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(
                fh, fieldnames=["m", "algo", "cost", "opt", "ratio"], lineterminator="\n"
            )
            writer.writeheader()
            writer.writerows(rows)
    return 0


def _cmd_bench(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    rows = []
    for m in args.m_list:
        if args.algo == "dynsc":
            inst = gen_random_setcover(
                args.dim, m, args.events, seed * 1000003 + m, span=args.span
            )
        else:
            inst = gen_random_hitting(
                args.dim, m, args.events, seed * 1000003 + m, span=args.span
            )
        adapter = make_adapter(args.algo, inst)
        for ev in inst.events:
            adapter.apply(ev)
        touched = adapter.handle.touched_log
        mean_touched = sum(touched) / len(touched) if touched else 0.0
        f_meas, mu_meas = adapter.f_mu()
        row = {
            "m": m,
            "algo": args.algo,
            "ops": len(inst.events),
            "mean_touched": f"{mean_touched:.4f}",
            "cost": adapter.cost(),
            "f_meas": f_meas,
            "mu_meas": mu_meas,
        }
        rows.append(row)
        print(
            f"m={m}: ops={row['ops']} mean_touched={row['mean_touched']} "
            f"cost={row['cost']} f={f_meas} mu={mu_meas}"
        )
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(
                fh,
                fieldnames=["m", "algo", "ops", "mean_touched", "cost", "f_meas", "mu_meas"],
                lineterminator="\n",
            )
            writer.writeheader()
            writer.writerows(rows)
    return 0


def _cmd_plot(args) -> int:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with open(args.csv, newline="") as fh:
        data = [row for row in csv.DictReader(fh)]
    if not data:
        raise PreconditionError(f"{args.csv} holds no data rows")
    for col in (args.x, args.y):
        if col not in data[0]:
            raise PreconditionError(f"column {col!r} not in {sorted(data[0])}")
    series: dict[str, list] = {}
    for row in data:
        if row[args.y] == "":
            continue
        key = row.get("algo", "") or "all"
        series.setdefault(key, []).append((float(row[args.x]), float(row[args.y])))
    fig, ax = plt.subplots(figsize=(6, 4))
    for key in sorted(series):
        pts = sorted(series[key])
        ax.plot([x for x, _ in pts], [y for _, y in pts], marker="o", label=key)
    ax.set_xlabel(args.x)
    ax.set_ylabel(args.y)
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")
    return 0


# ---------------------------------------------------------------------------
# argument wiring


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geocover", description="geometric cover algorithms workbench"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="replay an instance through an algorithm")
    p.add_argument("instance")
    p.add_argument("--algo", required=True, choices=sorted(ALGORITHMS))
    p.add_argument("--oracle", action="store_true", help="compute OPT per event")
    p.add_argument("--csv", help="write rows here instead of stdout")
    p.add_argument("--timing", choices=("wall", "zero"), default="wall")
    p.add_argument("--run-id", default=None)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("gen", help="write an instance file")
    p.add_argument(
        "kind",
        choices=("quadrant", "unitsquare", "interval", "random-sc", "random-hs"),
    )
    p.add_argument("--m", type=int, default=8, help="ranges (families, random-sc)")
    p.add_argument("--n", type=int, default=12, help="fixed points (random-hs)")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--events", type=int, default=40)
    p.add_argument("--span", type=int, default=32)
    p.add_argument("--delete-frac", type=float, default=0.25)
    p.add_argument("--weight-cap", type=int, default=0, help="0 = unweighted")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("oracle", help="exact optimum of the final configuration")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("adversary", help="adaptive probe games")
    p.add_argument("--kind", choices=("halving", "interval"), default="halving")
    p.add_argument("--algo", choices=("quadcover", "greedy-all"), default="quadcover")
    p.add_argument("--family", choices=("unitsquare", "quadrant"), default="unitsquare")
    p.add_argument("--m-list", type=_int_list, default=[4, 16, 64])
    p.add_argument("--csv", default=None)
    p.set_defaults(func=_cmd_adversary)

    p = sub.add_parser("bench", help="dynamic update-cost trends")
    p.add_argument("--algo", choices=("dynsc", "dynhs"), default="dynsc")
    p.add_argument("--m-list", type=_int_list, default=[8, 16, 32])
    p.add_argument("--events", type=int, default=120)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--span", type=int, default=64)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("plot", help="chart a CSV column pair to PNG")
    p.add_argument("csv")
    p.add_argument("--out", required=True)
    p.add_argument("--x", default="m")
    p.add_argument("--y", default="ratio")
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except (PreconditionError, GeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
