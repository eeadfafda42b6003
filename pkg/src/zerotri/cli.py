"""Command-line harness for the reduction laboratory.

Subcommands: `gen` (instance files), `reduce` (single transformation
steps), `solve` (end-to-end pipelines), `verify` (oracle-equivalence
campaigns), `bench` (size ladders with slope fits), `estimate`
(zero-weight 4-cycle sampling).  Exit codes: 0 success, 1 verification
mismatch, 2 usage error.  All outputs are deterministic given --seed;
wall-clock figures appear only in `bench` rows and behind --timings.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import campaigns as campaignsmod
from . import digit_reduction as dr
from . import det_reduction as detred
from . import four_cycles as fc
from . import instances as inst
from . import oracles
from .campaigns import UsageError, run_campaign
from .report import canonical_json

BENCH_FAMILIES = ("sparse-exact-q", "sparse-exact-n", "sparse-3sum-n",
                  "an-recursion")
BENCH_COLUMNS = ("family", "size", "nodes", "edges", "max_degree",
                 "oracle_calls", "wall_ms")


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage problems as exceptions."""

    def error(self, message: str):
        raise UsageError(message)


def _parse_parts(text: str) -> tuple:
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"--parts expects integers like 4,4,4, got {text!r}")
    if len(parts) != 3 or min(parts) < 0:
        raise UsageError(f"--parts expects three sizes, got {text!r}")
    return parts


def _parse_sizes(text: str) -> list:
    if not text:
        return []
    try:
        sizes = [int(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"--sizes expects integers like 8,16,32, got {text!r}")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise UsageError("--sizes must be strictly ascending")
    return sizes


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_instance(path: str):
    with open(path, encoding="utf-8") as fh:
        return inst.parse_instance(fh.read())


def _require(obj, cls, what: str):
    if not isinstance(obj, cls):
        raise UsageError(f"{what} requires a {cls.__name__} instance file, "
                         f"got {type(obj).__name__}")
    return obj


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def _cmd_gen(ns) -> int:
    seed = ns.seed
    if ns.kind == "exact-tri":
        parts = _parse_parts(ns.parts) if ns.parts else (8, 8, 8)
        bound = ns.weight_bound or 64
        g = inst.gen_exact_tri(*parts, weight_bound=bound, density=ns.density,
                               planted=ns.planted, seed=seed)
    elif ns.kind == "3sum":
        n = ns.n or 16
        bound = ns.weight_bound or n ** 3
        g = inst.gen_3sum(n, weight_bound=bound, planted=ns.planted, seed=seed)
    else:  # fewc4: antisymmetric weighted instance for the 4-cycle driver
        n = ns.n or 8
        bound = ns.weight_bound or 64
        und = inst.gen_undirected(n, weight_bound=bound, density=ns.density,
                                  planted=ns.planted, seed=seed)
        g = inst.antisymmetrize(und)
    _emit(inst.serialize_instance(g), ns.out)
    return 0


# ---------------------------------------------------------------------------
# reduce
# ---------------------------------------------------------------------------


def _cmd_reduce(ns) -> int:
    obj = _load_instance(ns.input_path)
    report: dict = {"mode": ns.mode, "seed": ns.seed}
    if ns.mode == "sparse-exact":
        g = _require(obj, inst.WeightedTripartiteGraph, "sparse-exact")
        q = ns.q or dr.icbrt_ceil(max(1, g.weight_bound))
        sp = dr.build_sparse_exact(dr.decompose_graph(g, q), q)
        report.update(q=q, nodes=sp.n_nodes, edges=sp.m,
                      max_degree=sp.max_degree())
        payload = inst.serialize_instance(sp)
    elif ns.mode == "sparse-3sum":
        ts = _require(obj, inst.ThreeSumInstance, "sparse-3sum")
        q = ns.q or dr.icbrt_ceil(max(1, ts.weight_bound))
        dec = dr.DecomposedThreeSum(
            tuple(dr.digit_decompose(x, q).as_weight() for x in ts.a),
            tuple(dr.digit_decompose(x, q).as_weight() for x in ts.b),
            tuple(dr.digit_decompose(x, q).as_weight() for x in ts.c), q)
        sp = dr.build_sparse_3sum(dec, q)
        report.update(q=q, nodes=sp.n_nodes, edges=sp.m,
                      max_degree=sp.max_degree())
        payload = inst.serialize_instance(sp)
    elif ns.mode == "mod-p":
        g = _require(obj, inst.WeightedTripartiteGraph, "mod-p")
        n = max(g.part_sizes) if g.part_sizes else 0
        t = float(max(n, 1)) ** ns.t_exponent
        gm, draw = dr.mod_p_reduce(g, t, ns.seed)
        report.update(t=t, p=draw.p, prime_lo=draw.lo, prime_hi=draw.hi)
        payload = inst.serialize_instance(gm)
    else:  # degree-bounded: emit the first round's pruned sparse graph
        g = _require(obj, inst.WeightedTripartiteGraph, "degree-bounded")
        q = ns.q or dr.icbrt_ceil(max(1, g.weight_bound))
        g3 = dr.decompose_graph(g, q)
        graphs = dr.degree_bounded_sparse(g3, q, ns.seed, rounds=ns.rounds)
        report.update(q=q, rounds=len(graphs),
                      threshold=dr.degree_threshold(g3.total_nodes, q),
                      round_edges=[sp.m for sp in graphs],
                      round_max_degree=[sp.max_degree() for sp in graphs])
        payload = inst.serialize_instance(graphs[0])
    _emit(payload, ns.out)
    if ns.out:
        sys.stdout.write(canonical_json(report))
    return 0


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def _brute_fewc4_backend(g: inst.WeightedTripartiteGraph):
    wits, _ = oracles.brute_exact_triangles(g, cap=1)
    return wits[0] if wits else None


def _cmd_solve(ns) -> int:
    obj = _load_instance(ns.input_path)
    started = time.perf_counter()
    out: dict = {"pipeline": ns.pipeline, "seed": ns.seed}
    if ns.pipeline == "3sum":
        ts = _require(obj, inst.ThreeSumInstance, "3sum pipeline")
        t = None if ns.t_exponent is None else float(max(ts.n, 1)) ** ns.t_exponent
        answer, rep = dr.threesum_via_listing(ts, t=t, output_budget=ns.budget,
                                              seed=ns.seed)
        out.update(answer=answer, report=rep.to_dict())
    else:
        g = _require(obj, inst.WeightedTripartiteGraph, f"{ns.pipeline} pipeline")
        n = max(g.part_sizes) if g.part_sizes else 0
        t = None if ns.t_exponent is None else float(max(n, 1)) ** ns.t_exponent
        if ns.pipeline == "listing":
            answer, rep = dr.exact_tri_via_listing(g, t=t, output_budget=ns.budget,
                                                   seed=ns.seed)
            out.update(answer=answer, report=rep.to_dict())
        elif ns.pipeline == "an":
            answer, rep = dr.exact_tri_via_an(g, t=t, seed=ns.seed,
                                              rounds=ns.rounds)
            out.update(answer=answer, report=rep.to_dict())
        elif ns.pipeline == "detect":
            out.update(answer=dr.detect_via_sparse(g))
        elif ns.pipeline == "det":
            stats = detred.DetStats()
            table = detred.near_zero_table(g, epsilon=ns.epsilon, stats=stats)
            out.update(answer=len(table) > 0, tol=table.tol,
                       entries=len(table),
                       table=sorted([a, b, c, s]
                                    for (a, b), (c, s) in table.entries.items()),
                       levels=len(stats.levels),
                       instances=stats.total_instances())
        else:  # fewc4
            wit = fc.solve_with_fewc4_oracle(g, _brute_fewc4_backend,
                                             delta=ns.delta, x=ns.x,
                                             seed=ns.seed)
            out.update(answer=wit is not None,
                       witness=None if wit is None else [wit.a, wit.b, wit.c])
    if ns.timings:
        out["wall_ms"] = round((time.perf_counter() - started) * 1000.0, 3)
    _emit(canonical_json(out), ns.out)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _flatten(prefix: str, obj, rows: list) -> None:
    if isinstance(obj, dict):
        for key in sorted(obj, key=str):
            _flatten(f"{prefix}.{key}" if prefix else str(key), obj[key], rows)
    elif isinstance(obj, (list, tuple)):
        rows.append((prefix, canonical_json(list(obj)).strip()))
    else:
        rows.append((prefix, canonical_json(obj).strip()))


def _cmd_verify(ns) -> int:
    args = {"trials": ns.trials, "seed": ns.seed, "n": ns.n, "q": ns.q,
            "weight_bound": ns.weight_bound, "epsilon": ns.epsilon,
            "delta": ns.delta, "rounds": ns.rounds, "parts_c": ns.parts_c}
    ok, payload = run_campaign(ns.campaign, args)
    if ns.format == "json":
        text = canonical_json(payload)
    else:
        rows: list = []
        _flatten("", payload, rows)
        lines = ["# zerotri verify v1", "key,value"]
        lines += [f"{key},{value}" for key, value in rows]
        text = "\n".join(lines) + "\n"
    _emit(text, ns.out)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def _bench_row(family: str, size: int, seed: int) -> tuple:
    started = time.perf_counter()
    oracle_calls = 0
    if family == "sparse-exact-q":
        g = inst.gen_exact_tri(8, 8, 8, weight_bound=8, density=1.0,
                               planted=0, seed=seed)
        sp = dr.build_sparse_exact(dr.decompose_graph(g, size), size)
    elif family == "sparse-exact-n":
        g = inst.gen_exact_tri(size, size, size, weight_bound=64, density=1.0,
                               planted=0, seed=seed)
        sp = dr.build_sparse_exact(dr.decompose_graph(g, 4), 4)
    elif family == "sparse-3sum-n":
        ts = inst.gen_3sum(size, weight_bound=512, planted=0, seed=seed)
        q = 8
        dec = dr.DecomposedThreeSum(
            tuple(dr.digit_decompose(x, q).as_weight() for x in ts.a),
            tuple(dr.digit_decompose(x, q).as_weight() for x in ts.b),
            tuple(dr.digit_decompose(x, q).as_weight() for x in ts.c), q)
        sp = dr.build_sparse_3sum(dec, q)
    else:  # an-recursion: size is the target edge count
        sp = campaignsmod._gen_sparse_graph(size, planted=1, seed=seed)
        res = dr.list_via_an_oracle(sp)
        oracle_calls = res.oracle_calls
    wall_ms = round((time.perf_counter() - started) * 1000.0, 3)
    return (family, size, sp.n_nodes, sp.m, sp.max_degree(), oracle_calls,
            wall_ms)


def bench_ladder(family: str, sizes: list, pipeline: str | None = None,
                 seed: int = 0) -> str:
    """Build a CSV size ladder for `family` and fit the edge-growth slope."""
    if family not in BENCH_FAMILIES:
        raise UsageError(f"unknown bench family {family!r}; choices: "
                         + ", ".join(BENCH_FAMILIES))
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise UsageError("bench sizes must be strictly ascending")
    lines = ["# zerotri bench v1",
             f"# config: family={family} sizes={','.join(map(str, sizes))} "
             f"seed={seed}",
             ",".join(BENCH_COLUMNS)]
    rows = [_bench_row(family, size, seed) for size in sizes]
    lines += [",".join(str(v) for v in row) for row in rows]
    if len(rows) >= 2:
        xs = np.log([row[1] for row in rows])
        ys = np.log([max(1, row[3]) for row in rows])
        slope = float(np.polyfit(xs, ys, 1)[0])
        lines.append(f"# fit edges_vs_size slope={slope:.4f}")
    return "\n".join(lines) + "\n"


def _cmd_bench(ns) -> int:
    sizes = _parse_sizes(ns.sizes)
    _emit(bench_ladder(ns.family, sizes, seed=ns.seed), ns.out)
    return 0


# ---------------------------------------------------------------------------
# estimate
# ---------------------------------------------------------------------------


def _cmd_estimate(ns) -> int:
    g = _require(_load_instance(ns.input_path), inst.WeightedTripartiteGraph,
                 "estimate")
    if ns.error_target < 1:
        raise UsageError("--error-target must be >= 1")
    est = fc.estimate_zero_4cycles(g, ns.error_target, ns.seed)
    out = {"estimate": est, "error_target": ns.error_target, "seed": ns.seed,
           "nodes": g.total_nodes}
    _emit(canonical_json(out), ns.out)
    return 0


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="zerotri",
                     description="Zero-weight triangle reduction laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--kind", required=True,
                   choices=["exact-tri", "3sum", "fewc4"])
    p.add_argument("--parts", help="part sizes as n1,n2,n3")
    p.add_argument("--n", type=int)
    p.add_argument("--weight-bound", type=int)
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--planted", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("reduce", help="apply one reduction step")
    p.add_argument("--mode", required=True,
                   choices=["sparse-exact", "sparse-3sum", "mod-p",
                            "degree-bounded"])
    p.add_argument("--in", dest="input_path", required=True)
    p.add_argument("--q", type=int)
    p.add_argument("--t-exponent", type=float, default=2.25)
    p.add_argument("--rounds", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("solve", help="run an end-to-end pipeline")
    p.add_argument("--pipeline", required=True,
                   choices=["listing", "an", "detect", "3sum", "det", "fewc4"])
    p.add_argument("--in", dest="input_path", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int)
    p.add_argument("--t-exponent", type=float)
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--x", type=float)
    p.add_argument("--rounds", type=int)
    p.add_argument("--timings", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="run an oracle-equivalence campaign")
    p.add_argument("campaign")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--weight-bound", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--rounds", type=int)
    p.add_argument("--parts-c", type=int)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="run a benchmark size ladder")
    p.add_argument("--family", required=True, choices=list(BENCH_FAMILIES))
    p.add_argument("--sizes", default="", help="ascending sizes like 8,16,32")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("estimate", help="estimate zero-weight 4-cycle count")
    p.add_argument("--in", dest="input_path", required=True)
    p.add_argument("--error-target", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_estimate)
    return parser


def run_command(argv: list) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        return ns.func(ns)
    except UsageError as exc:
        sys.stderr.write(parser.format_usage())
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:  # bad instance files, empty prime windows
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except SystemExit as exc:  # argparse --help
        code = exc.code
        return 0 if code is None else int(code)


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
