"""Verification campaigns: each pits a pipeline against a brute oracle.

Every campaign returns (ok, report) where `report` is a JSON-ready dict
embedding the configuration needed to reproduce it byte-for-byte.  No
campaign may pass vacuously: each one checks that it actually exercised
the property (at least one witness, at least one yes and one no, ...) and
fails otherwise.  Campaigns never report wall-clock figures; correctness
must be machine-independent.

Trials run concurrently on a small thread pool with per-trial derived
seeds; results are reduced in trial-index order, so scheduling cannot
affect the report.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import det_reduction, digit_reduction, four_cycles, oracles
from . import rng as rngmod
from .instances import (
    ThreeSumInstance,
    UndirectedWeightedGraph,
    UnweightedTripartiteGraph,
    WeightedTripartiteGraph,
    antisymmetrize,
    decode_triangle,
    gen_3sum,
    gen_exact_tri,
    gen_undirected,
)


class UsageError(ValueError):
    """Bad campaign parameters (reported as exit code 2 by the CLI)."""


def _child(seed: int, *tags) -> int:
    return rngmod.stream(seed, *tags).getrandbits(63)


def _map_trials(fn, trials: int, parallel: bool = True) -> list:
    if trials < 1:
        raise UsageError("trials must be >= 1")
    if not parallel or trials == 1:
        return [fn(i) for i in range(trials)]
    workers = max(1, min(8, trials, os.cpu_count() or 1))
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, range(trials)))


def _loglog_slope(xs, ys) -> float:
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])


# ---------------------------------------------------------------------------
# digit-identity
# ---------------------------------------------------------------------------


def _check_digit_identity(q: int) -> tuple:
    """Exhaustive vectorized check of the digit-sum criterion for one base.

    Values and their digit triples are encoded injectively into integers
    (fields wide enough that three-way sums cannot carry), so membership
    of a digit sum in the carry set is a table lookup.
    """
    lim = q ** 3
    vals = np.arange(-lim, lim + 1, dtype=np.int64)
    x3 = np.mod(vals, q)
    rest = (vals - x3) // q
    x2 = np.mod(rest, q)
    x1 = (rest - x2) // q
    m = 3 * q + 2
    keys = (x1 + q) * m * m + x2 * m + x3
    table = np.zeros((6 * q + 1) * m * m + 1, dtype=bool)
    for (d1, d2, d3) in digit_reduction.delta_set(q):
        table[(d1 + 3 * q) * m * m + d2 * m + d3] = True
    pair_keys = keys[:, None] + keys[None, :]
    pair_vals = vals[:, None] + vals[None, :]
    checked = 0
    mismatches = 0
    for iz in range(vals.size):
        member = table[pair_keys + keys[iz]]
        zero = (pair_vals + vals[iz]) == 0
        checked += member.size
        mismatches += int(np.count_nonzero(member != zero))
    return checked, mismatches


def campaign_digit_identity(args: dict):
    qs = [args["q"]] if args.get("q") else [2, 3, 4]
    per_q = {}
    total_mism = 0
    for q in qs:
        if q < 2:
            raise UsageError("digit-identity requires q >= 2")
        checked, mism = _check_digit_identity(q)
        per_q[str(q)] = {"triples_checked": checked, "mismatches": mism}
        total_mism += mism
    ok = total_mism == 0
    return ok, {"bases": per_q, "mismatches": total_mism}


# ---------------------------------------------------------------------------
# sparse-correspondence / threesum-correspondence
# ---------------------------------------------------------------------------


def _decoded_zero_triangles(g: WeightedTripartiteGraph, q: int) -> list:
    g3 = digit_reduction.decompose_graph(g, q)
    found = []
    for delta in digit_reduction.delta_set(q):
        sp = digit_reduction.build_sparse_exact(digit_reduction.retarget(g3, delta), q)
        for tri in oracles.list_triangles(sp).triangles:
            found.append(decode_triangle(sp, tri))
    return sorted(found)


def campaign_sparse_correspondence(args: dict):
    trials = args.get("trials") or 200
    seed = args.get("seed", 0)
    max_parts = args.get("n") or 12
    weight_bound = args.get("weight_bound") or 64
    q = digit_reduction.icbrt_ceil(weight_bound)

    def trial(ti: int):
        r = rngmod.stream(seed, "sparse-corr", ti)
        n1, n2, n3 = (r.randint(2, max_parts) for _ in range(3))
        density = r.choice((0.3, 0.7, 1.0))
        planted = 1 if ti % 3 == 0 else r.randint(0, 2)
        g = gen_exact_tri(n1, n2, n3, weight_bound, density, planted,
                          _child(seed, "sparse-corr-inst", ti))
        brute = sorted((w.a, w.b, w.c) for w in oracles.brute_exact_triangles(g)[0])
        return brute == _decoded_zero_triangles(g, q), len(brute)

    results = _map_trials(trial, trials)
    failures = [i for i, (good, _) in enumerate(results) if not good]
    total = sum(count for _, count in results)
    ok = not failures and total >= 1
    return ok, {"trials": trials, "failures": failures,
                "zero_triangles_compared": total, "q": q,
                "max_parts": max_parts, "weight_bound": weight_bound}


def campaign_threesum_correspondence(args: dict):
    trials = args.get("trials") or 200
    seed = args.get("seed", 0)
    max_n = args.get("n") or 24

    def trial(ti: int):
        r = rngmod.stream(seed, "3sum-corr", ti)
        n = r.randint(3, max_n)
        weight_bound = n ** 3
        q = digit_reduction.icbrt_ceil(weight_bound)
        planted = 1 if ti % 3 == 0 else r.randint(0, 2)
        inst = gen_3sum(n, weight_bound, planted, _child(seed, "3sum-corr-inst", ti))
        brute = sorted(oracles.brute_3sum(inst)[0])
        maps = []
        for arr in (inst.a, inst.b, inst.c):
            m: dict = {}
            for i, x in enumerate(arr):
                m.setdefault(x, []).append(i)
            maps.append(m)
        tri_b = tuple(sorted(digit_reduction.digit_decompose(v, q).as_weight()
                             for v in maps[1]))
        tri_c = tuple(sorted(digit_reduction.digit_decompose(v, q).as_weight()
                             for v in maps[2]))
        base_a = sorted(digit_reduction.digit_decompose(v, q).as_weight()
                        for v in maps[0])
        found = []
        for (d1, d2, d3) in digit_reduction.delta_set(q):
            tri_a = tuple((t0 - d1, t1 - d2, t2 - d3) for (t0, t1, t2) in base_a)
            dec = digit_reduction.DecomposedThreeSum(tri_a, tri_b, tri_c, q)
            sp = digit_reduction.build_sparse_3sum(dec, q)
            for tri in oracles.list_triangles(sp).triangles:
                ta, tb, tc = digit_reduction.decode_3sum_triangle(sp, tri)
                va = digit_reduction.digit_reconstruct(
                    (ta[0] + d1, ta[1] + d2, ta[2] + d3), q)
                vb = digit_reduction.digit_reconstruct(tb, q)
                vc = digit_reduction.digit_reconstruct(tc, q)
                assert va + vb + vc == 0
                for i in maps[0][va]:
                    for j in maps[1][vb]:
                        for k in maps[2][vc]:
                            found.append((i, j, k))
        return brute == sorted(found), len(brute)

    results = _map_trials(trial, trials)
    failures = [i for i, (good, _) in enumerate(results) if not good]
    total = sum(count for _, count in results)
    ok = not failures and total >= 1
    return ok, {"trials": trials, "failures": failures,
                "triples_compared": total, "max_n": max_n}


# ---------------------------------------------------------------------------
# edge-growth
# ---------------------------------------------------------------------------


def campaign_edge_growth(args: dict):
    seed = args.get("seed", 0)
    n_fixed = 8
    q_fixed = 4

    q_sizes = [2, 4, 8, 16]
    g_q = gen_exact_tri(n_fixed, n_fixed, n_fixed, q_sizes[0] ** 3, 1.0, 0,
                        _child(seed, "growth-q"))
    q_edges = []
    for q in q_sizes:
        g3 = digit_reduction.decompose_graph(g_q, q)
        q_edges.append(digit_reduction.build_sparse_exact(g3, q).m)
    slope_q = _loglog_slope(q_sizes, q_edges)

    n_sizes = [4, 8, 16]
    n_edges = []
    for n in n_sizes:
        g = gen_exact_tri(n, n, n, q_fixed ** 3, 1.0, 0, _child(seed, "growth-n", n))
        g3 = digit_reduction.decompose_graph(g, q_fixed)
        n_edges.append(digit_reduction.build_sparse_exact(g3, q_fixed).m)
    slope_n = _loglog_slope(n_sizes, n_edges)

    q3s = 8
    s_sizes = [8, 16, 32]
    s_edges = []
    for n in s_sizes:
        inst = gen_3sum(n, q3s ** 3, 0, _child(seed, "growth-3sum", n))
        triples = [
            tuple(sorted(digit_reduction.digit_decompose(v, q3s).as_weight()
                         for v in set(arr)))
            for arr in (inst.a, inst.b, inst.c)
        ]
        dec = digit_reduction.DecomposedThreeSum(*triples, q3s)
        s_edges.append(digit_reduction.build_sparse_3sum(dec, q3s).m)
    slope_3sum = _loglog_slope(s_sizes, s_edges)

    ok = (0.85 <= slope_q <= 1.15 and 1.85 <= slope_n <= 2.15
          and 0.85 <= slope_3sum <= 1.15)
    return ok, {
        "edges_vs_q": {"sizes": q_sizes, "edges": q_edges,
                       "slope": round(slope_q, 4), "range": [0.85, 1.15]},
        "edges_vs_n": {"sizes": n_sizes, "edges": n_edges,
                       "slope": round(slope_n, 4), "range": [1.85, 2.15]},
        "threesum_edges_vs_n": {"sizes": s_sizes, "edges": s_edges,
                                "slope": round(slope_3sum, 4),
                                "range": [0.85, 1.15]},
    }


# ---------------------------------------------------------------------------
# equiv-modp
# ---------------------------------------------------------------------------


def campaign_equiv_modp(args: dict):
    trials = args.get("trials") or 100
    seed = args.get("seed", 0)
    n = args.get("n") or 13
    if n < 4:
        raise UsageError("equiv-modp requires n >= 4")
    weight_bound = args.get("weight_bound") or (1 << 20)
    # Cap planting at 2/3 pair occupancy: edge-disjoint placement deadlocks
    # near full occupancy.  The default n keeps this at 100 per instance.
    planted = min(100, (n * n * 2) // 3)
    cube = n ** 3
    t_sound = max(2.0, cube / 16)
    t_ladder = [cube / 64, cube / 32, cube / 16, cube / 8]

    def sound_trial(ti: int):
        g = gen_exact_tri(n, n, n, weight_bound, 1.0, planted,
                          _child(seed, "modp-sound-inst", ti))
        gm, draw = digit_reduction.mod_p_reduce(g, t_sound,
                                                _child(seed, "modp-sound", ti))
        audit = digit_reduction.audit_mod_p(g, gm, draw.p)
        zero_count = audit["hits"] - audit["false_positives"]
        return audit["false_negatives"], zero_count

    sound = _map_trials(sound_trial, trials)
    false_negatives = sum(fn for fn, _ in sound)
    zero_checked = sum(zc for _, zc in sound)

    def fp_trial(ti: int):
        g = gen_exact_tri(n, n, n, weight_bound, 1.0, 0,
                          _child(seed, "modp-fp-inst", ti))
        row = []
        for li, t in enumerate(t_ladder):
            gm, draw = digit_reduction.mod_p_reduce(g, t,
                                                    _child(seed, "modp-fp", ti, li))
            audit = digit_reduction.audit_mod_p(g, gm, draw.p)
            row.append(audit["false_positives"])
        return row

    fp_rows = _map_trials(fp_trial, trials)
    fp_means = [sum(row[i] for row in fp_rows) / trials for i in range(len(t_ladder))]
    slope = _loglog_slope(t_ladder, [max(m, 1e-9) for m in fp_means])
    c_fit = fp_means[-1] / (t_ladder[-1] * math.log(max(n, 3)))
    ok = (false_negatives == 0 and zero_checked >= trials * planted
          and 0.7 <= slope <= 1.3)
    return ok, {"trials": trials, "n": n, "planted_per_instance": planted,
                "false_negatives": false_negatives,
                "zero_triangles_checked": zero_checked,
                "t_ladder": t_ladder, "fp_means": fp_means,
                "fp_vs_t_slope": round(slope, 4), "slope_range": [0.7, 1.3],
                "fitted_C": round(c_fit, 4)}


# ---------------------------------------------------------------------------
# equiv-listing / equiv-an / equiv-detect / equiv-3sum
# ---------------------------------------------------------------------------


def _equiv_report(results, trials: int, extra: dict):
    failures = [i for i, (good, _ans) in enumerate(results) if not good]
    yes = sum(1 for _, ans in results if ans)
    no = trials - yes
    ok = not failures and yes >= 1 and no >= 1
    rep = {"trials": trials, "failures": failures, "yes": yes, "no": no}
    rep.update(extra)
    return ok, rep


def _rand_parts(r, lo: int, hi: int, big_hi: int, ti: int):
    if big_hi > hi and ti % 10 == 9:
        return tuple(r.randint(hi, big_hi) for _ in range(3))
    return tuple(r.randint(lo, hi) for _ in range(3))


def campaign_equiv_listing(args: dict):
    trials = args.get("trials") or 200
    seed = args.get("seed", 0)
    max_n = args.get("n") or 16

    def trial(ti: int):
        r = rngmod.stream(seed, "eqlist", ti)
        parts = _rand_parts(r, 3, min(8, max_n), max_n, ti)
        w = 1 << 16
        planted = ti % 2
        g = gen_exact_tri(*parts, w, r.choice((0.6, 1.0)), planted,
                          _child(seed, "eqlist-inst", ti))
        expect = bool(oracles.brute_exact_triangles(g, cap=1)[0])
        ans, rep = digit_reduction.exact_tri_via_listing(
            g, seed=_child(seed, "eqlist-run", ti))
        good = ans == expect
        if ans and "witness" in rep.extra:
            a, b, c = rep.extra["witness"]
            good = good and g.triangle_weight(a, b, c) == 0
        return good, ans

    return _equiv_report(_map_trials(trial, trials), trials, {"max_n": max_n})


def campaign_equiv_an(args: dict):
    trials = args.get("trials") or 200
    seed = args.get("seed", 0)
    max_n = args.get("n") or 16
    rounds = args.get("rounds") or 2

    def trial(ti: int):
        r = rngmod.stream(seed, "eqan", ti)
        parts = _rand_parts(r, 3, min(6, max_n), min(8, max_n), ti)
        g = gen_exact_tri(*parts, 1 << 16, r.choice((0.6, 1.0)), ti % 2,
                          _child(seed, "eqan-inst", ti))
        expect = bool(oracles.brute_exact_triangles(g, cap=1)[0])
        ans, rep = digit_reduction.exact_tri_via_an(
            g, seed=_child(seed, "eqan-run", ti), rounds=rounds)
        good = ans == expect
        if ans and "witness" in rep.extra:
            a, b, c = rep.extra["witness"]
            good = good and g.triangle_weight(a, b, c) == 0
        return good, ans

    return _equiv_report(_map_trials(trial, trials), trials,
                         {"max_n": max_n, "rounds": rounds})


def campaign_equiv_detect(args: dict):
    trials = args.get("trials") or 200
    seed = args.get("seed", 0)
    max_n = args.get("n") or 16
    weight_bound = args.get("weight_bound") or 64

    def trial(ti: int):
        r = rngmod.stream(seed, "eqdet", ti)
        parts = _rand_parts(r, 3, min(8, max_n), max_n, ti)
        g = gen_exact_tri(*parts, weight_bound, r.choice((0.6, 1.0)), ti % 2,
                          _child(seed, "eqdet-inst", ti))
        expect = bool(oracles.brute_exact_triangles(g, cap=1)[0])
        ans = digit_reduction.detect_via_sparse(g)
        return ans == expect, ans

    return _equiv_report(_map_trials(trial, trials), trials,
                         {"max_n": max_n, "weight_bound": weight_bound})


def campaign_equiv_threesum(args: dict):
    trials = args.get("trials") or 200
    seed = args.get("seed", 0)
    max_n = args.get("n") or 32

    def trial(ti: int):
        r = rngmod.stream(seed, "eq3sum", ti)
        n = r.randint(4, max_n)
        inst = gen_3sum(n, 1 << 16, ti % 2, _child(seed, "eq3sum-inst", ti))
        expect = bool(oracles.brute_3sum(inst, cap=1)[0])
        ans, rep = digit_reduction.threesum_via_listing(
            inst, seed=_child(seed, "eq3sum-run", ti))
        good = ans == expect
        if ans and "witness" in rep.extra:
            i, j, k = rep.extra["witness"]
            good = good and inst.a[i] + inst.b[j] + inst.c[k] == 0
        return good, ans

    return _equiv_report(_map_trials(trial, trials), trials, {"max_n": max_n})


# ---------------------------------------------------------------------------
# degree-bound
# ---------------------------------------------------------------------------


def campaign_degree_bound(args: dict):
    trials = args.get("trials") or 500
    seed = args.get("seed", 0)
    n = args.get("n") or 5
    q = args.get("q") or 8
    weight_bound = q ** 3 // 2

    def trial(ti: int):
        r = rngmod.stream(seed, "degree", ti)
        edges = {(0, 1): {}, (1, 2): {}, (2, 0): {}}
        for i in range(n):
            for j in range(n):
                edges[(0, 1)][(i, j)] = r.randint(-weight_bound, weight_bound)
                edges[(1, 2)][(i, j)] = r.randint(-weight_bound, weight_bound)
                edges[(2, 0)][(i, j)] = r.randint(-weight_bound, weight_bound)
        pa, pb, pc = r.randrange(n), r.randrange(n), r.randrange(n)
        edges[(2, 0)][(pc, pa)] = -(edges[(0, 1)][(pa, pb)] + edges[(1, 2)][(pb, pc)])
        g = WeightedTripartiteGraph((n, n, n), 1, edges, 2 * weight_bound)
        g3 = digit_reduction.decompose_graph(g, q)
        dstar = tuple(
            x + y + z for x, y, z in zip(
                g3.pair_edges(0, 1)[(pa, pb)],
                g3.pair_edges(1, 2)[(pb, pc)],
                g3.pair_edges(2, 0)[(pc, pa)],
            )
        )
        assert dstar in digit_reduction.delta_set(q)
        g3r = digit_reduction.retarget(g3, dstar)
        pruned = digit_reduction.degree_bounded_sparse(
            g3r, q, _child(seed, "degree-run", ti), rounds=1)[0]
        thr = digit_reduction.degree_threshold(g3r.total_nodes, q)
        assert pruned.max_degree() <= thr
        survived = any(decode_triangle(pruned, tri) == (pa, pb, pc)
                       for tri in oracles.list_triangles(pruned).triangles)
        return survived, pruned.max_degree(), thr

    results = _map_trials(trial, trials)
    survivals = sum(1 for s, _, _ in results if s)
    rate = survivals / trials
    max_deg = max(d for _, d, _ in results)
    thr = results[0][2]
    ok = rate >= 0.4
    return ok, {"trials": trials, "n": n, "q": q, "survival_rate": round(rate, 4),
                "survival_threshold": 0.4, "max_degree_seen": max_deg,
                "degree_threshold": thr}


# ---------------------------------------------------------------------------
# an-recursion
# ---------------------------------------------------------------------------


def _gen_sparse_graph(m_target: int, planted: int, seed: int) -> UnweightedTripartiteGraph:
    """Sparse random tripartite graph with ~m_target edges and few triangles.

    Part sizes grow linearly with the edge budget, which keeps the family
    self-similar across a size ladder: expected random triangles stay O(1),
    so the dominant term of the recursion's per-level bound is the edge
    count at every rung.
    """
    r = rngmod.stream(seed, "sparse-gen", m_target)
    per_pair = max(2, m_target // 3)
    side = per_pair + 3
    pairs = set()
    for (pu, pv) in ((0, 1), (1, 2), (2, 0)):
        for flat in r.sample(range(side * side), per_pair):
            pairs.add(((pu, flat // side, 0, 0), (pv, flat % side, 0, 0)))
    for _ in range(planted):
        i, j, k = r.randrange(side), r.randrange(side), r.randrange(side)
        pairs.add(((0, i, 0, 0), (1, j, 0, 0)))
        pairs.add(((1, j, 0, 0), (2, k, 0, 0)))
        pairs.add(((2, k, 0, 0), (0, i, 0, 0)))
    return UnweightedTripartiteGraph.from_labeled_edges(sorted(pairs))


def campaign_an_recursion(args: dict):
    trials = args.get("trials") or 100
    seed = args.get("seed", 0)
    m_top = args.get("n") or 2000
    rungs = sorted({max(30, m_top // 8), max(30, m_top // 4),
                    max(30, m_top // 2), max(30, m_top)})
    per_rung = max(1, trials // len(rungs))

    def trial(idx: int):
        rung = idx // per_rung
        if rung >= len(rungs):
            rung = len(rungs) - 1
        m_target = rungs[rung]
        g = _gen_sparse_graph(m_target, idx % 2, _child(seed, "anrec", idx))
        res = digit_reduction.list_via_an_oracle(g)
        expect = sorted(oracles.list_triangles(g).triangles)
        tcount = len(expect)
        dmax = g.max_degree()
        worst = max(res.per_level_edges.values()) if res.per_level_edges else 0
        c_needed = worst / max(1, g.m + tcount * dmax)
        return sorted(res.triangles) == expect, rung, c_needed, res.oracle_calls

    total = per_rung * len(rungs)
    results = _map_trials(trial, total)
    failures = [i for i, (good, _, _, _) in enumerate(results) if not good]
    by_rung: dict = {}
    for _, rung, c_needed, _ in results:
        by_rung.setdefault(rung, []).append(c_needed)
    c_means = {rungs[rk]: sum(v) / len(v) for rk, v in sorted(by_rung.items())}
    values = list(c_means.values())
    stable = (max(values) / max(min(values), 1e-9)) <= 2.0 if len(values) >= 2 else False
    ok = not failures and stable
    return ok, {"trials": total, "failures": failures,
                "edge_rungs": rungs, "c_by_rung": {str(k): round(v, 4)
                                                   for k, v in c_means.items()},
                "c_stability_bound": 2.0, "oracle_calls_total":
                    sum(calls for _, _, _, calls in results)}


# ---------------------------------------------------------------------------
# det-pipeline
# ---------------------------------------------------------------------------


def _gen_det_instance(na: int, nc: int, weight_bound: int, near_zero: int,
                      seed: int) -> WeightedTripartiteGraph:
    # Base weights use half the bound so the planted near-zero closures
    # (negated pair sums, plus a slack in [-3, 3]) stay within the bound.
    r = rngmod.stream(seed, "det-inst", na, nc)
    half = max(2, weight_bound // 2 - 2)
    edges = {(0, 1): {}, (1, 2): {}, (2, 0): {}}
    for i in range(na):
        for j in range(na):
            edges[(0, 1)][(i, j)] = r.randint(-half, half)
    for i in range(na):
        for j in range(nc):
            edges[(1, 2)][(i, j)] = r.randint(-half, half)
            edges[(2, 0)][(j, i)] = r.randint(-half, half)
    for _ in range(near_zero):
        a, b, c = r.randrange(na), r.randrange(na), r.randrange(nc)
        edges[(2, 0)][(c, a)] = (
            -(edges[(0, 1)][(a, b)] + edges[(1, 2)][(b, c)]) + r.randint(-3, 3))
    return WeightedTripartiteGraph((na, na, nc), 1, edges, weight_bound)


def campaign_det_pipeline(args: dict):
    trials = args.get("trials") or 10
    seed = args.get("seed", 0)
    na = args.get("n") or 16
    nc = args.get("parts_c") or 4
    weight_bound = args.get("weight_bound") or (1 << 20)
    epsilon = args.get("epsilon") or 0.25
    if trials < 1:
        raise UsageError("trials must be >= 1")

    failures = []
    entries_total = 0
    instances_total = 0
    scans_total = 0
    pieces_bound = 16 * nc + math.ceil(na * na / math.ceil(na ** 1.5))
    # Sequential on purpose: the zero-RNG assertion reads a global counter.
    for ti in range(trials):
        g = _gen_det_instance(na, nc, weight_bound, 3, _child(seed, "det", ti))
        brute = oracles.near_zero_witness_table_brute(g, det_reduction.TOL)
        before = rngmod.call_count()
        stats = det_reduction.DetStats()
        table = det_reduction.det_reduce(g, epsilon=epsilon, stats=stats)
        rng_calls = rngmod.call_count() - before
        table2 = det_reduction.det_reduce(g, epsilon=epsilon)
        good = (table.existence() == brute.existence()
                and table.to_canonical_json() == table2.to_canonical_json()
                and rng_calls == 0)
        for (a, b), (c, s) in table.entries.items():
            real = g.triangle_weight(a, b, c)
            if real != s or abs(s) > det_reduction.TOL:
                good = False
        for lv in stats.levels:
            if not lv.base_case and lv.pieces > pieces_bound:
                good = False
        if not good:
            failures.append(ti)
        entries_total += len(table.entries)
        instances_total += stats.total_instances()
        scans_total += stats.total_scans()
    ok = not failures and entries_total >= 1
    return ok, {"trials": trials, "failures": failures, "na": na, "nc": nc,
                "weight_bound": weight_bound, "entries_total": entries_total,
                "oracle_instances_total": instances_total,
                "recovery_scans_total": scans_total,
                "pieces_bound_per_level": pieces_bound}


# ---------------------------------------------------------------------------
# fewc4-driver
# ---------------------------------------------------------------------------


def _all_ones_instance(n: int) -> WeightedTripartiteGraph:
    und = UndirectedWeightedGraph(n, {(u, v): 1 for u in range(n)
                                      for v in range(u + 1, n)})
    return antisymmetrize(und)


def _telescoping_instance(n: int, seed: int) -> WeightedTripartiteGraph:
    r = rngmod.stream(seed, "telescope", n)
    f = [r.randint(-50, 50) for _ in range(n)]
    edges = {}
    for (pu, pv) in ((0, 1), (1, 2), (2, 0)):
        fwd = {}
        rev = {}
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                fwd[(i, j)] = f[i] - f[j]
                rev[(j, i)] = f[j] - f[i]
        edges[(pu, pv)] = fwd
        edges[(pv, pu)] = rev
    return WeightedTripartiteGraph((n, n, n), 1, edges, 101, antisymmetric=True)


def _brute_backend(sub: WeightedTripartiteGraph):
    wits, _ = oracles.brute_exact_triangles(sub, cap=1)
    return wits[0] if wits else None


def _brute_partner_set(g: WeightedTripartiteGraph, pair) -> set:
    d = four_cycles.directed_weights(g)
    i0, k0 = pair
    w00 = d[(i0, k0)]
    out = set()
    for (i, k), w in d.items():
        w2 = d.get((k, i0))
        if w2 is None:
            continue
        w4 = d.get((k0, i))
        if w4 is None:
            continue
        if w + w2 + w00 + w4 == 0:
            out.add((i, k))
    return out


def campaign_fewc4_driver(args: dict):
    trials = args.get("trials") or 50
    seed = args.get("seed", 0)
    max_n = args.get("n") or 15
    delta = args.get("delta") or 0.1
    audit_cap = 12

    if max_n < 4:
        raise UsageError("fewc4-driver requires n >= 4")

    def trial(ti: int):
        r = rngmod.stream(seed, "fewc4", ti)
        # The dense-case families run with a large delta: at desk scale the
        # zero-4-cycle count of a tripartite instance cannot exceed 2N^4/27,
        # so the N^(4-delta) dense threshold is reachable only when delta is
        # well above the asymptotic setting.
        if ti % 7 == 3:
            g = _all_ones_instance(r.randint(4, min(8, max_n)))
            use_delta = 1.5
        elif ti % 7 == 5:
            g = _telescoping_instance(r.randint(4, min(7, max_n)), _child(seed, "f", ti))
            use_delta = 1.5
        else:
            n = r.randint(4, min(10, max_n)) if ti % 9 else r.randint(4, max_n)
            und = gen_undirected(n, r.choice((3, 8, 64)), 0.8, ti % 2,
                                 _child(seed, "fewc4-inst", ti))
            g = antisymmetrize(und)
            use_delta = delta
        expect = bool(oracles.brute_exact_triangles(g, cap=1)[0])
        obs = four_cycles.FewC4Observer()
        wit = four_cycles.solve_with_fewc4_oracle(
            g, _brute_backend, delta=use_delta, seed=_child(seed, "fewc4-run", ti),
            observer=obs)
        good = (wit is not None) == expect
        audited = 0
        for sub in obs.backend_instances:
            sub.graph.validate()
            np_total = sub.graph.total_nodes
            if np_total <= audit_cap:
                count = oracles.count_zero_4cycles_brute(sub.graph)
                if count > np_total ** 3:
                    good = False
                audited += 1
        for (snapshot, ctx, e0) in obs.dense_steps:
            if set(e0) != _brute_partner_set(snapshot, ctx.pair):
                good = False
        return good, wit is not None, audited, len(obs.dense_steps)

    results = _map_trials(trial, trials)
    failures = [i for i, row in enumerate(results) if not row[0]]
    yes = sum(1 for row in results if row[1])
    audited = sum(row[2] for row in results)
    dense_steps = sum(row[3] for row in results)
    ok = (not failures and yes >= 1 and (trials - yes) >= 1
          and audited >= 1 and dense_steps >= 1)
    return ok, {"trials": trials, "failures": failures, "yes": yes,
                "no": trials - yes, "subinstances_audited": audited,
                "dense_iterations_audited": dense_steps, "max_n": max_n}


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

CAMPAIGNS = {
    "digit-identity": campaign_digit_identity,
    "sparse-correspondence": campaign_sparse_correspondence,
    "threesum-correspondence": campaign_threesum_correspondence,
    "edge-growth": campaign_edge_growth,
    "equiv-modp": campaign_equiv_modp,
    "equiv-listing": campaign_equiv_listing,
    "equiv-an": campaign_equiv_an,
    "equiv-detect": campaign_equiv_detect,
    "equiv-3sum": campaign_equiv_threesum,
    "degree-bound": campaign_degree_bound,
    "an-recursion": campaign_an_recursion,
    "det-pipeline": campaign_det_pipeline,
    "fewc4-driver": campaign_fewc4_driver,
}


def run_campaign(name: str, args: dict):
    if name not in CAMPAIGNS:
        raise UsageError(f"unknown campaign {name!r}; choices: "
                         + ", ".join(sorted(CAMPAIGNS)))
    trials = args.get("trials")
    if trials is not None and trials < 1:
        raise UsageError("trials must be >= 1 (zero-trial campaigns are vacuous)")
    ok, report = CAMPAIGNS[name](args)
    config = {k: args[k] for k in sorted(args)
              if args[k] is not None and k not in ("func", "out", "format")}
    return ok, {"campaign": name, "ok": ok, "config": config, "report": report}
