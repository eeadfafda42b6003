"""Deterministic near-zero triangle tables via weight halving.

Works on scalar-weight tripartite graphs.  Weights are first multiplied
by 4 (which preserves zero sums and makes the final tolerance band of 3
too narrow to contain any scaled nonzero sum).  Then the weights are
halved recursively down to the +/-4 base case; a tolerance-3 witness
table for the halved graph localizes, for each part-0/part-1 edge, where
near-zero triangles of the current level can live, and grouped
All-Edges-oracle instances built with the difference trick recover a
tolerance-3 witness table one level up.

Everything here is deterministic: no module in this file draws
randomness, instances are processed in lexicographic order, and repeated
runs produce identical tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import oracles
from .instances import (
    WEIGHT_CAP,
    UnweightedTripartiteGraph,
    WeightedTripartiteGraph,
)
from .tables import WitnessTable

B0 = 4
TOL = 3


@dataclass
class LevelStats:
    weight_bound: int
    base_case: bool = False
    buckets: int = 0
    pieces: int = 0
    max_piece: int = 0
    instances_built: int = 0
    instances_skipped: int = 0
    backend_calls: int = 0
    instance_edges: int = 0
    scans: int = 0
    entries: int = 0


@dataclass
class DetStats:
    levels: list = field(default_factory=list)

    def total_instances(self) -> int:
        return sum(lv.instances_built for lv in self.levels)

    def total_scans(self) -> int:
        return sum(lv.scans for lv in self.levels)


def scale_by_4(g: WeightedTripartiteGraph) -> WeightedTripartiteGraph:
    """Multiply all weights by 4; zero sums are exactly preserved."""
    if g.weight_dim != 1:
        raise ValueError("scale_by_4 expects scalar weights")
    if g.weight_bound * 4 > WEIGHT_CAP:
        raise ValueError("scaled weights would exceed the global weight cap")
    edges = {pair: {e: 4 * w for e, w in d.items()} for pair, d in g.edges.items()}
    return WeightedTripartiteGraph(g.part_sizes, 1, edges, g.weight_bound * 4,
                                   antisymmetric=g.antisymmetric)


def halve(g: WeightedTripartiteGraph) -> WeightedTripartiteGraph:
    """Floor-halve all weights (// rounds toward minus infinity).

    A triangle of weight s has halved weight in [ceil(s/2) - 2, floor(s/2)],
    so |s| <= 3 forces a halved weight in [-3, 3]: near-zero triangles
    stay near zero one level down.
    """
    if g.weight_dim != 1:
        raise ValueError("halve expects scalar weights")
    edges = {pair: {e: w // 2 for e, w in d.items()} for pair, d in g.edges.items()}
    return WeightedTripartiteGraph(g.part_sizes, 1, edges,
                                   max(1, (g.weight_bound + 1) // 2),
                                   antisymmetric=False)


def base_case(g: WeightedTripartiteGraph) -> WitnessTable:
    """Tolerance-3 witness table for weights within +/-4, via bitmasks.

    For each part-0/part-1 edge and each admissible weight pair on the
    other two sides, the part-2 candidates are intersections of
    per-(node, weight) bitmasks; the smallest set bit gives the smallest
    witness node.
    """
    if g.weight_dim != 1:
        raise ValueError("base_case expects scalar weights")
    if g.max_abs_component() > B0:
        raise ValueError(f"base case requires weights within +/-{B0}")
    e01 = g.pair_edges(0, 1)
    e12 = g.pair_edges(1, 2)
    e20 = g.pair_edges(2, 0)
    mask_bc: dict = {}
    for (b, c), w in e12.items():
        mask_bc[(b, w)] = mask_bc.get((b, w), 0) | (1 << c)
    mask_ca: dict = {}
    for (c, a), w in e20.items():
        mask_ca[(a, w)] = mask_ca.get((a, w), 0) | (1 << c)
    span = range(-B0, B0 + 1)
    admissible = {
        wa: [(wb, wc) for wb in span for wc in span if abs(wa + wb + wc) <= TOL]
        for wa in span
    }
    entries = {}
    for (a, b) in sorted(e01):
        wa = e01[(a, b)]
        best = None
        for wb, wc in admissible[wa]:
            m = mask_bc.get((b, wb), 0) & mask_ca.get((a, wc), 0)
            if m:
                c = (m & -m).bit_length() - 1
                if best is None or c < best:
                    best = c
        if best is not None:
            s = wa + e12[(b, best)] + e20[(best, a)]
            assert abs(s) <= TOL
            entries[(a, b)] = (best, s)
    return WitnessTable(entries, TOL)


def build_instance(pairs, k: int, delta: int, dprime: int, c_subset,
                   g: WeightedTripartiteGraph) -> UnweightedTripartiteGraph:
    """All-Edges instance for one (bucket, piece, target, C-subset) cell.

    Part 0 and part 1 are full copies of the graph's first two parts;
    part 2 holds difference values u.  A part-0/part-1 edge is present for
    each queried pair, and the difference edges are arranged so that
    (a, b) closes a triangle through some u exactly when a part-2 node c
    in `c_subset` has w_ab + w_bc + w_ca == dprime:

        a -- (c, u)  with u = w_ca - w_ka + delta - dprime
        b -- (c, u)  with u = w_bk - w_bc

    (equality of the two u values rearranges, using w_ab + w_bk + w_ka =
    delta, to the target identity).
    """
    e01 = g.pair_edges(0, 1)
    e12 = g.pair_edges(1, 2)
    e20 = g.pair_edges(2, 0)
    n1, n2, _n3 = g.part_sizes
    edges = []
    extra = []
    for (a, b) in pairs:
        wab = e01[(a, b)]
        wbk = e12[(b, k)]
        wka = e20[(k, a)]
        if wab + wbk + wka != delta:
            raise ValueError("pair does not belong to this bucket")
        edges.append(((0, a, 0, 0), (1, b, 0, 0)))
    for a in range(n1):
        wka = e20.get((k, a))
        if wka is None:
            continue
        extra.append((0, a, 0, 0))
        for c in c_subset:
            wca = e20.get((c, a))
            if wca is None:
                continue
            u = wca - wka + delta - dprime
            edges.append(((0, a, 0, 0), (2, c, u, 0)))
    for b in range(n2):
        wbk = e12.get((b, k))
        if wbk is None:
            continue
        extra.append((1, b, 0, 0))
        for c in c_subset:
            wbc = e12.get((b, c))
            if wbc is None:
                continue
            u = wbk - wbc
            edges.append(((1, b, 0, 0), (2, c, u, 0)))
    return UnweightedTripartiteGraph.from_labeled_edges(edges, extra_nodes=sorted(set(extra)))


def lift_level(g: WeightedTripartiteGraph, prev: WitnessTable, epsilon: float,
               aest_backend, stats: DetStats | None = None) -> WitnessTable:
    """One halving step up: tolerance-3 table for g from the halved table.

    Pairs are bucketed by their halved-table witness node k and current
    triangle weight delta through k (always in [-6, 9]); buckets are cut
    into pieces of at most ceil(n^1.5) pairs, part 2 into ~n^epsilon
    subsets, and each (piece, target dprime in [-3, 3], subset) cell
    becomes one All-Edges instance.  A flagged pair triggers a single
    scan of the subset (at most one scan per pair per level overall).
    """
    e01 = g.pair_edges(0, 1)
    e12 = g.pair_edges(1, 2)
    e20 = g.pair_edges(2, 0)
    n1, _n2, n3 = g.part_sizes
    lv = LevelStats(weight_bound=g.weight_bound)

    buckets: dict = {}
    for (a, b) in sorted(prev.entries):
        k, _hs = prev.entries[(a, b)]
        delta = e01[(a, b)] + e12[(b, k)] + e20[(k, a)]
        assert -2 * TOL <= delta <= 3 * TOL
        buckets.setdefault((k, delta), []).append((a, b))
    lv.buckets = len(buckets)

    piece_cap = max(1, math.ceil(max(n1, 1) ** 1.5))
    sigma = max(1, min(n3, round(max(n1, 1) ** epsilon))) if n3 else 1
    chunk = math.ceil(n3 / sigma) if n3 else 0
    subsets = [list(range(s * chunk, min(n3, (s + 1) * chunk)))
               for s in range(sigma)]
    subsets = [cs for cs in subsets if cs]

    entries: dict = {}
    scanned: set = set()
    for (k, delta) in sorted(buckets):
        bucket_pairs = buckets[(k, delta)]
        for start in range(0, len(bucket_pairs), piece_cap):
            piece = bucket_pairs[start:start + piece_cap]
            lv.pieces += 1
            lv.max_piece = max(lv.max_piece, len(piece))
            unresolved = len(piece)
            for dprime in range(-TOL, TOL + 1):
                for cs in subsets:
                    if unresolved == 0:
                        lv.instances_skipped += 1
                        continue
                    inst = build_instance(piece, k, delta, dprime, cs, g)
                    lv.instances_built += 1
                    lv.instance_edges += inst.m
                    flags = aest_backend(inst)
                    lv.backend_calls += 1
                    gid_of = {inst.labels[u]: u for u in inst.part_nodes(0)}
                    gid_of.update({inst.labels[u]: u for u in inst.part_nodes(1)})
                    adj_sets = None
                    for (a, b) in piece:
                        if (a, b) in entries:
                            continue
                        ga = gid_of[(0, a, 0, 0)]
                        gb = gid_of[(1, b, 0, 0)]
                        key = (ga, gb) if ga < gb else (gb, ga)
                        if not flags.flags.get(key, False):
                            continue
                        if adj_sets is None:
                            adj_sets = inst.adj_sets()
                        common = adj_sets[ga] & adj_sets[gb]
                        assert common, "flagged pair must close a triangle"
                        _p, c_hit, _u, _z = inst.labels[min(common)]
                        s_hit = e01[(a, b)] + e12[(b, c_hit)] + e20[(c_hit, a)]
                        assert s_hit == dprime, "difference-trick identity violated"
                        assert (a, b) not in scanned, "one scan per pair per level"
                        scanned.add((a, b))
                        lv.scans += 1
                        for c in cs:
                            wbc = e12.get((b, c))
                            if wbc is None:
                                continue
                            wca = e20.get((c, a))
                            if wca is None:
                                continue
                            s = e01[(a, b)] + wbc + wca
                            if abs(s) <= TOL:
                                entries[(a, b)] = (c, s)
                                unresolved -= 1
                                break
                        else:
                            raise AssertionError("scan of a flagged subset found no witness")
    lv.entries = len(entries)
    if stats is not None:
        stats.levels.append(lv)
    return WitnessTable(entries, TOL)


def det_reduce(g: WeightedTripartiteGraph, aest_backend=None, epsilon: float = 0.25,
               stats: DetStats | None = None) -> WitnessTable:
    """Tolerance-3 witness table for g, deterministically.

    Recurses on halved weights down to the +/-4 base case, then lifts one
    level at a time with `lift_level`.  The existence set of the result
    equals the brute-force tolerance-3 table's (witness nodes may differ;
    stored sums always satisfy |s| <= 3).
    """
    if g.weight_dim != 1:
        raise ValueError("det_reduce expects scalar weights")
    backend = aest_backend or oracles.all_edges_triangle
    if g.max_abs_component() <= B0:
        table = base_case(g)
        if stats is not None:
            lv = LevelStats(weight_bound=g.weight_bound, base_case=True)
            lv.entries = len(table.entries)
            stats.levels.append(lv)
        return table
    prev = det_reduce(halve(g), backend, epsilon, stats)
    return lift_level(g, prev, epsilon, backend, stats)


def near_zero_table(g: WeightedTripartiteGraph, aest_backend=None,
                    epsilon: float = 0.25, stats: DetStats | None = None) -> WitnessTable:
    """Scale by 4, then run the halving recursion.

    After scaling, |4s| <= 3 forces s == 0, so the returned table's
    existence set is exactly the set of part-0/part-1 edges lying on a
    zero-weight triangle of the input.
    """
    return det_reduce(scale_by_4(g), aest_backend, epsilon, stats)
