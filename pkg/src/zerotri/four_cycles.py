"""Solving exact triangle with an oracle that needs few zero 4-cycles.

The backend contract: given an antisymmetric instance whose zero-weight
4-cycle count is at most (node count)^3, return a zero-weight triangle or
None.  The driver makes arbitrary antisymmetric instances digestible:

* sparse in zero 4-cycles: split nodes into random buckets, solve each
  induced union of three buckets (padding with isolated nodes when a
  sub-instance is still slightly over its cubic budget);
* dense in zero 4-cycles: exhibit a heavy pair (an edge on many zero
  4-cycles), turn its partner set E0 into an equality product that either
  finds a zero triangle through E0 outright or proves E0 is triangle-free
  and can be discarded, shrinking the graph.

Zero-4-cycle counts are never computed exactly at scale; a sampling
estimator with multiplicative guarantees stands in for them, which is
where the (controlled) randomness of the driver lives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

from . import rng as rngmod
from .instances import (
    TriangleWitness,
    WeightedTripartiteGraph,
    verify_witness,
)
from .oracles import brute_exact_triangles, count_zero_4cycles_brute, equality_product_queries


def _offsets(part_sizes: tuple) -> tuple:
    return (0, part_sizes[0], part_sizes[0] + part_sizes[1])


def directed_weights(g: WeightedTripartiteGraph) -> dict:
    """All stored edges as a global-id directed weight map."""
    off = _offsets(g.part_sizes)
    d = {}
    for (pu, pv), dct in g.edges.items():
        ou, ov = off[pu], off[pv]
        for (i, j), w in dct.items():
            d[(ou + i, ov + j)] = w
    return d


def _gid_part(g: WeightedTripartiteGraph, gid: int) -> tuple:
    off = _offsets(g.part_sizes)
    for part in (2, 1, 0):
        if gid >= off[part]:
            return part, gid - off[part]
    raise ValueError(f"bad node id {gid}")


def _witness_from_cycle_nodes(g: WeightedTripartiteGraph, nodes) -> TriangleWitness:
    by_part = [None, None, None]
    for gid in nodes:
        part, idx = _gid_part(g, gid)
        by_part[part] = idx
    a, b, c = by_part
    total = g.triangle_weight(a, b, c)
    assert total == 0, "directed zero 3-cycle must project to a zero triangle"
    return TriangleWitness(a, b, c, 0)


def _child_seed(seed: int, *tags) -> int:
    return rngmod.stream(seed, *tags).getrandbits(63)


# ---------------------------------------------------------------------------
# Estimation
# ---------------------------------------------------------------------------


def estimate_zero_4cycles(g: WeightedTripartiteGraph, error_target: float,
                          seed: int) -> float:
    """Estimate the zero-weight 4-cycle count within +/- error_target w.h.p.

    Samples directed 4-tuples; the sample size makes the additive error
    exceed error_target with probability o(1) in the node count.  When the
    required sample count reaches the tuple-space size the exact count is
    returned instead, so tiny instances are handled exactly.
    """
    n = g.total_nodes
    if n == 0:
        return 0.0
    space = float(n) ** 4
    err = max(float(error_target), 1e-9)
    samples = math.ceil(20.0 * (space / err) * math.log(n + 2))
    if samples >= space:
        return float(count_zero_4cycles_brute(g))
    d = directed_weights(g)
    r = rngmod.stream(seed, "estimate-zero-4cycles")
    hits = 0
    for _ in range(samples):
        i = r.randrange(n)
        j = r.randrange(n)
        k = r.randrange(n)
        l = r.randrange(n)
        w1 = d.get((i, j))
        if w1 is None:
            continue
        w2 = d.get((j, k))
        if w2 is None:
            continue
        w3 = d.get((k, l))
        if w3 is None:
            continue
        w4 = d.get((l, i))
        if w4 is None:
            continue
        if w1 + w2 + w3 + w4 == 0:
            hits += 1
    return hits * space / samples


# ---------------------------------------------------------------------------
# Sparse side: bucket split and padding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubInstance:
    """Induced sub-instance plus the local -> original node maps."""

    graph: WeightedTripartiteGraph
    node_maps: tuple
    padding: int = 0
    provenance: tuple = ()


def bucket_split(g: WeightedTripartiteGraph, bucket_count: int, seed: int) -> list:
    """Assign nodes to random buckets; emit the induced union of every
    unordered bucket triple (with repetition).  Each triangle of g lands in
    at least one sub-instance.  Edgeless sub-instances are dropped.

    Nodes and edges are pre-grouped by bucket so the total work is
    proportional to the emitted sub-instances, not to (number of
    sub-instances) x (size of g).
    """
    if bucket_count < 1:
        raise ValueError("bucket_count must be >= 1")
    r = rngmod.stream(seed, "bucket-split", bucket_count)
    assign = {}
    nodes_by_bucket = [[[] for _ in range(bucket_count)] for _ in range(3)]
    for part, size in enumerate(g.part_sizes):
        for i in range(size):
            b = r.randrange(bucket_count)
            assign[(part, i)] = b
            nodes_by_bucket[part][b].append(i)
    edges_by_bpair: dict = {}
    for (pu, pv), dct in g.edges.items():
        for (i, j), w in dct.items():
            bp = frozenset((assign[(pu, i)], assign[(pv, j)]))
            edges_by_bpair.setdefault(bp, []).append((pu, pv, i, j, w))
    subs = []
    for triple in combinations_with_replacement(range(bucket_count), 3):
        keep = sorted(set(triple))
        bpairs = {frozenset((x, y)) for x in keep for y in keep}
        raw = []
        for bp in bpairs:
            raw.extend(edges_by_bpair.get(bp, ()))
        if not raw:
            continue
        sel = tuple(
            tuple(sorted(i for b in keep for i in nodes_by_bucket[part][b]))
            for part in range(3)
        )
        index_of = [
            {orig: local for local, orig in enumerate(sel[part])} for part in range(3)
        ]
        edges = {pair: {} for pair in g.edges}
        for (pu, pv, i, j, w) in raw:
            edges[(pu, pv)][(index_of[pu][i], index_of[pv][j])] = w
        sub = WeightedTripartiteGraph(
            tuple(len(s) for s in sel), g.weight_dim, edges, g.weight_bound,
            antisymmetric=g.antisymmetric)
        subs.append(SubInstance(sub, sel, 0, triple))
    return subs


def pad_to_bound(sub: SubInstance) -> SubInstance:
    """Add isolated nodes until (node count)^3 covers the exact zero-4-cycle
    count; the count is unchanged because isolated nodes join no cycles."""
    count = count_zero_4cycles_brute(sub.graph)
    n = sub.graph.total_nodes
    n2 = max(n, 1)
    while n2 ** 3 < count:
        n2 += 1
    pad = n2 - n
    if pad == 0:
        return sub
    sizes = list(sub.graph.part_sizes)
    for i in range(pad):
        sizes[i % 3] += 1
    padded = WeightedTripartiteGraph(tuple(sizes), sub.graph.weight_dim,
                                     sub.graph.edges, sub.graph.weight_bound,
                                     antisymmetric=sub.graph.antisymmetric)
    return SubInstance(padded, sub.node_maps, pad, sub.provenance)


# ---------------------------------------------------------------------------
# Dense side: heavy pair, Fredman partner set, equality product
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HeavyPairContext:
    """A directed edge (i0, k0) estimated to lie on many zero 4-cycles,
    with the row differences r[k] = w(i0, k) - w(i0, k0)."""

    pair: tuple
    r: dict
    estimate: float


def heavy_pair(g: WeightedTripartiteGraph, threshold: float,
               seed: int) -> HeavyPairContext | None:
    """Scan edges lexicographically; return the first whose zero-4-cycle
    partner-pair count is estimated at >= threshold/2.

    An edge (i, k) partners (i0, k0) when (i, k0) and (i0, k) exist and
    w(i, k) - w(i, k0) == w(i0, k) - w(i0, k0); by antisymmetry this is
    exactly the zero 4-cycle i -> k -> i0 -> k0 -> i condition.  Estimates
    use additive error threshold/2, exact counting when the sample budget
    covers the pair space, so a pair on >= threshold cycles cannot be
    missed and a pair on none cannot be returned.
    """
    d = directed_weights(g)
    n = g.total_nodes
    if n == 0 or not d:
        return None
    space = float(n) * n
    err = max(float(threshold) / 2.0, 1e-9)
    samples = math.ceil(20.0 * (space / err) * math.log(n + 2))
    exact = samples >= space
    out_adj: dict = {}
    for (u, v) in d:
        out_adj.setdefault(u, []).append(v)
    r_stream = rngmod.stream(seed, "heavy-pair")
    for (i0, k0) in sorted(d):
        w00 = d[(i0, k0)]
        r = {k: d[(i0, k)] - w00 for k in out_adj[i0]}

        def is_partner(i: int, k: int) -> bool:
            w_ik = d.get((i, k))
            if w_ik is None:
                return False
            w_ik0 = d.get((i, k0))
            if w_ik0 is None:
                return False
            rk = r.get(k)
            if rk is None:
                return False
            return w_ik - w_ik0 == rk

        if exact:
            est = float(sum(1 for (i, k) in d if is_partner(i, k)))
        else:
            hits = 0
            for _ in range(samples):
                if is_partner(r_stream.randrange(n), r_stream.randrange(n)):
                    hits += 1
            est = hits * space / samples
        if est >= threshold / 2.0:
            return HeavyPairContext((i0, k0), r, est)
    return None


def fredman_e0(g: WeightedTripartiteGraph, ctx: HeavyPairContext) -> tuple:
    """The partner set E0 of the heavy pair, as sorted directed edges.

    Contains the heavy pair itself, so removing E0 makes strict progress.
    """
    d = directed_weights(g)
    i0, k0 = ctx.pair
    e0 = []
    for (i, k), w in d.items():
        rk = ctx.r.get(k)
        if rk is None:
            continue
        w_ik0 = d.get((i, k0))
        if w_ik0 is None:
            continue
        if w - w_ik0 == rk:
            e0.append((i, k))
    assert (i0, k0) in set(e0)
    return tuple(sorted(e0))


def zero_tri_through_e0(g: WeightedTripartiteGraph, e0, ctx: HeavyPairContext):
    """Find a zero triangle using an edge of E0, or None if there is none.

    For (i, k) in E0 the cycle condition rewrites w(i, k) = w(i, k0) + r_k,
    so a zero directed 3-cycle i -> k -> j -> i through E0 is equivalent to
    A[i][j] == B[j][k] with A[i][j] = w(i, k0) + w(j, i) and
    B[j][k] = -w(k, j) - r_k: one equality-product pass over E0 decides
    every edge at once.  Any reported hit is re-verified on g.
    """
    d = directed_weights(g)
    n = g.total_nodes
    _i0, k0 = ctx.pair
    a_rows = [[None] * n for _ in range(n)]
    b_rows = [[None] * n for _ in range(n)]
    for (u, v), w in d.items():
        w_vk0 = d.get((v, k0))
        if w_vk0 is not None:
            a_rows[v][u] = w_vk0 + w
        rk = ctx.r.get(u)
        if rk is not None:
            b_rows[v][u] = -w - rk
    queries = list(e0)
    results = equality_product_queries(a_rows, b_rows, queries)
    for (i, k), (hit, j) in zip(queries, results):
        if not hit:
            continue
        assert d[(i, k)] + d[(k, j)] + d[(j, i)] == 0
        return _witness_from_cycle_nodes(g, (i, k, j))
    return None


def remove_edge_set(g: WeightedTripartiteGraph, e0) -> WeightedTripartiteGraph:
    """Remove the directed edges in e0 and their reverses.

    Reverses go too so the result stays antisymmetric; that is answer
    preserving because a zero triangle through a reverse of E0 is, read
    backwards, a zero triangle through E0 itself (signs flip pairwise).
    """
    off = _offsets(g.part_sizes)
    drop = set()
    for (u, v) in e0:
        drop.add((u, v))
        drop.add((v, u))
    edges = {}
    for (pu, pv), dct in g.edges.items():
        ou, ov = off[pu], off[pv]
        edges[(pu, pv)] = {
            (i, j): w for (i, j), w in dct.items() if (ou + i, ov + j) not in drop
        }
    return WeightedTripartiteGraph(g.part_sizes, g.weight_dim, edges,
                                   g.weight_bound, g.antisymmetric)


# ---------------------------------------------------------------------------
# The driver
# ---------------------------------------------------------------------------


class FewC4Observer:
    """Collects what the driver hands to the backend and what it removes."""

    def __init__(self) -> None:
        self.backend_instances: list = []
        self.brute_instances: list = []
        self.dense_steps: list = []

    def on_backend(self, sub: SubInstance) -> None:
        self.backend_instances.append(sub)

    def on_brute(self, sub: SubInstance) -> None:
        self.brute_instances.append(sub)

    def on_dense(self, graph: WeightedTripartiteGraph, ctx: HeavyPairContext,
                 e0: tuple) -> None:
        self.dense_steps.append((graph, ctx, e0))


def _map_local_witness(g: WeightedTripartiteGraph, sub: SubInstance,
                       wit: TriangleWitness) -> TriangleWitness:
    a = sub.node_maps[0][wit.a]
    b = sub.node_maps[1][wit.b]
    c = sub.node_maps[2][wit.c]
    out = TriangleWitness(a, b, c, 0)
    assert verify_witness(g, out, 0)
    return out


def solve_with_fewc4_oracle(g: WeightedTripartiteGraph, fewc4_backend,
                            delta: float = 0.1, x: float | None = None,
                            seed: int = 0, observer: FewC4Observer | None = None,
                            subinstance_edge_factor: float = 1.0):
    """Zero-triangle search through a few-zero-4-cycle backend.

    Requires an antisymmetric instance (see `antisymmetrize`).  While the
    estimated global zero-4-cycle count is at least N^(4-delta), dense
    rounds find a heavy pair, search its partner set for a triangle, and
    otherwise delete the partner set.  Once below the dense threshold the
    graph is bucket-split into ~N^(1-x) buckets per part (x defaults to
    delta/2.3); each sub-instance is padded and passed to the backend,
    except the few whose estimated count still exceeds twice its error
    budget, which are solved brute-force.  Every witness is verified
    against the original instance.  Misses are one-sided: a report of
    None can be wrong only with the estimators' vanishing error
    probability.
    """
    if not g.antisymmetric:
        raise ValueError("driver requires an antisymmetric instance")
    if x is None:
        x = delta / 2.3
    n = g.total_nodes
    if n == 0:
        return None
    work = g
    iteration = 0
    while True:
        if work.n_edges() == 0:
            return None
        dense_threshold = float(n) ** (4.0 - delta)
        est = estimate_zero_4cycles(work, dense_threshold / 2.0,
                                    _child_seed(seed, "global", iteration))
        if est >= dense_threshold:
            ctx = heavy_pair(work, float(n) ** (2.0 - delta),
                             _child_seed(seed, "heavy", iteration))
            if ctx is not None:
                e0 = fredman_e0(work, ctx)
                if observer is not None:
                    observer.on_dense(work, ctx, e0)
                wit = zero_tri_through_e0(work, e0, ctx)
                if wit is not None:
                    assert verify_witness(g, wit, 0)
                    return wit
                work = remove_edge_set(work, e0)
                iteration += 1
                continue
        bucket_count = max(1, round(float(n) ** (1.0 - x)))
        subs = bucket_split(work, bucket_count, _child_seed(seed, "buckets", iteration))
        for si, sub in enumerate(subs):
            ns = sub.graph.total_nodes
            err = max(1.0, subinstance_edge_factor * float(ns) * ns)
            est_sub = estimate_zero_4cycles(sub.graph, err,
                                            _child_seed(seed, "sub", iteration, si))
            if est_sub >= 2.0 * err:
                if observer is not None:
                    observer.on_brute(sub)
                wits, _trunc = brute_exact_triangles(sub.graph, cap=1)
                if wits:
                    return _map_local_witness(g, sub, wits[0])
                continue
            padded = pad_to_bound(sub)
            if observer is not None:
                observer.on_backend(padded)
            wit_local = fewc4_backend(padded.graph)
            if wit_local is not None:
                return _map_local_witness(g, sub, wit_local)
        return None
