"""Brute-force oracles: slow, obviously-correct solvers used as ground truth.

Everything here favors directness over speed.  The one exception is
list_triangles, which uses the classic degree-ordered enumeration so that
listing stays usable on the sparse graphs the reductions emit; its output
is checked against the cubic loop in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

from .instances import (
    ThreeSumInstance,
    TriangleWitness,
    UnweightedTripartiteGraph,
    WeightedTripartiteGraph,
)
from .tables import EdgeFlagTable, NodeFlagTable, WitnessTable


# ---------------------------------------------------------------------------
# Weighted instances
# ---------------------------------------------------------------------------


def brute_exact_triangles(g: WeightedTripartiteGraph, target=None, cap=None):
    """All forward triangles of weight `target`, in lexicographic order.

    Returns (witnesses, truncated).  `target` defaults to the zero of the
    graph's weight type.
    """
    if target is None:
        target = g.zero_target()
    e01 = g.pair_edges(0, 1)
    e12 = g.pair_edges(1, 2)
    e20 = g.pair_edges(2, 0)
    n1, n2, n3 = g.part_sizes
    out = []
    for a in range(n1):
        for b in range(n2):
            w1 = e01.get((a, b))
            if w1 is None:
                continue
            for c in range(n3):
                w2 = e12.get((b, c))
                if w2 is None:
                    continue
                w3 = e20.get((c, a))
                if w3 is None:
                    continue
                if g.weight_dim == 1:
                    s = w1 + w2 + w3
                else:
                    s = (w1[0] + w2[0] + w3[0], w1[1] + w2[1] + w3[1],
                         w1[2] + w2[2] + w3[2])
                if s == target:
                    out.append(TriangleWitness(a, b, c, s))
                    if cap is not None and len(out) >= cap:
                        return out, True
    return out, False


def brute_3sum(inst: ThreeSumInstance, cap=None):
    """All index triples (i, j, k) with a[i] + b[j] + c[k] == 0."""
    out = []
    for i, x in enumerate(inst.a):
        for j, y in enumerate(inst.b):
            xy = x + y
            for k, z in enumerate(inst.c):
                if xy + z == 0:
                    out.append((i, j, k))
                    if cap is not None and len(out) >= cap:
                        return out, True
    return out, False


def near_zero_witness_table_brute(g: WeightedTripartiteGraph, tol: int) -> WitnessTable:
    """For each A-B edge, the smallest c with |w_ab + w_bc + w_ca| <= tol."""
    e01 = g.pair_edges(0, 1)
    e12 = g.pair_edges(1, 2)
    e20 = g.pair_edges(2, 0)
    n3 = g.part_sizes[2]
    entries = {}
    for (a, b) in sorted(e01):
        w1 = e01[(a, b)]
        for c in range(n3):
            w2 = e12.get((b, c))
            if w2 is None:
                continue
            w3 = e20.get((c, a))
            if w3 is None:
                continue
            s = w1 + w2 + w3
            if abs(s) <= tol:
                entries[(a, b)] = (c, s)
                break
    return WitnessTable(entries, tol)


def count_zero_4cycles_brute(g: WeightedTripartiteGraph) -> int:
    """Number of directed 4-tuples (i, j, k, l), repeats allowed, whose four
    edges all exist and whose weights sum to zero.

    Counts by grouping 2-paths: a tuple is split into paths i->j->k and
    k->l->i, so the total is a sum over (i, k) of matching path-sum pairs.
    The quadruple loop this must agree with lives in the test suite.
    """
    offsets = (0, g.part_sizes[0], g.part_sizes[0] + g.part_sizes[1])
    out_adj: dict = {}
    for (pu, pv), d in g.edges.items():
        for (i, j), w in d.items():
            u = offsets[pu] + i
            v = offsets[pv] + j
            out_adj.setdefault(u, []).append((v, w))
    # path_sums[(u, k)][s] = number of j with edges u->j->k summing to s
    path_sums: dict = {}
    for u, outs in out_adj.items():
        for j, w1 in outs:
            for k, w2 in out_adj.get(j, ()):
                d = path_sums.setdefault((u, k), {})
                s = w1 + w2
                d[s] = d.get(s, 0) + 1
    total = 0
    for (u, k), sums in path_sums.items():
        back = path_sums.get((k, u))
        if not back:
            continue
        for s, cnt in sums.items():
            total += cnt * back.get(-s, 0)
    return total


# ---------------------------------------------------------------------------
# Unweighted label graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TriangleListing:
    triangles: tuple
    truncated: bool


def _canonical_triangle(g: UnweightedTripartiteGraph, u: int, v: int, w: int):
    tri = [None, None, None]
    for gid in (u, v, w):
        tri[g.part_of(gid)] = gid
    return tuple(tri)


def list_triangles(g: UnweightedTripartiteGraph, cap=None) -> TriangleListing:
    """Every triangle exactly once via degree-ordered neighbor intersection.

    Work is proportional to m^(3/2) plus output.  If `cap` is given, at
    most cap triangles are returned and the truncation is reported.
    """
    n = g.n_nodes
    order = sorted(range(n), key=lambda u: (-len(g.adj[u]), u))
    rank = [0] * n
    for pos, u in enumerate(order):
        rank[u] = pos
    adj_sets = g.adj_sets()
    out = []
    for u in order:
        ru = rank[u]
        later = {v for v in adj_sets[u] if rank[v] > ru}
        for v in sorted(later):
            rv = rank[v]
            for w in sorted(later & adj_sets[v]):
                if rank[w] > rv:
                    out.append(_canonical_triangle(g, u, v, w))
                    if cap is not None and len(out) >= cap:
                        return TriangleListing(tuple(out), True)
    return TriangleListing(tuple(out), False)


def detect_triangle(g: UnweightedTripartiteGraph) -> bool:
    adj_sets = g.adj_sets()
    for u, v in g.edge_iter():
        if not adj_sets[u].isdisjoint(adj_sets[v]):
            return True
    return False


def all_edges_triangle(g: UnweightedTripartiteGraph) -> EdgeFlagTable:
    adj_sets = g.adj_sets()
    flags = {}
    for u, v in g.edge_iter():
        flags[(u, v)] = not adj_sets[u].isdisjoint(adj_sets[v])
    return EdgeFlagTable(flags)


def all_nodes_triangle(g: UnweightedTripartiteGraph) -> NodeFlagTable:
    edge_flags = all_edges_triangle(g)
    flags = [False] * g.n_nodes
    for (u, v), f in edge_flags.flags.items():
        if f:
            flags[u] = True
            flags[v] = True
    return NodeFlagTable(tuple(flags))


# ---------------------------------------------------------------------------
# Equality products
# ---------------------------------------------------------------------------


def equality_product_queries(a_rows, b_rows, queries):
    """For each query (i, k): is there j with A[i][j] == B[j][k] != None?

    A is n1 x n2, B is n2 x n3; None marks an absent entry and never
    matches.  Returns one (hit, smallest witness j or None) per query.
    Implemented by grouping the inner index by value on both sides.
    """
    n2 = len(b_rows)
    for row in a_rows:
        if len(row) != n2:
            raise ValueError("inner dimension mismatch between A and B")
    width = len(b_rows[0]) if n2 else 0
    for row in b_rows:
        if len(row) != width:
            raise ValueError("ragged B")

    # by value: row_groups[i][v] = ascending j with A[i][j] == v
    row_groups = []
    for row in a_rows:
        d: dict = {}
        for j, v in enumerate(row):
            if v is not None:
                d.setdefault(v, []).append(j)
        row_groups.append(d)
    col_groups = [dict() for _ in range(width)]
    for j, row in enumerate(b_rows):
        for k, v in enumerate(row):
            if v is not None:
                col_groups[k].setdefault(v, []).append(j)

    results = []
    for (i, k) in queries:
        ra = row_groups[i]
        cb = col_groups[k] if 0 <= k < width else {}
        best = None
        if len(ra) > len(cb):
            small, big = cb, ra
        else:
            small, big = ra, cb
        for v, js_small in small.items():
            js_big = big.get(v)
            if not js_big:
                continue
            # smallest common element of two ascending lists
            x, y = 0, 0
            while x < len(js_small) and y < len(js_big):
                jx, jy = js_small[x], js_big[y]
                if jx == jy:
                    if best is None or jx < best:
                        best = jx
                    break
                if jx < jy:
                    x += 1
                else:
                    y += 1
        results.append((best is not None, best))
    return results
