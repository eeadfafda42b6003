"""Digit decomposition of weights and the sparse-graph constructions on top.

The core identity: writing x = x1*q^2 + x2*q + x3 with Euclidean digits
(x2, x3 in [0, q) and x1 in [-q, q] whenever |x| <= q^3), three numbers
sum to zero exactly when their digit triples sum to an element of a fixed
9-element set Delta of carry patterns.  That turns one exact-sum condition
into componentwise conditions cheap enough to encode in the labels of an
unweighted graph whose triangles correspond to zero-weight triangles (or
zero 3SUM triples) of the source instance.

On top of the constructions sit the drivers: mod-p weight compression,
random shifts with degree pruning, the All-Nodes-based listing recursion,
and end-to-end pipelines whose answers are verified against the original
weights before being reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import oracles
from . import rng as rngmod
from .instances import (
    ThreeSumInstance,
    UnweightedTripartiteGraph,
    WeightedTripartiteGraph,
    decode_triangle,
)
from .report import ReductionReport


class NoPrimeInRangeError(ValueError):
    """The requested prime range contains no prime."""


# ---------------------------------------------------------------------------
# Digits and the carry set
# ---------------------------------------------------------------------------


class DigitTriple(NamedTuple):
    """Digits of x in base q: x == x1*q^2 + x2*q + x3."""

    x1: int
    x2: int
    x3: int
    q: int

    def reconstruct(self) -> int:
        return self.x1 * self.q * self.q + self.x2 * self.q + self.x3

    def as_weight(self) -> tuple:
        return (self.x1, self.x2, self.x3)


def _euclid_digits(x: int, q: int) -> tuple:
    """Euclidean base-q digits without the |x| <= q^3 range check."""
    x3 = x % q
    rest = (x - x3) // q
    x2 = rest % q
    x1 = (rest - x2) // q
    return (x1, x2, x3)


def digit_decompose(x: int, q: int) -> DigitTriple:
    """Decompose x with x2, x3 in [0, q) and x1 in [-q, q].

    Requires q >= 1 and |x| <= q^3 (which pins x1 into [-q, q]).
    """
    if q < 1:
        raise ValueError("base must be >= 1")
    if abs(x) > q * q * q:
        raise ValueError(f"|{x}| exceeds q^3 = {q ** 3}")
    x1, x2, x3 = _euclid_digits(x, q)
    return DigitTriple(x1, x2, x3, q)


def digit_reconstruct(t: tuple, q: int) -> int:
    return t[0] * q * q + t[1] * q + t[2]


@dataclass(frozen=True)
class DeltaSet:
    """The 9 carry patterns (-c', c'*q2 - c, c*q3) for c, c' in {0, 1, 2}.

    Three digit triples (with second digits in [0, q2) and third digits in
    [0, q3)) sum componentwise to a member iff the encoded numbers sum to
    zero.  The uniform case q2 == q3 == q is the one used everywhere except
    the mixed-radix construction.
    """

    q2: int
    q3: int
    triples: tuple

    def __iter__(self):
        return iter(self.triples)

    def __contains__(self, t) -> bool:
        return t in self.triples

    def __len__(self) -> int:
        return len(self.triples)


def delta_set_mixed(q2: int, q3: int) -> DeltaSet:
    if q2 < 1 or q3 < 1:
        raise ValueError("bases must be >= 1")
    triples = sorted(
        {(-cp, cp * q2 - c, c * q3) for c in range(3) for cp in range(3)}
    )
    return DeltaSet(q2, q3, tuple(triples))


def delta_set(q: int) -> DeltaSet:
    return delta_set_mixed(q, q)


def icbrt_ceil(x: int) -> int:
    """Smallest q >= 1 with q^3 >= x."""
    q = max(1, round(float(x) ** (1.0 / 3.0)) if x > 0 else 1)
    while q ** 3 < x:
        q += 1
    while q > 1 and (q - 1) ** 3 >= x:
        q -= 1
    return q


# ---------------------------------------------------------------------------
# Graph-level digit operations
# ---------------------------------------------------------------------------


def decompose_graph(g: WeightedTripartiteGraph, q: int) -> WeightedTripartiteGraph:
    """Replace each scalar weight by its base-q digit triple (dim 1 -> 3)."""
    if g.weight_dim != 1:
        raise ValueError("decompose_graph expects scalar weights")
    edges = {}
    for pair, d in g.edges.items():
        edges[pair] = {e: digit_decompose(w, q).as_weight() for e, w in d.items()}
    return WeightedTripartiteGraph(g.part_sizes, 3, edges, max(q, 1), g.antisymmetric)


def decompose_graph_mixed(g: WeightedTripartiteGraph, q1: int, q2: int,
                          q3: int) -> WeightedTripartiteGraph:
    """Mixed-radix variant: x = x1*q2*q3 + x2*q3 + x3, digit i bounded by qi."""
    if g.weight_dim != 1:
        raise ValueError("decompose_graph_mixed expects scalar weights")
    cap = q1 * q2 * q3

    def dig(x):
        if abs(x) > cap:
            raise ValueError(f"|{x}| exceeds q1*q2*q3 = {cap}")
        x3 = x % q3
        rest = (x - x3) // q3
        x2 = rest % q2
        x1 = (rest - x2) // q2
        return (x1, x2, x3)

    edges = {}
    for pair, d in g.edges.items():
        edges[pair] = {e: dig(w) for e, w in d.items()}
    return WeightedTripartiteGraph(g.part_sizes, 3, edges, max(q1, q2, q3),
                                   g.antisymmetric)


def retarget(g3: WeightedTripartiteGraph, delta: tuple) -> WeightedTripartiteGraph:
    """Subtract `delta` from every part-0 -> part-1 weight.

    Triangles whose triple weights summed to `delta` become zero-sum
    triangles of the result; all other triple sums shift by the same
    amount, so the correspondence is a bijection.
    """
    if g3.weight_dim != 3:
        raise ValueError("retarget expects digit-triple weights")
    d0, d1, d2 = delta
    edges = dict(g3.edges)
    e01 = {e: (w[0] - d0, w[1] - d1, w[2] - d2)
           for e, w in g3.pair_edges(0, 1).items()}
    edges[(0, 1)] = e01
    out = WeightedTripartiteGraph(g3.part_sizes, 3, edges, g3.weight_bound,
                                  antisymmetric=False)
    bound = max(out.max_abs_component(), 1)
    return WeightedTripartiteGraph(g3.part_sizes, 3, edges, bound, antisymmetric=False)


# ---------------------------------------------------------------------------
# Sparse-graph constructions
# ---------------------------------------------------------------------------


def _sparse_from_triple_graph(g3: WeightedTripartiteGraph,
                              bounds: tuple) -> UnweightedTripartiteGraph:
    """Shared core for the label-graph constructions.

    bounds = (l1, l2, l3) caps the label values drawn from digit slot i.
    Edge rules (labels carry the digits the triangle condition equates):
      (a, x1, z3) -- (b, y3, x2)   iff  w_ab == (x1, x2, -y3-z3)
      (b, y3, x2) -- (c, z2, y1)   iff  w_bc == (y1, -x2-z2, y3)
      (c, z2, y1) -- (a, x1, z3)   iff  w_ca == (-x1-y1, z2, z3)
    A triangle therefore forces the three triple weights to sum to zero
    componentwise, and conversely every zero-sum triangle appears as long
    as each bound covers the corresponding digit slot of every weight.
    """
    l1, l2, l3 = bounds
    edges = []
    add = edges.append
    for (a, b), (x1, x2, x3) in g3.pair_edges(0, 1).items():
        for y3 in range(max(-l3, -x3 - l3), min(l3, -x3 + l3) + 1):
            add(((0, a, x1, -x3 - y3), (1, b, y3, x2)))
    for (b, c), (y1, y2, y3) in g3.pair_edges(1, 2).items():
        for x2 in range(max(-l2, -y2 - l2), min(l2, -y2 + l2) + 1):
            add(((1, b, y3, x2), (2, c, -y2 - x2, y1)))
    for (c, a), (z1, z2, z3) in g3.pair_edges(2, 0).items():
        for x1 in range(max(-l1, -z1 - l1), min(l1, -z1 + l1) + 1):
            add(((2, c, z2, -z1 - x1), (0, a, x1, z3)))
    return UnweightedTripartiteGraph.from_labeled_edges(edges)


def build_sparse_exact(g3: WeightedTripartiteGraph, q: int) -> UnweightedTripartiteGraph:
    """Unweighted label graph whose triangles are g3's zero-sum triangles.

    Labels live in [-L, L] per slot with L = max(2q, observed digit), so
    the usual post-retarget range [-2q, 2q] is always covered; the edge
    count grows linearly in q and quadratically in the part sizes.
    Only labels with at least one incident edge are materialized.
    """
    if g3.weight_dim != 3:
        raise ValueError("build_sparse_exact expects digit-triple weights")
    mb = g3.component_bounds()
    bounds = (max(2 * q, mb[0]), max(2 * q, mb[1]), max(2 * q, mb[2]))
    return _sparse_from_triple_graph(g3, bounds)


def build_sparse_unbalanced(g3: WeightedTripartiteGraph, q1: int, q2: int,
                            q3: int) -> UnweightedTripartiteGraph:
    """Mixed-radix variant: digit slot i is bounded via qi.

    Per edge rule the enumerated slot is: third digits for part-0/1 edges,
    second digits for part-1/2 edges, first digits for part-2/0 edges, so
    the edge count is O(n1*n2*q3 + n2*n3*q2 + n1*n3*q1).
    """
    if g3.weight_dim != 3:
        raise ValueError("build_sparse_unbalanced expects digit-triple weights")
    mb = g3.component_bounds()
    bounds = (max(2 * q1, mb[0]), max(2 * q2, mb[1]), max(2 * q3, mb[2]))
    return _sparse_from_triple_graph(g3, bounds)


@dataclass(frozen=True)
class DecomposedThreeSum:
    """Digit triples of the three 3SUM arrays (as deduplicated sets)."""

    triples_a: tuple
    triples_b: tuple
    triples_c: tuple
    q: int


def build_sparse_3sum(dec: DecomposedThreeSum, q: int) -> UnweightedTripartiteGraph:
    """3SUM variant: labels carry only digits, membership replaces edges.

    Triangles correspond to value triples (one per set) summing to zero
    componentwise; the edge count is O(n*q).
    """
    m1 = max((max(abs(t[0]) for t in ts) for ts in
              (dec.triples_a, dec.triples_b, dec.triples_c) if ts), default=0)
    m2 = max((max(abs(t[1]) for t in ts) for ts in
              (dec.triples_a, dec.triples_b, dec.triples_c) if ts), default=0)
    m3 = max((max(abs(t[2]) for t in ts) for ts in
              (dec.triples_a, dec.triples_b, dec.triples_c) if ts), default=0)
    l1, l2, l3 = max(2 * q, m1), max(2 * q, m2), max(2 * q, m3)
    edges = []
    add = edges.append
    for (x1, x2, x3) in dec.triples_a:
        for y3 in range(max(-l3, -x3 - l3), min(l3, -x3 + l3) + 1):
            add(((0, 0, x1, -x3 - y3), (1, 0, y3, x2)))
    for (y1, y2, y3) in dec.triples_b:
        for x2 in range(max(-l2, -y2 - l2), min(l2, -y2 + l2) + 1):
            add(((1, 0, y3, x2), (2, 0, -y2 - x2, y1)))
    for (z1, z2, z3) in dec.triples_c:
        for x1 in range(max(-l1, -z1 - l1), min(l1, -z1 + l1) + 1):
            add(((2, 0, z2, -z1 - x1), (0, 0, x1, z3)))
    return UnweightedTripartiteGraph.from_labeled_edges(edges)


def decode_3sum_triangle(g: UnweightedTripartiteGraph, tri) -> tuple:
    """Recover the three digit triples certified by a 3SUM-graph triangle."""
    by_part = [None, None, None]
    for gid in tri:
        label = g.labels[gid]
        by_part[label[0]] = label
    (_, _, x1, z3) = by_part[0]
    (_, _, y3, x2) = by_part[1]
    (_, _, z2, y1) = by_part[2]
    ta = (x1, x2, -y3 - z3)
    tb = (y1, -x2 - z2, y3)
    tc = (-x1 - y1, z2, z3)
    return (ta, tb, tc)


# ---------------------------------------------------------------------------
# Primes and mod-p compression
# ---------------------------------------------------------------------------

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the witness set covers all 64-bit inputs."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeDraw:
    p: int
    lo: int
    hi: int
    seed: int


def random_prime(lo: int, hi: int, seed: int) -> PrimeDraw:
    """Uniform random prime in [lo, hi]; raises if the range has none.

    Small ranges are enumerated (exactly uniform); wide ranges use
    rejection sampling, whose failure after thousands of draws would imply
    a prime-free window far wider than any below 2^64.
    """
    if hi < lo:
        raise NoPrimeInRangeError(f"empty range [{lo}, {hi}]")
    r = rngmod.stream(seed, "random-prime", lo, hi)
    if hi - lo <= (1 << 16):
        primes = [x for x in range(max(2, lo), hi + 1) if is_prime(x)]
        if not primes:
            raise NoPrimeInRangeError(f"no prime in [{lo}, {hi}]")
        return PrimeDraw(r.choice(primes), lo, hi, seed)
    for _ in range(8192):
        x = r.randint(lo, hi)
        if is_prime(x):
            return PrimeDraw(x, lo, hi, seed)
    raise NoPrimeInRangeError(f"no prime found in [{lo}, {hi}] after 8192 draws")


def mod_p_range(n: int, t: float) -> tuple:
    """Prime window [n^3/(2t), n^3/t] used by the listing reductions."""
    if n < 1 or t <= 0:
        raise ValueError("need n >= 1 and t > 0")
    cube = n ** 3
    lo = max(2, math.ceil(cube / (2.0 * t)))
    hi = math.floor(cube / t)
    return lo, hi


def mod_p_reduce(g: WeightedTripartiteGraph, t: float, seed: int):
    """Reduce weights mod a random prime p in [n^3/(2t), n^3/t].

    Residues land in [0, p).  Any zero-weight triangle keeps residue sum
    in {0, p, 2p}; a nonzero triangle survives only if p divides its
    weight, which happens for O(t log n) triangles in expectation.
    """
    if g.weight_dim != 1:
        raise ValueError("mod_p_reduce expects scalar weights")
    n = max(g.part_sizes)
    lo, hi = mod_p_range(n, t)
    if hi < lo:
        raise NoPrimeInRangeError(
            f"prime range [{lo}, {hi}] empty for n={n}, t={t}")
    draw = random_prime(lo, hi, seed)
    p = draw.p
    edges = {pair: {e: w % p for e, w in d.items()} for pair, d in g.edges.items()}
    gm = WeightedTripartiteGraph(g.part_sizes, 1, edges, max(p - 1, 1),
                                 antisymmetric=False)
    return gm, draw


def audit_mod_p(g: WeightedTripartiteGraph, gm: WeightedTripartiteGraph, p: int) -> dict:
    """Count residue-sum hits, false positives, and false negatives."""
    e01 = g.pair_edges(0, 1)
    e12 = g.pair_edges(1, 2)
    e20 = g.pair_edges(2, 0)
    m01 = gm.pair_edges(0, 1)
    m12 = gm.pair_edges(1, 2)
    m20 = gm.pair_edges(2, 0)
    targets = (0, p, 2 * p)
    hits = false_pos = false_neg = 0
    for (a, b), w1 in e01.items():
        for c in range(g.part_sizes[2]):
            w2 = e12.get((b, c))
            if w2 is None:
                continue
            w3 = e20.get((c, a))
            if w3 is None:
                continue
            rsum = m01[(a, b)] + m12[(b, c)] + m20[(c, a)]
            hit = rsum in targets
            zero = (w1 + w2 + w3) == 0
            if hit:
                hits += 1
                if not zero:
                    false_pos += 1
            elif zero:
                false_neg += 1
    return {"hits": hits, "false_positives": false_pos, "false_negatives": false_neg}


def residue_target_triples(p: int, q: int):
    """All digit-level targets for residue sums in {0, p, 2p}.

    Residue sums equal T exactly when the digit triples sum to
    digits(T) + delta for some carry pattern delta, so each (T, delta)
    pair yields one retarget of the decomposed graph.
    """
    out = []
    for target in (0, p, 2 * p):
        t1, t2, t3 = _euclid_digits(target, q)
        for d1, d2, d3 in delta_set(q):
            out.append((target, (t1 + d1, t2 + d2, t3 + d3)))
    return out


# ---------------------------------------------------------------------------
# Random shifts and degree pruning
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShiftFunction:
    """Per-node shift h in [1, q]^3 applied as w_uv + h(v) - h(u)."""

    q: int
    seed: int
    values: dict


def random_shift(g3: WeightedTripartiteGraph, q: int, seed: int):
    """Shift triple weights by per-node offsets; triangle sums telescope."""
    if g3.weight_dim != 3:
        raise ValueError("random_shift expects digit-triple weights")
    r = rngmod.stream(seed, "random-shift", q)
    values = {}
    for part, size in enumerate(g3.part_sizes):
        for i in range(size):
            values[(part, i)] = (r.randint(1, q), r.randint(1, q), r.randint(1, q))
    edges = {}
    for (pu, pv), d in g3.edges.items():
        nd = {}
        for (i, j), w in d.items():
            hu = values[(pu, i)]
            hv = values[(pv, j)]
            nd[(i, j)] = (w[0] + hv[0] - hu[0], w[1] + hv[1] - hu[1],
                          w[2] + hv[2] - hu[2])
        edges[(pu, pv)] = nd
    out = WeightedTripartiteGraph(g3.part_sizes, 3, edges, 1, g3.antisymmetric)
    bound = max(out.max_abs_component(), 1)
    out = WeightedTripartiteGraph(g3.part_sizes, 3, edges, bound, g3.antisymmetric)
    return out, ShiftFunction(q, seed, values)


def degree_threshold(n_total: int, q: int) -> int:
    return max(1, (6 * n_total) // max(q, 1))


def _prune_high_degree(g: UnweightedTripartiteGraph, thr: int) -> UnweightedTripartiteGraph:
    keep = [len(nb) <= thr for nb in g.adj]
    edges = []
    for u, v in g.edge_iter():
        if keep[u] and keep[v]:
            edges.append((g.labels[u], g.labels[v]))
    return UnweightedTripartiteGraph.from_labeled_edges(edges)


def degree_bounded_sparse(g3: WeightedTripartiteGraph, q: int, seed: int,
                          rounds: int | None = None) -> list:
    """Rounds of shift + build + prune; every output has max degree <= 6n/q.

    n is the node count of g3.  Each round uses a fresh shift, and a fixed
    triangle survives a round with probability at least 1/2, so the
    default round count 2*log2(n) makes a miss across all rounds unlikely.
    """
    n_total = g3.total_nodes
    if rounds is None:
        rounds = max(1, math.ceil(2 * math.log2(max(2, n_total))))
    thr = degree_threshold(n_total, q)
    out = []
    for rd in range(rounds):
        child = rngmod.stream(seed, "degree-round", rd).getrandbits(63)
        shifted, _h = random_shift(g3, q, child)
        sp = build_sparse_exact(shifted, q)
        pruned = _prune_high_degree(sp, thr)
        assert pruned.max_degree() <= thr
        out.append(pruned)
    return out


# ---------------------------------------------------------------------------
# Listing through an All-Nodes oracle
# ---------------------------------------------------------------------------


@dataclass
class ANListResult:
    triangles: tuple
    per_level_edges: dict
    oracle_calls: int


def _induced_subgraph(g: UnweightedTripartiteGraph, nodes: set) -> UnweightedTripartiteGraph:
    pairs = []
    extra = []
    for u in nodes:
        extra.append(g.labels[u])
        for v in g.adj[u]:
            if v > u and v in nodes:
                pairs.append((g.labels[u], g.labels[v]))
    extra.sort()
    return UnweightedTripartiteGraph.from_labeled_edges(pairs, extra_nodes=extra)


def list_via_an_oracle(g: UnweightedTripartiteGraph, an_backend=None) -> ANListResult:
    """List all triangles using only an All-Nodes oracle.

    Splits part 0 in half, asks the oracle which part-1 nodes are in
    triangles of each half's induced subgraph, and recurses on those; a
    single part-0 node is solved by direct enumeration.  Every triangle is
    reported exactly once, and the summed size of the subgraphs handed to
    the oracle per recursion level is O(m + t * d_max).
    """
    backend = an_backend or oracles.all_nodes_triangle
    label_to_gid = {label: gid for gid, label in enumerate(g.labels)}
    adj_sets = g.adj_sets()
    tris = []
    per_level: dict = {}
    calls = 0

    def base(a: int, b_nodes: set, c_nodes: set) -> None:
        for b in sorted(adj_sets[a] & b_nodes):
            for c in sorted(adj_sets[a] & adj_sets[b] & c_nodes):
                tris.append((a, b, c))

    def recurse(a_nodes: list, b_nodes: set, c_nodes: set, level: int) -> None:
        nonlocal calls
        if not a_nodes or not b_nodes or not c_nodes:
            return
        if len(a_nodes) == 1:
            base(a_nodes[0], b_nodes, c_nodes)
            return
        mid = len(a_nodes) // 2
        for half in (a_nodes[:mid], a_nodes[mid:]):
            nodes = set(half) | b_nodes | c_nodes
            sub = _induced_subgraph(g, nodes)
            per_level[level] = per_level.get(level, 0) + sub.m
            flags = backend(sub)
            calls += 1
            bj = set()
            for gid_sub in sub.part_nodes(1):
                if flags.get(gid_sub):
                    bj.add(label_to_gid[sub.labels[gid_sub]])
            recurse(half, bj & b_nodes, c_nodes, level + 1)

    recurse(
        sorted(g.part_nodes(0)),
        set(g.part_nodes(1)),
        set(g.part_nodes(2)),
        0,
    )
    return ANListResult(tuple(sorted(tris)), per_level, calls)


# ---------------------------------------------------------------------------
# End-to-end drivers
# ---------------------------------------------------------------------------


def _listing_with_budget(backend, sp, remaining):
    cap = None if remaining is None else remaining + 1
    return backend(sp, cap=cap)


def exact_tri_via_listing(g: WeightedTripartiteGraph, t: float | None = None,
                          listing_backend=None, output_budget: int | None = None,
                          seed: int = 0):
    """Exact-triangle existence via mod-p, digit split, and sparse listing.

    With an unlimited budget the answer is exact (every candidate is
    verified against the original weights).  When the listed candidate
    count would exceed `output_budget`, the run stops and reports an
    inferred yes, flagged probabilistic.
    """
    n = max(g.part_sizes) if g.part_sizes else 0
    if t is None:
        t = float(max(n, 1)) ** 2.25
    backend = listing_backend or oracles.list_triangles
    rep = ReductionReport(seed=seed, t=t)
    if min(g.part_sizes) == 0 or g.n_edges() == 0:
        return False, rep
    gm, draw = mod_p_reduce(g, t, seed)
    p = draw.p
    q = icbrt_ceil(p)
    rep.p, rep.q = p, q
    g3 = decompose_graph(gm, q)
    remaining = output_budget
    for _target, tau in residue_target_triples(p, q):
        sp = build_sparse_exact(retarget(g3, tau), q)
        rep.add_edges("sparse", sp.m)
        rep.note_degree("sparse", sp.max_degree())
        rep.bump("listing_calls")
        listing = _listing_with_budget(backend, sp, remaining)
        if remaining is not None:
            if listing.truncated or len(listing.triangles) > remaining:
                rep.flags["inferred_yes"] = True
                rep.flags["probabilistic"] = True
                return True, rep
            remaining -= len(listing.triangles)
        for tri in listing.triangles:
            a, b, c = decode_triangle(sp, tri)
            rep.bump("candidates")
            if g.triangle_weight(a, b, c) == 0:
                rep.extra["witness"] = [a, b, c]
                return True, rep
    return False, rep


def exact_tri_via_an(g: WeightedTripartiteGraph, t: float | None = None,
                     an_backend=None, seed: int = 0, rounds: int | None = None):
    """Exact-triangle existence via degree-bounded sparse graphs.

    Same mod-p front end as the listing driver, but each retargeted graph
    goes through shift-and-prune rounds and the All-Nodes listing
    recursion.  Candidates are verified against the original weights.
    """
    n = max(g.part_sizes) if g.part_sizes else 0
    if t is None:
        t = float(max(n, 1)) ** 1.8
    rep = ReductionReport(seed=seed, t=t)
    if min(g.part_sizes) == 0 or g.n_edges() == 0:
        return False, rep
    gm, draw = mod_p_reduce(g, t, seed)
    p = draw.p
    q = icbrt_ceil(p)
    rep.p, rep.q = p, q
    g3 = decompose_graph(gm, q)
    for idx, (_target, tau) in enumerate(residue_target_triples(p, q)):
        child = rngmod.stream(seed, "an-target", idx).getrandbits(63)
        graphs = degree_bounded_sparse(retarget(g3, tau), q, child, rounds=rounds)
        for sp in graphs:
            rep.add_edges("pruned", sp.m)
            rep.note_degree("pruned", sp.max_degree())
            res = list_via_an_oracle(sp, an_backend)
            rep.bump("an_oracle_calls", res.oracle_calls)
            for tri in res.triangles:
                a, b, c = decode_triangle(sp, tri)
                rep.bump("candidates")
                if g.triangle_weight(a, b, c) == 0:
                    rep.extra["witness"] = [a, b, c]
                    return True, rep
    return False, rep


def detect_via_sparse(g: WeightedTripartiteGraph, detect_backend=None) -> bool:
    """Exact-triangle detection through unweighted triangle detection.

    No mod-p step: q = ceil(W^(1/3)) keeps the digit identity exact, at
    the price of a label range that grows with the weight bound.
    """
    backend = detect_backend or oracles.detect_triangle
    if min(g.part_sizes) == 0 or g.n_edges() == 0:
        return False
    w_bound = max(1, g.weight_bound)
    q = icbrt_ceil(w_bound)
    g3 = decompose_graph(g, q)
    for delta in delta_set(q):
        if backend(build_sparse_exact(retarget(g3, delta), q)):
            return True
    return False


def threesum_via_listing(inst: ThreeSumInstance, t: float | None = None,
                         listing_backend=None, output_budget: int | None = None,
                         seed: int = 0):
    """3SUM via mod-p, digit split, and sparse triangle listing."""
    n = inst.n
    if t is None:
        t = float(max(n, 1)) ** 1.5
    backend = listing_backend or oracles.list_triangles
    rep = ReductionReport(seed=seed, t=t)
    if n == 0:
        return False, rep
    lo, hi = mod_p_range(n, t)
    draw = random_prime(lo, hi, seed)
    p = draw.p
    q = icbrt_ceil(p)
    rep.p, rep.q = p, q

    maps = []
    for arr in (inst.a, inst.b, inst.c):
        m: dict = {}
        for i, x in enumerate(arr):
            m.setdefault(x % p, []).append(i)
        maps.append(m)
    tri_b = tuple(sorted(digit_decompose(r, q).as_weight() for r in maps[1]))
    tri_c = tuple(sorted(digit_decompose(r, q).as_weight() for r in maps[2]))
    base_a = sorted(digit_decompose(r, q).as_weight() for r in maps[0])

    remaining = output_budget
    for _target, tau in residue_target_triples(p, q):
        d1, d2, d3 = tau
        tri_a = tuple((t0 - d1, t1 - d2, t2 - d3) for (t0, t1, t2) in base_a)
        dec = DecomposedThreeSum(tri_a, tri_b, tri_c, q)
        sp = build_sparse_3sum(dec, q)
        rep.add_edges("sparse", sp.m)
        rep.bump("listing_calls")
        listing = _listing_with_budget(backend, sp, remaining)
        if remaining is not None:
            if listing.truncated or len(listing.triangles) > remaining:
                rep.flags["inferred_yes"] = True
                rep.flags["probabilistic"] = True
                return True, rep
            remaining -= len(listing.triangles)
        for tri in listing.triangles:
            ta, tb, tc = decode_3sum_triangle(sp, tri)
            ra = digit_reconstruct((ta[0] + d1, ta[1] + d2, ta[2] + d3), q)
            rb = digit_reconstruct(tb, q)
            rc = digit_reconstruct(tc, q)
            rep.bump("candidates")
            for i in maps[0].get(ra, ()):
                for j in maps[1].get(rb, ()):
                    for k in maps[2].get(rc, ()):
                        if inst.a[i] + inst.b[j] + inst.c[k] == 0:
                            rep.extra["witness"] = [i, j, k]
                            return True, rep
    return False, rep
