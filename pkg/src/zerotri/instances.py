"""Problem instances: weighted tripartite graphs, sparse label graphs, 3SUM arrays.

Weights are plain Python ints (or triples of ints for digit-decomposed
graphs) capped at 2**40, so every sum formed anywhere in the package stays
far inside 64 bits.  Instances are treated as immutable once built; all
transformations return new objects.

Weighted graphs store directed edges keyed by ordered part pair.  Plain
instances keep only the forward orientation (0,1), (1,2), (2,0); a graph
flagged antisymmetric stores all six orientations and must satisfy
w[v][u] == -w[u][v].
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import rng as rngmod

WEIGHT_CAP = 1 << 40

FORWARD_PAIRS = ((0, 1), (1, 2), (2, 0))
REVERSE_PAIRS = ((1, 0), (2, 1), (0, 2))

Weight = "int | tuple[int, int, int]"


class WeightBoundError(ValueError):
    """A weight or weight bound exceeds the 2**40 cap."""


class PlantingError(ValueError):
    """Requested planted solutions cannot be placed."""


def _wabs(w) -> int:
    if isinstance(w, tuple):
        return max(abs(x) for x in w)
    return abs(w)


def _wneg(w):
    if isinstance(w, tuple):
        return tuple(-x for x in w)
    return -w


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


# ---------------------------------------------------------------------------
# Undirected weighted graphs (inputs to antisymmetrize)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UndirectedWeightedGraph:
    """Simple undirected graph with integer edge weights.

    Edges are keyed by (u, v) with u < v.  Used as the input side of
    antisymmetrize(); not part of the on-disk instance format.
    """

    n: int
    edges: dict

    def weight(self, u: int, v: int):
        return self.edges.get((u, v) if u < v else (v, u))

    def zero_triangles(self) -> list:
        out = []
        for u in range(self.n):
            for v in range(u + 1, self.n):
                w_uv = self.edges.get((u, v))
                if w_uv is None:
                    continue
                for w in range(v + 1, self.n):
                    w_vw = self.edges.get((v, w))
                    w_uw = self.edges.get((u, w))
                    if w_vw is None or w_uw is None:
                        continue
                    if w_uv + w_vw + w_uw == 0:
                        out.append((u, v, w))
        return out


# ---------------------------------------------------------------------------
# Weighted tripartite graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightedTripartiteGraph:
    """Tripartite graph with integer (or int-triple) weights on directed edges.

    part_sizes: sizes of parts 0, 1, 2.
    weight_dim: 1 for scalar weights, 3 for digit-triple weights.
    edges: {(pu, pv): {(i, j): weight}} over ordered part pairs.
    weight_bound: declared bound W; every stored component lies in [-W, W].
    antisymmetric: if set, all six orientations are stored and reverses
        carry componentwise negated weights.
    """

    part_sizes: tuple
    weight_dim: int
    edges: dict
    weight_bound: int
    antisymmetric: bool = False

    # -- basic accessors ----------------------------------------------------

    @property
    def total_nodes(self) -> int:
        return sum(self.part_sizes)

    def pair_edges(self, pu: int, pv: int) -> dict:
        return self.edges.get((pu, pv), {})

    def weight(self, pu: int, i: int, pv: int, j: int):
        return self.edges.get((pu, pv), {}).get((i, j))

    def triangle_weight(self, a: int, b: int, c: int):
        """Weight of the forward triangle a -> b -> c -> a, or None."""
        w1 = self.edges.get((0, 1), {}).get((a, b))
        w2 = self.edges.get((1, 2), {}).get((b, c))
        w3 = self.edges.get((2, 0), {}).get((c, a))
        if w1 is None or w2 is None or w3 is None:
            return None
        if self.weight_dim == 1:
            return w1 + w2 + w3
        return (w1[0] + w2[0] + w3[0], w1[1] + w2[1] + w3[1], w1[2] + w2[2] + w3[2])

    def n_edges(self) -> int:
        return sum(len(d) for d in self.edges.values())

    def max_abs_component(self) -> int:
        best = 0
        for d in self.edges.values():
            for w in d.values():
                a = _wabs(w)
                if a > best:
                    best = a
        return best

    def component_bounds(self) -> tuple:
        """Max absolute value per weight slot (3-tuple; scalar uses slot 0)."""
        if self.weight_dim == 1:
            m = self.max_abs_component()
            return (m, m, m)
        best = [0, 0, 0]
        for d in self.edges.values():
            for w in d.values():
                for s in range(3):
                    a = abs(w[s])
                    if a > best[s]:
                        best[s] = a
        return tuple(best)

    def zero_target(self):
        return 0 if self.weight_dim == 1 else (0, 0, 0)

    # -- validation ----------------------------------------------------------

    def validate(self) -> None:
        n1, n2, n3 = self.part_sizes
        if min(n1, n2, n3) < 0:
            raise ValueError("negative part size")
        if self.weight_dim not in (1, 3):
            raise ValueError("weight_dim must be 1 or 3")
        if not 0 <= self.weight_bound <= WEIGHT_CAP:
            raise WeightBoundError(f"weight bound {self.weight_bound} outside [0, 2^40]")
        sizes = self.part_sizes
        for (pu, pv), d in self.edges.items():
            if pu == pv or not (0 <= pu <= 2 and 0 <= pv <= 2):
                raise ValueError(f"bad part pair {(pu, pv)}")
            for (i, j), w in d.items():
                if not (0 <= i < sizes[pu] and 0 <= j < sizes[pv]):
                    raise ValueError(f"edge ({i},{j}) outside parts {(pu, pv)}")
                if self.weight_dim == 3 and (not isinstance(w, tuple) or len(w) != 3):
                    raise ValueError("weight_dim 3 requires int triples")
                if self.weight_dim == 1 and isinstance(w, tuple):
                    raise ValueError("weight_dim 1 requires scalar weights")
                if _wabs(w) > self.weight_bound:
                    raise WeightBoundError(f"weight {w} exceeds declared bound")
        if self.antisymmetric:
            for (pu, pv), d in self.edges.items():
                rev = self.edges.get((pv, pu), {})
                for (i, j), w in d.items():
                    if rev.get((j, i)) != _wneg(w):
                        raise ValueError(f"antisymmetry violated at {(pu, i, pv, j)}")

    # -- construction helpers -------------------------------------------------

    def replace_edges(self, edges: dict, weight_bound=None,
                      antisymmetric=None) -> "WeightedTripartiteGraph":
        return WeightedTripartiteGraph(
            part_sizes=self.part_sizes,
            weight_dim=self.weight_dim,
            edges=edges,
            weight_bound=self.weight_bound if weight_bound is None else weight_bound,
            antisymmetric=self.antisymmetric if antisymmetric is None else antisymmetric,
        )

    # -- serialization --------------------------------------------------------

    def to_json_dict(self) -> dict:
        rows = []
        for (pu, pv) in sorted(self.edges):
            d = self.edges[(pu, pv)]
            tag = f"{pu}{pv}"
            for (i, j) in sorted(d):
                w = d[(i, j)]
                row = [tag, i, j]
                row.extend(w if isinstance(w, tuple) else (w,))
                rows.append(row)
        return {
            "kind": "exact-tri",
            "parts": list(self.part_sizes),
            "weight_dim": self.weight_dim,
            "weight_bound": self.weight_bound,
            "antisymmetric": self.antisymmetric,
            "edges": rows,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "WeightedTripartiteGraph":
        dim = obj["weight_dim"]
        edges: dict = {}
        for row in obj["edges"]:
            tag, i, j = row[0], row[1], row[2]
            pu, pv = int(tag[0]), int(tag[1])
            w = row[3] if dim == 1 else tuple(row[3:6])
            edges.setdefault((pu, pv), {})[(i, j)] = w
        g = cls(
            part_sizes=tuple(obj["parts"]),
            weight_dim=dim,
            edges=edges,
            weight_bound=obj["weight_bound"],
            antisymmetric=obj["antisymmetric"],
        )
        g.validate()
        return g


# ---------------------------------------------------------------------------
# Unweighted tripartite label graphs (outputs of the sparse constructions)
# ---------------------------------------------------------------------------


class UnweightedTripartiteGraph:
    """Tripartite graph on labelled nodes with adjacency lists.

    Node labels are tuples (part, base, aux1, aux2); the base field points
    back at the node of the source instance the label was derived from.
    Global node ids are grouped by part: part 0 first, then 1, then 2.
    """

    __slots__ = ("labels", "part_ranges", "adj", "m", "_adj_sets")

    def __init__(self, labels, part_ranges, adj, m):
        self.labels = labels
        self.part_ranges = part_ranges
        self.adj = adj
        self.m = m
        self._adj_sets = None

    @classmethod
    def from_labeled_edges(cls, edge_pairs, extra_nodes=()) -> "UnweightedTripartiteGraph":
        """Build from (label, label) pairs; extra_nodes adds isolated labels."""
        maps = ({}, {}, {})
        locals_ = ([], [], [])

        def intern(label):
            part = label[0]
            pm = maps[part]
            li = pm.get(label)
            if li is None:
                li = len(locals_[part])
                pm[label] = li
                locals_[part].append(label)
            return li

        for label in extra_nodes:
            intern(label)
        raw = [(u[0], intern(u), v[0], intern(v)) for (u, v) in edge_pairs]

        off1 = len(locals_[0])
        off2 = off1 + len(locals_[1])
        offsets = (0, off1, off2)
        n = off2 + len(locals_[2])
        labels = tuple(locals_[0] + locals_[1] + locals_[2])
        adj = [[] for _ in range(n)]
        for pu, lu, pv, lv in raw:
            u = offsets[pu] + lu
            v = offsets[pv] + lv
            adj[u].append(v)
            adj[v].append(u)
        for lst in adj:
            lst.sort()
        part_ranges = ((0, off1), (off1, off2), (off2, n))
        return cls(labels, part_ranges, tuple(tuple(l) for l in adj), len(raw))

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    def part_of(self, gid: int) -> int:
        return self.labels[gid][0]

    def part_nodes(self, part: int) -> range:
        lo, hi = self.part_ranges[part]
        return range(lo, hi)

    def adj_sets(self):
        if self._adj_sets is None:
            self._adj_sets = [set(nb) for nb in self.adj]
        return self._adj_sets

    def degree(self, gid: int) -> int:
        return len(self.adj[gid])

    def max_degree(self) -> int:
        return max((len(nb) for nb in self.adj), default=0)

    def edge_iter(self):
        for u, nb in enumerate(self.adj):
            for v in nb:
                if v > u:
                    yield (u, v)

    def validate(self) -> None:
        seen = set()
        for p in range(3):
            for gid in self.part_nodes(p):
                label = self.labels[gid]
                if label[0] != p:
                    raise ValueError("label part out of place")
                if label in seen:
                    raise ValueError(f"duplicate label {label}")
                seen.add(label)
        deg_total = 0
        for u, nb in enumerate(self.adj):
            if len(set(nb)) != len(nb):
                raise ValueError("duplicate edge")
            for v in nb:
                if v == u:
                    raise ValueError("self loop")
                if self.part_of(v) == self.part_of(u):
                    raise ValueError("edge inside a part")
                if u not in self.adj[v]:
                    raise ValueError("asymmetric adjacency")
            deg_total += len(nb)
        if deg_total != 2 * self.m:
            raise ValueError("edge count mismatch")

    def to_json_dict(self) -> dict:
        return {
            "kind": "sparse-tri",
            "labels": [list(l) for l in self.labels],
            "part_ranges": [list(r) for r in self.part_ranges],
            "edges": sorted([u, v] for (u, v) in self.edge_iter()),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "UnweightedTripartiteGraph":
        labels = tuple(tuple(l) for l in obj["labels"])
        n = len(labels)
        adj = [[] for _ in range(n)]
        for u, v in obj["edges"]:
            adj[u].append(v)
            adj[v].append(u)
        for lst in adj:
            lst.sort()
        part_ranges = tuple(tuple(r) for r in obj["part_ranges"])
        g = cls(labels, part_ranges, tuple(tuple(l) for l in adj), len(obj["edges"]))
        g.validate()
        return g

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UnweightedTripartiteGraph)
            and self.labels == other.labels
            and self.part_ranges == other.part_ranges
            and self.adj == other.adj
        )

    def __hash__(self):
        return hash((self.labels, self.part_ranges))


def decode_triangle(g: UnweightedTripartiteGraph, tri) -> tuple:
    """Map a triangle of label-graph node ids back to source node indices."""
    by_part = [None, None, None]
    for gid in tri:
        label = g.labels[gid]
        by_part[label[0]] = label[1]
    return tuple(by_part)


# ---------------------------------------------------------------------------
# 3SUM instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThreeSumInstance:
    """Three integer arrays; a solution is a+b+c = 0 across them."""

    a: tuple
    b: tuple
    c: tuple
    weight_bound: int

    @property
    def n(self) -> int:
        return len(self.a)

    def validate(self) -> None:
        if not 0 <= self.weight_bound <= WEIGHT_CAP:
            raise WeightBoundError(f"weight bound {self.weight_bound} outside [0, 2^40]")
        for arr in (self.a, self.b, self.c):
            for x in arr:
                if abs(x) > self.weight_bound:
                    raise WeightBoundError(f"value {x} exceeds declared bound")

    def to_json_dict(self) -> dict:
        return {
            "kind": "3sum",
            "arrays": [list(self.a), list(self.b), list(self.c)],
            "weight_bound": self.weight_bound,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ThreeSumInstance":
        arrs = obj["arrays"]
        inst = cls(tuple(arrs[0]), tuple(arrs[1]), tuple(arrs[2]), obj["weight_bound"])
        inst.validate()
        return inst


# ---------------------------------------------------------------------------
# Witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TriangleWitness:
    """One triangle (a in part 0, b in part 1, c in part 2) and its weight."""

    a: int
    b: int
    c: int
    total_weight: object = 0


def verify_witness(g: WeightedTripartiteGraph, wit: TriangleWitness, target=None) -> bool:
    """Check the witness edges exist and its recomputed weight matches."""
    got = g.triangle_weight(wit.a, wit.b, wit.c)
    if got is None or got != wit.total_weight:
        return False
    return target is None or got == target


# ---------------------------------------------------------------------------
# antisymmetrize
# ---------------------------------------------------------------------------


def antisymmetrize(g: UndirectedWeightedGraph) -> WeightedTripartiteGraph:
    """Blow an undirected weighted graph up into three antisymmetric copies.

    Each part is a copy of the node set; every undirected edge {u, v} is
    placed in both node orders between every pair of parts, with the
    orientation 0 -> 1 -> 2 -> 0 carrying the original weight and the
    reverse orientation its negation.  Zero-weight triangles of the input
    correspond exactly to zero-weight forward triangles of the output.
    """
    bound = 0
    for w in g.edges.values():
        if abs(w) > WEIGHT_CAP:
            raise WeightBoundError(f"weight {w} exceeds 2^40 cap")
        bound = max(bound, abs(w))
    edges: dict = {}
    for pu, pv in FORWARD_PAIRS + REVERSE_PAIRS:
        edges[(pu, pv)] = {}
    for (u, v), w in g.edges.items():
        for pu, pv in FORWARD_PAIRS:
            edges[(pu, pv)][(u, v)] = w
            edges[(pu, pv)][(v, u)] = w
            edges[(pv, pu)][(u, v)] = -w
            edges[(pv, pu)][(v, u)] = -w
    out = WeightedTripartiteGraph(
        part_sizes=(g.n, g.n, g.n),
        weight_dim=1,
        edges=edges,
        weight_bound=bound,
        antisymmetric=True,
    )
    return out


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def gen_exact_tri(n1: int, n2: int, n3: int, weight_bound: int, density: float,
                  planted: int, seed: int) -> WeightedTripartiteGraph:
    """Random tripartite instance with `planted` guaranteed zero triangles.

    Random edges are sampled first; planted triangles overwrite them and
    never share an edge slot with each other, so exactly the requested
    zero triangles are guaranteed (more may occur by chance).
    """
    if not 0 <= weight_bound <= WEIGHT_CAP:
        raise WeightBoundError(f"weight bound {weight_bound} outside [0, 2^40]")
    sizes = (n1, n2, n3)
    cap = min(n1 * n2, n2 * n3, n3 * n1)
    if planted > cap:
        raise PlantingError(f"cannot plant {planted} edge-disjoint triangles (cap {cap})")
    r = rngmod.stream(seed, "gen-exact-tri", n1, n2, n3, weight_bound,
                      repr(float(density)), planted)
    edges: dict = {}
    for pu, pv in FORWARD_PAIRS:
        d = {}
        for i in range(sizes[pu]):
            for j in range(sizes[pv]):
                if r.random() < density:
                    d[(i, j)] = r.randint(-weight_bound, weight_bound)
        edges[(pu, pv)] = d

    used = set()
    for _ in range(planted):
        for _try in range(200):
            a, b, c = r.randrange(n1), r.randrange(n2), r.randrange(n3)
            slots = (("ab", a, b), ("bc", b, c), ("ca", c, a))
            if all(s not in used for s in slots):
                break
        else:
            # Rejection sampling stalls near full occupancy; fall back to a
            # uniform draw over the exact set of still-free triples.
            free = [(a, b, c)
                    for a in range(n1) for b in range(n2) for c in range(n3)
                    if ("ab", a, b) not in used and ("bc", b, c) not in used
                    and ("ca", c, a) not in used]
            if not free:
                raise PlantingError("could not place edge-disjoint planted triangle")
            a, b, c = free[r.randrange(len(free))]
            slots = (("ab", a, b), ("bc", b, c), ("ca", c, a))
        used.update(slots)
        while True:
            w1 = r.randint(-weight_bound, weight_bound)
            w2 = r.randint(-weight_bound, weight_bound)
            w3 = -(w1 + w2)
            if abs(w3) <= weight_bound:
                break
        edges[(0, 1)][(a, b)] = w1
        edges[(1, 2)][(b, c)] = w2
        edges[(2, 0)][(c, a)] = w3

    g = WeightedTripartiteGraph(sizes, 1, edges, weight_bound, antisymmetric=False)
    g.validate()
    return g


def gen_3sum(n: int, weight_bound: int, planted: int, seed: int) -> ThreeSumInstance:
    """Random 3SUM instance with `planted` guaranteed zero triples."""
    if not 0 <= weight_bound <= WEIGHT_CAP:
        raise WeightBoundError(f"weight bound {weight_bound} outside [0, 2^40]")
    if planted > n:
        raise PlantingError(f"cannot plant {planted} index-disjoint triples in arrays of {n}")
    r = rngmod.stream(seed, "gen-3sum", n, weight_bound, planted)
    a = [r.randint(-weight_bound, weight_bound) for _ in range(n)]
    b = [r.randint(-weight_bound, weight_bound) for _ in range(n)]
    c = [r.randint(-weight_bound, weight_bound) for _ in range(n)]
    idx = list(range(n))
    r.shuffle(idx)
    for t in range(planted):
        i = idx[t]
        while True:
            x = r.randint(-weight_bound, weight_bound)
            y = r.randint(-weight_bound, weight_bound)
            z = -(x + y)
            if abs(z) <= weight_bound:
                break
        a[i], b[i], c[i] = x, y, z
    inst = ThreeSumInstance(tuple(a), tuple(b), tuple(c), weight_bound)
    inst.validate()
    return inst


def gen_undirected(n: int, weight_bound: int, density: float, planted: int,
                   seed: int) -> UndirectedWeightedGraph:
    """Random undirected weighted graph with planted zero triangles."""
    if planted > 0 and n < 3:
        raise PlantingError("need at least 3 nodes to plant a triangle")
    r = rngmod.stream(seed, "gen-undirected", n, weight_bound,
                      repr(float(density)), planted)
    edges = {}
    for u in range(n):
        for v in range(u + 1, n):
            if r.random() < density:
                edges[(u, v)] = r.randint(-weight_bound, weight_bound)
    used = set()
    for _ in range(planted):
        for _try in range(1000):
            u, v, w = sorted(r.sample(range(n), 3))
            slots = ((u, v), (v, w), (u, w))
            if all(s not in used for s in slots):
                used.update(slots)
                break
        else:
            raise PlantingError("could not place edge-disjoint planted triangle")
        while True:
            w1 = r.randint(-weight_bound, weight_bound)
            w2 = r.randint(-weight_bound, weight_bound)
            w3 = -(w1 + w2)
            if abs(w3) <= weight_bound:
                break
        edges[(u, v)], edges[(v, w)], edges[(u, w)] = w1, w2, w3
    return UndirectedWeightedGraph(n, edges)


# ---------------------------------------------------------------------------
# Serialization entry points
# ---------------------------------------------------------------------------

_KINDS = {
    "exact-tri": WeightedTripartiteGraph,
    "3sum": ThreeSumInstance,
    "sparse-tri": UnweightedTripartiteGraph,
}


def serialize_instance(inst) -> str:
    """Canonical JSON text for an instance; byte-deterministic."""
    return _canonical(inst.to_json_dict())


def parse_instance(text: str):
    obj = json.loads(text)
    kind = obj.get("kind")
    if kind not in _KINDS:
        raise ValueError(f"unknown instance kind {kind!r}")
    return _KINDS[kind].from_json_dict(obj)
