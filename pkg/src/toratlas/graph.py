"""Simple undirected graphs and the small-graph utilities the embedding code needs.

Vertices are ``0 .. n-1``. Optional string labels are bookkeeping only
(``a``, ``a'``, ``1`` ... ``6`` in the constructions) and never take part in
equality of structure.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import BudgetExceeded, CatalogError, DomainError, NoCycleError, ParseError, UnsupportedInput

Edge = tuple[int, int]

#: vertex limit for the exhaustive backtracking searches
SEARCH_VERTEX_LIMIT = 16


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]
    labels: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("vertex count must be non-negative")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise DomainError(f"edge ({u}, {v}) is not a normalized pair below n={self.n}")
            if (u, v) in seen:
                raise DomainError(f"parallel edge ({u}, {v})")
            seen.add((u, v))
        if list(self.edges) != sorted(self.edges):
            raise DomainError("edges must be sorted; use Graph.from_edges")
        if self.labels is not None and len(self.labels) != self.n:
            raise DomainError("need exactly one label per vertex")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], labels=None) -> "Graph":
        normed = []
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            normed.append(_norm(u, v))
        if len(set(normed)) != len(normed):
            raise DomainError("parallel edges are not allowed")
        return cls(n, tuple(sorted(normed)), tuple(labels) if labels is not None else None)

    # -- basic queries -------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        nb: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        return tuple(tuple(sorted(x)) for x in nb)

    @cached_property
    def _edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self._edge_set

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def is_cubic(self) -> bool:
        return self.n > 0 and all(len(a) == 3 for a in self.adj)

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def vertex_by_label(self, name: str) -> int:
        if self.labels is None or name not in self.labels:
            raise DomainError(f"no vertex labelled {name!r}")
        return self.labels.index(name)

    def components(self) -> list[list[int]]:
        """Vertex sets of the connected components, each sorted, ordered by least vertex."""
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [s], deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        queue.append(y)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    # -- constructions -------------------------------------------------

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Subgraph induced on ``vertices``, renumbered in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        labels = [self.label(v) for v in vertices] if self.labels is not None else None
        return Graph.from_edges(len(vertices), edges, labels)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Image of the graph under the vertex bijection ``v -> perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise DomainError("relabel needs a permutation of the vertices")
        labels = None
        if self.labels is not None:
            lab = [""] * self.n
            for v, w in enumerate(perm):
                lab[w] = self.labels[v]
            labels = lab
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges], labels)

    def without_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        drop = {_norm(*e) for e in edges}
        missing = drop - self._edge_set
        if missing:
            raise DomainError(f"edges not in graph: {sorted(missing)}")
        return Graph(self.n, tuple(e for e in self.edges if e not in drop), self.labels)

    def with_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        return Graph.from_edges(self.n, list(self.edges) + [tuple(e) for e in edges], self.labels)

    # -- text format ---------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines += [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        header = None
        edges: list[Edge] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"expected two integers, got {line!r}", lineno)
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"expected two integers, got {line!r}", lineno) from None
            if header is None:
                if a < 0 or b < 0:
                    raise ParseError("negative counts in header", lineno)
                header = (a, b)
                continue
            if not (0 <= a < b < header[0]):
                raise ParseError(f"edge {a} {b} must satisfy 0 <= u < v < {header[0]}", lineno)
            edges.append((a, b))
        if header is None:
            raise ParseError("missing 'n m' header line")
        if len(edges) != header[1]:
            raise ParseError(f"header announces {header[1]} edges, found {len(edges)}")
        if len(set(edges)) != len(edges):
            raise ParseError("duplicate edge")
        return cls.from_edges(header[0], edges)


def disjoint_union(*graphs: Graph) -> Graph:
    edges, labels, offset = [], [], 0
    for g in graphs:
        edges += [(u + offset, v + offset) for u, v in g.edges]
        labels += [g.label(v) for v in range(g.n)]
        offset += g.n
    return Graph.from_edges(offset, edges, labels)


def subdivide(g: Graph, e: Sequence[int], k: int, labels: Optional[Sequence[str]] = None) -> Graph:
    """Replace edge ``e = (u, v)`` by a path ``u, n, n+1, ..., n+k-1, v``.

    New vertices are appended in path order starting from ``e[0]``.
    """
    u, v = int(e[0]), int(e[1])
    if not g.has_edge(u, v):
        raise DomainError(f"({u}, {v}) is not an edge")
    if k < 1:
        raise DomainError("subdivision count must be at least 1")
    new = list(range(g.n, g.n + k))
    path = [u] + new + [v]
    edges = [x for x in g.edges if x != _norm(u, v)]
    edges += list(zip(path, path[1:]))
    new_labels = None
    if g.labels is not None or labels is not None:
        extra = list(labels) if labels is not None else [str(x) for x in new]
        if len(extra) != k:
            raise DomainError("need one label per new vertex")
        new_labels = [g.label(x) for x in range(g.n)] + extra
    return Graph.from_edges(g.n + k, edges, new_labels)


def suppress_degree2(g: Graph) -> Graph:
    """Contract every degree-2 vertex into a single edge joining its neighbours.

    Surviving vertices keep their relative order and labels.
    """
    adj = {v: set(g.adj[v]) for v in range(g.n)}
    alive = set(range(g.n))
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            if len(adj[v]) != 2:
                continue
            x, y = sorted(adj[v])
            if y in adj[x]:
                raise UnsupportedInput(f"suppressing vertex {v} would create a parallel edge")
            adj[x].discard(v)
            adj[y].discard(v)
            adj[x].add(y)
            adj[y].add(x)
            alive.discard(v)
            del adj[v]
            changed = True
    # a bare cycle would shrink to a triangle and then a loop; treat it as unsupported
    keep = sorted(alive)
    index = {v: i for i, v in enumerate(keep)}
    edges = {_norm(index[u], index[w]) for u in keep for w in adj[u]}
    labels = [g.label(v) for v in keep] if g.labels is not None else None
    return Graph.from_edges(len(keep), sorted(edges), labels)


# -- isomorphism -------------------------------------------------------


def _search_order(g: Graph) -> list[int]:
    order: list[int] = []
    placed = [False] * g.n
    for comp in g.components():
        start = max(comp, key=lambda v: (g.degree(v), -v))
        placed[start] = True
        queue = deque([start])
        while queue:
            x = queue.popleft()
            order.append(x)
            for y in sorted(g.adj[x], key=lambda w: (-g.degree(w), w)):
                if not placed[y]:
                    placed[y] = True
                    queue.append(y)
    return order


def _vertex_invariant(g: Graph, v: int) -> tuple:
    return (g.degree(v), tuple(sorted(g.degree(w) for w in g.adj[v])))


def _isomorphisms(g: Graph, h: Graph, limit: Optional[int] = None, vertex_limit: int = SEARCH_VERTEX_LIMIT):
    if g.n > vertex_limit or h.n > vertex_limit:
        raise BudgetExceeded(f"isomorphism search limited to {vertex_limit} vertices")
    if g.n != h.n or g.m != h.m or sorted(g.degrees()) != sorted(h.degrees()):
        return []
    ginv = [_vertex_invariant(g, v) for v in range(g.n)]
    hinv = [_vertex_invariant(h, v) for v in range(h.n)]
    if sorted(ginv) != sorted(hinv):
        return []
    order = _search_order(g)
    mapping = [-1] * g.n
    used = [False] * h.n
    found: list[tuple[int, ...]] = []

    def extend(i: int) -> bool:
        if i == len(order):
            found.append(tuple(mapping))
            return limit is not None and len(found) >= limit
        v = order[i]
        mapped_nbrs = [mapping[w] for w in g.adj[v] if mapping[w] >= 0]
        if mapped_nbrs:
            candidates = [x for x in h.adj[mapped_nbrs[0]] if not used[x]]
        else:
            candidates = [x for x in range(h.n) if not used[x]]
        for x in candidates:
            if hinv[x] != ginv[v]:
                continue
            ok = True
            for j in range(i):
                w = order[j]
                if g.has_edge(v, w) != h.has_edge(x, mapping[w]):
                    ok = False
                    break
            if not ok:
                continue
            mapping[v] = x
            used[x] = True
            if extend(i + 1):
                return True
            mapping[v] = -1
            used[x] = False
        return False

    extend(0)
    return found


def find_isomorphism(g: Graph, h: Graph) -> Optional[tuple[int, ...]]:
    """A vertex bijection ``p`` with ``uv`` in g iff ``p[u]p[v]`` in h, or None."""
    res = _isomorphisms(g, h, limit=1)
    return res[0] if res else None


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return find_isomorphism(g, h) is not None


def automorphisms(g: Graph) -> list[tuple[int, ...]]:
    """All automorphisms of ``g`` as tuples ``p`` with ``p[v]`` the image of ``v``."""
    return sorted(_isomorphisms(g, g))


# -- cycles ------------------------------------------------------------


def girth(g: Graph) -> int:
    best = None
    for s in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.adj[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    c = dist[x] + dist[y] + 1
                    if best is None or c < best:
                        best = c
    if best is None:
        raise NoCycleError("graph is a forest")
    return best


def _canonical_cycle(cyc: Sequence[int]) -> tuple[int, ...]:
    k = len(cyc)
    variants = []
    for seq in (list(cyc), list(reversed(cyc))):
        for r in range(k):
            variants.append(tuple(seq[r:] + seq[:r]))
    return min(variants)


def four_cycles(g: Graph) -> list[tuple[int, int, int, int]]:
    """All 4-cycles, each as its lexicographically least rotation/reversal."""
    found = set()
    for a in range(g.n):
        for b in g.adj[a]:
            for c in g.adj[b]:
                if c == a:
                    continue
                for d in g.adj[c]:
                    if d in (a, b) or not g.has_edge(d, a):
                        continue
                    found.add(_canonical_cycle((a, b, c, d)))
    return sorted(found)


# -- K33 subdivisions --------------------------------------------------


@dataclass(frozen=True)
class SubgraphModel:
    """A subdivision of ``model`` sitting inside ``host``.

    ``branch[i]`` is the host vertex playing model vertex ``i``; ``paths[e]``
    is the host path (endpoints included) realizing model edge ``e``.
    """

    host: Graph
    model: Graph
    branch: tuple[int, ...]
    paths: dict

    def edges(self) -> list[Edge]:
        out = set()
        for p in self.paths.values():
            out.update(_norm(a, b) for a, b in zip(p, p[1:]))
        return sorted(out)

    def subgraph(self) -> Graph:
        """The host restricted to the model's edges (all host vertices kept)."""
        return Graph(self.host.n, tuple(self.edges()), self.host.labels)

    def validate(self) -> None:
        if len(set(self.branch)) != len(self.branch):
            raise DomainError("branch map is not injective")
        inner_seen: set[int] = set()
        bset = set(self.branch)
        for (i, j), p in self.paths.items():
            if p[0] != self.branch[i] or p[-1] != self.branch[j]:
                raise DomainError(f"path for model edge {(i, j)} has wrong ends")
            for a, b in zip(p, p[1:]):
                if not self.host.has_edge(a, b):
                    raise DomainError(f"path uses non-edge {(a, b)}")
            inner = p[1:-1]
            if bset & set(inner) or inner_seen & set(inner) or len(set(inner)) != len(inner):
                raise DomainError("paths are not internally disjoint")
            inner_seen.update(inner)
        if sorted(self.paths) != list(self.model.edges):
            raise DomainError("paths do not cover the model edges")


def k33() -> Graph:
    return Graph.from_edges(6, [(a, b) for a in range(3) for b in range(3, 6)],
                            ["a1", "a2", "a3", "b1", "b2", "b3"])


def contains_k33_subdivision(g: Graph) -> Optional[SubgraphModel]:
    """Search exhaustively for a subgraph of ``g`` homeomorphic to K33.

    Tries every choice of two branch triples and then routes the nine
    connecting paths one at a time through unused non-branch vertices.
    """
    if g.n > SEARCH_VERTEX_LIMIT:
        raise BudgetExceeded(f"K33 witness search limited to {SEARCH_VERTEX_LIMIT} vertices")
    model = k33()
    cand = [v for v in range(g.n) if g.degree(v) >= 3]
    if len(cand) < 6:
        return None
    pairs = [(a, b) for a in range(3) for b in range(3, 6)]

    for six in itertools.combinations(cand, 6):
        first, rest = six[0], six[1:]
        for others in itertools.combinations(rest, 2):
            side_a = (first,) + others
            side_b = tuple(v for v in rest if v not in others)
            branch = side_a + side_b
            bset = set(branch)
            used: set[int] = set()
            paths: dict = {}

            def route(k: int) -> bool:
                if k == len(pairs):
                    return True
                i, j = pairs[k]
                src, dst = branch[i], branch[j]
                stack = [(src, [src])]
                # depth-first over simple paths avoiding branch and used vertices
                while stack:
                    x, path = stack.pop()
                    for y in g.adj[x]:
                        if y == dst:
                            full = path + [y]
                            inner = full[1:-1]
                            used.update(inner)
                            paths[(i, j)] = tuple(full)
                            if route(k + 1):
                                return True
                            used.difference_update(inner)
                            del paths[(i, j)]
                        elif y not in bset and y not in used and y not in path:
                            stack.append((y, path + [y]))
                return False

            if route(0):
                sm = SubgraphModel(g, model, branch, dict(paths))
                sm.validate()
                return sm
    return None


# -- catalog -----------------------------------------------------------

CATALOG_NAMES = ("K33", "K5", "E42", "F11", "F12", "F13", "F14", "G1")


@dataclass(frozen=True)
class Invariants:
    n: int
    m: int
    girth: int
    cubic: bool
    components: int = 1
    has_k33: bool = True

    def check(self, g: Graph) -> list[str]:
        """Names of the recorded invariants that ``g`` violates."""
        bad = []
        if g.n != self.n:
            bad.append("n")
        if g.m != self.m:
            bad.append("m")
        try:
            if girth(g) != self.girth:
                bad.append("girth")
        except NoCycleError:
            bad.append("girth")
        if g.is_cubic() != self.cubic:
            bad.append("cubic")
        if len(g.components()) != self.components:
            bad.append("components")
        if (contains_k33_subdivision(g) is not None) != self.has_k33:
            bad.append("has_k33")
        return bad


@dataclass(frozen=True)
class NamedGraph:
    name: str
    graph: Graph
    expected: Invariants

    def check(self) -> list[str]:
        return self.expected.check(self.graph)


def construct_f11() -> Graph:
    """K33 with edge a1-b1 subdivided six times (labels 1..6), plus chords i, i+3."""
    h = subdivide(k33(), (0, 3), 6, labels=[str(i) for i in range(1, 7)])
    return h.with_edges([(6, 9), (7, 10), (8, 11)])


def construct_f14() -> Graph:
    """Subdivide the 4-cycle a1 b1 a2 b2 of K33 once per edge, join opposite
    new vertices by paths a-c-a' and b-c'-b', then join c to c'."""
    g = k33()
    for e, lab in (((0, 3), "a"), ((3, 1), "b"), ((1, 4), "a'"), ((4, 0), "b'")):
        g = subdivide(g, e, 1, labels=[lab])
    labels = list(g.labels) + ["c", "c'"]
    return Graph.from_edges(12, list(g.edges) + [(6, 10), (8, 10), (7, 11), (9, 11), (10, 11)], labels)


_K33_LABELS = ["a1", "a2", "a3", "b1", "b2", "b3"]

# Transcribed entries. Vertices 0-5 are the K33 branch vertices; the rest
# sit on subdivided K33 edges and carry the construction tags.
_TABLE = {
    "F12": (12, [(0, 3), (0, 4), (0, 5), (1, 5), (1, 6), (1, 8), (2, 4), (2, 7), (2, 10),
                 (3, 6), (3, 7), (4, 9), (5, 11), (6, 11), (7, 9), (8, 9), (8, 10), (10, 11)],
            ["b", "c", "a", "c'", "a'", "b'"]),
    "F13": (12, [(0, 3), (0, 4), (0, 5), (1, 5), (1, 6), (1, 8), (2, 4), (2, 7), (2, 10),
                 (3, 6), (3, 7), (4, 9), (5, 11), (6, 10), (7, 8), (8, 9), (9, 11), (10, 11)],
            ["b", "c", "c'", "a", "b'", "a'"]),
    "G1": (10, [(0, 3), (0, 6), (0, 8), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5),
                (4, 7), (5, 9), (6, 7), (6, 9), (7, 8), (8, 9)],
           ["a", "b", "b'", "a'"]),
}

_EXPECTED = {
    "K33": Invariants(6, 9, 4, True),
    "K5": Invariants(5, 10, 3, False, has_k33=False),
    "E42": Invariants(12, 18, 4, True, 2),
    "F11": Invariants(12, 18, 4, True),
    "F12": Invariants(12, 18, 4, True),
    "F13": Invariants(12, 18, 5, True),
    "F14": Invariants(12, 18, 5, True),
    "G1": Invariants(10, 15, 4, True),
}


def builtin(name: str) -> Graph:
    if name == "K33":
        return k33()
    if name == "K5":
        return Graph.from_edges(5, itertools.combinations(range(5), 2))
    if name == "E42":
        return disjoint_union(k33(), k33())
    if name == "F11":
        return construct_f11()
    if name == "F14":
        return construct_f14()
    if name in _TABLE:
        n, edges, extra = _TABLE[name]
        return Graph.from_edges(n, edges, _K33_LABELS + extra)
    raise CatalogError(f"unknown graph {name!r}; known: {', '.join(CATALOG_NAMES)}")


def named(name: str) -> NamedGraph:
    return NamedGraph(name, builtin(name), _EXPECTED[name])


def catalog() -> list[NamedGraph]:
    return [named(x) for x in CATALOG_NAMES]
