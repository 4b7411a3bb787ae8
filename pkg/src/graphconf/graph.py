"""Finite multigraphs with half-edges, and the minor operations on them.

An edge ``e`` with endpoints ``(a, b)`` owns two half-edges, ``e.0`` at ``a``
and ``e.1`` at ``b``; loops and parallel edges are allowed.  Vertex order is
plain string order, and it is the order every sign convention downstream reads.

Generated ids use characters that user ids cannot contain (``:`` and ``~``),
so subdividing or normalizing never collides with names from a graph file.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

_USER_ID = re.compile(r"^[A-Za-z0-9_]+$")


class GraphError(ValueError):
    """Invalid graph input or an operation applied outside its domain."""


class GraphFormatError(GraphError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def half_edge(e: str, side: int) -> str:
    return f"{e}.{side}"


def edge_of(h: str) -> str:
    return h.rsplit(".", 1)[0]


def side_of(h: str) -> int:
    return int(h.rsplit(".", 1)[1])


def partner(h: str) -> str:
    e, s = h.rsplit(".", 1)
    return f"{e}.{1 - int(s)}"


class Graph:
    """Immutable multigraph; ``edges[e] = (vertex of e.0, vertex of e.1)``."""

    __slots__ = ("vertices", "edges", "_at", "_hash")

    def __init__(self, vertices: Iterable[str], edges: Mapping[str, tuple[str, str]] | None = None):
        vs = sorted(set(vertices))
        es = dict(sorted((edges or {}).items()))
        vset = set(vs)
        for e, (a, b) in es.items():
            if a not in vset or b not in vset:
                raise GraphError(f"edge {e} references a missing vertex")
        at: dict[str, list[str]] = {v: [] for v in vs}
        for e, (a, b) in es.items():
            at[a].append(half_edge(e, 0))
            at[b].append(half_edge(e, 1))
        self.vertices: tuple[str, ...] = tuple(vs)
        self.edges: dict[str, tuple[str, str]] = es
        self._at = {v: tuple(sorted(hs)) for v, hs in at.items()}
        self._hash = hash((self.vertices, tuple(es.items())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        es = ", ".join(f"{e}:{a}-{b}" for e, (a, b) in self.edges.items())
        return f"Graph(V={list(self.vertices)}, E=[{es}])"

    def half_edges(self) -> list[str]:
        return [half_edge(e, s) for e in self.edges for s in (0, 1)]

    def half_edges_at(self, v: str) -> tuple[str, ...]:
        return self._at[v]

    def vertex_of(self, h: str) -> str:
        e = edge_of(h)
        if e not in self.edges:
            raise GraphError(f"unknown half-edge {h}")
        return self.edges[e][side_of(h)]

    def has_half_edge(self, h: str) -> bool:
        try:
            return edge_of(h) in self.edges and side_of(h) in (0, 1)
        except (ValueError, IndexError):
            return False

    def endpoints(self, e: str) -> tuple[str, str]:
        return self.edges[e]

    def is_loop(self, e: str) -> bool:
        a, b = self.edges[e]
        return a == b

    def degree(self, v: str) -> int:
        return len(self._at[v])

    def neighbors(self, v: str) -> set[str]:
        return {self.vertex_of(partner(h)) for h in self._at[v]}

    def edges_at(self, v: str) -> list[str]:
        return sorted({edge_of(h) for h in self._at[v]})

    def is_subgraph_of(self, other: "Graph") -> bool:
        vs = set(other.vertices)
        return (all(v in vs for v in self.vertices)
                and all(other.edges.get(e) == ab for e, ab in self.edges.items()))

    def without_edges(self, drop: Iterable[str]) -> "Graph":
        drop = set(drop)
        return Graph(self.vertices, {e: ab for e, ab in self.edges.items() if e not in drop})


@dataclass(frozen=True)
class MinorTrace:
    """Where each surviving vertex, edge and half-edge went."""

    kind: str
    vertex_map: dict[str, str] = field(default_factory=dict)
    edge_map: dict[str, str] = field(default_factory=dict)
    half_edge_map: dict[str, str] = field(default_factory=dict)

    def then(self, other: "MinorTrace") -> "MinorTrace":
        def comp(a, b):
            return {k: b[v] for k, v in a.items() if v in b}
        return MinorTrace(f"{self.kind}+{other.kind}",
                          comp(self.vertex_map, other.vertex_map),
                          comp(self.edge_map, other.edge_map),
                          comp(self.half_edge_map, other.half_edge_map))


def _identity_trace(kind: str, G: Graph) -> MinorTrace:
    return MinorTrace(kind, {v: v for v in G.vertices}, {e: e for e in G.edges},
                      {h: h for h in G.half_edges()})


# ---------------------------------------------------------------------------
# minors


def contract_edge(G: Graph, e: str) -> tuple[Graph, MinorTrace]:
    """Merge the endpoints of ``e`` into the smaller vertex id and drop ``e``."""
    if e not in G.edges:
        raise GraphError(f"unknown edge {e}")
    a, b = G.edges[e]
    if a == b:
        raise GraphError(f"cannot contract loop {e}")
    keep, gone = min(a, b), max(a, b)
    vmap = {v: (keep if v == gone else v) for v in G.vertices}
    edges = {f: (vmap[x], vmap[y]) for f, (x, y) in G.edges.items() if f != e}
    emap = {f: f for f in edges}
    hmap = {h: h for h in G.half_edges() if edge_of(h) != e}
    return Graph([v for v in G.vertices if v != gone], edges), MinorTrace("contract", vmap, emap, hmap)


def tree_order(G: Graph, T: Iterable[str]) -> list[str]:
    """Validate that T is the edge set of a subtree; return it sorted."""
    T = sorted(set(T))
    parent: dict[str, str] = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for e in T:
        if e not in G.edges:
            raise GraphError(f"unknown edge {e}")
        a, b = G.edges[e]
        ra, rb = find(a), find(b)
        if ra == rb:
            raise GraphError(f"edge set is not a tree: {e} closes a cycle")
        parent[ra] = rb
    roots = {find(v) for e in T for v in G.edges[e]}
    if len(roots) > 1:
        raise GraphError("edge set is not connected")
    if not T:
        raise GraphError("empty edge set")
    return T


def contract_tree(G: Graph, T: Iterable[str]) -> tuple[Graph, MinorTrace]:
    """Contract the edges of a subtree one by one, in ascending edge id."""
    order = tree_order(G, T)
    trace = _identity_trace("contract-tree", G)
    for e in order:
        G, t = contract_edge(G, e)
        trace = trace.then(t)
    return G, trace


def subdivide(G: Graph, k: int) -> tuple[Graph, MinorTrace]:
    """Replace every edge by a path of ``k`` edges ``e~0, ..., e~{k-1}``."""
    if k < 1:
        raise GraphError("subdivision needs k >= 1")
    if k == 1:
        return G, _identity_trace("subdivide", G)
    vertices = list(G.vertices)
    edges = {}
    hmap = {}
    for e, (a, b) in G.edges.items():
        inner = [f"{e}~{i}" for i in range(1, k)]
        vertices.extend(inner)
        path = [a, *inner, b]
        for i in range(k):
            edges[f"{e}~{i}"] = (path[i], path[i + 1])
        hmap[half_edge(e, 0)] = half_edge(f"{e}~0", 0)
        hmap[half_edge(e, 1)] = half_edge(f"{e}~{k - 1}", 1)
    return Graph(vertices, edges), MinorTrace("subdivide", {v: v for v in G.vertices}, {}, hmap)


def betti_and_components(G: Graph) -> tuple[int, int]:
    """(number of components, first Betti number)."""
    parent = {v: v for v in G.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in G.edges.values():
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    c = len({find(v) for v in G.vertices})
    return c, len(G.edges) - len(G.vertices) + c


# ---------------------------------------------------------------------------
# compact models for deleting half-edges at a vertex


def midpoint(h: str) -> str:
    return f"m:{h}"


def inner_edge(h: str) -> str:
    return f"i:{h}"


def normalize_for_deletion(G: Graph, v: str) -> tuple[Graph, MinorTrace]:
    """Subdivide every edge at ``v`` once (loops twice).

    Each half-edge ``h`` at ``v`` gets a midpoint ``m:h`` and an inner edge
    ``i:h = (v, m:h)``; the rest of a non-loop edge becomes ``r:h``, the middle
    of a loop ``e`` becomes ``r:e``.
    """
    if v not in G._at:
        raise GraphError(f"unknown vertex {v}")
    vertices = list(G.vertices)
    edges = {}
    hmap = {}
    emap = {}
    for e, (a, b) in G.edges.items():
        if v not in (a, b):
            edges[e] = (a, b)
            emap[e] = e
            hmap[half_edge(e, 0)] = half_edge(e, 0)
            hmap[half_edge(e, 1)] = half_edge(e, 1)
            continue
        if a == b:
            h0, h1 = half_edge(e, 0), half_edge(e, 1)
            m0, m1 = midpoint(h0), midpoint(h1)
            vertices += [m0, m1]
            edges[inner_edge(h0)] = (v, m0)
            edges[inner_edge(h1)] = (v, m1)
            edges[f"r:{e}"] = (m0, m1)
            hmap[h0] = half_edge(inner_edge(h0), 0)
            hmap[h1] = half_edge(inner_edge(h1), 0)
            continue
        side = 0 if a == v else 1
        h = half_edge(e, side)
        other = b if side == 0 else a
        m = midpoint(h)
        vertices.append(m)
        edges[inner_edge(h)] = (v, m)
        edges[f"r:{h}"] = (m, other)
        hmap[h] = half_edge(inner_edge(h), 0)
        hmap[partner(h)] = half_edge(f"r:{h}", 1)
    return Graph(vertices, edges), MinorTrace("normalize", {x: x for x in G.vertices}, emap, hmap)


def _require_normalized(G: Graph, v: str) -> None:
    if v not in G._at:
        raise GraphError(f"unknown vertex {v}")
    for h in G.half_edges_at(v):
        m = G.vertex_of(partner(h))
        if m == v or G.degree(m) != 2:
            raise GraphError(f"graph is not normalized at {v} (half-edge {h})")


def midpoint_data(G: Graph, h: str) -> tuple[str, str, str, str]:
    """For a half-edge ``h`` at a normalized vertex: (midpoint, half-edge of
    e(h) at the midpoint, the other half-edge at the midpoint, remnant edge)."""
    a = partner(h)
    m = G.vertex_of(a)
    others = [x for x in G.half_edges_at(m) if x != a]
    if len(others) != 1:
        raise GraphError(f"{m} is not a midpoint")
    b = others[0]
    return m, a, b, edge_of(b)


def delete_half_edges_model(G: Graph, v: str, H: Iterable[str]) -> tuple[Graph, MinorTrace]:
    """Compact model of G minus the open half-edges H at v (G normalized at v)."""
    H = list(H)
    for h in H:
        if not G.has_half_edge(h) or G.vertex_of(h) != v:
            raise GraphError(f"half-edge {h} is not at vertex {v}")
    _require_normalized(G, v)
    drop = {edge_of(h) for h in H}
    out = G.without_edges(drop)
    return out, MinorTrace("delete-half-edges", {x: x for x in out.vertices},
                           {e: e for e in out.edges}, {h: h for h in out.half_edges()})


def delete_vertex_model(G: Graph, v: str) -> tuple[Graph, MinorTrace]:
    """Compact model of G minus the vertex v (G normalized at v)."""
    _require_normalized(G, v)
    drop = set(G.edges_at(v))
    out = Graph([x for x in G.vertices if x != v],
                {e: ab for e, ab in G.edges.items() if e not in drop})
    return out, MinorTrace("delete-vertex", {x: x for x in out.vertices},
                           {e: e for e in out.edges}, {h: h for h in out.half_edges()})


# ---------------------------------------------------------------------------
# isomorphisms


@dataclass(frozen=True)
class GraphIso:
    """Vertex and half-edge bijection compatible with incidence and partners."""

    vertex_map: dict[str, str]
    half_edge_map: dict[str, str]

    @property
    def edge_map(self) -> dict[str, str]:
        return {edge_of(h): edge_of(k) for h, k in self.half_edge_map.items()}

    def check(self, G1: Graph, G2: Graph) -> "GraphIso":
        vm, hm = self.vertex_map, self.half_edge_map
        if sorted(vm) != list(G1.vertices) or sorted(vm.values()) != list(G2.vertices):
            raise GraphError("vertex map is not a bijection")
        if sorted(hm) != sorted(G1.half_edges()) or sorted(hm.values()) != sorted(G2.half_edges()):
            raise GraphError("half-edge map is not a bijection")
        for h, k in hm.items():
            if G2.vertex_of(k) != vm[G1.vertex_of(h)] or hm[partner(h)] != partner(k):
                raise GraphError(f"half-edge map breaks incidence at {h}")
        return self


def iso_from_maps(G1: Graph, G2: Graph, vertex_map: Mapping[str, str],
                  edge_map: Mapping[str, str]) -> GraphIso:
    """Half-edge map determined by vertex and edge maps (loops keep their sides)."""
    hm = {}
    for e, (a, b) in G1.edges.items():
        f = edge_map[e]
        flip = a != b and G2.edges[f][0] != vertex_map[a]
        hm[half_edge(e, 0)] = half_edge(f, 1 if flip else 0)
        hm[half_edge(e, 1)] = half_edge(f, 0 if flip else 1)
    return GraphIso(dict(vertex_map), hm).check(G1, G2)


def normalization_iso(G1: Graph, G2: Graph, v: str, iso: GraphIso) -> GraphIso:
    """Extend an isomorphism G1 -> G2 to their normalizations at v and iso(v)."""
    iso.check(G1, G2)
    w = iso.vertex_map[v]
    N1, _ = normalize_for_deletion(G1, v)
    N2, _ = normalize_for_deletion(G2, w)
    hm = iso.half_edge_map
    vmap = dict(iso.vertex_map)
    for h in G1.half_edges_at(v):
        vmap[midpoint(h)] = midpoint(hm[h])
    emap = {}
    for e in N1.edges:
        tag, _, rest = e.partition(":")
        if tag == "i":
            emap[e] = inner_edge(hm[rest])
        elif tag == "r" and rest in G1.edges:  # middle of a loop at v
            emap[e] = f"r:{edge_of(hm[half_edge(rest, 0)])}"
        elif tag == "r":
            emap[e] = f"r:{hm[rest]}"
        else:
            emap[e] = edge_of(hm[half_edge(e, 0)])
    hmap = {}
    for e, (a, b) in N1.edges.items():
        if a == b:
            hmap[half_edge(e, 0)] = hm[half_edge(e, 0)]
            hmap[half_edge(e, 1)] = hm[half_edge(e, 1)]
            continue
        f = emap[e]
        fa = N2.edges[f][0]
        for side, x in ((0, a), (1, b)):
            hmap[half_edge(e, side)] = half_edge(f, 0 if fa == vmap[x] else 1)
    return GraphIso(vmap, hmap).check(N1, N2)


# ---------------------------------------------------------------------------
# text format


def parse_graph(text: str) -> Graph:
    """Parse ``v <id>`` / ``e <id> <vid> <vid>`` records (``#`` comments)."""
    vertices: list[str] = []
    seen_v: set[str] = set()
    edges: dict[str, tuple[str, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        for tok in parts[1:]:
            if not _USER_ID.match(tok):
                raise GraphFormatError(lineno, f"invalid id {tok!r}")
        if parts[0] == "v":
            if len(parts) != 2:
                raise GraphFormatError(lineno, "expected 'v <id>'")
            if parts[1] in seen_v:
                raise GraphFormatError(lineno, f"duplicate vertex {parts[1]}")
            seen_v.add(parts[1])
            vertices.append(parts[1])
        elif parts[0] == "e":
            if len(parts) != 4:
                raise GraphFormatError(lineno, "expected 'e <id> <vid> <vid>'")
            _, e, a, b = parts
            if e in edges:
                raise GraphFormatError(lineno, f"duplicate edge {e}")
            for x in (a, b):
                if x not in seen_v:
                    raise GraphFormatError(lineno, f"edge {e} uses undeclared vertex {x}")
            edges[e] = (a, b)
        else:
            raise GraphFormatError(lineno, f"unknown record type {parts[0]!r}")
    return Graph(vertices, edges)


def load_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text())


def format_graph(G: Graph) -> str:
    lines = [f"v {v}" for v in G.vertices]
    lines += [f"e {e} {a} {b}" for e, (a, b) in G.edges.items()]
    return "\n".join(lines) + "\n"
