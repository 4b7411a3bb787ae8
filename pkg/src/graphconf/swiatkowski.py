"""The Świątkowski chain model of unordered configuration spaces of a graph.

A generator assigns to every vertex one of EMPTY, VERT (a point sitting on the
vertex) or a half-edge at that vertex (a point leaving along it), and to every
edge a number of points.  Its weight is the number of points, its degree the
number of half-edge states; ``d(h) = e(h) - v`` extended with Koszul signs read
off the vertex order.  The weight-n part computes H_*(UConf_n).
"""
from __future__ import annotations

from itertools import combinations_with_replacement
from typing import NamedTuple

from .chains import ChainComplex, ChainMap
from .graph import Graph, GraphError, GraphIso, tree_order, contract_edge, edge_of, midpoint_data

VERT = "*"


class SwGenerator(NamedTuple):
    """Non-EMPTY vertex states and nonzero edge counts, both sorted by id."""

    states: tuple[tuple[str, str], ...]
    counts: tuple[tuple[str, int], ...] = ()

    @property
    def weight(self) -> int:
        return len(self.states) + sum(c for _, c in self.counts)

    @property
    def degree(self) -> int:
        return sum(1 for _, s in self.states if s != VERT)

    def state(self, v: str) -> str | None:
        for x, s in self.states:
            if x == v:
                return s
        return None

    def count(self, e: str) -> int:
        for f, c in self.counts:
            if f == e:
                return c
        return 0

    def __str__(self) -> str:
        parts = [f"{v}={'V' if s == VERT else s}" for v, s in self.states]
        parts += [f"{e}^{c}" for e, c in self.counts]
        return "[" + " ".join(parts) + "]"


def with_state(g: SwGenerator, v: str, s: str | None) -> SwGenerator:
    st = [(x, t) for x, t in g.states if x != v]
    if s is not None:
        st.append((v, s))
        st.sort()
    return SwGenerator(tuple(st), g.counts)


def bump(g: SwGenerator, e: str, k: int = 1) -> SwGenerator:
    cs = dict(g.counts)
    cs[e] = cs.get(e, 0) + k
    return SwGenerator(g.states, tuple(sorted((f, c) for f, c in cs.items() if c)))


def halves_before(g: SwGenerator, v: str) -> int:
    """Number of half-edge states at vertices ordered before v."""
    return sum(1 for x, s in g.states if s != VERT and x < v)


def koszul(g: SwGenerator, v: str) -> int:
    return -1 if halves_before(g, v) % 2 else 1


def sw_boundary(g: SwGenerator) -> dict[SwGenerator, int]:
    out: dict[SwGenerator, int] = {}
    sign = 1
    states = g.states
    for idx, (v, s) in enumerate(states):
        if s == VERT:
            continue
        moved = SwGenerator(states[:idx] + states[idx + 1:], g.counts)
        moved = bump(moved, edge_of(s))
        parked = SwGenerator(states[:idx] + ((v, VERT),) + states[idx + 1:], g.counts)
        out[moved] = out.get(moved, 0) + sign
        out[parked] = out.get(parked, 0) - sign
        sign = -sign
    return {k: c for k, c in out.items() if c}


def sw_generators(G: Graph, n: int) -> dict[int, list[SwGenerator]]:
    """All generators of weight n, grouped by degree, in a deterministic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    verts = list(G.vertices)
    edges = list(G.edges)
    options = [[VERT, *G.half_edges_at(v)] for v in verts]
    by_degree: dict[int, list[SwGenerator]] = {}
    distributions: dict[int, list[tuple[tuple[str, int], ...]]] = {}

    def spread(r):
        if r not in distributions:
            if r == 0:
                distributions[r] = [()]
            elif not edges:
                distributions[r] = []
            else:
                out = []
                for combo in combinations_with_replacement(edges, r):
                    cs: dict[str, int] = {}
                    for e in combo:
                        cs[e] = cs.get(e, 0) + 1
                    out.append(tuple(sorted(cs.items())))
                distributions[r] = out
        return distributions[r]

    def walk(i, left, states, deg):
        if i == len(verts):
            for cs in spread(left):
                by_degree.setdefault(deg, []).append(SwGenerator(tuple(states), cs))
            return
        walk(i + 1, left, states, deg)
        if left:
            v = verts[i]
            for s in options[i]:
                states.append((v, s))
                walk(i + 1, left - 1, states, deg + (s != VERT))
                states.pop()

    walk(0, n, [], 0)
    return {d: by_degree[d] for d in sorted(by_degree)}


def build_sw_complex(G: Graph, n: int) -> ChainComplex:
    """S_n(G): the weight-n Świątkowski complex."""
    return ChainComplex.from_function(sw_generators(G, n), sw_boundary)


# ---------------------------------------------------------------------------
# maps


def inclusion_chain_map(sub: Graph, sup: Graph, n: int,
                        source: ChainComplex | None = None,
                        target: ChainComplex | None = None) -> ChainMap:
    """S_n(sub) -> S_n(sup) for a subgraph sharing ids."""
    if not sub.is_subgraph_of(sup):
        raise GraphError("source graph is not a subgraph of the target (ids differ)")
    for v in sub.vertices:
        if not set(sub.half_edges_at(v)) <= set(sup.half_edges_at(v)):
            raise GraphError(f"half-edges at {v} do not match")
    src = source or build_sw_complex(sub, n)
    tgt = target or build_sw_complex(sup, n)
    return ChainMap.from_function(src, tgt, lambda g: {g: 1})


def add_vertex_map(G_del_v: Graph, G_del_H: Graph, v: str, n: int,
                   source: ChainComplex | None = None,
                   target: ChainComplex | None = None) -> ChainMap:
    """S_{n-1}(G_del_v) -> S_n(G_del_H): put a point on the vertex v."""
    if v not in G_del_H.vertices:
        raise GraphError(f"vertex {v} missing from the target graph")
    if v in G_del_v.vertices or not G_del_v.is_subgraph_of(G_del_H):
        raise GraphError("source graph must be a subgraph of the target avoiding v")
    src = source or build_sw_complex(G_del_v, n - 1)
    tgt = target or build_sw_complex(G_del_H, n)
    return ChainMap.from_function(src, tgt, lambda g: {with_state(g, v, VERT): 1})


def add_half_edge_map(G_del_v: Graph, G_del_H: Graph, h: str, n: int, normalized: Graph,
                      source: ChainComplex | None = None,
                      target: ChainComplex | None = None) -> ChainMap:
    """S_{n-1}(G_del_v) -> S_n(G_del_H): add a point on the remnant of e(h).

    ``h`` is a half-edge at the deleted vertex of the ``normalized`` graph.
    """
    *_, remnant = midpoint_data(normalized, h)
    if remnant not in G_del_v.edges or remnant not in G_del_H.edges:
        raise GraphError(f"remnant edge {remnant} of {h} missing from a model")
    if not G_del_v.is_subgraph_of(G_del_H):
        raise GraphError("source graph must be a subgraph of the target")
    src = source or build_sw_complex(G_del_v, n - 1)
    tgt = target or build_sw_complex(G_del_H, n)
    return ChainMap.from_function(src, tgt, lambda g: {bump(g, remnant): 1})


def contraction_chain_map(G: Graph, e: str, n: int, anchor: str | None = None,
                          source: ChainComplex | None = None,
                          target: ChainComplex | None = None) -> ChainMap:
    """S_n(G/e) -> S_n(G) realizing contraction of the edge e.

    The merged vertex (id = smaller endpoint) is split back into the two
    endpoints; ``anchor`` is the endpoint that receives a point sitting on the
    merged vertex (default: the smaller id).  A half-edge state coming from the
    other endpoint ``o`` maps to ``h' at o + h_a at anchor - h_o at o`` where
    h_a, h_o are the two halves of e.
    """
    Gq, _ = contract_edge(G, e)
    a0, b0 = G.edges[e]
    u, w = min(a0, b0), max(a0, b0)
    anchor = u if anchor is None else anchor
    if anchor not in (u, w):
        raise GraphError(f"anchor {anchor} is not an endpoint of {e}")
    other = w if anchor == u else u
    h_a = f"{e}.0" if a0 == anchor else f"{e}.1"
    h_o = f"{e}.1" if a0 == anchor else f"{e}.0"
    from_anchor = set(G.half_edges_at(anchor))
    src = source or build_sw_complex(Gq, n)
    tgt = target or build_sw_complex(G, n)

    def place(g, assign):
        st = [(x, s) for x, s in g.states if x != u]
        st.extend(assign)
        return SwGenerator(tuple(sorted(st)), g.counts)

    def sgn(g, x):
        if x == u:
            return 1
        k = sum(1 for y, s in g.states if s != VERT and u < y < x)
        return -1 if k % 2 else 1

    def fn(g):
        s = g.state(u)
        if s is None:
            return {g: 1}
        if s == VERT:
            return {place(g, [(anchor, VERT)]): 1}
        if s in from_anchor:
            return {place(g, [(anchor, s)]): sgn(g, anchor)}
        out = {}
        for t, c in ((place(g, [(other, s)]), sgn(g, other)),
                     (place(g, [(anchor, h_a)]), sgn(g, anchor)),
                     (place(g, [(other, h_o)]), -sgn(g, other))):
            out[t] = out.get(t, 0) + c
        return out

    return ChainMap.from_function(src, tgt, fn)


def tree_contraction_chain_map(G: Graph, T, n: int, order=None,
                               cache=None) -> ChainMap:
    """S_n(G/T) -> S_n(G) as the composite of single-edge contractions.

    ``order`` defaults to ascending edge ids; ``cache`` (a callable
    ``(graph, n) -> ChainComplex``) lets callers share complexes.
    """
    default = tree_order(G, T)
    order = list(default if order is None else order)
    if sorted(order) != sorted(default):
        raise GraphError("order must be a permutation of the tree edges")
    build = cache or build_sw_complex
    graphs = [G]
    for e in order:
        graphs.append(contract_edge(graphs[-1], e)[0])
    f = None
    for k, e in enumerate(order):
        step = contraction_chain_map(graphs[k], e, n, source=build(graphs[k + 1], n), target=build(graphs[k], n))
        f = step if f is None else f @ step
    return f


def isomorphism_chain_map(G1: Graph, G2: Graph, iso: GraphIso, n: int,
                          source: ChainComplex | None = None,
                          target: ChainComplex | None = None) -> ChainMap:
    """S_n(G1) -> S_n(G2) induced by a graph isomorphism (restricted to G1).

    ``iso`` may be defined on a larger graph; only the part on G1 is used.
    """
    vm, hm = iso.vertex_map, iso.half_edge_map
    em = {edge_of(h): edge_of(k) for h, k in hm.items()}
    src = source or build_sw_complex(G1, n)
    tgt = target or build_sw_complex(G2, n)

    def fn(g):
        halves = [vm[x] for x, s in g.states if s != VERT]
        inv = sum(1 for i in range(len(halves)) for j in range(i + 1, len(halves)) if halves[i] > halves[j])
        st = tuple(sorted((vm[x], s if s == VERT else hm[s]) for x, s in g.states))
        cs = tuple(sorted((em[e], c) for e, c in g.counts))
        return {SwGenerator(st, cs): -1 if inv % 2 else 1}

    return ChainMap.from_function(src, tgt, fn)


def slide_homotopy_terms(g: SwGenerator, v: str, h: str, normalized: Graph) -> dict[SwGenerator, int]:
    """Degree +1 chain c(g) in S(normalized) with ``dc + cd = add_r - add_v``.

    ``g`` lives on the model with v deleted; ``add_v`` puts a point on v and
    ``add_r`` a point on the remnant edge of h.  The chain slides the new point
    from v along the inner edge of h and across its midpoint.
    """
    m, a, b, remnant = midpoint_data(normalized, h)
    inner = edge_of(h)
    out: dict[SwGenerator, int] = {}

    def add(t, c):
        out[t] = out.get(t, 0) + c

    add(with_state(g, v, h), koszul(g, v))
    k = koszul(g, m)
    s = g.state(m)
    if s is None:
        add(with_state(g, m, b), k)
        add(with_state(g, m, a), -k)
    elif s == VERT:
        add(bump(with_state(g, m, b), inner), k)
        add(bump(with_state(g, m, a), remnant), -k)
    elif s != b:
        raise GraphError(f"unexpected state {s} at midpoint {m}")
    return {t: c for t, c in out.items() if c}
