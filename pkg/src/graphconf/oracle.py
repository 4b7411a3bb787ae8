"""Brute-force oracle: the discretized (cube complex) configuration space.

On a sufficiently subdivided graph the configuration space deformation
retracts onto the union of products of pairwise disjoint closed cells.  The
cellular chain complex of that cube complex is built here by enumeration.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .chains import ChainComplex
from .graph import Graph, GraphError, normalize_for_deletion, subdivide
from .linalg import FGAbGroup

DEFAULT_CELL_CAP = 5_000_000

Cell = tuple[str, str]  # ('v', vertex) or ('e', edge)


class ResourceOverflow(RuntimeError):
    """The cube complex would exceed the configured cell cap."""


class InsufficientSubdivision(GraphError):
    pass


@dataclass(frozen=True)
class CubeCell:
    """A configuration of n pairwise disjoint closed cells.

    ``cells`` is sorted for the unordered variant and positional otherwise.
    """

    cells: tuple[Cell, ...]
    ordered: bool = False

    @property
    def dimension(self) -> int:
        return sum(1 for kind, _ in self.cells if kind == "e")

    def __str__(self) -> str:
        inner = ", ".join(x for _, x in self.cells)
        return f"({inner})" if self.ordered else "{" + inner + "}"


def _closure(G: Graph, c: Cell) -> frozenset[str]:
    kind, x = c
    return frozenset(G.edges[x]) if kind == "e" else frozenset((x,))


def _tail_head(G: Graph, e: str) -> tuple[str, str]:
    a, b = G.edges[e]
    return (a, b) if a <= b else (b, a)


def is_sufficiently_subdivided(G: Graph, n: int) -> bool:
    """Every edge path between vertices of degree != 2 and every cycle of
    degree-2 vertices has at least n + 1 edges, and no edge is a loop."""
    if n <= 1:
        return True
    if any(a == b for a, b in G.edges.values()):
        return False
    essential = {v for v in G.vertices if G.degree(v) != 2}
    seen: set[str] = set()
    for e in G.edges:
        if e in seen:
            continue
        # walk the maximal chain of degree-2 vertices through e in both directions
        chain = {e}
        for start in G.edges[e]:
            prev, v = e, start
            while v not in essential:
                nxt = [f for f in G.edges_at(v) if f != prev]
                if not nxt or nxt[0] in chain:
                    break
                prev = nxt[0]
                chain.add(prev)
                a, b = G.edges[prev]
                v = b if a == v else a
        seen |= chain
        if len(chain) < n + 1:
            return False
    return True


def _cells(G: Graph) -> list[Cell]:
    return [("e", e) for e in G.edges] + [("v", v) for v in G.vertices]


def _enumerate(G: Graph, n: int, cap: int) -> list[tuple[Cell, ...]]:
    cells = _cells(G)
    closures = [_closure(G, c) for c in cells]
    out: list[tuple[Cell, ...]] = []

    def walk(start, chosen, used):
        if len(chosen) == n:
            out.append(tuple(cells[i] for i in chosen))
            if len(out) > cap:
                raise ResourceOverflow(f"more than {cap} cells for n={n}")
            return
        for i in range(start, len(cells)):
            if used.isdisjoint(closures[i]):
                chosen.append(i)
                walk(i + 1, chosen, used | closures[i])
                chosen.pop()

    walk(0, [], frozenset())
    return out


def _cube_boundary(G: Graph, ordered: bool):
    def bd(c: CubeCell) -> dict[CubeCell, int]:
        out: dict[CubeCell, int] = {}
        slots = [i for i, (kind, _) in enumerate(c.cells) if kind == "e"]
        if not ordered:
            slots.sort(key=lambda i: c.cells[i][1])
        for k, i in enumerate(slots):
            sign = -1 if k % 2 else 1
            tail, head = _tail_head(G, c.cells[i][1])
            for end, s in ((head, sign), (tail, -sign)):
                cells = list(c.cells)
                cells[i] = ("v", end)
                if not ordered:
                    cells.sort()
                key = CubeCell(tuple(cells), ordered)
                out[key] = out.get(key, 0) + s
        return out

    return bd


def _assemble(G: Graph, n: int, ordered: bool, cells: list[tuple[Cell, ...]], cap: int) -> ChainComplex:
    basis: dict[int, list[CubeCell]] = {d: [] for d in range(n + 1)}
    if ordered:
        total = 0
        for combo in cells:
            for p in permutations(combo):
                c = CubeCell(p, True)
                basis[c.dimension].append(c)
                total += 1
                if total > cap:
                    raise ResourceOverflow(f"more than {cap} ordered cells for n={n}")
    else:
        for combo in cells:
            c = CubeCell(combo, False)
            basis[c.dimension].append(c)
    basis = {d: b for d, b in basis.items() if b}
    return ChainComplex.from_function(basis, _cube_boundary(G, ordered))


def _prepare(G: Graph, n: int, auto_subdivide: bool) -> Graph:
    if auto_subdivide:
        if n >= 1:
            G, _ = subdivide(G, n + 1)
        return G
    if not is_sufficiently_subdivided(G, n):
        raise InsufficientSubdivision(f"graph is not sufficiently subdivided for n={n}")
    return G


def build_discrete_conf(G: Graph, n: int, ordered: bool = False, auto_subdivide: bool = False,
                        cell_cap: int = DEFAULT_CELL_CAP) -> ChainComplex:
    """Cellular chains of the discretized configuration space of n points."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if cell_cap <= 0:
        raise ValueError("cell cap must be positive")
    G = _prepare(G, n, auto_subdivide)
    return _assemble(G, n, ordered, _enumerate(G, n, cell_cap), cell_cap)


def oracle_homology(G: Graph, n: int, ordered: bool = False,
                    cell_cap: int = DEFAULT_CELL_CAP) -> list[FGAbGroup]:
    """H_0 .. H_n of the (un)ordered configuration space, auto-subdividing."""
    C = build_discrete_conf(G, n, ordered=ordered, auto_subdivide=True, cell_cap=cell_cap)
    return [C.homology(d) for d in range(n + 1)]


def star_restricted_complex(G: Graph, v: str, n: int, auto_subdivide: bool = True,
                            cell_cap: int = DEFAULT_CELL_CAP) -> ChainComplex:
    """Subcomplex of cube cells with at most one constituent meeting the closed
    star of ``v`` (v, its incident edges and their endpoints).

    With ``auto_subdivide`` the graph is first normalized at v and then every
    edge is cut into n + 1 segments, so that n points still fit on each edge at
    v (a loop at v included) outside the star.
    """
    if v not in G.vertices:
        raise GraphError(f"unknown vertex {v}")
    if auto_subdivide:
        G, _ = normalize_for_deletion(G, v)
    S = _prepare(G, n, auto_subdivide)
    star = {v} | S.neighbors(v)

    cells = _enumerate(S, n, cell_cap)
    kept = [c for c in cells if sum(1 for x in c if _closure(S, x) & star) <= 1]
    return _assemble(S, n, False, kept, cell_cap)
