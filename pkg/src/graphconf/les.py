"""Deletion long exact sequence, verified on concrete instances.

For a vertex v and a nonempty set H of half-edges at v, write X = S_n(G),
A = S_n(G minus the open half-edges H) and P = S_{n-1}(G minus v).  The
inclusion A -> X has a mapping cone that is compared with D, the direct sum
over h in H of suspended copies of P, through an explicit chain map

    Phi(h, g) = (c_h(g), add_v(g) - add_h(g)),

where c_h slides the added point from v onto the remnant of the edge of h.
When Phi is a quasi-isomorphism the connecting map of the sequence

    ... -> H_{i+1}(D) -> H_i(A) -> H_i(X) -> H_i(D) -> H_{i-1}(A) -> ...

(with H_i(D) the sum over h of H_{i-1}(P)) is read off the cone.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .chains import (
    ChainComplex,
    ChainMap,
    GroupMap,
    InvariantViolation,
    check_exact,
    cone_inclusion,
    cone_projection,
    induced_map,
    mapping_cone,
    verify_chain_map,
)
from .graph import (
    Graph,
    GraphError,
    GraphIso,
    delete_half_edges_model,
    delete_vertex_model,
    normalization_iso,
    normalize_for_deletion,
    subdivide,
)
from .linalg import FGAbGroup, IntMatrix, direct_sum_invariants, format_group
from .oracle import DEFAULT_CELL_CAP, ResourceOverflow, build_discrete_conf, oracle_homology
from .swiatkowski import (
    add_half_edge_map,
    add_vertex_map,
    build_sw_complex,
    inclusion_chain_map,
    isomorphism_chain_map,
    slide_homotopy_terms,
)


@lru_cache(maxsize=512)
def sw_complex(G: Graph, n: int) -> ChainComplex:
    """Cached Świątkowski complex; identical inputs share one object."""
    return build_sw_complex(G, n)


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


@dataclass
class Verdict:
    name: str
    status: Status
    detail: str = ""
    witness: list[int] | None = None

    def __bool__(self) -> bool:
        return self.status is Status.PASS

    @classmethod
    def of(cls, name: str, ok: bool, detail: str = "", witness=None) -> "Verdict":
        return cls(name, Status.PASS if ok else Status.FAIL, detail, witness)


# ---------------------------------------------------------------------------
# instances


class DeletionInstance:
    """A vertex deletion problem (G, v, H, n) with its complexes and maps.

    ``H`` is given in terms of half-edges of the input graph; ``H_norm`` are
    the matching half-edges of the normalized graph.
    """

    def __init__(self, graph: Graph, v: str, H: Iterable[str], n: int):
        H = tuple(sorted(set(H)))
        if n < 1:
            raise GraphError("deletion instances need n >= 1")
        if v not in graph.vertices:
            raise GraphError(f"unknown vertex {v}")
        if not H:
            raise GraphError("H must be a nonempty set of half-edges at v")
        at_v = set(graph.half_edges_at(v))
        for h in H:
            if h not in at_v:
                raise GraphError(f"half-edge {h} is not at vertex {v}")
        self.graph = graph
        self.v = v
        self.H = H
        self.n = n
        self.normalized, trace = normalize_for_deletion(graph, v)
        self.H_norm = tuple(trace.half_edge_map[h] for h in H)
        self.model_A, _ = delete_half_edges_model(self.normalized, v, self.H_norm)
        self.model_P, _ = delete_vertex_model(self.normalized, v)
        self.X = sw_complex(self.normalized, n)
        self.A = sw_complex(self.model_A, n)
        self.P = sw_complex(self.model_P, n - 1)
        self.iota = inclusion_chain_map(self.model_A, self.normalized, n, self.A, self.X)
        self.add_v = add_vertex_map(self.model_P, self.model_A, v, n, self.P, self.A)
        self.add_h = {h: add_half_edge_map(self.model_P, self.model_A, h, n, self.normalized, self.P, self.A)
                      for h in self.H_norm}

    def __repr__(self) -> str:
        return f"DeletionInstance(v={self.v}, H={list(self.H)}, n={self.n})"

    @property
    def sizes(self) -> dict[str, int]:
        return {"X": self.X.size(), "A": self.A.size(), "P": self.P.size()}

    def maps_valid(self) -> bool:
        return all(verify_chain_map(f) for f in (self.iota, self.add_v, *self.add_h.values()))

    @cached_property
    def D(self) -> ChainComplex:
        """Direct sum over H of suspended copies of P (labels ``(h, g)``)."""
        basis = {d + 1: [(h, g) for h in self.H_norm for g in self.P.labels(d)] for d in self.P.degrees}
        bd = {}
        for d in basis:
            block = -self.P.boundary(d - 1)
            k = len(self.H_norm)
            bd[d] = IntMatrix.block([[block if i == j else IntMatrix.zeros(*block.shape) for j in range(k)]
                                     for i in range(k)])
        return ChainComplex(basis, bd)

    @cached_property
    def alpha(self) -> ChainMap:
        """D -> A of degree -1: ``(h, g) -> add_v(g) - add_h(g)``."""
        mats = {}
        for d in self.D.degrees:
            av = self.add_v.matrix(d - 1)
            blocks = [av - self.add_h[h].matrix(d - 1) for h in self.H_norm]
            mats[d] = IntMatrix.block([blocks]) if blocks else IntMatrix.zeros(self.A.dim(d - 1), 0)
        return ChainMap(self.D, self.A, mats, shift=-1)

    @cached_property
    def cone(self) -> ChainComplex:
        return mapping_cone(self.iota)

    @cached_property
    def phi(self) -> ChainMap:
        """D -> Cone(iota), ``(h, g) -> (c_h(g), alpha(h, g))``."""
        alpha = self.alpha
        cone = self.cone
        a_labels = {d: self.A.labels(d) for d in self.A.degrees}
        col_of = {d: {lab: j for j, lab in enumerate(self.D.labels(d))} for d in self.D.degrees}

        def fn(lab):
            h, g = lab
            out = {("T", x): c for x, c in slide_homotopy_terms(g, self.v, h, self.normalized).items()}
            d = g.degree + 1
            col = alpha.matrix(d).column(col_of[d][lab])
            for i, c in col.items():
                key = ("S", a_labels[d - 1][i])
                out[key] = out.get(key, 0) + c
            return out

        return ChainMap.from_function(self.D, cone, fn)


def build_instance(G: Graph, v: str, H: Iterable[str], n: int) -> DeletionInstance:
    return DeletionInstance(G, v, H, n)


# ---------------------------------------------------------------------------
# checks


def _top_degree(inst: DeletionInstance) -> int:
    return max([*inst.X.degrees, *inst.A.degrees, *inst.D.degrees, 0])


def cone_identification_check(inst: DeletionInstance) -> list[Verdict]:
    """Per degree: H_d(Cone) agrees with the sum over H of H_{d-1}(P).

    A degree passes when the invariants agree and Phi induces an isomorphism.
    """
    out = []
    phi = inst.phi
    if not verify_chain_map(phi):
        raise InvariantViolation("cone comparison map is not a chain map")
    for d in range(_top_degree(inst) + 2):
        Hc = inst.cone.homology(d)
        parts = [inst.P.homology(d - 1)] * len(inst.H_norm) if d >= 1 else []
        want = direct_sum_invariants(parts)
        got = Hc.invariants()
        detail = f"H_{d}(cone) = {Hc}, sum = {format_group(*want)}"
        if got != want:
            out.append(Verdict.of(f"cone H_{d}", False, detail))
            continue
        m = induced_map(phi, d)
        if not m.is_injective():
            out.append(Verdict.of(f"cone H_{d}", False, detail + "; comparison map not injective",
                                  m.kernel_generators()[0]))
        elif not m.is_surjective():
            out.append(Verdict.of(f"cone H_{d}", False, detail + "; comparison map not surjective"))
        else:
            out.append(Verdict.of(f"cone H_{d}", True, detail))
    return out


@dataclass
class LESReport:
    instance: str
    groups: dict[str, FGAbGroup] = field(default_factory=dict)
    maps: dict[str, GroupMap] = field(default_factory=dict)
    composites: list[Verdict] = field(default_factory=list)
    exactness: list[Verdict] = field(default_factory=list)
    cone: list[Verdict] = field(default_factory=list)
    triangle: list[Verdict] = field(default_factory=list)
    sizes: dict[str, int] = field(default_factory=dict)
    seconds: float = 0.0

    def verdicts(self) -> list[Verdict]:
        return [*self.cone, *self.triangle, *self.composites, *self.exactness]

    @property
    def ok(self) -> bool:
        return all(v.status is not Status.FAIL for v in self.verdicts())

    @property
    def exact(self) -> bool:
        return bool(self.exactness) and all(self.exactness) and all(self.composites)


def les_verify(inst: DeletionInstance) -> LESReport:
    """Assemble the sequence in every degree and check it integrally."""
    t0 = time.perf_counter()
    rep = LESReport(repr(inst), sizes={**inst.sizes, "cone": inst.cone.size(), "D": inst.D.size()})
    top = _top_degree(inst) + 1
    rep.cone = cone_identification_check(inst)
    cone_ok = all(rep.cone)
    if not inst.maps_valid():
        raise InvariantViolation("a stored chain map fails verification")

    for i in range(top + 1):
        rep.groups[f"D{i}"] = inst.D.homology(i)
        rep.groups[f"A{i}"] = inst.A.homology(i)
        rep.groups[f"X{i}"] = inst.X.homology(i)
    for i in range(top + 1):
        rep.maps[f"alpha{i}"] = induced_map(inst.alpha, i + 1) if i + 1 <= top else None
        rep.maps[f"iota{i}"] = induced_map(inst.iota, i)

    p = cone_projection(inst.iota, inst.cone)
    j = cone_inclusion(inst.iota, inst.cone)
    chain_triangle = p @ inst.phi
    same = all(chain_triangle.matrix(d) == inst.alpha.matrix(d) for d in inst.D.degrees)
    rep.triangle.append(Verdict.of("projection after comparison = add_v - add_h (chains)", same))

    if not cone_ok:
        for i in range(top + 1):
            rep.maps[f"delta{i}"] = None
        rep.triangle.append(Verdict("connecting map", Status.SKIPPED,
                                    "cone identification failed; connecting map undefined"))
    else:
        for i in range(top + 1):
            phi_inv = induced_map(inst.phi, i).inverse()
            rep.maps[f"delta{i}"] = phi_inv @ induced_map(j, i)
            # projecting to the suspension coordinate recovers alpha on homology
            lhs = induced_map(p, i) @ induced_map(inst.phi, i)
            rhs = induced_map(inst.alpha, i)
            rep.triangle.append(Verdict.of(f"projection triangle H_{i}", lhs == rhs))

    def spot(name, f, g):
        if f is None or g is None:
            rep.composites.append(Verdict(name, Status.SKIPPED, "map unavailable"))
            rep.exactness.append(Verdict(name, Status.SKIPPED, "map unavailable"))
            return
        r = check_exact(f, g)
        rep.composites.append(Verdict.of(name, r.composite_zero, "composite is zero" if r.composite_zero
                                         else "nonzero composite", None if r.composite_zero else r.witness))
        rep.exactness.append(Verdict.of(name, r.exact, "", None if r.exact else r.witness))

    for i in range(top, -1, -1):
        alpha_i = rep.maps[f"alpha{i}"]
        iota_i = rep.maps[f"iota{i}"]
        delta_i = rep.maps[f"delta{i}"]
        if alpha_i is None:
            # nothing above the top degree: iota must be injective
            alpha_i = GroupMap(FGAbGroup.zero(), rep.groups[f"A{i}"], IntMatrix.zeros(rep.groups[f"A{i}"].ngens, 0))
        spot(f"H_{i}(A)", alpha_i, iota_i)
        spot(f"H_{i}(X)", iota_i, delta_i)
        below = rep.maps.get(f"alpha{i - 1}") if i >= 1 else None
        if i == 0:
            D0 = rep.groups["D0"]
            below = GroupMap(D0, FGAbGroup.zero(), IntMatrix.zeros(0, D0.ngens))
        spot(f"H_{i}(D)", delta_i, below)
    rep.seconds = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# ordered configurations


def ordered_cone_rank_check(G: Graph, v: str, H: Iterable[str], n: int,
                            cell_cap: int = DEFAULT_CELL_CAP) -> list[Verdict]:
    """Ordered analogue on the cube complexes: H_d of the cone of the
    inclusion has the invariants of n*|H| copies of H_{d-1}(Conf_{n-1}(G - v))."""
    inst_H = tuple(sorted(set(H)))
    if n < 1 or not inst_H:
        raise GraphError("need n >= 1 and a nonempty H")
    N, trace = normalize_for_deletion(G, v)
    Hn = [trace.half_edge_map[h] for h in inst_H]
    A_model, _ = delete_half_edges_model(N, v, Hn)
    P_model, _ = delete_vertex_model(N, v)
    try:
        SX, _ = subdivide(N, n + 1)
        SA, _ = subdivide(A_model, n + 1)
        X = build_discrete_conf(SX, n, ordered=True, cell_cap=cell_cap)
        A = build_discrete_conf(SA, n, ordered=True, cell_cap=cell_cap)
        P_hom = oracle_homology(P_model, n - 1, ordered=True, cell_cap=cell_cap)
    except ResourceOverflow as exc:
        return [Verdict("ordered cone", Status.SKIPPED, f"resource cap: {exc}")]
    inc = ChainMap.from_function(A, X, lambda c: {c: 1})
    if not verify_chain_map(inc):
        raise InvariantViolation("ordered inclusion is not a chain map")
    cone = mapping_cone(inc)
    out = []
    copies = n * len(Hn)
    for d in range(n + 2):
        got = cone.homology(d).invariants()
        parts = [P_hom[d - 1]] * copies if 1 <= d <= len(P_hom) else []
        want = direct_sum_invariants(parts)
        out.append(Verdict.of(f"ordered cone H_{d}", got == want,
                              f"{format_group(*got)} vs {copies} x = {format_group(*want)}"))
    return out


# ---------------------------------------------------------------------------
# naturality


def _suspension_iso(inst1: DeletionInstance, inst2: DeletionInstance, sigma_P: ChainMap,
                    hmap: dict[str, str]) -> ChainMap:
    def fn(lab):
        h, g = lab
        return {(hmap[h], t): c for t, c in _column(sigma_P, g).items()}
    return ChainMap.from_function(inst1.D, inst2.D, fn)


def _column(f: ChainMap, g) -> dict:
    d = g.degree
    j = f.source.index(d)[g]
    labels = f.target.labels(d + f.shift)
    return {labels[i]: c for i, c in f.matrix(d).column(j).items()}


def naturality_check(G: Graph, iso: GraphIso, v: str, H: Sequence[str], n: int) -> list[Verdict]:
    """An automorphism ``iso`` of G carries the sequence for (v, H) to the one
    for (iso v, iso H); all squares must commute on homology."""
    iso.check(G, G)
    inst1 = DeletionInstance(G, v, H, n)
    v2 = iso.vertex_map[v]
    H2 = [iso.half_edge_map[h] for h in H]
    inst2 = DeletionInstance(G, v2, H2, n)
    niso = normalization_iso(G, G, v, iso)
    sX = isomorphism_chain_map(inst1.normalized, inst2.normalized, niso, n, inst1.X, inst2.X)
    sA = isomorphism_chain_map(inst1.model_A, inst2.model_A, niso, n, inst1.A, inst2.A)
    sP = isomorphism_chain_map(inst1.model_P, inst2.model_P, niso, n - 1, inst1.P, inst2.P)
    sD = _suspension_iso(inst1, inst2, sP, niso.half_edge_map)
    for f in (sX, sA, sP, sD):
        if not verify_chain_map(f):
            raise InvariantViolation("automorphism does not induce a chain map")
    r1, r2 = les_verify(inst1), les_verify(inst2)
    out = []
    top = min(_top_degree(inst1), _top_degree(inst2)) + 1
    for i in range(top + 1):
        a1, a2 = r1.maps[f"alpha{i}"], r2.maps[f"alpha{i}"]
        if a1 is not None and a2 is not None:
            out.append(Verdict.of(f"square alpha H_{i}",
                                  a2 @ induced_map(sD, i + 1) == induced_map(sA, i) @ a1))
        out.append(Verdict.of(f"square iota H_{i}",
                              r2.maps[f"iota{i}"] @ induced_map(sA, i) == induced_map(sX, i) @ r1.maps[f"iota{i}"]))
        d1, d2 = r1.maps[f"delta{i}"], r2.maps[f"delta{i}"]
        if d1 is None or d2 is None:
            out.append(Verdict(f"square delta H_{i}", Status.SKIPPED, "connecting map undefined"))
        else:
            out.append(Verdict.of(f"square delta H_{i}",
                                  d2 @ induced_map(sX, i) == induced_map(sD, i) @ d1))
    return out
