"""Acceptance checks over a corpus of graphs.

Each ``criterion_*`` function returns a list of :class:`Verdict`; the CLI
``verify-all`` command and the acceptance tests both drive these.
"""
from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from pathlib import Path
from typing import Callable, Iterator

from .chains import ChainMap, GroupMap, induced_map, verify_chain_map
from .graph import Graph, betti_and_components, contract_edge, iso_from_maps, load_graph, parse_graph
from .les import (
    DeletionInstance,
    Status,
    Verdict,
    les_verify,
    naturality_check,
    ordered_cone_rank_check,
    sw_complex,
)
from .linalg import IntMatrix, format_group, kernel_basis, snf
from .oracle import DEFAULT_CELL_CAP, ResourceOverflow, oracle_homology, star_restricted_complex
from .swiatkowski import contraction_chain_map

CRITERIA = {
    1: "engine agreement (Świątkowski vs cube complex)",
    2: "n = 1 ground truth",
    3: "cone identification",
    4: "deletion long exact sequence",
    5: "star-restricted complex",
    6: "edge contraction",
    7: "ordered cone ranks (n = 2)",
    8: "linear algebra properties",
    9: "naturality under automorphisms",
}


@dataclass
class Corpus:
    graphs: dict[str, Graph] = field(default_factory=dict)
    golden: dict[str, Path] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.graphs)

    def items(self) -> Iterator[tuple[str, Graph]]:
        return iter(sorted(self.graphs.items()))


def load_corpus(directory: str | Path) -> Corpus:
    d = Path(directory)
    if not d.is_dir():
        raise FileNotFoundError(f"corpus directory {d} not found")
    out = Corpus()
    for p in sorted(d.glob("*.graph")):
        out.graphs[p.stem] = load_graph(p)
        g = p.with_suffix(".golden")
        if g.exists():
            out.golden[p.stem] = g
    if not out:
        warnings.warn(f"corpus {d} contains no graphs")
    return out


def sw_homology(G: Graph, n: int) -> list[str]:
    C = sw_complex(G, n)
    return [str(C.homology(d)) for d in range(n + 1)]


# ---------------------------------------------------------------------------
# golden files: one line per n, "n=<n>: H_0 | H_1 | ..."


def format_golden(G: Graph, max_n: int) -> str:
    lines = ["# unordered configuration space homology, degrees 0..n"]
    for n in range(max_n + 1):
        lines.append(f"n={n}: " + " | ".join(sw_homology(G, n)))
    return "\n".join(lines) + "\n"


class GoldenFormatError(ValueError):
    pass


def parse_golden(text: str) -> dict[int, list[str]]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep or not head.startswith("n=") or not head[2:].isdigit():
            raise GoldenFormatError(f"line {lineno}: expected 'n=<k>: ...'")
        out[int(head[2:])] = [x.strip() for x in rest.split("|")]
    return out


def golden_checks(corpus: Corpus, max_n: int = 3) -> list[Verdict]:
    out = []
    for name, G in corpus.items():
        path = corpus.golden.get(name)
        if path is None:
            out.append(Verdict(f"golden {name}", Status.SKIPPED, "no golden file"))
            continue
        try:
            want = parse_golden(path.read_text())
        except GoldenFormatError as exc:
            out.append(Verdict.of(f"golden {name}", False, str(exc)))
            continue
        for n, groups in sorted(want.items()):
            if n > max_n:
                continue
            got = sw_homology(G, n)
            out.append(Verdict.of(f"golden {name} n={n}", got == groups,
                                  f"expected {' | '.join(groups)}, got {' | '.join(got)}"))
    return out


# ---------------------------------------------------------------------------
# corpus criteria


def criterion_engine_agreement(corpus: Corpus, max_n: int = 3, cell_cap: int = DEFAULT_CELL_CAP) -> list[Verdict]:
    out = []
    for name, G in corpus.items():
        for n in range(max_n + 1):
            sw = sw_homology(G, n)
            try:
                orc = [str(x) for x in oracle_homology(G, n, cell_cap=cell_cap)]
            except ResourceOverflow as exc:
                out.append(Verdict(f"{name} n={n}", Status.FAIL, f"cell cap exceeded: {exc}"))
                continue
            out.append(Verdict.of(f"{name} n={n}", sw == orc, f"sw {sw} oracle {orc}"))
    return out


def criterion_n1(corpus: Corpus) -> list[Verdict]:
    out = []
    for name, G in corpus.items():
        c, b1 = betti_and_components(G)
        want = [format_group(c, ()), format_group(b1, ())]
        sw = sw_homology(G, 1)
        orc = [str(x) for x in oracle_homology(G, 1)]
        out.append(Verdict.of(f"{name}", sw == want and orc == want,
                              f"expected {want}, sw {sw}, oracle {orc}"))
    return out


def half_edge_subsets(G: Graph, v: str) -> list[tuple[str, ...]]:
    hs = G.half_edges_at(v)
    return [H for k in range(1, len(hs) + 1) for H in combinations(hs, k)]


@lru_cache(maxsize=None)
def _les_report(G: Graph, v: str, H: tuple[str, ...], n: int):
    return les_verify(DeletionInstance(G, v, H, n))


def deletion_cases(corpus: Corpus, max_n: int = 3):
    for name, G in corpus.items():
        for v in G.vertices:
            for H in half_edge_subsets(G, v):
                for n in range(1, max_n + 1):
                    yield name, G, v, H, n


def criterion_cone(corpus: Corpus, max_n: int = 3) -> list[Verdict]:
    out = []
    for name, G, v, H, n in deletion_cases(corpus, max_n):
        rep = _les_report(G, v, H, n)
        bad = [x for x in rep.cone if not x]
        out.append(Verdict.of(f"{name} v={v} H={','.join(H)} n={n}", not bad,
                              "; ".join(x.detail for x in bad)))
    return out


def criterion_les(corpus: Corpus, max_n: int = 3) -> list[Verdict]:
    out = []
    for name, G, v, H, n in deletion_cases(corpus, max_n):
        rep = _les_report(G, v, H, n)
        bad = [x for x in (*rep.composites, *rep.exactness, *rep.triangle) if not x]
        detail = "; ".join(f"{x.name}: {x.status.value} {x.detail} {x.witness or ''}".strip() for x in bad)
        out.append(Verdict.of(f"{name} v={v} H={','.join(H)} n={n}", not bad, detail))
    return out


def criterion_star(corpus: Corpus, max_n: int = 3, cell_cap: int = DEFAULT_CELL_CAP) -> list[Verdict]:
    out = []
    for name, G in corpus.items():
        for n in range(max_n + 1):
            full = [x.invariants() for x in oracle_homology(G, n, cell_cap=cell_cap)]
            for v in G.vertices:
                R = star_restricted_complex(G, v, n, cell_cap=cell_cap)
                got = [R.homology(d).invariants() for d in range(n + 1)]
                out.append(Verdict.of(f"{name} v={v} n={n}", got == full,
                                      f"restricted {[format_group(*g) for g in got]} "
                                      f"full {[format_group(*g) for g in full]}"))
    return out


def _contraction(G: Graph, e: str, n: int, anchor: str | None = None) -> ChainMap:
    Gq, _ = contract_edge(G, e)
    return contraction_chain_map(G, e, n, anchor=anchor, source=sw_complex(Gq, n), target=sw_complex(G, n))


def _homology_maps(f: ChainMap, n: int) -> list[GroupMap]:
    return [induced_map(f, d) for d in range(n + 1)]


def criterion_contraction(corpus: Corpus, max_n: int = 3) -> list[Verdict]:
    out = []
    for name, G in corpus.items():
        edges = [e for e in G.edges if not G.is_loop(e)]
        for e in edges:
            u, w = sorted(G.edges[e])
            for n in range(max_n + 1):
                f_u = _contraction(G, e, n, u)
                f_w = _contraction(G, e, n, w)
                tag = f"{name} e={e} n={n}"
                out.append(Verdict.of(f"chain map {tag}", verify_chain_map(f_u) and verify_chain_map(f_w)))
                hu, hw = _homology_maps(f_u, n), _homology_maps(f_w, n)
                out.append(Verdict.of(f"anchors agree {tag}", all(a == b for a, b in zip(hu, hw))))
                if n == 1 or (n == 2 and min(G.degree(u), G.degree(w)) == 2):
                    bad = [d for d, m in enumerate(hu) if not m.is_iso()]
                    out.append(Verdict.of(f"isomorphism {tag}", not bad,
                                          f"not an isomorphism in degrees {bad}" if bad else ""))
        for e, f in combinations(edges, 2):
            if set(G.edges[e]) & set(G.edges[f]):
                continue
            for n in range(max_n + 1):
                Ge, _ = contract_edge(G, e)
                Gf, _ = contract_edge(G, f)
                via_e = _contraction(G, e, n) @ _contraction(Ge, f, n)
                via_f = _contraction(G, f, n) @ _contraction(Gf, e, n)
                same = all(a == b for a, b in zip(_homology_maps(via_e, n), _homology_maps(via_f, n)))
                out.append(Verdict.of(f"commute {name} e={e} f={f} n={n}", same))
    return out


def criterion_ordered(corpus: Corpus, n: int = 2, cell_cap: int = DEFAULT_CELL_CAP) -> list[Verdict]:
    out = []
    for name, G in corpus.items():
        for v in G.vertices:
            for H in half_edge_subsets(G, v):
                res = ordered_cone_rank_check(G, v, H, n, cell_cap=cell_cap)
                bad = [x for x in res if x.status is not Status.PASS]
                status = Status.FAIL if any(x.status is Status.FAIL for x in bad) else (
                    Status.SKIPPED if bad else Status.PASS)
                out.append(Verdict(f"{name} v={v} H={','.join(H)} n={n}", status,
                                   "; ".join(f"{x.name}: {x.detail}" for x in bad)))
    return out


# ---------------------------------------------------------------------------
# corpus-independent criteria


def bareiss_rank(rows: list[list[int]]) -> int:
    """Rank by fraction-free elimination (independent of the SNF code)."""
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    rank, prev = 0, 1
    for c in range(n):
        piv = next((r for r in range(rank, m) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(rank + 1, m):
            a[r] = [(a[rank][c] * a[r][k] - a[r][c] * a[rank][k]) // prev for k in range(n)]
        prev = a[rank][c]
        rank += 1
        if rank == m:
            break
    return rank


def random_matrix(rng: random.Random, max_dim: int = 40, bound: int = 9) -> IntMatrix:
    m, n = rng.randint(1, max_dim), rng.randint(1, max_dim)
    density = rng.choice([0.1, 0.3, 1.0])
    data = [[rng.randint(-bound, bound) if rng.random() < density else 0 for _ in range(n)] for _ in range(m)]
    return IntMatrix.from_dense(data, n)


def snf_properties(A: IntMatrix) -> list[str]:
    """Names of violated properties (empty when all hold)."""
    bad = []
    r = snf(A)
    if r.U @ A @ r.V != r.D:
        bad.append("U A V != D")
    if r.U @ r.U_inv != IntMatrix.identity(A.rows) or r.V @ r.V_inv != IntMatrix.identity(A.cols):
        bad.append("not unimodular")
    diag = r.diagonal
    nz = [x for x in diag if x]
    if any(x < 0 for x in diag) or any(nz[i + 1] % nz[i] for i in range(len(nz) - 1)) or diag[: len(nz)] != nz:
        bad.append("divisibility chain")
    if any(i != j for i, j, _ in r.D.items()):
        bad.append("D not diagonal")
    if r.rank != bareiss_rank(A.to_dense()):
        bad.append("rank differs from fraction-free elimination")
    K = kernel_basis(A)
    if K.cols != A.cols - r.rank or not (A @ K).is_zero():
        bad.append("kernel basis wrong size or not in kernel")
    elif K.cols and any(x != 1 for x in snf(K).diagonal):
        bad.append("kernel basis not saturated")
    return bad


def criterion_linear_algebra(trials: int = 1000, seed: int = 20240917) -> list[Verdict]:
    rng = random.Random(seed)
    failures = []
    for t in range(trials):
        A = random_matrix(rng)
        bad = snf_properties(A)
        if bad:
            failures.append(f"trial {t} ({A.rows}x{A.cols}): {', '.join(bad)}")
    return [Verdict.of(f"{trials} random SNF instances", not failures, "; ".join(failures[:5]))]


Y_TEXT = "v o\nv x\nv y\nv z\ne ox o x\ne oy o y\ne oz o z\n"


def cycle_text(k: int) -> str:
    verts = "".join(f"v c{i}\n" for i in range(k))
    return verts + "".join(f"e s{i} c{i} c{(i + 1) % k}\n" for i in range(k))


def criterion_naturality(max_n: int = 3) -> list[Verdict]:
    out = []
    Y = parse_graph(Y_TEXT)
    leaves = ["x", "y", "z"]
    for perm in permutations(leaves):
        vm = {"o": "o", **dict(zip(leaves, perm))}
        em = {f"o{a}": f"o{b}" for a, b in zip(leaves, perm)}
        iso = iso_from_maps(Y, Y, vm, em)
        for H in half_edge_subsets(Y, "o"):
            for n in range(1, max_n + 1):
                res = naturality_check(Y, iso, "o", H, n)
                out.append(Verdict.of(f"Y {''.join(perm)} H={','.join(H)} n={n}", all(res),
                                      "; ".join(x.name for x in res if not x)))
    for k in (3, 5):
        C = parse_graph(cycle_text(k))
        for r in range(1, k):
            vm = {f"c{i}": f"c{(i + r) % k}" for i in range(k)}
            em = {f"s{i}": f"s{(i + r) % k}" for i in range(k)}
            iso = iso_from_maps(C, C, vm, em)
            for H in half_edge_subsets(C, "c0"):
                for n in range(1, max_n + 1):
                    res = naturality_check(C, iso, "c0", H, n)
                    out.append(Verdict.of(f"cycle{k} rot{r} H={','.join(H)} n={n}", all(res),
                                          "; ".join(x.name for x in res if not x)))
    return out


def run_criterion(k: int, corpus: Corpus, max_n: int = 3, trials: int = 1000,
                  cell_cap: int = DEFAULT_CELL_CAP) -> list[Verdict]:
    table: dict[int, Callable[[], list[Verdict]]] = {
        1: lambda: criterion_engine_agreement(corpus, max_n, cell_cap),
        2: lambda: criterion_n1(corpus),
        3: lambda: criterion_cone(corpus, max_n),
        4: lambda: criterion_les(corpus, max_n),
        5: lambda: criterion_star(corpus, max_n, cell_cap),
        6: lambda: criterion_contraction(corpus, max_n),
        7: lambda: criterion_ordered(corpus, 2, cell_cap),
        8: lambda: criterion_linear_algebra(trials),
        9: lambda: criterion_naturality(max_n),
    }
    return table[k]()


def summarize(verdicts: list[Verdict]) -> Status:
    if any(v.status is Status.FAIL for v in verdicts):
        return Status.FAIL
    if verdicts and all(v.status is Status.SKIPPED for v in verdicts):
        return Status.SKIPPED
    return Status.PASS
