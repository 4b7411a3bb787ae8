"""Command-line interface: ``graphconf homology|les|contract|verify-all``."""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .chains import induced_map, verify_chain_map
from .graph import Graph, GraphError, contract_edge, load_graph
from .les import DeletionInstance, Status, les_verify, sw_complex
from .oracle import DEFAULT_CELL_CAP, ResourceOverflow, oracle_homology
from .swiatkowski import contraction_chain_map

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_OVERFLOW = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    graph: Path | None = None
    n: int = 2
    engine: str = "swiatkowski"
    vertex: str | None = None
    half_edges: list[str] | None = None
    edge: str | None = None
    max_degree: int | None = None
    cell_cap: int = DEFAULT_CELL_CAP
    fmt: str = "human"
    corpus: Path | None = None
    criteria: list[int] = field(default_factory=lambda: list(range(1, 10)))
    trials: int = 1000

    def validate(self) -> None:
        if self.n < 0:
            raise InputError("--n must be nonnegative")
        if self.cell_cap <= 0:
            raise InputError("--cell-cap must be positive")
        if self.max_degree is not None and self.max_degree < 0:
            raise InputError("--max-degree must be nonnegative")
        if self.trials < 0:
            raise InputError("--trials must be nonnegative")
        bad = [k for k in self.criteria if not 1 <= k <= 9]
        if bad:
            raise InputError(f"unknown criteria {bad}")


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def line(self, text: str = "") -> None:
        if self.fmt == "human":
            print(text, file=self.stream)

    def record(self, **fields) -> None:
        if self.fmt == "records":
            print(json.dumps(fields, sort_keys=True), file=self.stream)


def _load(cfg: RunConfig) -> Graph:
    if cfg.graph is None:
        raise InputError("a graph file is required")
    try:
        return load_graph(cfg.graph)
    except FileNotFoundError:
        raise InputError(f"graph file {cfg.graph} not found") from None


def _degrees(cfg: RunConfig, top: int) -> range:
    cap = top if cfg.max_degree is None else min(top, cfg.max_degree)
    return range(cap + 1)


# ---------------------------------------------------------------------------
# commands


def cmd_homology(cfg: RunConfig, out: Output) -> int:
    G = _load(cfg)
    degs = _degrees(cfg, cfg.n)
    cols: dict[str, list[str]] = {}
    if cfg.engine in ("swiatkowski", "both"):
        C = sw_complex(G, cfg.n)
        cols["swiatkowski"] = [str(C.homology(d)) for d in degs]
    if cfg.engine in ("oracle", "both"):
        groups = oracle_homology(G, cfg.n, cell_cap=cfg.cell_cap)
        cols["oracle"] = [str(groups[d]) for d in degs]
    agree = len({tuple(c) for c in cols.values()}) == 1
    names = list(cols)
    out.line(f"n = {cfg.n}   " + "   ".join(names))
    for d in degs:
        row = [cols[k][d] for k in names]
        out.line(f"H_{d}: " + "   ".join(f"{x:<12}" for x in row).rstrip())
        out.record(command="homology", n=cfg.n, degree=d, **{k: cols[k][d] for k in names})
    if len(names) > 1:
        out.line(f"engines agree: {'yes' if agree else 'NO'}")
        out.record(command="homology", n=cfg.n, check="engine agreement", status="pass" if agree else "fail")
    return EXIT_OK if agree else EXIT_FAIL


def _matrix_text(m) -> str:
    rows = m.to_dense()
    if not rows or not rows[0]:
        return f"({m.rows}x{m.cols})"
    return "[" + "; ".join(" ".join(str(x) for x in r) for r in rows) + "]"


def _selectors(cfg: RunConfig, G: Graph) -> tuple[str, list[str]]:
    if cfg.vertex is None:
        raise InputError("--vertex is required")
    if cfg.vertex not in G.vertices:
        raise InputError(f"unknown vertex {cfg.vertex!r}")
    at_v = G.half_edges_at(cfg.vertex)
    H = list(at_v) if cfg.half_edges in (None, ["all"]) else cfg.half_edges
    for h in H:
        if h not in at_v:
            raise InputError(f"half-edge {h!r} is not at vertex {cfg.vertex!r} "
                             f"(available: {', '.join(at_v) or 'none'})")
    if not H:
        raise InputError(f"vertex {cfg.vertex!r} has no half-edges")
    if cfg.n < 1:
        raise InputError("--n must be at least 1 for the deletion sequence")
    return cfg.vertex, H


def cmd_les(cfg: RunConfig, out: Output) -> int:
    G = _load(cfg)
    v, H = _selectors(cfg, G)
    rep = les_verify(DeletionInstance(G, v, H, cfg.n))
    out.line(f"deletion sequence for v={v}, H={{{', '.join(H)}}}, n={cfg.n}")
    out.line("  D = sum over H of suspended configurations of G - v (n-1 points)")
    out.line("  A = configurations of G minus H, X = configurations of G")
    top = max(int(k[1:]) for k in rep.groups if k.startswith("X"))
    for i in _degrees(cfg, top):
        out.line(f"H_{i}: D={rep.groups[f'D{i}']}  A={rep.groups[f'A{i}']}  X={rep.groups[f'X{i}']}")
        for name in ("alpha", "iota", "delta"):
            m = rep.maps.get(f"{name}{i}")
            text = "undefined" if m is None else _matrix_text(m.matrix)
            out.line(f"    {name}_{i}: {text}")
            out.record(command="les", degree=i, map=name, matrix=None if m is None else m.matrix.to_dense())
        for k in "DAX":
            out.record(command="les", degree=i, space=k, group=str(rep.groups[f"{k}{i}"]))
    for verdict in rep.verdicts():
        out.line(f"  [{verdict.status.value:>7}] {verdict.name} {verdict.detail}".rstrip())
        out.record(command="les", check=verdict.name, status=verdict.status.value,
                   detail=verdict.detail, witness=verdict.witness)
    out.line(f"sizes: {rep.sizes}  time: {rep.seconds:.2f}s")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_contract(cfg: RunConfig, out: Output) -> int:
    G = _load(cfg)
    if cfg.edge is None:
        raise InputError("--edge is required")
    if cfg.edge not in G.edges:
        raise InputError(f"unknown edge {cfg.edge!r}")
    if G.is_loop(cfg.edge):
        raise InputError(f"edge {cfg.edge!r} is a loop and cannot be contracted")
    Gq, _ = contract_edge(G, cfg.edge)
    f = contraction_chain_map(G, cfg.edge, cfg.n, source=sw_complex(Gq, cfg.n), target=sw_complex(G, cfg.n))
    ok = verify_chain_map(f)
    out.line(f"contraction of {cfg.edge}: S_{cfg.n}(G/{cfg.edge}) -> S_{cfg.n}(G)")
    out.line(f"chain map verified: {'yes' if ok else 'NO'}")
    out.record(command="contract", check="chain map", status="pass" if ok else "fail")
    if ok:
        for d in _degrees(cfg, cfg.n):
            m = induced_map(f, d)
            out.line(f"H_{d}: {m.source} -> {m.target}  {_matrix_text(m.matrix)}"
                     f"{'  (isomorphism)' if m.is_iso() else ''}")
            out.record(command="contract", degree=d, source=str(m.source), target=str(m.target),
                       matrix=m.matrix.to_dense(), isomorphism=m.is_iso())
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_all(cfg: RunConfig, out: Output) -> int:
    from .verify import CRITERIA, golden_checks, load_corpus, run_criterion, summarize

    if cfg.corpus is None:
        raise InputError("a corpus directory is required")
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            corpus = load_corpus(cfg.corpus)
    except FileNotFoundError as exc:
        raise InputError(str(exc)) from None
    if not corpus:
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        out.record(command="verify-all", status="skipped", detail="empty corpus")
        return EXIT_OK
    failed = False
    golden = golden_checks(corpus, cfg.n)
    for v in golden:
        failed |= v.status is Status.FAIL
        out.record(command="verify-all", criterion="golden", check=v.name, status=v.status.value, detail=v.detail)
    status = summarize(golden)
    out.line(f"[{status.value:>7}] golden files ({len(golden)} checks)")
    for k in cfg.criteria:
        verdicts = run_criterion(k, corpus, max_n=cfg.n, trials=cfg.trials, cell_cap=cfg.cell_cap)
        for v in verdicts:
            out.record(command="verify-all", criterion=k, check=v.name, status=v.status.value, detail=v.detail)
        status = summarize(verdicts)
        failed |= status is Status.FAIL
        out.line(f"[{status.value:>7}] criterion {k}: {CRITERIA[k]} ({len(verdicts)} checks)")
        for v in verdicts:
            if v.status is Status.FAIL:
                out.line(f"          {v.name}: {v.detail}")
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {"homology": cmd_homology, "les": cmd_les, "contract": cmd_contract, "verify-all": cmd_verify_all}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="number of points (default 2)")
    common.add_argument("--max-degree", type=int, default=None, help="highest homological degree shown")
    common.add_argument("--cell-cap", type=int, default=DEFAULT_CELL_CAP, help="cube complex cell cap")
    common.add_argument("--format", dest="fmt", choices=["human", "records"], default="human")

    p = argparse.ArgumentParser(prog="graphconf",
                                description="Homology of configuration spaces of graphs.")
    sub = p.add_subparsers(dest="command", required=True)
    h = sub.add_parser("homology", parents=[common], help="homology table")
    h.add_argument("graph", type=Path)
    h.add_argument("--engine", choices=["swiatkowski", "oracle", "both"], default="swiatkowski")
    le = sub.add_parser("les", parents=[common], help="deletion long exact sequence")
    le.add_argument("graph", type=Path)
    le.add_argument("--vertex", required=True)
    le.add_argument("--half-edges", default="all", help="comma separated half-edge ids, or 'all'")
    c = sub.add_parser("contract", parents=[common], help="edge contraction map")
    c.add_argument("graph", type=Path)
    c.add_argument("--edge", required=True)
    va = sub.add_parser("verify-all", parents=[common], help="run the acceptance checks on a corpus")
    va.add_argument("corpus", type=Path)
    va.add_argument("--criteria", default="1,2,3,4,5,6,7,8,9", help="comma separated criterion numbers")
    va.add_argument("--trials", type=int, default=1000, help="random SNF instances for criterion 8")
    va.set_defaults(n=3)
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command, n=args.n, max_degree=args.max_degree,
                    cell_cap=args.cell_cap, fmt=args.fmt)
    if args.command == "verify-all":
        cfg.corpus = args.corpus
        cfg.trials = args.trials
        try:
            cfg.criteria = [int(x) for x in args.criteria.split(",") if x.strip()]
        except ValueError:
            raise InputError(f"bad --criteria value {args.criteria!r}") from None
    else:
        cfg.graph = args.graph
    cfg.engine = getattr(args, "engine", cfg.engine)
    cfg.vertex = getattr(args, "vertex", None)
    cfg.edge = getattr(args, "edge", None)
    if getattr(args, "half_edges", None) is not None:
        cfg.half_edges = [x.strip() for x in args.half_edges.split(",") if x.strip()]
    cfg.validate()
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg, Output(cfg.fmt))
    except (InputError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceOverflow as exc:
        print(f"resource overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW


if __name__ == "__main__":
    sys.exit(main())
