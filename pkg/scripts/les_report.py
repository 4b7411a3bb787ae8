"""Run the deletion sequence check for every vertex and half-edge subset of
one graph and print a one-line summary per instance."""
import argparse
from pathlib import Path

from graphconf.graph import load_graph
from graphconf.les import DeletionInstance, les_verify
from graphconf.verify import half_edge_subsets

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("graph", type=Path)
ap.add_argument("--n", type=int, default=2)
args = ap.parse_args()

G = load_graph(args.graph)
for v in G.vertices:
    for H in half_edge_subsets(G, v):
        rep = les_verify(DeletionInstance(G, v, H, args.n))
        cone = "ok" if all(rep.cone) else "FAIL"
        exact = "ok" if rep.exact else "FAIL"
        print(f"v={v:<4} H={','.join(H):<24} cone {cone:<4} exact {exact:<4} "
              f"cells {sum(rep.sizes.values()):>6}  {rep.seconds:.2f}s")
