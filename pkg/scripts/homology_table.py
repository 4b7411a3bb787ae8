"""Print a homology table for every corpus graph, n = 0..max_n."""
import argparse
from pathlib import Path

from graphconf.graph import betti_and_components
from graphconf.verify import load_corpus, sw_homology

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("corpus", type=Path, nargs="?", default=Path(__file__).parent.parent / "corpus")
ap.add_argument("--max-n", type=int, default=3)
args = ap.parse_args()

for name, G in load_corpus(args.corpus).items():
    c, b1 = betti_and_components(G)
    print(f"{name}  (V={len(G.vertices)}, E={len(G.edges)}, components={c}, b1={b1})")
    for n in range(args.max_n + 1):
        print(f"  n={n}: " + " | ".join(sw_homology(G, n)))
