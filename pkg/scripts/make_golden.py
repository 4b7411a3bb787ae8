"""Regenerate corpus/*.golden from the Świątkowski engine.

Each value is first cross-checked against the cube complex oracle; the script
refuses to write a golden file the two engines disagree on.
"""
import argparse
import sys
from pathlib import Path

from graphconf.oracle import oracle_homology
from graphconf.verify import format_golden, load_corpus, sw_homology


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("corpus", type=Path, nargs="?", default=Path(__file__).parent.parent / "corpus")
    ap.add_argument("--max-n", type=int, default=3)
    args = ap.parse_args()
    corpus = load_corpus(args.corpus)
    for name, G in corpus.items():
        for n in range(args.max_n + 1):
            sw = sw_homology(G, n)
            orc = [str(x) for x in oracle_homology(G, n)]
            if sw != orc:
                print(f"{name} n={n}: engines disagree ({sw} vs {orc})", file=sys.stderr)
                return 1
        path = args.corpus / f"{name}.golden"
        path.write_text(format_golden(G, args.max_n))
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
