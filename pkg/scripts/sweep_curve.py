"""Best precision@1 of the parametric form as a function of alpha on a synthetic corpus.

    python scripts/sweep_curve.py --preset paper-like --count 200 --seed 1
"""

from __future__ import annotations

import argparse

from egodisp.distances import DistanceSpec
from egodisp.formats import curve_tsv
from egodisp.ranking import parse_grid, sweep_parametric
from egodisp.synthgen import PRESETS, generate_corpus


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", choices=sorted(PRESETS), default="paper-like")
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--alpha", default="0.1:2.0:0.1")
    ap.add_argument("--b", default="0,1,2,5")
    ap.add_argument("--c", default="0,1,5,10")
    ap.add_argument("--distance", default="threshold:3")
    args = ap.parse_args()
    corpus = generate_corpus(PRESETS[args.preset], args.count, args.seed)
    result = sweep_parametric(corpus, DistanceSpec.parse(args.distance),
                              parse_grid(args.alpha), parse_grid(args.b), parse_grid(args.c))
    print(curve_tsv(result), end="")
    print(f"# best alpha: {result.best_alpha()}")


if __name__ == "__main__":
    main()
