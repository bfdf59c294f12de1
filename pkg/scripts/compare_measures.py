"""Precision@1 of every single-network measure under each distance on one synthetic corpus.

    python scripts/compare_measures.py --preset paper-like --count 300 --workers 4
"""

from __future__ import annotations

import argparse

from egodisp.distances import SIX_SPECS
from egodisp.ranking import Measure, evaluate
from egodisp.synthgen import PRESETS, generate_corpus


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", choices=sorted(PRESETS), default="paper-like")
    ap.add_argument("--count", type=int, default=300)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    corpus = generate_corpus(PRESETS[args.preset], args.count, args.seed)
    measures = [Measure("emb"), Measure("betweenness"), Measure("constraint"), Measure("random")]
    measures += [Measure(name, spec) for spec in SIX_SPECS for name in ("disp", "norm", "parametric", "rec")]
    report = evaluate(corpus, measures, workers=args.workers)
    width = max(len(r.measure) for r in report.rows)
    for r in report.rows:
        print(f"{r.measure:<{width}}  {r.precision_at_1:.3f}  ({r.n_correct}/{r.n_instances})")


if __name__ == "__main__":
    main()
