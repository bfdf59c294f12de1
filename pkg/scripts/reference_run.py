"""Print the pinned reference numbers asserted by the acceptance suite.

Run once after any change that is meant to alter generator or scoring output,
then copy the printed counts into ``tests/test_acceptance.py``.

    python scripts/reference_run.py
"""

from __future__ import annotations

import argparse
import time

from egodisp.ranking import Measure, evaluate
from egodisp.synthgen import PRESETS, generate_corpus

# (preset, count, seed, measures) per pinned corpus
RUNS = {
    "paper-like": ("paper-like", 1000, 1, ["emb", "norm", "rec"]),
    "random50": ("random50", 2000, 1, ["random"]),
    "mutual": ("mutual", 100, 1, ["rec", "twohop"]),
}


def run(name: str, workers: int) -> None:
    preset, count, seed, names = RUNS[name]
    t0 = time.perf_counter()
    corpus = generate_corpus(PRESETS[preset], count, seed)
    report = evaluate(corpus, [Measure(n) for n in names], workers=workers)
    for row in report.rows:
        print(f"{name}\t{row.measure}\tn={row.n_instances}\tcorrect={row.n_correct}\t"
              f"precision_at_1={row.precision_at_1!r}")
    print(f"# {name}: {time.perf_counter() - t0:.1f}s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", choices=sorted(RUNS), action="append")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    for name in args.only or RUNS:
        run(name, args.workers)


if __name__ == "__main__":
    main()
