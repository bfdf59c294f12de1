"""Command-line interface: ``egodisp {score,evaluate,generate,export-features,sweep}``.

Exit codes: 0 success, 2 usage or parse error, 3 domain error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, replace
from pathlib import Path

from . import __version__
from .distances import DistanceSpec
from .features import feature_matrix, transform
from .formats import (ParseError, curve_tsv, fmt, load_corpus, read_edge_list, report_json, report_text,
                      sweep_tsv, write_corpus, write_features)
from .graph import EgoNetworkError, build_ego_network
from .ranking import (MEASURE_NAMES, TWO_HOP_TOP, Slice, default_workers, evaluate, parse_grid, parse_measure,
                      rank, sweep_parametric)
from .synthgen import PRESET_VERSION, PRESETS, GenerationError, GenParams, generate_corpus

EXIT_USAGE = 2
EXIT_DOMAIN = 3

log = logging.getLogger("egodisp")


class UsageError(ValueError):
    pass


def _add_measure_args(p: argparse.ArgumentParser, multiple: bool) -> None:
    if multiple:
        p.add_argument("--measure", action="append", choices=MEASURE_NAMES, required=True,
                       help="measure to evaluate; repeat for several")
    else:
        p.add_argument("--measure", choices=MEASURE_NAMES, required=True)
    p.add_argument("--distance", default="threshold:3",
                   help="threshold:2|3|4, component, community or spring[:iters=50,seed=S]")
    p.add_argument("--params", help="parametric form options, e.g. alpha=0.61,b=0,c=5")
    p.add_argument("--k", type=int, default=3, help="recursive dispersion iterations")
    p.add_argument("--top", type=int, default=TWO_HOP_TOP, help="two-hop candidate count")
    p.add_argument("--seed", type=int, default=0, help="seed for the random baseline")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="egodisp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"egodisp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score every neighbor of one center")
    p.add_argument("--graph", required=True, type=Path)
    p.add_argument("--center", required=True)
    _add_measure_args(p, multiple=False)

    p = sub.add_parser("evaluate", help="precision at the first position over a corpus")
    p.add_argument("--manifest", required=True, type=Path)
    _add_measure_args(p, multiple=True)
    p.add_argument("--hitset", action="store_true", help="also report partner-or-family hits")
    p.add_argument("--slice", action="append", default=[], metavar="TAG=VALUE")
    p.add_argument("--json", type=Path, help="also write the report as JSON")
    p.add_argument("--min-neighbors", type=int)
    p.add_argument("--max-neighbors", type=int)
    p.add_argument("--workers", type=int)

    p = sub.add_parser("generate", help="write a synthetic corpus")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--params", help="generator overrides, e.g. n_foci=5,p_in=0.4,focus_size=10-20")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("export-features", help="write the structural feature matrix as CSV")
    p.add_argument("--manifest", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--transformed", action="store_true")
    p.add_argument("--spring-seed", type=int, default=0)
    p.add_argument("--workers", type=int)

    p = sub.add_parser("sweep", help="grid search over the parametric form")
    p.add_argument("--manifest", required=True, type=Path)
    p.add_argument("--alpha", required=True, help="START:STOP:STEP or comma list")
    p.add_argument("--b", required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--distance", default="threshold:3")
    p.add_argument("--curve", type=Path, help="write the per-alpha best curve here")
    return parser


def _measure(args: argparse.Namespace, name: str):
    return parse_measure(name, args.distance, args.params, args.k, args.top, args.seed)


def cmd_score(args: argparse.Namespace) -> None:
    g = build_ego_network(args.center, read_edge_list(args.graph))
    m = _measure(args, args.measure)
    if m.name == "twohop":
        raise UsageError("twohop needs a corpus; use evaluate")
    pred = rank(m.score(g), m.direction)
    sys.stdout.write("".join(f"{v}\t{fmt(s)}\n" for v, s in pred.ranked))


def _slices(specs: list[str]) -> list[Slice]:
    out = []
    for spec in specs:
        key, sep, val = spec.partition("=")
        if not sep or not key:
            raise UsageError(f"slice {spec!r} must look like TAG=VALUE")
        out.append(Slice.tag(key, val))
    return out


def cmd_evaluate(args: argparse.Namespace) -> None:
    measures = [_measure(args, name) for name in args.measure]
    slices = _slices(args.slice)
    corpus = load_corpus(args.manifest, args.min_neighbors, args.max_neighbors)
    if not corpus:
        raise UsageError(f"{args.manifest}: corpus is empty")
    report = evaluate(corpus, measures, slices, workers=args.workers)
    config = {"command": "evaluate", "manifest": str(args.manifest), "hitset": args.hitset,
              "min_neighbors": args.min_neighbors, "max_neighbors": args.max_neighbors, **report.config}
    sys.stdout.write(report_text(report, config, args.hitset))
    if args.json:
        args.json.write_text(report_json(report, config), encoding="utf-8")


def parse_gen_params(base: GenParams, text: str | None) -> GenParams:
    if not text:
        return base
    kw: dict = {}
    types = {k: type(v) for k, v in asdict(base).items()}
    for item in text.split(","):
        key, sep, val = item.partition("=")
        key = key.strip()
        if not sep or key not in types or key == "seed":
            raise UsageError(f"bad generator option {item!r}")
        if key == "focus_size":
            lo, _, hi = val.partition("-")
            kw[key] = (int(lo), int(hi or lo))
        elif types[key] is bool:
            kw[key] = val.strip().lower() in ("1", "true", "yes")
        else:
            kw[key] = types[key](val)
    return replace(base, **kw)


def cmd_generate(args: argparse.Namespace) -> None:
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    base = PRESETS[args.preset] if args.preset else GenParams()
    params = parse_gen_params(base, args.params)
    corpus = generate_corpus(params, args.count, args.seed)
    gen = asdict(params)
    gen.pop("seed")
    meta = {"tool_version": __version__, "preset": args.preset, "preset_version": PRESET_VERSION,
            "params": gen, "count": args.count, "seed": args.seed,
            "rng": "PCG64 uniform doubles; instance seed = SeedSequence([seed, index]) word 0"}
    write_corpus(args.out, corpus, meta)


def cmd_export(args: argparse.Namespace) -> None:
    corpus = load_corpus(args.manifest)
    if not corpus:
        raise UsageError(f"{args.manifest}: corpus is empty")
    m = feature_matrix(corpus, args.spring_seed, workers=args.workers)
    if args.transformed:
        m = transform(m)
    write_features(args.out, m)


def cmd_sweep(args: argparse.Namespace) -> None:
    corpus = load_corpus(args.manifest)
    if not corpus:
        raise UsageError(f"{args.manifest}: corpus is empty")
    grids = [parse_grid(g) for g in (args.alpha, args.b, args.c)]
    result = sweep_parametric(corpus, DistanceSpec.parse(args.distance), *grids)
    sys.stdout.write(sweep_tsv(result))
    if args.curve:
        args.curve.write_text(curve_tsv(result), encoding="utf-8")


COMMANDS = {"score": cmd_score, "evaluate": cmd_evaluate, "generate": cmd_generate,
            "export-features": cmd_export, "sweep": cmd_sweep}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    if getattr(args, "workers", None) is None and hasattr(args, "workers"):
        args.workers = default_workers()
    try:
        COMMANDS[args.command](args)
    except EgoNetworkError as exc:
        print(f"egodisp: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except GenerationError as exc:
        print(f"egodisp: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ParseError, ValueError, json.JSONDecodeError) as exc:
        print(f"egodisp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
