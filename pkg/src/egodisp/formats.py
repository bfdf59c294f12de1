"""On-disk formats: tab-separated edge lists, JSON Lines corpus manifests, reports and feature CSVs."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .features import FeatureMatrix
from .graph import EgoNetworkError, build_ego_network
from .ranking import EvalReport, Instance, SweepResult

REPORT_SCHEMA_VERSION = 1
MANIFEST = "manifest.jsonl"
CORPUS_META = "corpus.json"


class ParseError(ValueError):
    def __init__(self, path: str | Path, line: int | None, message: str):
        self.path, self.line = str(path), line
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")


def fmt(x: float) -> str:
    """Shortest round-tripping text for a score; integral values print without a fraction."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


# ---------------------------------------------------------------------------
# Edge lists


def read_edge_list(path: str | Path) -> list[tuple[str, str]]:
    """Read ``src<TAB>dst`` lines; ``#`` comments and blank lines are skipped."""
    edges = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(path, None, f"cannot read edge list ({exc})") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not all(p.strip() for p in parts):
            raise ParseError(path, lineno, "expected exactly two tab-separated node ids")
        edges.append((parts[0].strip(), parts[1].strip()))
    return edges


def canonical_edges(edges: Iterable[tuple[str, str]]) -> list[tuple[str, str]]:
    """Sorted ``(a, b)`` pairs with ``a < b``; rejects self-loops and duplicates."""
    seen = set()
    for a, b in edges:
        if a == b:
            raise ValueError(f"self-loop on {a!r}")
        key = (a, b) if a < b else (b, a)
        if key in seen:
            raise ValueError(f"duplicate edge {key}")
        seen.add(key)
    return sorted(seen)


def write_edge_list(path: str | Path, edges: Iterable[tuple[str, str]]) -> None:
    lines = "".join(f"{a}\t{b}\n" for a, b in canonical_edges(edges))
    Path(path).write_text(lines, encoding="utf-8")


# ---------------------------------------------------------------------------
# Corpora


def instance_edges(inst: Instance) -> list[tuple[str, str]]:
    return list(inst.context_edges) if inst.context_edges is not None else inst.network.edges()


def write_corpus(out: str | Path, corpus: Sequence[Instance], meta: dict | None = None) -> Path:
    out = Path(out)
    (out / "graphs").mkdir(parents=True, exist_ok=True)
    lines = []
    for i, inst in enumerate(corpus):
        rel = f"graphs/{i:06d}.tsv"
        write_edge_list(out / rel, instance_edges(inst))
        record = {"center": inst.center, "partner": inst.partner, "family": sorted(inst.family),
                  "tags": dict(sorted(inst.tags.items())), "graph": rel}
        lines.append(json.dumps(record, sort_keys=True) + "\n")
    manifest = out / MANIFEST
    manifest.write_text("".join(lines), encoding="utf-8")
    if meta is not None:
        (out / CORPUS_META).write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return manifest


def load_corpus(manifest: str | Path, min_neighbors: int | None = None,
                max_neighbors: int | None = None) -> list[Instance]:
    """Load every instance of a manifest, optionally keeping only centers within a neighbor-count range.

    Graph paths resolve relative to the manifest. Edge files may contain edges
    beyond the center's ego network; those are kept as context edges.
    """
    manifest = Path(manifest)
    try:
        text = manifest.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(manifest, None, f"cannot read manifest ({exc})") from exc
    corpus = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            center, partner, rel = str(rec["center"]), str(rec["partner"]), rec["graph"]
            family = frozenset(str(f) for f in rec.get("family", []))
            tags = {str(k): str(v) for k, v in rec.get("tags", {}).items()}
        except (json.JSONDecodeError, KeyError, TypeError, AttributeError) as exc:
            raise ParseError(manifest, lineno, f"bad manifest record ({exc})") from exc
        path = manifest.parent / rel
        if not path.is_file():
            raise ParseError(manifest, lineno, f"graph file {rel!r} does not exist")
        edges = read_edge_list(path)
        try:
            g = build_ego_network(center, edges)
            if min_neighbors is not None and g.n < min_neighbors:
                continue
            if max_neighbors is not None and g.n > max_neighbors:
                continue
            context = tuple(sorted({(a, b) if a < b else (b, a) for a, b in edges if a != b})) \
                if g.dropped_edges else None
            corpus.append(Instance(g, partner, family, tags, context))
        except EgoNetworkError as exc:
            raise EgoNetworkError(f"{manifest}:{lineno}: {exc}") from exc
    return corpus


# ---------------------------------------------------------------------------
# Reports


def _prec(x: float | None) -> str:
    return "null" if x is None else repr(x)


def report_document(report: EvalReport, config: dict) -> dict:
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "tool": "egodisp",
        "tool_version": __version__,
        "config": config,
        "rows": [{"measure": r.measure, "slice": r.slice, "n_instances": r.n_instances,
                  "n_correct": r.n_correct, "n_hits": r.n_hits,
                  "precision_at_1": r.precision_at_1, "hitset_precision_at_1": r.hitset_precision_at_1}
                 for r in report.rows],
    }


def report_json(report: EvalReport, config: dict) -> str:
    return json.dumps(report_document(report, config), sort_keys=True, indent=2) + "\n"


def report_text(report: EvalReport, config: dict, hitset: bool = False) -> str:
    lines = [f"tool=egodisp {__version__}", f"schema_version={REPORT_SCHEMA_VERSION}"]
    lines += [f"config.{k}={json.dumps(v, sort_keys=True)}" for k, v in sorted(config.items())]
    for r in report.rows:
        fields = [f"measure={r.measure}", f"slice={r.slice}", f"n={r.n_instances}", f"correct={r.n_correct}",
                  f"precision_at_1={_prec(r.precision_at_1)}"]
        if hitset:
            fields += [f"hits={r.n_hits}", f"hitset_precision_at_1={_prec(r.hitset_precision_at_1)}"]
        lines.append("\t".join(fields))
    return "\n".join(lines) + "\n"


def sweep_tsv(result: SweepResult) -> str:
    rows = ["alpha\tb\tc\tprecision_at_1"]
    rows += [f"{fmt(a)}\t{fmt(b)}\t{fmt(c)}\t{p!r}" for a, b, c, p in result.points]
    return "\n".join(rows) + "\n"


def curve_tsv(result: SweepResult) -> str:
    rows = ["alpha\tbest_precision_at_1\tbest_b\tbest_c"]
    rows += [f"{fmt(a)}\t{p!r}\t{fmt(b)}\t{fmt(c)}" for a, p, b, c in result.curve()]
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# Feature matrices

ID_COLUMNS = ("center", "candidate", "is_partner")


def write_features(path: str | Path, m: FeatureMatrix) -> Path:
    """RFC-4180 CSV plus a ``<path>.schema.json`` sidecar; returns the sidecar path."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow([*ID_COLUMNS, *m.columns])
        for i in range(len(m.centers)):
            w.writerow([m.centers[i], m.candidates[i], m.labels[i], *(repr(float(x)) for x in m.values[i])])
    sidecar = path.with_name(path.name + ".schema.json")
    schema = {**m.meta, "tool_version": __version__, "id_columns": list(ID_COLUMNS),
              "feature_columns": m.columns, "n_rows": len(m.centers)}
    sidecar.write_text(json.dumps(schema, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return sidecar
