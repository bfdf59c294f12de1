"""Partner prediction from score tables, and the precision-at-1 evaluation harness."""

from __future__ import annotations

import logging
import math
import os
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import baselines
from .dispersion import (DispersionProfile, ParametricParams, ScoreTable, embeddedness_table)
from .distances import DEFAULT_SPEC, DistanceSpec
from .graph import EgoNetwork, EgoNetworkError, build_ego_network, embeddedness_all

log = logging.getLogger(__name__)

TWO_HOP_TOP = 20


@dataclass(frozen=True)
class Instance:
    """A labeled ego network.

    ``context_edges`` optionally holds a wider edge list (e.g. a two-hop graph)
    from which the ego networks of the center's friends can be extracted.
    """

    network: EgoNetwork
    partner: str
    family: frozenset[str] = frozenset()
    tags: Mapping[str, str] = field(default_factory=dict)
    context_edges: tuple[tuple[str, str], ...] | None = None

    def __post_init__(self) -> None:
        g = self.network
        g.neighbor_index(self.partner)
        for f in self.family:
            g.neighbor_index(f)
        if self.partner in self.family:
            raise EgoNetworkError("partner cannot also be listed as family")

    @property
    def center(self) -> str:
        return self.network.center

    def friend_network(self, v: str) -> EgoNetwork | None:
        """Ego network of friend ``v`` from the context edges, if available."""
        if self.context_edges is None:
            return None
        try:
            return build_ego_network(v, self.context_edges)
        except EgoNetworkError:
            return None


@dataclass(frozen=True)
class Prediction:
    ranked: tuple[tuple[str, float], ...]
    warnings: tuple[str, ...] = ()

    @property
    def chosen(self) -> str:
        return self.ranked[0][0]


def rank(table: ScoreTable, direction: str = "max", emb: Sequence[int] | None = None) -> Prediction:
    """Order neighbors by score, then by higher embeddedness, then by smaller id.

    Neighbors are stored in id order, so the dense index stands in for the id.
    """
    if direction not in ("max", "min"):
        raise ValueError(f"direction must be 'max' or 'min', not {direction!r}")
    g = table.network
    emb = embeddedness_all(g) if emb is None else emb
    sign = -1.0 if direction == "max" else 1.0
    order = sorted(range(g.n), key=lambda i: (sign * table.scores[i], -emb[i], i))
    return Prediction(tuple((g.neighbors[i], table.scores[i]) for i in order))


def _best(scores: Sequence[float], emb: Sequence[int]) -> int:
    """Index ranked first by ``rank(..., 'max')`` without sorting."""
    return max(range(len(scores)), key=lambda i: (scores[i], emb[i], -i))


# ---------------------------------------------------------------------------
# Measures

MEASURE_NAMES = ("emb", "disp", "norm", "parametric", "rec", "betweenness", "constraint", "random", "twohop")


@dataclass(frozen=True)
class Measure:
    """A named scoring pipeline that turns an instance into a prediction."""

    name: str
    distance: DistanceSpec = DEFAULT_SPEC
    params: ParametricParams = ParametricParams()
    k: int = 3
    top: int = TWO_HOP_TOP
    seed: int = 0

    def __post_init__(self) -> None:
        if self.name not in MEASURE_NAMES:
            raise ValueError(f"unknown measure {self.name!r}; choose from {', '.join(MEASURE_NAMES)}")
        if self.k < 1:
            raise ValueError("iteration count must be >= 1")

    @property
    def direction(self) -> str:
        return baselines.DIRECTION.get(self.name, "max")

    @property
    def label(self) -> str:
        if self.name in ("emb", "betweenness", "constraint"):
            return self.name
        if self.name == "random":
            return f"random[seed={self.seed}]"
        if self.name == "parametric":
            p = self.params
            return f"parametric(alpha={p.alpha:g},b={p.b:g},c={p.c:g})[{self.distance}]"
        if self.name == "rec":
            return f"rec@{self.k}[{self.distance}]"
        if self.name == "twohop":
            return f"twohop(rec@{self.k},top={self.top})[{self.distance}]"
        return f"{self.name}[{self.distance}]"

    def config(self) -> dict:
        out = {"name": self.name, "label": self.label, "direction": self.direction}
        if self.name not in ("emb", "betweenness", "constraint", "random"):
            out["distance"] = str(self.distance)
        if self.name == "parametric":
            out.update(alpha=self.params.alpha, b=self.params.b, c=self.params.c)
        if self.name in ("rec", "twohop"):
            out["k"] = self.k
        if self.name == "twohop":
            out["top"] = self.top
        if self.name == "random":
            out["seed"] = self.seed
        return out

    def score(self, g: EgoNetwork, salt: int = 0) -> ScoreTable:
        if self.name == "emb":
            return embeddedness_table(g)
        if self.name == "betweenness":
            return baselines.betweenness_scores(g)
        if self.name == "constraint":
            return baselines.constraint_scores(g)
        if self.name == "random":
            rng = np.random.Generator(np.random.PCG64([self.seed, salt, zlib.crc32(g.center.encode())]))
            return ScoreTable("random", g, tuple(float(x) for x in rng.random(g.n)))
        if self.name == "twohop":
            raise ValueError("the two-hop measure scores instances, not single networks")
        prof = DispersionProfile(g, self.distance)
        meta = {"distance": str(self.distance)}
        if self.name == "disp":
            return ScoreTable("disp", g, tuple(prof.disp), meta)
        if self.name == "norm":
            return ScoreTable("norm", g, tuple(prof.normalized()), meta)
        if self.name == "parametric":
            return ScoreTable("parametric", g, tuple(prof.parametric(self.params)), meta)
        return ScoreTable(f"rec@{self.k}", g, tuple(prof.recursive(self.k)[-1]), {**meta, "iteration": self.k})

    def predict(self, inst: Instance, salt: int = 0) -> Prediction:
        if self.name == "twohop":
            nets = {}
            forward = self._rec(inst.network)
            for v, _ in rank(forward).ranked[: self.top]:
                net = inst.friend_network(v)
                if net is not None:
                    nets[v] = net
            return two_hop_predict(inst, nets, self.top, self.distance, self.k, forward=forward)
        return rank(self.score(inst.network, salt), self.direction)

    def _rec(self, g: EgoNetwork) -> ScoreTable:
        return replace(self, name="rec").score(g)


def parse_measure(name: str, distance: str | None = None, params: str | None = None, k: int = 3,
                  top: int = TWO_HOP_TOP, seed: int = 0) -> Measure:
    """Build a measure from CLI-style text; ``params`` is ``alpha=..,b=..,c=..``."""
    spec = DistanceSpec.parse(distance) if distance else DEFAULT_SPEC
    p = ParametricParams()
    if params:
        kw = {}
        for item in params.split(","):
            key, sep, val = item.partition("=")
            if not sep or key.strip() not in ("alpha", "b", "c"):
                raise ValueError(f"bad parametric option {item!r}")
            kw[key.strip()] = float(val)
        p = replace(p, **kw)
    return Measure(name, spec, p, k, top, seed)


# ---------------------------------------------------------------------------
# Two-hop heuristic


def two_hop_predict(inst: Instance, neighbor_networks: Mapping[str, EgoNetwork], k: int = TWO_HOP_TOP,
                    spec: DistanceSpec = DEFAULT_SPEC, iterations: int = 3,
                    forward: ScoreTable | None = None) -> Prediction:
    """Re-rank the center's top-``k`` friends by ``min(rec(u,v), rec(v,u))``.

    ``rec(v,u)`` is computed in ``v``'s own ego network. Candidates without a
    network get a reverse score of 0; with no reverse networks at all the
    forward ranking of the top ``k`` is returned with a warning.
    """
    g = inst.network
    if forward is None:
        forward = ScoreTable("rec", g, tuple(DispersionProfile(g, spec).recursive(iterations)[-1]))
    emb = embeddedness_all(g)
    top = rank(forward, "max", emb).ranked[:k]
    warnings = []
    available = [v for v, _ in top if v in neighbor_networks]
    if not available:
        warnings.append("no reverse networks available; fell back to one-hop ranking")
        return Prediction(top, tuple(warnings))
    scores = {}
    for v, fwd in top:
        net = neighbor_networks.get(v)
        if net is None:
            warnings.append(f"missing reverse network for {v}")
            scores[v] = 0.0
            continue
        rev = DispersionProfile(net, spec).recursive(iterations)[-1][net.neighbor_index(g.center)]
        scores[v] = min(fwd, rev)
    idx = {v: g.neighbor_index(v) for v in scores}
    order = sorted(scores, key=lambda v: (-scores[v], -emb[idx[v]], idx[v]))
    return Prediction(tuple((v, scores[v]) for v in order), tuple(warnings))


# ---------------------------------------------------------------------------
# Evaluation


@dataclass(frozen=True)
class Slice:
    name: str
    predicate: Callable[[Instance], bool]

    @classmethod
    def all(cls) -> "Slice":
        return cls("all", _always)

    @classmethod
    def tag(cls, key: str, value: str) -> "Slice":
        return cls(f"{key}={value}", _TagEquals(key, value))


def _always(inst: Instance) -> bool:
    return True


@dataclass(frozen=True)
class _TagEquals:
    key: str
    value: str

    def __call__(self, inst: Instance) -> bool:
        return inst.tags.get(self.key) == self.value


@dataclass(frozen=True)
class EvalRow:
    measure: str
    slice: str
    n_instances: int
    n_correct: int
    n_hits: int

    @property
    def precision_at_1(self) -> float | None:
        return self.n_correct / self.n_instances if self.n_instances else None

    @property
    def hitset_precision_at_1(self) -> float | None:
        return self.n_hits / self.n_instances if self.n_instances else None


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[EvalRow, ...]
    config: dict = field(default_factory=dict)

    def row(self, measure: str, slice_name: str = "all") -> EvalRow:
        for r in self.rows:
            if r.slice == slice_name and (r.measure == measure):
                return r
        raise KeyError((measure, slice_name))

    def precision(self, measure: str, slice_name: str = "all") -> float | None:
        return self.row(measure, slice_name).precision_at_1


def _choose(args: tuple[Sequence[Measure], Instance, int]) -> list[str]:
    measures, inst, salt = args
    return [m.predict(inst, salt).chosen for m in measures]


def default_workers() -> int:
    env = os.environ.get("DISPERSION_WORKERS")
    return max(1, int(env)) if env else 1


def choices(corpus: Sequence[Instance], measures: Sequence[Measure], workers: int | None = None) -> list[list[str]]:
    """Top-ranked neighbor under each measure, per instance, in corpus order."""
    workers = default_workers() if workers is None else workers
    jobs = [(tuple(measures), inst, i) for i, inst in enumerate(corpus)]
    if workers <= 1 or len(jobs) < 2:
        return [_choose(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_choose, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def evaluate(corpus: Sequence[Instance], measures: Sequence[Measure] | Measure,
             slices: Iterable[Slice] = (), workers: int | None = None) -> EvalReport:
    """Precision at the first position (and the partner-or-family variant) per measure and slice."""
    if not corpus:
        raise ValueError("cannot evaluate an empty corpus")
    if isinstance(measures, Measure):
        measures = [measures]
    slices = [Slice.all(), *slices]
    chosen = choices(corpus, measures, workers)
    rows = []
    for mi, m in enumerate(measures):
        for sl in slices:
            n = correct = hits = 0
            for inst, picks in zip(corpus, chosen):
                if not sl.predicate(inst):
                    continue
                n += 1
                c = picks[mi]
                correct += c == inst.partner
                hits += c == inst.partner or c in inst.family
            rows.append(EvalRow(m.label, sl.name, n, correct, hits))
    config = {"measures": [m.config() for m in measures], "slices": [s.name for s in slices],
              "tie_break": "score, then embeddedness desc, then id asc"}
    return EvalReport(tuple(rows), config)


# ---------------------------------------------------------------------------
# Parametric sweep


@dataclass(frozen=True)
class SweepResult:
    points: tuple[tuple[float, float, float, float], ...]  # (alpha, b, c, precision)

    def curve(self) -> list[tuple[float, float, float, float]]:
        """Per alpha: (alpha, best precision over (b, c), best b, best c); first grid point wins ties."""
        best: dict[float, tuple[float, float, float, float]] = {}
        for a, b, c, prec in self.points:
            if a not in best or prec > best[a][1]:
                best[a] = (a, prec, b, c)
        return list(best.values())

    def best_alpha(self) -> float:
        return max(self.curve(), key=lambda row: row[1])[0]


def sweep_parametric(corpus: Sequence[Instance], spec: DistanceSpec, alphas: Sequence[float],
                     bs: Sequence[float], cs: Sequence[float]) -> SweepResult:
    if not (corpus and alphas and bs and cs):
        raise ValueError("sweep needs a nonempty corpus and nonempty grids")
    profiles = [(DispersionProfile(inst.network, spec), inst.network.neighbor_index(inst.partner)) for inst in corpus]
    points = []
    for a in alphas:
        for b in bs:
            for c in cs:
                p = ParametricParams(a, b, c)
                correct = sum(_best(prof.parametric(p), prof.emb) == target for prof, target in profiles)
                points.append((a, b, c, correct / len(corpus)))
    return SweepResult(tuple(points))


def parse_grid(text: str) -> list[float]:
    """``A0:A1:STEP`` (inclusive of A1 up to rounding) or a comma-separated list."""
    if ":" not in text:
        return [float(x) for x in text.split(",") if x.strip()]
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid {text!r} must look like START:STOP:STEP")
    lo, hi, step = (float(x) for x in parts)
    if step <= 0 or hi < lo:
        raise ValueError(f"grid {text!r} needs STOP >= START and STEP > 0")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 12) for i in range(count)]
