"""Structural feature matrix for external learners: 48 dispersion features and 4 transforms each."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from .dispersion import DispersionProfile
from .distances import SIX_SPECS, SPRING, DistanceSpec
from .graph import EgoNetwork
from .ranking import Instance

SCHEMA_VERSION = 1
REC_ITERATIONS = range(2, 8)
TRANSFORMS = ("", "_z", "_rank", "_ranknorm")


def feature_specs(spring_seed: int = 0) -> tuple[DistanceSpec, ...]:
    return tuple(replace(s, seed=spring_seed) if s.kind == SPRING else s for s in SIX_SPECS)


def raw_columns() -> list[str]:
    cols = [f"{kind}_{s.slug}" for s in SIX_SPECS for kind in ("abs", "norm")]
    cols += [f"rec_i{k}_{s.slug}" for s in SIX_SPECS for k in REC_ITERATIONS]
    return cols


@dataclass
class FeatureMatrix:
    columns: list[str]
    centers: list[str]
    candidates: list[str]
    labels: list[int]
    values: np.ndarray  # (rows, columns)
    groups: list[int]  # instance index per row; transforms operate within a group
    meta: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.columns.index(name)]


def structural_features(g: EgoNetwork, spring_seed: int = 0) -> np.ndarray:
    """Per-neighbor feature rows, in dense neighbor order, columns as ``raw_columns()``."""
    base, rec = [], []
    for spec in feature_specs(spring_seed):
        prof = DispersionProfile(g, spec)
        base += [prof.disp, prof.normalized()]
        states = prof.recursive(max(REC_ITERATIONS))
        rec += [states[k - 1] for k in REC_ITERATIONS]
    return np.array(base + rec, dtype=float).T


def _features_job(args: tuple[EgoNetwork, int]) -> np.ndarray:
    return structural_features(*args)


def feature_matrix(corpus: Sequence[Instance], spring_seed: int = 0, workers: int = 1) -> FeatureMatrix:
    jobs = [(inst.network, spring_seed) for inst in corpus]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_features_job, jobs))
    else:
        blocks = [_features_job(j) for j in jobs]
    centers, candidates, labels, groups = [], [], [], []
    for gi, inst in enumerate(corpus):
        g = inst.network
        centers += [g.center] * g.n
        candidates += list(g.neighbors)
        labels += [int(v == inst.partner) for v in g.neighbors]
        groups += [gi] * g.n
    values = np.vstack(blocks) if blocks else np.zeros((0, len(raw_columns())))
    meta = {"schema_version": SCHEMA_VERSION, "transformed": False, "spring_seed": spring_seed,
            "distance_specs": [str(s) for s in feature_specs(spring_seed)],
            "rec_iterations": list(REC_ITERATIONS)}
    return FeatureMatrix(raw_columns(), centers, candidates, labels, values, groups, meta)


def _group_slices(groups: list[int]) -> list[slice]:
    out, start = [], 0
    for i in range(1, len(groups) + 1):
        if i == len(groups) or groups[i] != groups[start]:
            out.append(slice(start, i))
            start = i
    return out


def transform(m: FeatureMatrix) -> FeatureMatrix:
    """Expand each raw column into raw, z-score, rank and rank / neighbor count.

    Z-scores use the population standard deviation within a group (zeros when
    the group's values are all equal). Rank 1 is the highest value; ties share their average rank.
    """
    if m.meta.get("transformed"):
        raise ValueError("matrix is already transformed")
    rows, ncol = m.values.shape
    out = np.empty((rows, 4 * ncol))
    for sl in _group_slices(m.groups):
        block = m.values[sl]
        n = block.shape[0]
        # z is scale-free; scaling by max |x| first keeps tiny or huge groups from under/overflowing
        scale = np.abs(block).max(axis=0)
        scaled = np.divide(block, scale, out=np.zeros_like(block), where=scale > 0)
        sd = scaled.std(axis=0)
        z = np.divide(scaled - scaled.mean(axis=0), sd, out=np.zeros_like(block),
                      where=(np.ptp(block, axis=0) > 0) & (sd > 0))
        ranks = rankdata(-block, method="average", axis=0)
        out[sl, 0::4] = block
        out[sl, 1::4] = z
        out[sl, 2::4] = ranks
        out[sl, 3::4] = ranks / n
    cols = [c + t for c in m.columns for t in TRANSFORMS]
    return FeatureMatrix(cols, m.centers, m.candidates, m.labels, out, m.groups, {**m.meta, "transformed": True})
