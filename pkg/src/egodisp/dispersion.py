"""Absolute, normalized, parametric and recursive dispersion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from .distances import DEFAULT_SPEC, Context, DistanceSpec, dispersed_pairs, prepare_context
from .graph import EgoNetwork, common_mask, embeddedness_all, iter_bits, popcount

OVERFLOW_CAP = 1e300


@dataclass(frozen=True)
class ParametricParams:
    alpha: float = 0.61
    b: float = 0.0
    c: float = 5.0

    def __post_init__(self) -> None:
        if self.b < 0 or self.c < 0:
            raise ValueError("b and c must be non-negative")


@dataclass(frozen=True)
class RecursiveState:
    x: tuple[float, ...]
    iteration: int = 0

    @classmethod
    def initial(cls, n: int) -> "RecursiveState":
        return cls((1.0,) * n, 0)


@dataclass(frozen=True)
class ScoreTable:
    """One score per neighbor of ``network.center``, in dense index order."""

    measure: str
    network: EgoNetwork
    scores: tuple[float, ...]
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.scores) != self.network.n:
            raise ValueError("score table needs exactly one score per neighbor")

    def __getitem__(self, node: str) -> float:
        return self.scores[self.network.neighbor_index(node)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.network.neighbors, self.scores))


class DispersionProfile:
    """Embeddedness and nonzero-distance pairs of ``C_uv`` for every neighbor ``v``.

    Built once per (network, distance spec); all dispersion measures and every
    recursive iteration read from it.
    """

    def __init__(self, g: EgoNetwork, spec: DistanceSpec = DEFAULT_SPEC, ctx: Context = None):
        if ctx is None and spec.needs_context:
            ctx = prepare_context(g, spec)
        self.network = g
        self.spec = spec
        self.ctx = ctx
        self.emb = embeddedness_all(g)
        self.members = [tuple(iter_bits(common_mask(g, v))) for v in range(g.n)]
        self.pairs = [dispersed_pairs(g, v, spec, ctx) for v in range(g.n)]
        self.disp = [math.fsum(d for _, _, d in p) for p in self.pairs]

    def normalized(self) -> list[float]:
        return [d / e if e else 0.0 for d, e in zip(self.disp, self.emb)]

    def parametric(self, p: ParametricParams) -> list[float]:
        return [_parametric(d, e, p) for d, e in zip(self.disp, self.emb)]

    def step(self, x: Sequence[float]) -> list[float]:
        out = []
        for v in range(self.network.n):
            e = self.emb[v]
            if not e:
                out.append(0.0)
                continue
            sq = sum(x[w] * x[w] for w in self.members[v])
            cross = sum(d * x[s] * x[t] for s, t, d in self.pairs[v])
            out.append((sq + 2.0 * cross) / e)
        return out

    def recursive(self, k: int = 3, cap: float = OVERFLOW_CAP) -> list[list[float]]:
        """States after iterations ``1..k``.

        Whenever the largest value exceeds ``cap`` the state is divided by it.
        The update is homogeneous of degree 2, so this rescales every later
        state uniformly and leaves all rankings unchanged.
        """
        x = [1.0] * self.network.n
        states = []
        for _ in range(k):
            y = self.step(x)
            if not math.isfinite(max(y, default=0.0)):
                x = _rescale(x)
                y = self.step(x)
            x = _rescale(y) if max(y, default=0.0) > cap else y
            states.append(x)
        return states


def _rescale(x: list[float]) -> list[float]:
    top = max(x)
    return [xi / top for xi in x]


def _parametric(disp: float, emb: int, p: ParametricParams) -> float:
    num_base = disp + p.b
    den = emb + p.c
    if num_base == 0:
        return 0.0
    if den == 0:
        return math.inf
    return num_base ** p.alpha / den


def _single(g: EgoNetwork, v: str | int, spec: DistanceSpec, ctx: Context) -> tuple[float, int]:
    iv = g.neighbor_index(v)
    pairs = dispersed_pairs(g, iv, spec, ctx)
    return math.fsum(d for _, _, d in pairs), popcount(common_mask(g, iv))


def absolute_dispersion(g: EgoNetwork, v: str | int, spec: DistanceSpec = DEFAULT_SPEC, ctx: Context = None) -> float:
    """Sum of ``d_v(s, t)`` over unordered pairs of common neighbors of the center and ``v``."""
    return _single(g, v, spec, ctx)[0]


def normalized_dispersion(g: EgoNetwork, v: str | int, spec: DistanceSpec = DEFAULT_SPEC, ctx: Context = None) -> float:
    disp, emb = _single(g, v, spec, ctx)
    return disp / emb if emb else 0.0


def parametric_score(g: EgoNetwork, v: str | int, spec: DistanceSpec = DEFAULT_SPEC, ctx: Context = None,
                     p: ParametricParams = ParametricParams()) -> float:
    """``(disp + b)^alpha / (emb + c)``; +inf when only the denominator vanishes."""
    disp, emb = _single(g, v, spec, ctx)
    return _parametric(disp, emb, p)


def recursive_step(g: EgoNetwork, spec: DistanceSpec, ctx: Context, state: RecursiveState,
                   profile: DispersionProfile | None = None) -> RecursiveState:
    """One synchronous update of every ``x_v`` from the previous state."""
    if len(state.x) != g.n:
        raise ValueError("state must hold one value per neighbor")
    profile = profile or DispersionProfile(g, spec, ctx)
    return RecursiveState(tuple(profile.step(state.x)), state.iteration + 1)


def recursive_dispersion(g: EgoNetwork, spec: DistanceSpec = DEFAULT_SPEC, ctx: Context = None, k: int = 3,
                         cap: float = OVERFLOW_CAP) -> ScoreTable:
    if k < 1:
        raise ValueError("recursive dispersion needs k >= 1")
    x = DispersionProfile(g, spec, ctx).recursive(k, cap)[-1]
    return ScoreTable(f"rec@{k}", g, tuple(x), {"distance": str(spec), "iteration": k})


def embeddedness_table(g: EgoNetwork) -> ScoreTable:
    return ScoreTable("emb", g, tuple(float(e) for e in embeddedness_all(g)))


def dispersion_table(g: EgoNetwork, spec: DistanceSpec = DEFAULT_SPEC, ctx: Context = None) -> ScoreTable:
    prof = DispersionProfile(g, spec, ctx)
    return ScoreTable("disp", g, tuple(prof.disp), {"distance": str(spec)})


def normalized_table(g: EgoNetwork, spec: DistanceSpec = DEFAULT_SPEC, ctx: Context = None) -> ScoreTable:
    prof = DispersionProfile(g, spec, ctx)
    return ScoreTable("norm", g, tuple(prof.normalized()), {"distance": str(spec)})


def parametric_table(g: EgoNetwork, spec: DistanceSpec = DEFAULT_SPEC, ctx: Context = None,
                     p: ParametricParams = ParametricParams()) -> ScoreTable:
    prof = DispersionProfile(g, spec, ctx)
    return ScoreTable("parametric", g, tuple(prof.parametric(p)),
                      {"distance": str(spec), "alpha": p.alpha, "b": p.b, "c": p.c})
