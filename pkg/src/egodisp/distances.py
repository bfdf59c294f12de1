"""Distance functions between common neighbors, and the graph context they need.

Four kinds are supported: hop thresholds (``threshold:r``), different connected
component, different Louvain community and Euclidean distance in a spring
layout. The hop and component kinds are evaluated in ``G_u - {u, v}`` for each
``v``. The community and spring kinds read a context computed once on
``G_u - {u}`` and shared by every ``v`` of the network.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .graph import EgoNetwork, GraphView, common_mask, iter_bits, without_center

THRESHOLD = "threshold"
COMPONENT = "component"
COMMUNITY = "community"
SPRING = "spring"

SPRING_ITERATIONS = 50


@dataclass(frozen=True)
class DistanceSpec:
    kind: str
    r: int = 3
    iterations: int = SPRING_ITERATIONS
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in (THRESHOLD, COMPONENT, COMMUNITY, SPRING):
            raise ValueError(f"unknown distance kind {self.kind!r}")
        if self.kind == THRESHOLD and self.r < 2:
            raise ValueError("threshold distance needs r >= 2")
        if self.kind == SPRING and self.iterations < 1:
            raise ValueError("spring layout needs at least one iteration")

    @property
    def standard(self) -> bool:
        return self.kind != THRESHOLD or self.r in (2, 3, 4)

    @property
    def needs_context(self) -> bool:
        return self.kind in (COMMUNITY, SPRING)

    @property
    def is_indicator(self) -> bool:
        return self.kind != SPRING

    def __str__(self) -> str:
        if self.kind == THRESHOLD:
            return f"threshold:{self.r}"
        if self.kind == SPRING:
            return f"spring:iters={self.iterations},seed={self.seed}"
        return self.kind

    @property
    def slug(self) -> str:
        """Short name used in feature column names."""
        return f"threshold{self.r}" if self.kind == THRESHOLD else self.kind

    @classmethod
    def parse(cls, text: str) -> "DistanceSpec":
        text = text.strip()
        m = re.fullmatch(r"threshold:(\d+)", text)
        if m:
            return cls(THRESHOLD, r=int(m.group(1)))
        if text in (COMPONENT, COMMUNITY, SPRING):
            return cls(text)
        m = re.fullmatch(r"spring:(.+)", text)
        if m:
            kw = {}
            for item in m.group(1).split(","):
                key, sep, val = item.partition("=")
                if not sep or key not in ("iters", "seed"):
                    raise ValueError(f"bad spring option {item!r}")
                kw["iterations" if key == "iters" else "seed"] = int(val)
            return cls(SPRING, **kw)
        raise ValueError(f"cannot parse distance spec {text!r}")


DEFAULT_SPEC = DistanceSpec(THRESHOLD, r=3)

# The six distance functions of the structural feature set, in column order.
SIX_SPECS = (
    DistanceSpec(THRESHOLD, r=2),
    DistanceSpec(THRESHOLD, r=3),
    DistanceSpec(THRESHOLD, r=4),
    DistanceSpec(COMPONENT),
    DistanceSpec(COMMUNITY),
    DistanceSpec(SPRING),
)


@dataclass(frozen=True)
class Partition:
    """Community id per node, dense ``0..k-1``, keyed by dense network index."""

    labels: dict[int, int]

    @property
    def count(self) -> int:
        return len(set(self.labels.values()))

    def __getitem__(self, i: int) -> int:
        return self.labels[i]


@dataclass(frozen=True)
class PlanarLayout:
    positions: dict[int, tuple[float, float]]

    def distance(self, s: int, t: int) -> float:
        (xs, ys), (xt, yt) = self.positions[s], self.positions[t]
        return math.hypot(xs - xt, ys - yt)


Context = Union[Partition, PlanarLayout, None]


def connected_components(view: GraphView) -> Partition:
    """Component labels, numbered in order of each component's smallest index."""
    labels: dict[int, int] = {}
    for start in view.nodes():
        if start in labels:
            continue
        cid = len(set(labels.values())) if labels else 0
        reach = _reach(view.network, view.mask, start, None)
        for x in iter_bits(reach):
            labels[x] = cid
    return Partition(labels)


def _reach(g: EgoNetwork, mask: int, s: int, hops: int | None) -> int:
    """Bitset of nodes within ``hops`` steps of ``s`` inside ``mask`` (None = unbounded)."""
    adj = g.adj
    reach = frontier = 1 << s
    step = 0
    while frontier and (hops is None or step < hops):
        nxt = 0
        for x in iter_bits(frontier):
            nxt |= adj[x]
        frontier = nxt & mask & ~reach
        reach |= frontier
        step += 1
    return reach


def prepare_context(g: EgoNetwork, spec: DistanceSpec) -> Context:
    """Build the shared per-network context a spec needs, or None."""
    if spec.kind == COMMUNITY:
        return louvain(without_center(g))
    if spec.kind == SPRING:
        return spring_layout(without_center(g), spec.iterations, spec.seed)
    return None


def _check_context(spec: DistanceSpec, ctx: Context) -> None:
    if spec.kind == COMMUNITY and not isinstance(ctx, Partition):
        raise ValueError("community distance needs a Partition context")
    if spec.kind == SPRING and not isinstance(ctx, PlanarLayout):
        raise ValueError("spring distance needs a PlanarLayout context")


def pairwise_distance(g: EgoNetwork, v: str | int, spec: DistanceSpec, s: str | int, t: str | int,
                      ctx: Context = None) -> float:
    """Distance ``d_v(s, t)`` between two common neighbors of the center and ``v``."""
    iv, i_s, i_t = (g.neighbor_index(x) for x in (v, s, t))
    cmask = common_mask(g, iv)
    if not (cmask >> i_s & 1 and cmask >> i_t & 1) or i_s == i_t:
        raise ValueError("s and t must be distinct common neighbors of the center and v")
    _check_context(spec, ctx)
    if spec.kind == COMMUNITY:
        return float(ctx[i_s] != ctx[i_t])
    if spec.kind == SPRING:
        return ctx.distance(i_s, i_t)
    hops = spec.r - 1 if spec.kind == THRESHOLD else None
    reach = _reach(g, g.neighbor_mask & ~(1 << iv), i_s, hops)
    return float(not reach >> i_t & 1)


def dispersed_pairs(g: EgoNetwork, v: int, spec: DistanceSpec, ctx: Context = None) -> list[tuple[int, int, float]]:
    """All unordered pairs ``(s, t, d)`` with ``s < t`` in ``C_uv`` and nonzero distance."""
    _check_context(spec, ctx)
    members = list(iter_bits(common_mask(g, v)))
    out = []
    if len(members) < 2:
        return out
    if spec.kind == COMMUNITY:
        for a, s in enumerate(members):
            cs = ctx[s]
            out.extend((s, t, 1.0) for t in members[a + 1:] if ctx[t] != cs)
        return out
    if spec.kind == SPRING:
        for a, s in enumerate(members):
            for t in members[a + 1:]:
                d = ctx.distance(s, t)
                if d:
                    out.append((s, t, d))
        return out
    hops = spec.r - 1 if spec.kind == THRESHOLD else None
    mask = g.neighbor_mask & ~(1 << v)
    for a, s in enumerate(members[:-1]):
        reach = _reach(g, mask, s, hops)
        out.extend((s, t, 1.0) for t in members[a + 1:] if not reach >> t & 1)
    return out


# ---------------------------------------------------------------------------
# Louvain


def modularity(adjlist: list[list[int]], labels: list[int]) -> float:
    """Classic (resolution 1) modularity of an unweighted graph; 0 when edgeless."""
    m2 = sum(len(row) for row in adjlist)
    if m2 == 0:
        return 0.0
    internal: dict[int, int] = {}
    dsum: dict[int, int] = {}
    for i, row in enumerate(adjlist):
        c = labels[i]
        dsum[c] = dsum.get(c, 0) + len(row)
        internal[c] = internal.get(c, 0) + sum(1 for j in row if labels[j] == c)
    return sum(internal.get(c, 0) / m2 - (dsum[c] / m2) ** 2 for c in dsum)


def _one_level(nbrs: list[dict[int, int]], loops: list[int], m: int) -> tuple[list[int], bool]:
    """Local-moving phase on a weighted graph; returns (community per node, moved).

    Gains are compared as exact integers scaled by ``2 m^2``. ``loops[i]`` is
    the self-loop weight carried by an aggregated node.
    """
    k = len(nbrs)
    deg = [2 * loops[i] + sum(nbrs[i].values()) for i in range(k)]
    comm = list(range(k))
    tot = deg[:]
    moved_any = False
    improved = True
    while improved:
        improved = False
        for i in range(k):
            ci = comm[i]
            links: dict[int, int] = {}
            for j, w in nbrs[i].items():
                links[comm[j]] = links.get(comm[j], 0) + w
            tot[ci] -= deg[i]
            own = 2 * m * links.get(ci, 0) - tot[ci] * deg[i]
            best, best_gain = ci, own
            for c in sorted(links):
                gain = 2 * m * links[c] - tot[c] * deg[i]
                if gain > best_gain:
                    best, best_gain = c, gain
            tot[best] += deg[i]
            if best != ci:
                comm[i] = best
                improved = moved_any = True
    return comm, moved_any


def _relabel(comm: list[int]) -> list[int]:
    seen: dict[int, int] = {}
    return [seen.setdefault(c, len(seen)) for c in comm]


def louvain(view: GraphView, trace: list[float] | None = None) -> Partition:
    """Greedy modularity optimization with aggregation passes (Louvain method).

    Nodes are swept in ascending index; a node joins the neighboring community
    with the largest strictly positive improvement, ties going to the smallest
    community id. Passes repeat until no node moves. If ``trace`` is given, the
    modularity after each aggregation level is appended to it.
    """
    order, adjlist = view.compact()
    k = len(order)
    membership = list(range(k))
    m = sum(len(row) for row in adjlist) // 2
    if m == 0:
        return Partition({x: c for x, c in zip(order, membership)})

    nbrs = [{j: 1 for j in row} for row in adjlist]
    loops = [0] * k
    if trace is not None:
        trace.append(modularity(adjlist, membership))
    while True:
        comm, moved = _one_level(nbrs, loops, m)
        if not moved:
            break
        comm = _relabel(comm)
        membership = [comm[c] for c in membership]
        if trace is not None:
            trace.append(modularity(adjlist, membership))
        size = max(comm) + 1
        new_nbrs: list[dict[int, int]] = [{} for _ in range(size)]
        new_loops = [0] * size
        for i, row in enumerate(nbrs):
            ci = comm[i]
            new_loops[ci] += loops[i]
            for j, w in row.items():
                cj = comm[j]
                if ci == cj:
                    if i < j:
                        new_loops[ci] += w
                else:
                    new_nbrs[ci][cj] = new_nbrs[ci].get(cj, 0) + w
        nbrs, loops = new_nbrs, new_loops
    return Partition({x: c for x, c in zip(order, _relabel(membership))})


# ---------------------------------------------------------------------------
# Spring layout


def spring_layout(view: GraphView, iterations: int = SPRING_ITERATIONS, seed: int = 0) -> PlanarLayout:
    """Fruchterman-Reingold layout in the unit square.

    Optimal distance ``k = sqrt(1/n)``; repulsion ``k^2/d`` between all pairs,
    attraction ``d^2/k`` along edges; per-step displacement capped by a
    temperature that starts at a tenth of the layout extent and decays
    linearly to zero.
    """
    order, adjlist = view.compact()
    n = len(order)
    rng = np.random.Generator(np.random.PCG64(seed))
    pos = rng.random((n, 2))
    if n > 1:
        pos = fruchterman_reingold(pos, adjlist, iterations)
    return PlanarLayout({x: (float(p[0]), float(p[1])) for x, p in zip(order, pos)})


def fruchterman_reingold(pos: np.ndarray, adjlist: list[list[int]], iterations: int) -> np.ndarray:
    n = len(pos)
    A = np.zeros((n, n))
    for i, row in enumerate(adjlist):
        A[i, row] = 1.0
    k = math.sqrt(1.0 / n)
    t = max(np.ptp(pos[:, 0]), np.ptp(pos[:, 1])) * 0.1
    dt = t / (iterations + 1)
    pos = pos.copy()
    for _ in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.maximum(np.sqrt((delta ** 2).sum(axis=-1)), 0.01)
        force = k * k / dist ** 2 - A * dist / k
        disp = (delta * force[:, :, None]).sum(axis=1)
        length = np.maximum(np.sqrt((disp ** 2).sum(axis=-1)), 0.01)
        pos += disp * (t / length)[:, None]
        t -= dt
    return pos
