"""Bridging baselines on G_u - {u}: node betweenness and Burt's network constraint."""

from __future__ import annotations

from collections import deque

from .dispersion import ScoreTable
from .graph import EgoNetwork, without_center

BETWEENNESS = "betweenness"
CONSTRAINT = "constraint"

# Predictor direction per baseline: brokers have high betweenness, low constraint.
DIRECTION = {BETWEENNESS: "max", CONSTRAINT: "min"}

ISOLATED_CONSTRAINT = 2.0


def betweenness_scores(g: EgoNetwork) -> ScoreTable:
    """Unnormalized shortest-path betweenness (Brandes accumulation), each pair counted once."""
    order, adjlist = without_center(g).compact()
    n = len(order)
    cb = [0.0] * n
    for s in range(n):
        stack = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        sigma[s] = 1
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            stack.append(x)
            for y in adjlist[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    queue.append(y)
                if dist[y] == dist[x] + 1:
                    sigma[y] += sigma[x]
                    preds[y].append(x)
        delta = [0.0] * n
        while stack:
            y = stack.pop()
            for x in preds[y]:
                delta[x] += sigma[x] / sigma[y] * (1.0 + delta[y])
            if y != s:
                cb[y] += delta[y]
    return ScoreTable(BETWEENNESS, g, tuple(c / 2.0 for c in cb), {"direction": DIRECTION[BETWEENNESS]})


def constraint_scores(g: EgoNetwork) -> ScoreTable:
    """Burt's constraint with equal tie weights; isolated nodes get 2.0."""
    view = without_center(g)
    out = []
    for i in range(g.n):
        nbrs = view.neighbors(i)
        if not nbrs:
            out.append(ISOLATED_CONSTRAINT)
            continue
        p_i = 1.0 / len(nbrs)
        row_i = view.row(i)
        total = 0.0
        for j in nbrs:
            indirect = sum(p_i / view.degree(q) for q in view.neighbors(j) if row_i >> q & 1 and q != i)
            total += (p_i + indirect) ** 2
        out.append(total)
    return ScoreTable(CONSTRAINT, g, tuple(out), {"direction": DIRECTION[CONSTRAINT]})
