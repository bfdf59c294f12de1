"""Synthetic ego networks with planted social foci and a planted partner.

All randomness comes from PCG64 uniform doubles (``Generator.random()``,
53-bit, ``(next_uint64 >> 11) * 2**-53``), consumed in the order documented in
``generate_instance``. Bernoulli draws are ``U < p`` and integer draws on
``[lo, hi]`` are ``lo + floor(U * (hi - lo + 1))``, so a corpus can be
reproduced without numpy.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

import numpy as np

from .graph import build_ego_network
from .ranking import Instance

PRESET_VERSION = 1
MAX_RETRIES = 100
CENTER = "u"
PARTNER = "p"


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GenParams:
    n_foci: int = 4
    focus_size: tuple[int, int] = (15, 40)
    p_in: float = 0.3
    p_out: float = 0.005
    partner_foci: int = 3
    partner_attach: float = 0.4
    seed: int = 0
    # The first ``hubs`` members of each focus link to each focus mate with
    # probability ``hub_attach`` instead of ``p_in``.
    hubs: int = 0
    hub_attach: float = 0.9
    # Non-partner friends attached across foci exactly like the partner.
    bridgers: int = 0
    # Two-hop corpora: the partner gets foci of its own (mirrored attachment)
    # and every other friend of the center gets a private focus.
    mutual: bool = False

    def __post_init__(self) -> None:
        lo, hi = self.focus_size
        if self.n_foci < 2:
            raise ValueError("need at least two foci")
        if not 1 <= lo <= hi:
            raise ValueError("focus_size must satisfy 1 <= lo <= hi")
        if not 0 <= self.p_out < self.p_in <= 1:
            raise ValueError("need 0 <= p_out < p_in <= 1")
        if not 2 <= self.partner_foci <= self.n_foci:
            raise ValueError("need 2 <= partner_foci <= n_foci")
        if not 0 < self.partner_attach <= 1:
            raise ValueError("partner_attach must be in (0, 1]")
        if self.bridgers < 0:
            raise ValueError("bridgers must be >= 0")
        if self.hubs < 0 or not 0 <= self.hub_attach <= 1:
            raise ValueError("need hubs >= 0 and 0 <= hub_attach <= 1")

    def tags(self) -> dict[str, str]:
        d = asdict(self)
        d["focus_size"] = f"{self.focus_size[0]}-{self.focus_size[1]}"
        return {k: str(v).lower() if isinstance(v, bool) else str(v) for k, v in d.items()}


PRESETS: dict[str, GenParams] = {
    "paper-like": GenParams(hubs=1),
    "random50": GenParams(n_foci=7, focus_size=(7, 7), p_in=0.5, p_out=0.02, partner_foci=2,
                          partner_attach=0.3),
    "mutual": GenParams(n_foci=4, focus_size=(10, 25), p_in=0.3, p_out=0.01, partner_foci=2,
                        partner_attach=0.3, bridgers=2, mutual=True),
}


class _Draws:
    def __init__(self, seed: int):
        self._rng = np.random.Generator(np.random.PCG64(seed))

    def uniform(self) -> float:
        return float(self._rng.random())

    def integer(self, lo: int, hi: int) -> int:
        return lo + math.floor(self.uniform() * (hi - lo + 1))

    def bernoulli(self, p: float) -> bool:
        return self.uniform() < p

    def sample(self, population: int, k: int) -> list[int]:
        """``k`` distinct values from ``range(population)`` by partial Fisher-Yates."""
        pool = list(range(population))
        for i in range(k):
            j = i + math.floor(self.uniform() * (population - i))
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]


def _foci(draws: _Draws, p: GenParams, prefix: str) -> list[list[str]]:
    sizes = [draws.integer(*p.focus_size) for _ in range(p.n_foci)]
    return [[f"{prefix}{f}n{i:03d}" for i in range(size)] for f, size in enumerate(sizes)]


def _cluster_edges(draws: _Draws, foci: list[list[str]], p: GenParams, edges: list[tuple[str, str]]) -> None:
    for members in foci:
        for i, a in enumerate(members):
            prob = p.hub_attach if i < p.hubs else p.p_in
            edges.extend((a, b) for b in members[i + 1:] if draws.bernoulli(prob))
    for f, fm in enumerate(foci):
        for gm in foci[f + 1:]:
            edges.extend((a, b) for a in fm for b in gm if draws.bernoulli(p.p_out))


def _attach(draws: _Draws, node: str, foci: list[list[str]], p: GenParams) -> list[tuple[str, str]] | None:
    """Link ``node`` into ``partner_foci`` distinct foci; None if it lands in fewer than two."""
    chosen = sorted(draws.sample(len(foci), p.partner_foci))
    links = []
    touched = 0
    for f in chosen:
        hit = [(node, m) for m in foci[f] if draws.bernoulli(p.partner_attach)]
        touched += bool(hit)
        links.extend(hit)
    return links if touched >= 2 else None


def generate_instance(p: GenParams) -> Instance:
    """One labeled ego network centered on ``u`` with planted partner ``p``.

    Draw order: focus sizes; within-focus edges (focus by focus, pairs in
    member order); cross-focus edges (focus pairs in order); partner foci by
    partial Fisher-Yates; partner links focus by focus. An attempt in which
    the partner touches fewer than two foci restarts the partner draws.
    Bridgers are then attached one at a time by the same procedure, but into
    every focus. In mutual mode the partner's own foci, the center's mirrored
    links into them, and one private focus per other friend of the center
    follow; a bridger's private focus also links to the bridger's contacts in
    the center's foci, so those contacts are only far apart from the center's
    side.
    """
    draws = _Draws(p.seed)
    foci = _foci(draws, p, "f")
    edges: list[tuple[str, str]] = []
    _cluster_edges(draws, foci, p, edges)
    links = _retry(lambda: _attach(draws, PARTNER, foci, p))
    edges.extend(links)
    friends = [m for members in foci for m in members]
    bridged = {}
    wide = replace(p, partner_foci=p.n_foci)
    for b in range(p.bridgers):
        node = f"b{b:02d}"
        links = _retry(lambda: _attach(draws, node, foci, wide))
        edges.extend(links)
        bridged[node] = [m for _, m in links]
        friends.append(node)

    if p.mutual:
        own = _foci(draws, p, "g")
        _cluster_edges(draws, own, p, edges)
        edges.extend((PARTNER, m) for members in own for m in members)
        mirrored = _retry(lambda: _attach(draws, CENTER, own, p))
        edges.extend(mirrored)
        friends += [m for _, m in mirrored]
        for v in friends:
            size = draws.integer(*p.focus_size)
            private = [f"{v}x{i:03d}" for i in range(size)]
            edges.extend((v, x) for x in private)
            for i, a in enumerate(private):
                edges.extend((a, b) for b in private[i + 1:] if draws.bernoulli(p.p_in))
            for m in bridged.get(v, ()):
                edges.extend((m, x) for x in private if draws.bernoulli(p.p_in))

    edges.extend((CENTER, m) for m in friends)
    edges.append((CENTER, PARTNER))
    edges = sorted({(a, b) if a < b else (b, a) for a, b in edges})
    g = build_ego_network(CENTER, edges)
    return Instance(g, PARTNER, frozenset(), p.tags(), tuple(edges) if p.mutual else None)


def _retry(attempt):
    for _ in range(MAX_RETRIES):
        out = attempt()
        if out is not None:
            return out
    raise GenerationError(f"partner stayed within one focus after {MAX_RETRIES} attempts")


def instance_seed(seed: int, index: int) -> int:
    """Per-instance seed: first 64-bit word of SeedSequence([seed, index])."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def generate_corpus(p: GenParams, count: int, seed: int) -> list[Instance]:
    if count < 1:
        raise ValueError("count must be >= 1")
    return [generate_instance(replace(p, seed=instance_seed(seed, i))) for i in range(count)]
