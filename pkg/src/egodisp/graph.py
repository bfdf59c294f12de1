"""Immutable ego networks and the neighborhood primitives built on them.

Nodes carry external string ids. Inside one network, the neighbors of the
center get dense indices ``0..n-1`` in sorted id order and the center gets
index ``n``. Adjacency is stored as one Python-int bitset per node, which
keeps the pairwise intersections behind common neighbors and hop tests cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator


class EgoNetworkError(ValueError):
    """Raised for invalid construction input or out-of-domain node queries."""


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True, eq=False)
class EgoNetwork:
    """The subgraph induced on a center node and all of its neighbors."""

    center: str
    neighbors: tuple[str, ...]
    adj: tuple[int, ...]
    dropped_edges: int = 0
    _index: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self._index:
            index = {nid: i for i, nid in enumerate(self.neighbors)}
            index[self.center] = len(self.neighbors)
            object.__setattr__(self, "_index", index)

    @property
    def n(self) -> int:
        """Number of neighbors of the center."""
        return len(self.neighbors)

    @property
    def center_index(self) -> int:
        return len(self.neighbors)

    @property
    def neighbor_mask(self) -> int:
        return (1 << len(self.neighbors)) - 1

    @property
    def full_mask(self) -> int:
        return (1 << (len(self.neighbors) + 1)) - 1

    def node_id(self, i: int) -> str:
        return self.center if i == self.n else self.neighbors[i]

    def index(self, node: str) -> int:
        try:
            return self._index[node]
        except KeyError:
            raise EgoNetworkError(f"node {node!r} is not in the ego network of {self.center!r}") from None

    def neighbor_index(self, node: str | int) -> int:
        """Dense index of a neighbor of the center; rejects the center itself."""
        i = node if isinstance(node, int) else self.index(node)
        if not 0 <= i < self.n:
            raise EgoNetworkError(f"{node!r} is not a neighbor of {self.center!r}")
        return i

    def has_edge(self, a: str, b: str) -> bool:
        return bool(self.adj[self.index(a)] >> self.index(b) & 1)

    def edges(self) -> list[tuple[str, str]]:
        """All edges as id pairs ``(a, b)`` with ``a < b``, sorted."""
        out = []
        for i in range(self.n + 1):
            for j in iter_bits(self.adj[i] >> (i + 1)):
                a, b = self.node_id(i), self.node_id(i + 1 + j)
                out.append((a, b) if a < b else (b, a))
        out.sort()
        return out

    def num_edges(self) -> int:
        return sum(popcount(row) for row in self.adj) // 2

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EgoNetwork):
            return NotImplemented
        return (self.center, self.neighbors, self.adj) == (other.center, other.neighbors, other.adj)

    def __hash__(self) -> int:
        return hash((self.center, self.neighbors, self.adj))


def build_ego_network(center: str, edges: Iterable[tuple[str, str]]) -> EgoNetwork:
    """Build the ego network of ``center`` from an undirected edge list.

    Self-loops and duplicates are ignored. Edges with neither endpoint adjacent
    to the center, or with exactly one endpoint being a non-neighbor, lie
    outside the induced subgraph and are dropped; their count is kept in
    ``dropped_edges``.
    """
    pairs = set()
    seen_center = False
    for a, b in edges:
        a, b = str(a), str(b)
        if a == center or b == center:
            seen_center = True
        if a == b:
            continue
        pairs.add((a, b) if a < b else (b, a))
    if not seen_center:
        raise EgoNetworkError(f"center {center!r} does not appear in the edge list")
    nbrs = sorted({b if a == center else a for a, b in pairs if center in (a, b)})
    if not nbrs:
        raise EgoNetworkError(f"center {center!r} has no neighbors")

    index = {nid: i for i, nid in enumerate(nbrs)}
    n = len(nbrs)
    index[center] = n
    adj = [0] * (n + 1)
    dropped = 0
    for a, b in pairs:
        ia, ib = index.get(a), index.get(b)
        if ia is None or ib is None:
            dropped += 1
            continue
        adj[ia] |= 1 << ib
        adj[ib] |= 1 << ia
    return EgoNetwork(center, tuple(nbrs), tuple(adj), dropped, index)


def common_neighbors(g: EgoNetwork, v: str | int) -> frozenset[int]:
    """Dense indices of the nodes adjacent to both the center and ``v``."""
    return frozenset(iter_bits(common_mask(g, g.neighbor_index(v))))


def common_mask(g: EgoNetwork, i: int) -> int:
    """Bitset form of the common-neighbor set of neighbor index ``i``."""
    return g.adj[i] & g.neighbor_mask


def embeddedness(g: EgoNetwork, v: str | int) -> int:
    return popcount(common_mask(g, g.neighbor_index(v)))


def embeddedness_all(g: EgoNetwork) -> list[int]:
    mask = g.neighbor_mask
    return [popcount(g.adj[i] & mask) for i in range(g.n)]


@dataclass(frozen=True)
class GraphView:
    """Read-only induced subgraph of an ego network on the nodes in ``mask``."""

    network: EgoNetwork
    mask: int

    def nodes(self) -> list[int]:
        return list(iter_bits(self.mask))

    def __len__(self) -> int:
        return popcount(self.mask)

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def row(self, i: int) -> int:
        return self.network.adj[i] & self.mask

    def neighbors(self, i: int) -> list[int]:
        return list(iter_bits(self.row(i)))

    def degree(self, i: int) -> int:
        return popcount(self.row(i))

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in self.nodes() for j in iter_bits(self.row(i) >> (i + 1) << (i + 1))]

    def compact(self) -> tuple[list[int], list[list[int]]]:
        """Relabel to ``0..k-1``; returns (original index per node, adjacency lists)."""
        order = self.nodes()
        pos = {x: k for k, x in enumerate(order)}
        return order, [[pos[j] for j in iter_bits(self.row(i))] for i in order]


def remove_nodes(g: EgoNetwork, drop: Iterable[str | int] = ()) -> GraphView:
    mask = g.full_mask
    for node in drop:
        i = node if isinstance(node, int) else g.index(node)
        mask &= ~(1 << i)
    return GraphView(g, mask)


def without_center(g: EgoNetwork) -> GraphView:
    """The view ``G_u - {u}`` on which communities, layouts and baselines run."""
    return GraphView(g, g.neighbor_mask)
