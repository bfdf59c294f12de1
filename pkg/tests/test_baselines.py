import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import complete_edges
from egodisp.baselines import ISOLATED_CONSTRAINT, betweenness_scores, constraint_scores
from egodisp.graph import build_ego_network
import oracles


def _path():
    return build_ego_network("u", [("u", "a"), ("u", "b"), ("u", "c"), ("a", "b"), ("b", "c")])


def test_path_betweenness():
    assert betweenness_scores(_path()).as_dict() == {"a": 0.0, "b": 1.0, "c": 0.0}


def test_clique_betweenness_is_zero():
    g = build_ego_network("u", complete_edges(4))
    assert betweenness_scores(g).scores == (0.0,) * 4


def test_constraint_closed_forms():
    # within G_u - {u}: hub "h" with k leaves
    k = 4
    edges = [("u", "h")] + [("u", f"l{i}") for i in range(k)] + [("h", f"l{i}") for i in range(k)]
    edges += [("u", "iso")]
    table = constraint_scores(build_ego_network("u", edges))
    assert table["h"] == pytest.approx(1 / k)
    assert table["l0"] == 1.0
    assert table["iso"] == ISOLATED_CONSTRAINT
    assert table.meta["direction"] == "min"


def _random_tree(rng, n):
    nodes = [f"t{i:02d}" for i in range(n)]
    edges = [("u", x) for x in nodes]
    for i in range(1, n):
        edges.append((nodes[rng.randrange(i)], nodes[i]))
    return edges


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_tree_betweenness_counts_pairs_through_node(seed):
    rng = random.Random(seed)
    edges = _random_tree(rng, rng.randint(1, 10))
    g = build_ego_network("u", edges)
    _, adj = oracles.ego_adjacency("u", edges)
    sub = {x: adj[x] - {"u"} for x in adj if x != "u"}
    got = betweenness_scores(g).as_dict()
    for x in sub:
        through = 0
        nodes = sorted(sub)
        for i, s in enumerate(nodes):
            for t in nodes[i + 1:]:
                if x not in (s, t):
                    (path,) = oracles.all_shortest_paths(sub, s, t)
                    through += x in path
        assert got[x] == through


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_baselines_match_oracles(seed):
    edges = oracles.random_edges(random.Random(seed), max_nodes=10)
    g = build_ego_network("u", edges)
    _, adj = oracles.ego_adjacency("u", edges)
    bt, ct = betweenness_scores(g).as_dict(), constraint_scores(g).as_dict()
    ob, oc = oracles.betweenness(adj, "u"), oracles.constraint(adj, "u")
    for v in g.neighbors:
        assert bt[v] == pytest.approx(ob[v], rel=1e-9, abs=1e-12)
        assert ct[v] == pytest.approx(oc[v], rel=1e-9, abs=1e-12)


def test_betweenness_total_equals_interior_geodesic_average():
    rng = random.Random(7)
    for _ in range(30):
        edges = oracles.random_edges(rng, max_nodes=9)
        g = build_ego_network("u", edges)
        _, adj = oracles.ego_adjacency("u", edges)
        sub = {x: adj[x] - {"u"} for x in adj if x != "u"}
        nodes = sorted(sub)
        expected = 0.0
        for i, s in enumerate(nodes):
            for t in nodes[i + 1:]:
                paths = oracles.all_shortest_paths(sub, s, t)
                if paths:
                    expected += sum(len(p) - 2 for p in paths) / len(paths)
        assert sum(betweenness_scores(g).scores) == pytest.approx(expected)


def test_constraint_is_label_equivariant():
    rng = random.Random(11)
    for _ in range(20):
        edges = oracles.random_edges(rng)
        names = sorted({x for e in edges for x in e} - {"u"})
        shuffled = names[:]
        rng.shuffle(shuffled)
        rename = dict(zip(names, shuffled))
        rename["u"] = "u"
        g1 = build_ego_network("u", edges)
        g2 = build_ego_network("u", [(rename[a], rename[b]) for a, b in edges])
        c1, c2 = constraint_scores(g1).as_dict(), constraint_scores(g2).as_dict()
        b1, b2 = betweenness_scores(g1).as_dict(), betweenness_scores(g2).as_dict()
        for x in names:
            assert c1[x] == pytest.approx(c2[rename[x]])
            assert b1[x] == pytest.approx(b2[rename[x]])
