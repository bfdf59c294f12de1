import random

import pytest
from hypothesis import given, settings, strategies as st

from egodisp.dispersion import ScoreTable, recursive_dispersion
from egodisp.distances import DistanceSpec
from egodisp.graph import build_ego_network, embeddedness_all
from egodisp.ranking import (Instance, Measure, Slice, evaluate, parse_grid, parse_measure, rank,
                             sweep_parametric, two_hop_predict)
from egodisp.synthgen import PRESETS, generate_corpus
import oracles


def _tie_network():
    # emb(b) = 3, emb(c) = 7 via private cliques hanging off each
    edges = [("u", "a"), ("u", "b"), ("u", "c")]
    bb = [f"b{i}" for i in range(3)]
    cc = [f"c{i}" for i in range(7)]
    edges += [("u", x) for x in bb + cc] + [("b", x) for x in bb] + [("c", x) for x in cc]
    return build_ego_network("u", edges)


def test_rank_tie_break_uses_embeddedness_then_id():
    g = _tie_network()
    scores = {v: 0.0 for v in g.neighbors}
    scores.update(a=2.0, b=5.0, c=5.0)
    table = ScoreTable("t", g, tuple(scores[v] for v in g.neighbors))
    pred = rank(table)
    assert pred.chosen == "c"
    assert [v for v, _ in pred.ranked[:3]] == ["c", "b", "a"]
    assert rank(table, "min").ranked[-1][0] == "b"
    # equal score and embeddedness: smaller id first
    assert [v for v, _ in pred.ranked[3:5]] == ["b0", "b1"]


def test_rank_single_neighbor_and_bad_direction():
    g = build_ego_network("u", [("u", "only")])
    assert rank(ScoreTable("t", g, (0.0,))).chosen == "only"
    with pytest.raises(ValueError):
        rank(ScoreTable("t", g, (0.0,)), "up")


def test_bridge_recursive_prediction(bridge):
    assert rank(recursive_dispersion(bridge)).chosen == "h"


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_rank_is_a_total_order(seed, levels):
    rng = random.Random(seed)
    g = build_ego_network("u", oracles.random_edges(rng))
    table = ScoreTable("t", g, tuple(float(rng.randrange(levels)) for _ in range(g.n)))
    ranked = rank(table).ranked
    emb = embeddedness_all(g)
    keys = [(-s, -emb[g.neighbor_index(v)], v) for v, s in ranked]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    assert sorted(v for v, _ in ranked) == sorted(g.neighbors)


def _toy_corpus():
    g = build_ego_network("u", [("u", "a"), ("u", "b"), ("u", "c"), ("a", "b")])
    # emb: a=1, b=1, c=0 -> rank 'emb' chooses a (tie with b broken by id)
    out = []
    for partner, family, tag in [("a", (), "x"), ("b", ("a",), "x"), ("c", (), "y"), ("b", (), "y")]:
        out.append(Instance(g, partner, frozenset(family), {"status": tag}))
    return out


def test_evaluate_counts_and_slices():
    report = evaluate(_toy_corpus(), Measure("emb"), [Slice.tag("status", "x"), Slice.tag("status", "z")])
    row = report.row("emb")
    assert (row.n_instances, row.n_correct, row.precision_at_1) == (4, 1, 0.25)
    assert row.hitset_precision_at_1 == 0.5
    assert report.precision("emb", "status=x") == 0.5
    empty = report.row("emb", "status=z")
    assert empty.n_instances == 0 and empty.precision_at_1 is None


def test_evaluate_rejects_empty_corpus():
    with pytest.raises(ValueError):
        evaluate([], Measure("emb"))


def test_instance_validation():
    g = build_ego_network("u", [("u", "a"), ("u", "b")])
    with pytest.raises(ValueError):
        Instance(g, "zz")
    with pytest.raises(ValueError):
        Instance(g, "a", frozenset({"a"}))


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(4)))
def test_evaluate_is_order_invariant(perm):
    corpus = _toy_corpus()
    base = evaluate(corpus, [Measure("emb"), Measure("norm")])
    shuffled = evaluate([corpus[i] for i in perm], [Measure("emb"), Measure("norm")])
    assert base.rows == shuffled.rows
    for r in base.rows:
        assert r.hitset_precision_at_1 >= r.precision_at_1


def test_measure_parsing_and_labels():
    m = parse_measure("parametric", "threshold:4", "alpha=1,b=0,c=0")
    assert m.label == "parametric(alpha=1,b=0,c=0)[threshold:4]"
    assert parse_measure("rec", k=5).label == "rec@5[threshold:3]"
    assert Measure("constraint").direction == "min"
    with pytest.raises(ValueError):
        parse_measure("nope")
    with pytest.raises(ValueError):
        parse_measure("parametric", params="gamma=1")


def test_parallel_evaluation_matches_serial():
    corpus = generate_corpus(PRESETS["random50"], 8, 3)
    ms = [Measure("emb"), Measure("rec"), Measure("random", seed=2)]
    assert evaluate(corpus, ms, workers=1).rows == evaluate(corpus, ms, workers=2).rows


# ---------------------------------------------------------------------------
# Two-hop


def _pair_networks():
    """u's network and a reverse network for each of its friends."""
    g = build_ego_network("u", [("u", x) for x in "vwx"] + [("v", "w")])
    inst = Instance(g, "v")
    nets = {}
    for v in "vwx":
        nets[v] = build_ego_network(v, [(v, "u"), (v, "q"), ("u", "q")])
    return inst, nets


def test_two_hop_min_rule(bridge):
    inst = Instance(bridge, "h")
    forward = recursive_dispersion(bridge)
    nets = {}
    for v in bridge.neighbors:
        nets[v] = build_ego_network(v, [(v, "u")] + [(v, x) for x in "pq"])
    pred = two_hop_predict(inst, nets, k=20, forward=forward)
    # every reverse rec is 0 (u shares no friends with v there), so all scores are min(.,0) = 0
    assert all(s == 0.0 for _, s in pred.ranked)
    assert not pred.warnings


def test_two_hop_identity_when_reverse_equals_forward(bridge, monkeypatch):
    from egodisp import ranking

    inst = Instance(bridge, "h")
    forward = recursive_dispersion(bridge)

    class MirrorProfile:
        def __init__(self, g, spec):
            self.g = g

        def recursive(self, k):
            return [[forward[self.g.center]] * self.g.n] * k

    nets = {v: build_ego_network(v, [(v, "u")]) for v in bridge.neighbors}
    monkeypatch.setattr(ranking, "DispersionProfile", MirrorProfile)
    pred = two_hop_predict(inst, nets, k=5, forward=forward)
    assert pred.ranked == rank(forward).ranked[:5]


def test_two_hop_falls_back_without_reverse_networks(bridge):
    forward = recursive_dispersion(bridge)
    pred = two_hop_predict(Instance(bridge, "h"), {}, k=4, forward=forward)
    assert pred.ranked == rank(forward).ranked[:4]
    assert any("fell back" in w for w in pred.warnings)


def test_two_hop_missing_networks_score_zero():
    inst, nets = _pair_networks()
    pred = two_hop_predict(inst, {"v": nets["v"]}, k=3)
    scores = dict(pred.ranked)
    assert scores["w"] == 0.0 and scores["x"] == 0.0
    assert any("missing" in w for w in pred.warnings)


def test_two_hop_min_of_known_scores(monkeypatch):
    inst, nets = _pair_networks()
    forward = ScoreTable("rec", inst.network, (5.0, 1.0, 3.0))
    from egodisp import ranking

    class FakeProfile:
        def __init__(self, g, spec):
            self.g = g

        def recursive(self, k):
            return [[{"v": 2.0, "w": 7.0, "x": 3.0}[self.g.center]] * self.g.n] * k

    monkeypatch.setattr(ranking, "DispersionProfile", FakeProfile)
    pred = two_hop_predict(inst, nets, k=3, forward=forward)
    assert dict(pred.ranked) == {"v": 2.0, "w": 1.0, "x": 3.0}
    assert pred.chosen == "x"


def test_two_hop_measure_uses_context_edges():
    corpus = generate_corpus(PRESETS["mutual"], 3, 5)
    for inst in corpus:
        pred = Measure("twohop").predict(inst)
        assert not pred.warnings
        assert len(pred.ranked) == 20


# ---------------------------------------------------------------------------
# Sweep


def test_grid_parsing():
    assert parse_grid("0:1:0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert parse_grid("0.1:0.3:0.1") == [0.1, 0.2, 0.3]
    assert parse_grid("1,2,5") == [1.0, 2.0, 5.0]
    for bad in ("1:0:1", "0:1", "0:1:0"):
        with pytest.raises(ValueError):
            parse_grid(bad)


def test_sweep_identity_point_matches_norm():
    corpus = generate_corpus(PRESETS["random50"], 20, 4)
    res = sweep_parametric(corpus, DistanceSpec("threshold", r=3), [0.5, 1.0], [0.0, 1.0], [0.0, 5.0])
    point = {(a, b, c): p for a, b, c, p in res.points}
    assert point[(1.0, 0.0, 0.0)] == evaluate(corpus, Measure("norm")).precision("norm[threshold:3]")
    curve = res.curve()
    assert [row[0] for row in curve] == [0.5, 1.0]
    for a, best, _, _ in curve:
        assert best == max(p for (aa, _, _), p in point.items() if aa == a)


def test_sweep_single_instance_is_binary():
    corpus = generate_corpus(PRESETS["random50"], 1, 9)
    res = sweep_parametric(corpus, DistanceSpec("threshold", r=3), [0.5, 1, 2], [0, 1], [0, 5])
    assert {p for *_, p in res.points} <= {0.0, 1.0}
