import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from coconet.graph import CooccurGraph, GraphView
from coconet.metrics import (
    UndefinedMetricError,
    avg_inverse_distance,
    betweenness,
    bfs_distances,
    classify_degree_regime,
    clustering_node,
    degree_betweenness_spearman,
    degree_histogram,
    degree_probabilities,
    fit_loglog_slope,
    mean_clustering,
    metric_snapshot,
    node_metrics,
    rank_series,
)

PATH = {"A": {"B"}, "B": {"A", "C"}, "C": {"B"}}
TRIANGLE = {"A": {"B", "C"}, "B": {"A", "C"}, "C": {"A", "B"}}
SQUARE = {"A": {"B", "D"}, "B": {"A", "C"}, "C": {"B", "D"}, "D": {"A", "C"}}
K4_MINUS = {"A": {"B", "C", "D"}, "B": {"A", "C", "D"}, "C": {"A", "B"}, "D": {"A", "B"}}


def complete(n):
    return {i: set(range(n)) - {i} for i in range(n)}


def star(leaves):
    adj = {0: set(range(1, leaves + 1))}
    adj.update({i: {0} for i in range(1, leaves + 1)})
    return adj


def test_bfs_examples():
    assert bfs_distances(PATH, "A") == {"A": 0, "B": 1, "C": 2}
    assert bfs_distances({"X": set(), "Y": set()}, "X") == {"X": 0}
    assert bfs_distances(TRIANGLE, "B") == {"A": 1, "B": 0, "C": 1}


def test_inverse_distance_examples():
    assert avg_inverse_distance(complete(3)) == 1.0
    assert avg_inverse_distance(PATH) == pytest.approx(0.8333333333333334, abs=1e-9)
    assert avg_inverse_distance({"A": set(), "B": set()}) == 0.0
    with pytest.raises(UndefinedMetricError):
        avg_inverse_distance({"A": set()})


def test_clustering_examples():
    assert clustering_node(TRIANGLE, "A") == 1.0
    assert clustering_node(star(4), 0) == 0.0
    assert clustering_node(K4_MINUS, "A") == pytest.approx(2 / 3, abs=1e-9)
    assert mean_clustering(complete(4)) == 1.0
    assert mean_clustering({i: set() for i in range(5)}) == 0.0
    tri_iso = dict(TRIANGLE, Z=set())
    assert mean_clustering(tri_iso) == pytest.approx(0.75, abs=1e-12)


def test_betweenness_examples():
    assert betweenness(PATH) == {"A": 0.0, "B": 1.0, "C": 0.0}
    assert set(betweenness(complete(5)).values()) == {0.0}
    for v in betweenness(SQUARE).values():
        assert v == pytest.approx(1 / 6, abs=1e-9)
    with pytest.raises(UndefinedMetricError):
        betweenness({"A": {"B"}, "B": {"A"}})


def test_fixtures_agree_with_oracle():
    for adj in (PATH, TRIANGLE, SQUARE, K4_MINUS):
        assert avg_inverse_distance(adj) == pytest.approx(oracles.inverse_distance(adj), abs=1e-12)
        ob = oracles.betweenness(adj)
        for v, b in betweenness(adj).items():
            assert b == pytest.approx(ob[v], abs=1e-12)


def test_degree_histogram_examples():
    assert degree_histogram(complete(3)) == {2: 3}
    assert degree_histogram(star(4)) == {1: 4, 4: 1}
    assert degree_histogram({i: set() for i in range(5)}) == {0: 5}
    assert degree_probabilities({1: 4, 4: 1}) == {1: 0.8, 4: 0.2}


def test_accepts_graph_and_view():
    g = CooccurGraph()
    for d in [{"A", "B"}, {"B", "C"}, {"A", "B"}]:
        g.add_document(d)
    assert avg_inverse_distance(g) == avg_inverse_distance(PATH)
    assert avg_inverse_distance(GraphView(g, 2)) == 1 / 3


def test_regime_power_law():
    hist = {k: 1e6 * k ** -2.0 for k in range(1, 51)}
    v = classify_degree_regime(hist)
    assert v.regime == "heavy-tailed"
    assert v.loglog_r2 == pytest.approx(1.0, abs=1e-9)


def test_regime_binomial_graph():
    rng = np.random.Generator(np.random.PCG64(12345))
    n, p = 500, 0.05
    upper = np.triu(rng.random((n, n)) < p, 1)
    deg = (upper | upper.T).sum(axis=1)
    hist = {int(k): int(c) for k, c in zip(*np.unique(deg, return_counts=True))}
    v = classify_degree_regime(hist)
    assert v.regime == "poisson-like"
    assert v.dispersion == pytest.approx(1 - p, abs=0.2)


def test_regime_degenerate():
    assert classify_degree_regime({3: 10}).regime == "degenerate"
    assert classify_degree_regime({}).regime == "degenerate"
    # straight log-log but barely dispersed is still poisson-like
    assert classify_degree_regime({1: 4, 2: 2, 3: 1}).regime == "poisson-like"


def test_rank_series():
    s = rank_series({"C": 2, "A": 5, "B": 2})
    assert list(s) == [(1, 5.0), (2, 2.0), (3, 2.0)]
    assert s.keys == ("A", "B", "C")
    assert list(rank_series({"x": 7})) == [(1, 7.0)]
    assert rank_series({"B": 2, "A": 5, "C": 2}).keys == s.keys
    with pytest.raises(ValueError):
        rank_series({})
    with pytest.raises(ValueError):
        rank_series({"A": 0})


def test_loglog_fit():
    zipf = rank_series({r: 1000 / r for r in range(1, 101)})
    fit = fit_loglog_slope(zipf)
    assert fit.slope == pytest.approx(-1.0, abs=1e-9) and fit.r2 == pytest.approx(1.0, abs=1e-12)
    assert fit_loglog_slope(rank_series({r: 4.0 for r in range(10)})).slope == 0
    steep = rank_series({r: 3.7 * r ** -1.3 for r in range(1, 60)})
    assert fit_loglog_slope(steep).slope == pytest.approx(-1.3, abs=1e-9)
    with pytest.raises(ValueError):
        fit_loglog_slope(rank_series({"a": 2, "b": 1}))


def test_snapshot_and_node_metrics():
    snap = metric_snapshot(PATH, D=7)
    assert snap.row()["D"] == 7 and snap.n == 3 and snap.m == 2
    assert snap.betweenness["B"] == 1.0
    rows = node_metrics(PATH)
    assert [r["id"] for r in rows] == ["A", "B", "C"]
    assert rows[1] == {"id": "B", "degree": 2, "betweenness": 1.0, "clustering": 0.0}
    empty = metric_snapshot({i: set() for i in range(4)}, D=0)
    assert (empty.il, empty.mean_clustering, empty.regime.regime) == (0.0, 0.0, "degenerate")


def test_spearman():
    assert degree_betweenness_spearman(star(5)) == pytest.approx(1.0)
    assert math.isnan(degree_betweenness_spearman(complete(4)))


def test_worker_counts_bit_identical():
    rng = random.Random(3)
    adj = oracles.random_graph(rng, 60, 0.08)
    assert avg_inverse_distance(adj, workers=1) == avg_inverse_distance(adj, workers=4)
    assert betweenness(adj, workers=1) == betweenness(adj, workers=3)


@st.composite
def small_graphs(draw, min_n=1, max_n=10):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    adj = {i: set() for i in range(n)}
    for u, w in chosen:
        adj[u].add(w)
        adj[w].add(u)
    return adj


@settings(max_examples=150, deadline=None)
@given(small_graphs(min_n=3))
def test_matches_oracle(adj):
    assert avg_inverse_distance(adj) == pytest.approx(oracles.inverse_distance(adj), abs=1e-9)
    assert mean_clustering(adj) == pytest.approx(oracles.mean_clustering(adj), abs=1e-9)
    ob = oracles.betweenness(adj)
    b = betweenness(adj)
    for v in adj:
        assert 0.0 <= b[v] <= 1.0
        assert b[v] == pytest.approx(ob[v], abs=1e-9)
        assert clustering_node(adj, v) == pytest.approx(oracles.local_clustering(adj, v), abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(small_graphs(min_n=3))
def test_betweenness_sum_is_interior_length(adj):
    n = len(adj)
    d = oracles.all_pairs_distances(adj)
    expected = sum(d[s][t] - 1 for s, t in itertools.combinations(adj, 2) if d[s][t] != math.inf)
    raw = sum(betweenness(adj).values()) * (n - 1) * (n - 2) / 2
    assert raw == pytest.approx(expected, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(small_graphs(min_n=2), st.randoms(use_true_random=False))
def test_relabel_invariance(adj, rnd):
    labels = list(range(len(adj)))
    rnd.shuffle(labels)
    relabeled = {f"n{labels[u]}": {f"n{labels[w]}" for w in nb} for u, nb in adj.items()}
    assert avg_inverse_distance(relabeled) == pytest.approx(avg_inverse_distance(adj), abs=1e-12)
    assert mean_clustering(relabeled) == pytest.approx(mean_clustering(adj), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(small_graphs(min_n=2), st.data())
def test_adding_edge_never_lowers_il(adj, data):
    missing = [(u, w) for u, w in itertools.combinations(adj, 2) if w not in adj[u]]
    if not missing:
        return
    u, w = data.draw(st.sampled_from(missing))
    bigger = {k: set(v) for k, v in adj.items()}
    bigger[u].add(w)
    bigger[w].add(u)
    assert avg_inverse_distance(bigger) >= avg_inverse_distance(adj)
    assert 0.0 <= avg_inverse_distance(bigger) <= 1.0
