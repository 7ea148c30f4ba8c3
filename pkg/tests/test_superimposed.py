import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coconet.graph import CooccurGraph, EmptyGraphError, GraphView, noise_filter
from coconet.metrics import RankSeries
from coconet.superimposed import (
    RankFit,
    edge_weight_series,
    fit_exponential_rank,
    predicted_rank_cutoff,
    stability_analysis,
    superimpose,
)
from coconet.synth import exponential_weight_stream


def weighted(pairs):
    return CooccurGraph.from_edges(pairs)


def test_superimpose_examples():
    g = weighted({("A", "B"): 10, ("B", "C"): 5, ("C", "D"): 2, ("D", "E"): 1})
    sg = superimpose(g, 0.2)
    assert sg.edges == {("A", "B"), ("B", "C"), ("C", "D")}
    assert sg.nodes == {"A", "B", "C", "D", "E"}
    assert sg.source_v_max == 10
    assert superimpose(g, 1.0).edges == {("A", "B")}


def test_superimpose_matches_noise_filter_at_large_vmax():
    rng = random.Random(11)
    people = [f"p{i:02d}" for i in range(30)]
    w = {("p00", "p01"): 2000}
    for _ in range(200):
        u, v = sorted(rng.sample(people, 2))
        if (u, v) != ("p00", "p01"):
            w[(u, v)] = rng.randint(1, 5)
    g = weighted(w)
    assert superimpose(g, 0.001).edges == set(noise_filter(g, 2).edges())


def test_superimpose_boundary_is_inclusive():
    # 0.1 * 30 is 3.0000000000000004 in floats; the exact cut is 3
    g = weighted({("A", "B"): 30, ("B", "C"): 3, ("C", "D"): 2})
    assert superimpose(g, 0.1).edges == {("A", "B"), ("B", "C")}
    g = weighted({("A", "B"): 8, ("B", "C"): 2})
    assert superimpose(g, 0.25).edges == {("A", "B"), ("B", "C")}


def test_superimpose_errors():
    with pytest.raises(EmptyGraphError):
        superimpose(CooccurGraph.from_edges({}, node_counts={"A": 1}), 0.5)
    g = weighted({("A", "B"): 1})
    for eps in (0, -0.1, 1.5):
        with pytest.raises(ValueError):
            superimpose(g, eps)


def exp_series(a, lam, n=100):
    return RankSeries.from_values([math.exp(a + lam * r) for r in range(1, n + 1)])


def test_fit_examples():
    fit = fit_exponential_rank(exp_series(3, -0.1))
    assert fit.a == pytest.approx(3, abs=1e-9)
    assert fit.lam == pytest.approx(-0.1, abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.n_points == 100
    flat = fit_exponential_rank(RankSeries.from_values([7.0] * 10))
    assert flat.lam == 0 and flat.r_squared == 1.0
    shifted = fit_exponential_rank(exp_series(5, -0.1))
    assert shifted.lam == pytest.approx(fit.lam, abs=1e-12)
    assert fit_exponential_rank(exp_series(3, -0.1), max_rank=10).n_points == 10


def test_fit_errors():
    with pytest.raises(ValueError):
        fit_exponential_rank(RankSeries.from_values([3.0, 2.0]))


def test_cutoff_examples():
    assert predicted_rank_cutoff(-0.1, math.exp(-1)) == pytest.approx(10.0, abs=1e-12)
    assert predicted_rank_cutoff(-0.1, 1.0) == 0.0
    r3 = predicted_rank_cutoff(RankFit(3.0, -0.1, 1.0, 100), 0.01)
    r5 = predicted_rank_cutoff(RankFit(5.0, -0.1, 1.0, 100), 0.01)
    assert r3 == r5
    for lam in (0.0, 0.2):
        with pytest.raises(ValueError):
            predicted_rank_cutoff(lam, 0.5)


@pytest.mark.parametrize("lam", [-0.05, -0.1, -0.37])
@pytest.mark.parametrize("eps", [0.5, 0.1, 0.01, 0.001])
def test_edge_count_tracks_cutoff(lam, eps):
    weights = {(f"a{r:03d}", f"b{r:03d}"): math.exp(80.0 + lam * r) for r in range(1, 201)}
    sg = superimpose(weighted(weights), eps)
    assert abs(sg.edge_count - round(predicted_rank_cutoff(lam, eps))) <= 1


def test_edge_weight_series_ties_by_pair():
    g = weighted({("B", "C"): 2, ("A", "B"): 2, ("A", "C"): 9})
    s = edge_weight_series(g)
    assert s.keys == (("A", "C"), ("A", "B"), ("B", "C"))


def test_stability_identical_snapshots():
    g = weighted({("A", "B"): 10, ("B", "C"): 4, ("C", "D"): 1})
    snaps = [CooccurGraph.from_edges(dict(g.edges), doc_count=d) for d in (10000, 20000, 30000)]
    rep = stability_analysis(snaps, 0.3)
    assert (rep.max_edge_count_deviation, rep.max_il_deviation, rep.max_clustering_deviation) == (0, 0, 0)
    assert [r["edges_superimposed"] for r in rep.rows()] == [2, 2, 2]


def test_stability_exponential_stream_is_constant():
    docs, block = exponential_weight_stream(n_persons=12, lam=-0.1, scale=1000, n_blocks=6)
    g = CooccurGraph()
    snaps = []
    for i, d in enumerate(docs, 1):
        g.add_document(d)
        if i % block == 0:
            snaps.append(g.snapshot())
    for eps in (0.5, 0.05, 0.01):
        rep = stability_analysis(snaps, eps, burn_in_D=0)
        assert rep.max_edge_count_deviation == 0.0
        assert rep.max_il_deviation == 0.0 and rep.max_clustering_deviation == 0.0
    fit = fit_exponential_rank(edge_weight_series(snaps[-1]), max_rank=30)
    assert fit.lam == pytest.approx(-0.1, abs=2e-3)


def test_stability_degenerate_checkpoints_excluded():
    empty = CooccurGraph.from_edges({}, node_counts={"A": 1}, doc_count=500)
    full = [CooccurGraph.from_edges({("A", "B"): 3}, doc_count=d) for d in (10000, 20000)]
    rep = stability_analysis([empty, *full], 0.5)
    assert rep.checkpoints[0].degenerate and rep.warnings
    assert rep.max_edge_count_deviation == 0
    with pytest.raises(ValueError):
        stability_analysis(full[:1], 0.5)


weights_strategy = st.dictionaries(
    st.tuples(st.sampled_from("ABCDEFGH"), st.sampled_from("ABCDEFGH"))
    .filter(lambda p: p[0] < p[1]),
    st.integers(1, 1000),
    min_size=1,
)


@settings(max_examples=200, deadline=None)
@given(weights_strategy, st.floats(0.001, 1.0), st.floats(0.001, 1.0), st.integers(1, 10**6))
def test_threshold_algebra(w, e1, e2, c):
    e1, e2 = sorted((e1, e2))
    g = weighted(w)
    lo, hi = superimpose(g, e1), superimpose(g, e2)
    assert hi.edges <= lo.edges
    scaled = weighted({k: v * c for k, v in w.items()})
    assert superimpose(scaled, e1).edges == lo.edges
    cut = Fraction(repr(e1)) * max(w.values())
    for k, v in w.items():
        assert (k in lo.edges) == (v >= cut)


@settings(max_examples=100, deadline=None)
@given(st.floats(-50, 50), st.floats(-2, -1e-3), st.floats(1e-6, 1.0))
def test_cutoff_independent_of_amplitude(a, lam, eps):
    assert predicted_rank_cutoff(RankFit(a, lam, 1.0, 3), eps) == predicted_rank_cutoff(
        RankFit(a + 7.5, lam, 1.0, 3), eps
    )


def test_view_inputs():
    g = weighted({("A", "B"): 5, ("B", "C"): 1, ("C", "D"): 3})
    sg = superimpose(GraphView(g, whitelist={"A", "B", "C"}), 0.1)
    assert sg.nodes == {"A", "B", "C"} and sg.edges == {("A", "B"), ("B", "C")}
