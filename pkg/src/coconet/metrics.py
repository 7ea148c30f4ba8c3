"""Structural metrics on the unweighted view of a concept network.

Distances are hop counts; weights only matter through whatever filtering
produced the view. Every function accepts a :class:`~coconet.graph.GraphView`,
a :class:`~coconet.graph.CooccurGraph`, a
:class:`~coconet.superimposed.SuperimposedGraph` or a plain adjacency mapping
``{node: iterable_of_neighbors}``.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

import numpy as np
from scipy import stats

from .graph import CooccurGraph, GraphView

__all__ = [
    "UndefinedMetricError",
    "MetricSnapshot",
    "RankSeries",
    "LinearFit",
    "RegimeVerdict",
    "adjacency",
    "bfs_distances",
    "avg_inverse_distance",
    "clustering_node",
    "mean_clustering",
    "betweenness",
    "degree_histogram",
    "degree_probabilities",
    "classify_degree_regime",
    "rank_series",
    "fit_loglog_slope",
    "degree_betweenness_spearman",
    "metric_snapshot",
    "node_metrics",
]

HEAVY_TAIL_MIN_R2 = 0.9
POISSON_MAX_DISPERSION = 1.5


class UndefinedMetricError(ValueError):
    """The metric is not defined for a graph this small."""


def adjacency(g) -> dict[Hashable, set]:
    """Symmetric adjacency sets with nodes in sorted order."""
    if isinstance(g, CooccurGraph):
        g = GraphView(g)
    if hasattr(g, "adjacency"):
        adj = g.adjacency()
    elif isinstance(g, Mapping):
        adj = {u: set() for u in g}
        for u, nbrs in g.items():
            for w in nbrs:
                if w == u:
                    raise ValueError(f"self-loop on {u!r}")
                adj[u].add(w)
                adj.setdefault(w, set()).add(u)
    else:
        raise TypeError(f"cannot read a graph from {type(g).__name__}")
    return {u: set(adj[u]) for u in sorted(adj)}


class _Indexed:
    """Integer-indexed adjacency lists, built once per metric call."""

    def __init__(self, g):
        adj = adjacency(g)
        self.nodes = list(adj)
        index = {u: i for i, u in enumerate(self.nodes)}
        self.nbrs = [sorted(index[w] for w in adj[u]) for u in self.nodes]
        self.index = index

    def __len__(self):
        return len(self.nodes)

    @property
    def m(self) -> int:
        return sum(len(x) for x in self.nbrs) // 2


def _bfs(nbrs: Sequence[Sequence[int]], s: int) -> list[int]:
    dist = [-1] * len(nbrs)
    dist[s] = 0
    q = deque([s])
    while q:
        v = q.popleft()
        dv = dist[v] + 1
        for w in nbrs[v]:
            if dist[w] < 0:
                dist[w] = dv
                q.append(w)
    return dist


def _map_ordered(fn, items: Iterable, workers: int | None) -> Iterator:
    """``map`` that may fan out to threads but always yields in input order."""
    if workers is None or workers <= 1:
        return map(fn, items)
    pool = ThreadPoolExecutor(max_workers=workers)

    def gen():
        with pool:
            yield from pool.map(fn, items)

    return gen()


def bfs_distances(view, source) -> dict:
    """Hop distance from ``source`` to every reachable node (itself at 0)."""
    g = _Indexed(view)
    if source not in g.index:
        raise KeyError(source)
    dist = _bfs(g.nbrs, g.index[source])
    return {g.nodes[i]: d for i, d in enumerate(dist) if d >= 0}


def avg_inverse_distance(view, workers: int | None = None) -> float:
    """Mean of ``1/d_ij`` over all node pairs, unreachable pairs counting 0.

    For ``n`` nodes this is ``2/(n(n-1)) * sum_{i>j} 1/d_ij``; it is 1 for a
    complete graph and 0 for an edgeless one.
    """
    g = _Indexed(view)
    n = len(g)
    if n < 2:
        raise UndefinedMetricError("average inverse distance needs at least 2 nodes")

    def per_source(s: int) -> float:
        by_dist = Counter(d for d in _bfs(g.nbrs, s) if d > 0)
        return math.fsum(c / d for d, c in sorted(by_dist.items()))

    # each unordered pair is seen from both ends
    total = math.fsum(_map_ordered(per_source, range(n), workers))
    return total / (n * (n - 1))


def _local_clustering(nbrs: Sequence[Sequence[int]], sets: Sequence[set], v: int) -> float:
    k = len(nbrs[v])
    if k < 2:
        return 0.0
    links = sum(len(sets[u] & sets[v]) for u in nbrs[v]) // 2
    return links / (k * (k - 1) / 2)


def clustering_node(view, node) -> float:
    """Share of the ``k(k-1)/2`` possible links among a node's neighbors that exist."""
    g = _Indexed(view)
    if node not in g.index:
        raise KeyError(node)
    sets = [set(x) for x in g.nbrs]
    return _local_clustering(g.nbrs, sets, g.index[node])


def _all_clustering(g: _Indexed) -> list[float]:
    sets = [set(x) for x in g.nbrs]
    return [_local_clustering(g.nbrs, sets, v) for v in range(len(g))]


def mean_clustering(view) -> float:
    """Average local clustering over all nodes; degree < 2 contributes 0."""
    g = _Indexed(view)
    if len(g) == 0:
        raise UndefinedMetricError("mean clustering of an empty graph")
    return math.fsum(_all_clustering(g)) / len(g)


def _brandes_source(nbrs: Sequence[Sequence[int]], s: int) -> list[float]:
    n = len(nbrs)
    sigma = [0] * n
    dist = [-1] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    sigma[s] = 1
    dist[s] = 0
    order = []
    q = deque([s])
    while q:
        v = q.popleft()
        order.append(v)
        for w in nbrs[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                q.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)
    delta = [0.0] * n
    for w in reversed(order):
        coeff = (1.0 + delta[w]) / sigma[w]
        for v in preds[w]:
            delta[v] += sigma[v] * coeff
    delta[s] = 0.0
    return delta


def betweenness(view, workers: int | None = None) -> dict:
    """Normalized shortest-path betweenness of every node.

    ``b(w)`` sums, over unordered pairs ``{s, t}`` not containing ``w``, the
    fraction of shortest ``s``-``t`` paths through ``w``, divided by
    ``(n-1)(n-2)/2`` so values lie in ``[0, 1]``.
    """
    g = _Indexed(view)
    n = len(g)
    if n < 3:
        raise UndefinedMetricError("betweenness needs at least 3 nodes")
    acc = [0.0] * n
    for delta in _map_ordered(lambda s: _brandes_source(g.nbrs, s), range(n), workers):
        for i, d in enumerate(delta):
            acc[i] += d
    # every unordered pair was counted once from each endpoint
    norm = float((n - 1) * (n - 2))
    return {g.nodes[i]: acc[i] / norm for i in range(n)}


def degree_histogram(view) -> dict[int, int]:
    """``{degree: number of nodes}``, sorted by degree."""
    g = _Indexed(view)
    return dict(sorted(Counter(len(x) for x in g.nbrs).items()))


def degree_probabilities(hist: Mapping[int, float]) -> dict[int, float]:
    """``P(k)``: histogram counts divided by the node count."""
    total = sum(hist.values())
    if total <= 0:
        raise UndefinedMetricError("empty degree histogram")
    return {k: c / total for k, c in sorted(hist.items())}


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r2: float
    n_points: int


def _ols(x, y) -> LinearFit:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    sxx = float(dx @ dx)
    if sxx == 0:
        raise ValueError("regressor has zero variance")
    slope = 0.0 if np.all(y == y[0]) else float(dx @ dy) / sxx
    intercept = float(ym - slope * xm)
    sst = float(dy @ dy)
    if sst == 0 or np.all(y == y[0]):
        r2 = 1.0
    else:
        resid = dy - slope * dx
        r2 = min(1.0, max(0.0, 1.0 - float(resid @ resid) / sst))
    return LinearFit(slope, intercept, r2, len(x))


@dataclass(frozen=True)
class RegimeVerdict:
    regime: str  # "heavy-tailed" | "poisson-like" | "degenerate"
    loglog_r2: float
    dispersion: float


def classify_degree_regime(hist: Mapping[int, float]) -> RegimeVerdict:
    """Label a degree histogram heavy-tailed, poisson-like or degenerate.

    Two diagnostics are computed: the R^2 of a straight line through
    ``(ln k, ln P(k))`` for the observed degrees ``k >= 1``, and the index of
    dispersion (variance / mean) of the degrees. A heavy tail needs a
    near-straight log-log plot (R^2 >= 0.9) and over-dispersion (> 1.5);
    a dispersion of at most 1.5 reads as poisson-like. Fewer than three
    distinct positive degrees is degenerate. These are thresholds for a
    quick read of the regime, not a statistical test.
    """
    hist = {int(k): float(c) for k, c in hist.items() if c > 0}
    total = sum(hist.values())
    if total <= 0:
        return RegimeVerdict("degenerate", math.nan, math.nan)
    ks = np.array(sorted(hist), dtype=float)
    cs = np.array([hist[k] for k in sorted(hist)])
    mean = float(ks @ cs) / total
    var = float(((ks - mean) ** 2) @ cs) / total
    dispersion = var / mean if mean > 0 else math.nan
    pos = ks >= 1
    if pos.sum() < 3:
        r2 = math.nan
        if pos.sum() >= 2:
            r2 = _ols(np.log(ks[pos]), np.log(cs[pos] / total)).r2
        return RegimeVerdict("degenerate", r2, dispersion)
    r2 = _ols(np.log(ks[pos]), np.log(cs[pos] / total)).r2
    if dispersion <= POISSON_MAX_DISPERSION:
        regime = "poisson-like"
    elif r2 >= HEAVY_TAIL_MIN_R2:
        regime = "heavy-tailed"
    else:
        regime = "degenerate"
    return RegimeVerdict(regime, r2, dispersion)


@dataclass(frozen=True)
class RankSeries:
    """Values in decreasing order with ranks ``1..len``."""

    keys: tuple
    values: np.ndarray = field(repr=False)

    @property
    def ranks(self) -> np.ndarray:
        return np.arange(1, len(self.values) + 1)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(zip(self.ranks.tolist(), self.values.tolist()))

    def rows(self) -> list[tuple[int, object, float]]:
        return [(r, k, v) for r, k, v in zip(self.ranks.tolist(), self.keys, self.values.tolist())]

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "RankSeries":
        """Rank an anonymous sequence of values (keys are input positions)."""
        return rank_series(dict(enumerate(values)))


def rank_series(values: Mapping) -> RankSeries:
    """Sort positive values descending; equal values are ordered by key."""
    if not values:
        raise ValueError("rank series of an empty mapping")
    if any(not v > 0 for v in values.values()):
        raise ValueError("rank series values must be positive")
    items = sorted(values.items(), key=lambda kv: (-kv[1], kv[0]))
    return RankSeries(tuple(k for k, _ in items), np.array([v for _, v in items], dtype=float))


def fit_loglog_slope(series: RankSeries) -> LinearFit:
    """Least-squares line through ``(ln rank, ln value)``; Zipf's law gives slope -1."""
    if len(series) < 3:
        raise ValueError("log-log fit needs at least 3 points")
    return _ols(np.log(series.ranks), np.log(series.values))


def degree_betweenness_spearman(view, workers: int | None = None) -> float:
    """Spearman rank correlation between node degree and betweenness.

    Quantifies how often the best-connected nodes are also the main
    brokers. Returns nan when either ranking is constant.
    """
    g = _Indexed(view)
    b = betweenness(view, workers)
    deg = [len(g.nbrs[i]) for i in range(len(g))]
    bv = [b[u] for u in g.nodes]
    if len(set(deg)) < 2 or len(set(bv)) < 2:
        return math.nan
    return float(stats.spearmanr(deg, bv).statistic)


@dataclass(frozen=True)
class MetricSnapshot:
    D: int | None
    n: int
    m: int
    il: float
    mean_clustering: float
    degree_histogram: dict[int, int]
    betweenness: dict
    regime: RegimeVerdict

    def row(self) -> dict:
        return {
            "D": self.D,
            "n": self.n,
            "m": self.m,
            "il": self.il,
            "mean_clustering": self.mean_clustering,
            "dispersion": self.regime.dispersion,
            "loglog_r2": self.regime.loglog_r2,
            "regime": self.regime.regime,
        }


def metric_snapshot(view, D: int | None = None, workers: int | None = None) -> MetricSnapshot:
    """All headline metrics of one checkpoint.

    Small or edgeless graphs get the limiting values instead of errors:
    ``il`` and clustering are 0 without edges, betweenness is empty below
    three nodes.
    """
    if D is None:
        D = getattr(view, "doc_count", None)
    g = _Indexed(view)
    n, m = len(g), g.m
    il = avg_inverse_distance(view, workers) if n >= 2 else 0.0
    mc = math.fsum(_all_clustering(g)) / n if n else 0.0
    b = betweenness(view, workers) if n >= 3 else {}
    hist = dict(sorted(Counter(len(x) for x in g.nbrs).items()))
    return MetricSnapshot(D, n, m, il, mc, hist, b, classify_degree_regime(hist))


def node_metrics(view, betweenness_values: Mapping | None = None, workers: int | None = None) -> list[dict]:
    """Per-node ``id, degree, betweenness, clustering`` rows in node order.

    Betweenness is left as ``None`` for graphs under three nodes.
    """
    g = _Indexed(view)
    if betweenness_values is None:
        betweenness_values = betweenness(view, workers) if len(g) >= 3 else {}
    clus = _all_clustering(g)
    return [
        {
            "id": u,
            "degree": len(g.nbrs[i]),
            "betweenness": betweenness_values.get(u),
            "clustering": clus[i],
        }
        for i, u in enumerate(g.nodes)
    ]
