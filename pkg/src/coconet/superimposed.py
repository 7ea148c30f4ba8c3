"""Relative-threshold ("superimposed") networks and their stability.

An edge of weight ``v`` survives when ``v >= eps * v_max``. If edge weights
decay exponentially with rank, ``v_r = exp(a + lam * r)``, the cut falls at
rank ``ln(eps) / lam`` whatever the amplitude ``a``; since ``a`` is what
grows with the number of documents, the thresholded network keeps the same
size as the flow grows.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .graph import CooccurGraph, EmptyGraphError, GraphView
from .metrics import RankSeries, _ols, avg_inverse_distance, mean_clustering, rank_series

__all__ = [
    "SuperimposedGraph",
    "RankFit",
    "CheckpointResult",
    "StabilityReport",
    "superimpose",
    "edge_weight_series",
    "fit_exponential_rank",
    "predicted_rank_cutoff",
    "stability_analysis",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuperimposedGraph:
    """Binary graph of the edges at or above ``epsilon * source_v_max``."""

    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]
    epsilon: float
    source_v_max: float
    source_D: int

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {u: set() for u in sorted(self.nodes)}
        for u, w in self.edges:
            adj[u].add(w)
            adj[w].add(u)
        return adj

    @property
    def edge_count(self) -> int:
        return len(self.edges)


def _as_view(g) -> GraphView:
    return g if isinstance(g, GraphView) else GraphView(g)


def superimpose(view: CooccurGraph | GraphView, epsilon: float) -> SuperimposedGraph:
    """Keep edges with ``v >= epsilon * v_max`` (compared exactly).

    ``epsilon`` is read as the decimal it prints as (0.2 is 1/5, not the
    nearest binary double) and the product ``epsilon * v_max`` is formed in
    rational arithmetic, so the comparison carries no rounding and scaling
    all weights by a constant cannot change the result.
    """
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    view = _as_view(view)
    edges = view.edges()
    if not edges:
        raise EmptyGraphError("cannot superimpose an edgeless view")
    v_max = max(edges.values())
    cut = Fraction(repr(float(epsilon))) * Fraction(v_max)
    kept = frozenset(k for k, v in edges.items() if Fraction(v) >= cut)
    return SuperimposedGraph(frozenset(view.nodes()), kept, float(epsilon), v_max, view.doc_count)


def edge_weight_series(view: CooccurGraph | GraphView) -> RankSeries:
    """Edge weights of the view as a rank series (ties by endpoint ids)."""
    edges = _as_view(view).edges()
    return rank_series(edges)


@dataclass(frozen=True)
class RankFit:
    a: float
    lam: float
    r_squared: float
    n_points: int

    @property
    def lambda_(self) -> float:
        return self.lam


def fit_exponential_rank(series: RankSeries, max_rank: int | None = None) -> RankFit:
    """Fit ``ln v_r = a + lam * r`` by least squares.

    ``max_rank`` restricts the fit to the first ranks. When every value is
    equal the line is exact and ``r_squared`` is reported as 1.
    """
    values = np.asarray(series.values, dtype=float)
    ranks = np.asarray(series.ranks, dtype=float)
    if max_rank is not None:
        values, ranks = values[:max_rank], ranks[:max_rank]
    if len(values) < 3:
        raise ValueError("exponential rank fit needs at least 3 points")
    if np.any(values <= 0):
        raise ValueError("exponential rank fit needs positive values")
    fit = _ols(ranks, np.log(values))
    return RankFit(fit.intercept, fit.slope, fit.r2, fit.n_points)


def predicted_rank_cutoff(fit: RankFit | float, epsilon: float) -> float:
    """Rank at which the fitted weights drop to ``epsilon`` times their scale.

    Solves ``exp(a + lam * r) = epsilon * exp(a)``, i.e. ``r = ln(epsilon) / lam``.
    The amplitude ``a`` cancels.
    """
    lam = fit.lam if isinstance(fit, RankFit) else float(fit)
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    if lam >= 0:
        raise ValueError("rank cutoff undefined for non-decaying weights (lambda >= 0)")
    return math.log(epsilon) / lam


@dataclass(frozen=True)
class CheckpointResult:
    D: int
    edges_superimposed: int | None
    il: float | None
    mean_clustering: float | None
    degenerate: bool = False

    def row(self) -> dict:
        return {
            "D": self.D,
            "edges_superimposed": self.edges_superimposed,
            "il": self.il,
            "mean_clustering": self.mean_clustering,
        }


@dataclass(frozen=True)
class StabilityReport:
    epsilon: float
    burn_in_D: int
    checkpoints: tuple[CheckpointResult, ...]
    max_edge_count_deviation: float
    max_il_deviation: float
    max_clustering_deviation: float
    warnings: tuple[str, ...] = field(default=())

    def rows(self) -> list[dict]:
        return [c.row() for c in self.checkpoints]

    def summary(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "burn_in": self.burn_in_D,
            "max_edge_count_deviation": self.max_edge_count_deviation,
            "max_il_deviation": self.max_il_deviation,
            "max_clustering_deviation": self.max_clustering_deviation,
        }


def _max_dev(xs: Sequence[float]) -> float:
    mean = math.fsum(xs) / len(xs)
    return max(abs(x - mean) for x in xs)


def stability_analysis(
    checkpoints: Sequence[CooccurGraph],
    epsilon: float,
    whitelist: Iterable[str] | None = None,
    burn_in_D: int = 10000,
    min_weight: int = 1,
) -> StabilityReport:
    """Superimpose every checkpoint and measure how much the result moves.

    Each snapshot is restricted to ``whitelist`` and to edges of weight at
    least ``min_weight``, then thresholded at ``epsilon``. Deviations are the
    largest distance from the mean over checkpoints with ``D >= burn_in_D``:
    relative for the edge count, absolute for average inverse distance and
    mean clustering. Checkpoints left without edges are reported but kept
    out of the statistics.
    """
    wl = None if whitelist is None else frozenset(whitelist)
    results = []
    warnings = []
    for snap in sorted(checkpoints, key=lambda g: g.doc_count):
        view = GraphView(snap, min_weight, wl)
        try:
            sg = superimpose(view, epsilon)
        except EmptyGraphError:
            msg = f"checkpoint D={snap.doc_count} has no edges; excluded"
            log.warning(msg)
            warnings.append(msg)
            results.append(CheckpointResult(snap.doc_count, None, None, None, degenerate=True))
            continue
        il = avg_inverse_distance(sg) if len(sg.nodes) >= 2 else 0.0
        results.append(CheckpointResult(snap.doc_count, sg.edge_count, il, mean_clustering(sg)))
    used = [r for r in results if not r.degenerate and r.D >= burn_in_D]
    if len(used) < 2:
        raise ValueError(
            f"need at least 2 non-degenerate checkpoints with D >= {burn_in_D}, got {len(used)}"
        )
    counts = [float(r.edges_superimposed) for r in used]
    mean_count = math.fsum(counts) / len(counts)
    return StabilityReport(
        epsilon=float(epsilon),
        burn_in_D=burn_in_D,
        checkpoints=tuple(results),
        max_edge_count_deviation=_max_dev(counts) / mean_count,
        max_il_deviation=_max_dev([r.il for r in used]),
        max_clustering_deviation=_max_dev([r.mean_clustering for r in used]),
        warnings=tuple(warnings),
    )
