"""Incremental co-occurrence network over a document flow.

Nodes are concept ids with the number of documents mentioning them; an
edge weight counts the documents mentioning both endpoints. Filtering
(minimum weight, top-N restriction) is done through :class:`GraphView`
objects so the accumulated counts are never modified by analysis.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations
from types import MappingProxyType
from typing import Iterable, Mapping

__all__ = [
    "EmptyGraphError",
    "CooccurGraph",
    "GraphView",
    "add_document",
    "noise_filter",
    "top_n_persons",
    "snapshot",
    "max_weight",
    "write_edge_list",
    "read_edge_list",
    "write_node_list",
    "read_node_list",
]


class EmptyGraphError(ValueError):
    """Raised when an operation needs at least one edge and there is none."""


def _key(u: str, w: str) -> tuple[str, str]:
    return (u, w) if u < w else (w, u)


class CooccurGraph:
    """Weighted undirected co-mention graph with a document counter.

    >>> g = CooccurGraph()
    >>> g.add_document({"A", "B", "C"})
    >>> g.add_document({"A", "B"})
    >>> g.weight("B", "A"), g.doc_count
    (2, 2)
    """

    def __init__(self):
        self._counts: dict[str, int] = {}
        self._edges: dict[tuple[str, str], int] = {}
        self._adj: dict[str, dict[str, int]] = {}
        self.doc_count = 0
        self._frozen = False

    @classmethod
    def from_edges(
        cls,
        weights: Mapping[tuple[str, str], float],
        node_counts: Mapping[str, int] | None = None,
        doc_count: int | None = None,
    ) -> "CooccurGraph":
        """Build a graph directly from edge weights.

        Missing node counts default to the largest incident edge weight and
        ``doc_count`` to the largest node count, the smallest values
        consistent with the weights.
        """
        g = cls()
        counts = dict(node_counts or {})
        for (u, w), v in weights.items():
            if u == w:
                raise ValueError(f"self-edge on {u!r}")
            if v <= 0:
                raise ValueError(f"edge ({u!r}, {w!r}) has non-positive weight {v}")
            k = _key(u, w)
            if k in g._edges:
                raise ValueError(f"duplicate edge {k}")
            g._edges[k] = v
            g._adj.setdefault(u, {})[w] = v
            g._adj.setdefault(w, {})[u] = v
        for node, nbrs in g._adj.items():
            top = max(nbrs.values())
            counts[node] = counts.get(node, top)
            if counts[node] < top:
                raise ValueError(f"node {node!r} count {counts[node]} below incident weight {top}")
        for node in counts:
            g._adj.setdefault(node, {})
        g._counts = dict(sorted(counts.items()))
        g.doc_count = max(g._counts.values(), default=0) if doc_count is None else doc_count
        return g

    def add_document(self, concepts: Iterable[str]) -> None:
        """Account for one document mentioning ``concepts`` (deduplicated)."""
        if self._frozen:
            raise TypeError("snapshots are immutable")
        ids = sorted(set(concepts))
        self.doc_count += 1
        for c in ids:
            self._counts[c] = self._counts.get(c, 0) + 1
            self._adj.setdefault(c, {})
        for u, w in combinations(ids, 2):
            v = self._edges.get((u, w), 0) + 1
            self._edges[(u, w)] = v
            self._adj[u][w] = v
            self._adj[w][u] = v

    @property
    def node_counts(self) -> Mapping[str, int]:
        return MappingProxyType(self._counts)

    @property
    def edges(self) -> Mapping[tuple[str, str], int]:
        """Edge weights keyed by the lexicographically ordered id pair."""
        return MappingProxyType(self._edges)

    def weight(self, u: str, w: str) -> int:
        return self._edges.get(_key(u, w), 0)

    def neighbors(self, u: str) -> Mapping[str, int]:
        return MappingProxyType(self._adj.get(u, {}))

    def __len__(self) -> int:
        return len(self._counts)

    def __contains__(self, node) -> bool:
        return node in self._counts

    def __eq__(self, other) -> bool:
        if not isinstance(other, CooccurGraph):
            return NotImplemented
        return (
            self.doc_count == other.doc_count
            and self._counts == other._counts
            and self._edges == other._edges
        )

    def __repr__(self) -> str:
        return f"<CooccurGraph D={self.doc_count} n={len(self._counts)} m={len(self._edges)}>"

    def snapshot(self) -> "CooccurGraph":
        """Deep, immutable copy tagged with the current document count."""
        g = CooccurGraph()
        g._counts = dict(self._counts)
        g._edges = dict(self._edges)
        g._adj = {u: dict(nbrs) for u, nbrs in self._adj.items()}
        g.doc_count = self.doc_count
        g._frozen = True
        return g

    @property
    def frozen(self) -> bool:
        return self._frozen

    def view(self, min_weight: float = 1, whitelist: Iterable[str] | None = None) -> "GraphView":
        return GraphView(self, min_weight, None if whitelist is None else frozenset(whitelist))


@dataclass(frozen=True)
class GraphView:
    """Read-only filter over a :class:`CooccurGraph`.

    Exposes the edges of weight ``>= min_weight`` whose endpoints are both
    in ``whitelist`` (when given). Nodes stay visible even when all their
    edges are filtered out.
    """

    base: CooccurGraph
    min_weight: float = 1
    whitelist: frozenset[str] | None = None

    def __post_init__(self):
        if self.min_weight < 1:
            raise ValueError("min_weight must be >= 1")

    @property
    def doc_count(self) -> int:
        return self.base.doc_count

    def _keep(self, node: str) -> bool:
        return self.whitelist is None or node in self.whitelist

    def nodes(self) -> list[str]:
        return sorted(u for u in self.base.node_counts if self._keep(u))

    def node_counts(self) -> dict[str, int]:
        return {u: self.base.node_counts[u] for u in self.nodes()}

    def edges(self) -> dict[tuple[str, str], int]:
        return {
            k: v
            for k, v in sorted(self.base.edges.items())
            if v >= self.min_weight and self._keep(k[0]) and self._keep(k[1])
        }

    def edge_count(self) -> int:
        return len(self.edges())

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {u: set() for u in self.nodes()}
        for u, w in self.edges():
            adj[u].add(w)
            adj[w].add(u)
        return adj

    def filter(self, min_weight: float) -> "GraphView":
        return GraphView(self.base, max(self.min_weight, min_weight), self.whitelist)

    def restrict(self, whitelist: Iterable[str]) -> "GraphView":
        wl = frozenset(whitelist)
        if self.whitelist is not None:
            wl &= self.whitelist
        return GraphView(self.base, self.min_weight, wl)


def _as_view(g: CooccurGraph | GraphView) -> GraphView:
    return g if isinstance(g, GraphView) else GraphView(g)


def add_document(graph: CooccurGraph, concepts: Iterable[str]) -> None:
    graph.add_document(concepts)


def noise_filter(graph: CooccurGraph | GraphView, min_weight: int = 2) -> GraphView:
    """Hide edges lighter than ``min_weight`` (documents), keeping all nodes."""
    if min_weight < 1:
        raise ValueError("min_weight must be >= 1")
    return _as_view(graph).filter(min_weight)


def top_n_persons(graph: CooccurGraph | GraphView, n: int) -> frozenset[str]:
    """The ``n`` most-mentioned concepts; ties go to the smaller id."""
    if n < 1:
        raise ValueError("n must be >= 1")
    counts = _as_view(graph).node_counts()
    ranked = sorted(counts, key=lambda u: (-counts[u], u))
    return frozenset(ranked[:n])


def snapshot(graph: CooccurGraph) -> CooccurGraph:
    return graph.snapshot()


def max_weight(view: CooccurGraph | GraphView) -> int:
    """Largest edge weight in the view; raises :class:`EmptyGraphError` if edgeless."""
    edges = _as_view(view).edges()
    if not edges:
        raise EmptyGraphError("view has no edges, maximum weight undefined")
    return max(edges.values())


def write_edge_list(view: CooccurGraph | GraphView, path: str | os.PathLike) -> None:
    """TSV ``u<TAB>w<TAB>weight`` sorted by weight desc, then ids."""
    edges = _as_view(view).edges()
    rows = sorted(edges.items(), key=lambda kv: (-kv[1], kv[0][0], kv[0][1]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for (u, w), v in rows:
            fh.write(f"{u}\t{w}\t{v}\n")


def write_node_list(view: CooccurGraph | GraphView, path: str | os.PathLike) -> None:
    """TSV ``id<TAB>mention_doc_count`` in id order."""
    counts = _as_view(view).node_counts()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for u, c in counts.items():
            fh.write(f"{u}\t{c}\n")


def _parse_number(s: str) -> float:
    try:
        return int(s)
    except ValueError:
        return float(s)


def read_edge_list(
    path: str | os.PathLike, node_counts: Mapping[str, int] | None = None, doc_count: int | None = None
) -> CooccurGraph:
    """Load an edge-list TSV into an (immutable) graph."""
    weights = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 tab-separated fields")
            try:
                weights[(parts[0], parts[1])] = _parse_number(parts[2])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad weight {parts[2]!r}") from None
    g = CooccurGraph.from_edges(weights, node_counts, doc_count)
    g._frozen = True
    return g


def read_node_list(path: str | os.PathLike) -> dict[str, int]:
    counts = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 tab-separated fields")
            counts[parts[0]] = int(parts[1])
    return counts
