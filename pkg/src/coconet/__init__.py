"""Dynamic co-occurrence networks of concepts mined from document flows."""

__version__ = "0.1.0"

from .corpus_io import CorpusFormatError, Document, read_documents, write_documents, write_table
from .extract import Lexicon, canonicalize, extract_companies, extract_document, extract_persons
from .graph import (
    CooccurGraph,
    EmptyGraphError,
    GraphView,
    max_weight,
    noise_filter,
    snapshot,
    top_n_persons,
)
from .metrics import (
    UndefinedMetricError,
    avg_inverse_distance,
    betweenness,
    bfs_distances,
    classify_degree_regime,
    clustering_node,
    degree_histogram,
    fit_loglog_slope,
    mean_clustering,
    metric_snapshot,
    rank_series,
)
from .superimposed import (
    fit_exponential_rank,
    predicted_rank_cutoff,
    stability_analysis,
    superimpose,
)
from .synth import GeneratorConfig, generate_corpus, verify_generator

__all__ = [
    "CorpusFormatError", "Document", "read_documents", "write_documents", "write_table",
    "Lexicon", "canonicalize", "extract_companies", "extract_document", "extract_persons",
    "CooccurGraph", "EmptyGraphError", "GraphView", "max_weight", "noise_filter", "snapshot",
    "top_n_persons",
    "UndefinedMetricError", "avg_inverse_distance", "betweenness", "bfs_distances",
    "classify_degree_regime", "clustering_node", "degree_histogram", "fit_loglog_slope",
    "mean_clustering", "metric_snapshot", "rank_series",
    "fit_exponential_rank", "predicted_rank_cutoff", "stability_analysis", "superimpose",
    "GeneratorConfig", "generate_corpus", "verify_generator",
]
