"""Knowledge-graph mind-mapping engine.

Builds an undirected concept graph from an assertion dump, samples
non-obvious concept suggestions with biased second-order random walks,
models the mind map being drawn, and measures the outcome (diversity,
distinctness, acceptance statistics) over exported sessions.
"""

from .analytics import (
    concept_distinctness,
    corpus_report,
    map_diversity,
    suggestion_source_distance,
)
from .embeddings import EmbeddingTable, cosine_distance, load_embeddings
from .graph import KnowledgeGraph, build_graph, normalize_label, parse_assertion_line
from .mindmap import MindMap, MapMetrics, Provenance
from .service import Session, create_session
from .stats import SampleSummary, TestResult, chi_square_2x2, cohens_d_pooled, welch_t_test
from .walker import (
    KERNEL_BACKEND,
    Regime,
    SuggestionBatch,
    WalkParams,
    generate_suggestions,
    initial_neighbors,
    sample_regime_params,
    sample_walk,
    transition_weights,
)

__version__ = "0.1.0"

__all__ = [
    "EmbeddingTable",
    "KERNEL_BACKEND",
    "KnowledgeGraph",
    "MapMetrics",
    "MindMap",
    "Provenance",
    "Regime",
    "SampleSummary",
    "Session",
    "SuggestionBatch",
    "TestResult",
    "WalkParams",
    "build_graph",
    "chi_square_2x2",
    "cohens_d_pooled",
    "concept_distinctness",
    "corpus_report",
    "cosine_distance",
    "create_session",
    "generate_suggestions",
    "initial_neighbors",
    "load_embeddings",
    "map_diversity",
    "normalize_label",
    "parse_assertion_line",
    "sample_regime_params",
    "sample_walk",
    "suggestion_source_distance",
    "transition_weights",
    "welch_t_test",
]
