"""Concept suggestion sampling via biased second-order random walks.

A walk regime biases where suggestions come from: the breadth-first regime
(p < min(q,1), q > 1) keeps walks near the source concept, the depth-first
regime (p > max(q,1), q < 1) pushes them away. Suggestions are the terminal
nodes of fixed-length walks, so the (p, q) bias is the sole driver of how
far a suggestion lands from its source.

The stepping kernel is compiled when the extension built; otherwise the
pure-Python twin takes over. Both consume the identical uniform stream, so
results do not depend on which backend is active.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ContractViolationError, ExhaustedSuggestionsError
from .graph import ConceptId, KnowledgeGraph

try:
    if os.environ.get("IDEAMAP_PURE_WALK") == "1":
        raise ImportError("pure kernel forced via IDEAMAP_PURE_WALK")
    from . import _walk_core as _kernel
    KERNEL_BACKEND = "compiled"
except ImportError:
    from . import _walk_py as _kernel
    KERNEL_BACKEND = "python"

DEFAULT_WALK_LENGTH = 3
DEFAULT_SUGGESTION_COUNT = 5
MAX_ATTEMPTS_PER_SUGGESTION = 20

# Sampling ranges keep a margin inside the regime inequalities and avoid
# extreme 1/p, 1/q scores that would degenerate the walk.
BFS_P_RANGE = (0.1, 0.9)
BFS_Q_RANGE = (1.5, 4.0)
DFS_P_RANGE = (1.5, 4.0)
DFS_Q_RANGE = (0.25, 0.9)


class Regime(str, Enum):
    BFS = "bfs"
    DFS = "dfs"

    @property
    def other(self) -> "Regime":
        return Regime.DFS if self is Regime.BFS else Regime.BFS


@dataclass(frozen=True)
class WalkParams:
    """Walk bias parameters; regime is None for manual/unconstrained choices."""

    p: float
    q: float
    regime: Regime | None = None
    walk_length: int = DEFAULT_WALK_LENGTH
    suggestion_count: int = DEFAULT_SUGGESTION_COUNT

    def __post_init__(self):
        if self.p <= 0 or self.q <= 0:
            raise ValueError("p and q must be positive")
        if self.walk_length < 0:
            raise ValueError("walk_length must be >= 0")
        if self.suggestion_count < 1:
            raise ValueError("suggestion_count must be >= 1")
        if self.regime is Regime.BFS and not (self.p < min(self.q, 1.0) and self.q > 1.0):
            raise ValueError(f"BFS regime requires p < min(q,1) and q > 1, got p={self.p} q={self.q}")
        if self.regime is Regime.DFS and not (self.p > max(self.q, 1.0) and self.q < 1.0):
            raise ValueError(f"DFS regime requires p > max(q,1) and q < 1, got p={self.p} q={self.q}")


@dataclass
class SuggestionBatch:
    """One request's worth of suggestions, reproducible from rng_seed."""

    source: ConceptId
    params: WalkParams
    suggestions: tuple[ConceptId, ...]
    rng_seed: int
    consumed: bool = field(default=False, compare=False)


def sample_regime_params(regime: Regime, rng: np.random.Generator) -> tuple[float, float]:
    """Draw (p, q) uniformly from the regime's ranges; q is drawn first."""
    if regime is Regime.DFS:
        q = rng.uniform(*DFS_Q_RANGE)
        p = rng.uniform(*DFS_P_RANGE)
    else:
        q = rng.uniform(*BFS_Q_RANGE)
        p = rng.uniform(*BFS_P_RANGE)
    return float(p), float(q)


def transition_weights(g: KnowledgeGraph, prev: ConceptId | None, curr: ConceptId,
                       p: float, q: float) -> tuple[np.ndarray, np.ndarray]:
    """Analytic one-step distribution: (neighbor ids, probabilities).

    Neighbor x scores w(curr,x) * alpha with alpha = 1/p when x is prev,
    1 when x is adjacent to prev, 1/q otherwise; the first step (prev None)
    weighs neighbors by edge weight alone. Probabilities sum to 1.
    """
    ids, weights = g.neighbor_arrays(curr)
    scores = weights.astype(np.float64).copy()
    if prev is not None:
        prev_ids, _ = g.neighbor_arrays(prev)
        pos = np.searchsorted(prev_ids, curr)
        if pos >= len(prev_ids) or prev_ids[pos] != curr:
            raise ContractViolationError(f"prev={prev} is not adjacent to curr={curr}")
        near = np.searchsorted(prev_ids, ids)
        near = np.clip(near, 0, len(prev_ids) - 1)
        is_neighbor_of_prev = prev_ids[near] == ids
        alpha = np.where(is_neighbor_of_prev, 1.0, 1.0 / q)
        alpha[ids == prev] = 1.0 / p
        scores *= alpha
    return ids.astype(np.int64), scores / scores.sum()


def sample_walk(g: KnowledgeGraph, start: ConceptId, params: WalkParams,
                rng: np.random.Generator) -> list[ConceptId]:
    """One biased walk from start; path has walk_length + 1 nodes."""
    g.neighbors(start)  # membership check
    steps = params.walk_length
    out = np.empty(steps + 1, dtype=np.int64)
    _kernel.walk(g.indptr, g.indices, g.weights, start, -1,
                 params.p, params.q, rng.random(steps), out)
    return [int(x) for x in out]


def sample_step(g: KnowledgeGraph, prev: ConceptId | None, curr: ConceptId,
                p: float, q: float, rng: np.random.Generator) -> ConceptId:
    """Sample a single transition out of (prev, curr) through the kernel."""
    out = np.empty(2, dtype=np.int64)
    _kernel.walk(g.indptr, g.indices, g.weights, curr,
                 -1 if prev is None else prev, p, q, rng.random(1), out)
    return int(out[1])


def generate_suggestions(g: KnowledgeGraph, source: ConceptId, regime: Regime,
                         exclude: frozenset[ConceptId] | set[ConceptId] = frozenset(),
                         k: int = DEFAULT_SUGGESTION_COUNT,
                         walk_length: int = DEFAULT_WALK_LENGTH,
                         rng: np.random.Generator | None = None) -> SuggestionBatch:
    """Collect up to k distinct walk-terminal concepts as a suggestion batch.

    (p, q) are drawn once per batch. Candidates equal to the source, in the
    exclusion set, or already collected are rejected; sampling stops at k
    accepted or after 20*k walks. Raises ExhaustedSuggestionsError when not
    a single candidate survived.
    """
    if rng is None:
        rng = np.random.default_rng()
    seed = int(rng.integers(0, 2 ** 63 - 1))
    return replay_suggestions(g, source, regime, exclude, k, walk_length, seed)


def replay_suggestions(g: KnowledgeGraph, source: ConceptId, regime: Regime,
                       exclude: frozenset[ConceptId] | set[ConceptId],
                       k: int, walk_length: int, seed: int) -> SuggestionBatch:
    """Deterministic batch generation from a recorded seed."""
    child = np.random.Generator(np.random.PCG64(seed))
    p, q = sample_regime_params(regime, child)
    params = WalkParams(p=p, q=q, regime=regime,
                        walk_length=walk_length, suggestion_count=k)
    collected: list[ConceptId] = []
    seen = set(exclude)
    seen.add(source)
    for _ in range(MAX_ATTEMPTS_PER_SUGGESTION * k):
        terminal = sample_walk(g, source, params, child)[-1]
        if terminal in seen:
            continue
        seen.add(terminal)
        collected.append(terminal)
        if len(collected) == k:
            break
    if not collected:
        raise ExhaustedSuggestionsError(
            f"no eligible suggestion from {g.label(source)!r} "
            f"after {MAX_ATTEMPTS_PER_SUGGESTION * k} walks")
    return SuggestionBatch(source=source, params=params,
                           suggestions=tuple(collected), rng_seed=seed)


def initial_neighbors(g: KnowledgeGraph, root: ConceptId, n: int,
                      rng: np.random.Generator) -> list[ConceptId]:
    """n distinct direct neighbors of root, weight-proportional, no replacement.

    When degree(root) < n, every neighbor is returned.
    """
    ids, weights = g.neighbor_arrays(root)
    if len(ids) <= n:
        return [int(x) for x in ids]
    remaining = weights.astype(np.float64).copy()
    chosen: list[ConceptId] = []
    for _ in range(n):
        cum = np.cumsum(remaining)
        j = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
        j = min(j, len(ids) - 1)
        chosen.append(int(ids[j]))
        remaining[j] = 0.0
    return chosen
