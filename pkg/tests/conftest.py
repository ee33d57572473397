"""Shared fixtures: small graphs, dump-line builders, embedding tables."""

from __future__ import annotations

import json

import numpy as np
import pytest

from ideamap.embeddings import table_from_pairs
from ideamap.graph import KnowledgeGraph, RawEdge, build_graph


def assertion_line(start: str, end: str, weight: float = 1.0,
                   lang_start: str = "en", lang_end: str = "en",
                   rel: str = "RelatedTo") -> str:
    """One well-formed dump line in the 5-field tab-separated format."""
    a = f"/a/[/r/{rel}/,/c/{lang_start}/{start}/,/c/{lang_end}/{end}/]"
    meta = json.dumps({"dataset": "/d/test", "weight": weight})
    return f"{a}\t/r/{rel}\t/c/{lang_start}/{start}\t/c/{lang_end}/{end}\t{meta}"


def ring_graph(n: int, chords: int = 0, seed: int = 0, prefix: str = "n") -> KnowledgeGraph:
    """Connected n-cycle with optional random chords, unit weights."""
    width = len(str(n))
    name = lambda i: f"{prefix}{i:0{width}d}"
    edges = [RawEdge(name(i), name((i + 1) % n), 1.0) for i in range(n)]
    rng = np.random.default_rng(seed)
    added = set()
    while len(added) < chords:
        i, j = sorted(int(x) for x in rng.integers(0, n, size=2))
        if j - i > 1 and (i, j) not in added and not (i == 0 and j == n - 1):
            added.add((i, j))
            edges.append(RawEdge(name(i), name(j), 1.0))
    return build_graph(edges)


def hop_distances(g: KnowledgeGraph, source: int) -> dict[int, int]:
    """Plain BFS distances; the oracle for every walk-distance assertion."""
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for v, _ in g.neighbors(u):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


@pytest.fixture
def g1() -> KnowledgeGraph:
    """Fixture G1: triangle a-b-c plus pendant c-d, unit weights."""
    return build_graph([
        RawEdge("a", "b", 1.0),
        RawEdge("a", "c", 1.0),
        RawEdge("b", "c", 1.0),
        RawEdge("c", "d", 1.0),
    ])


@pytest.fixture
def axes_table():
    """Unit-axis embeddings for hand-computable cosine distances."""
    return table_from_pairs([
        ("pizza", (1.0, 0.0, 0.0)),
        ("tourism", (0.0, 1.0, 0.0)),
        ("island", (0.0, 0.0, 1.0)),
        ("aloha", (-1.0, 0.0, 0.0)),
        ("listening", (1.0, 1.0, 0.0)),
        ("radio", (1.0, -1.0, 0.0)),
        ("window", (0.5, 0.5, 0.5)),
        ("windows", (0.5, 0.5, 0.5)),
    ])


def random_unit_table(labels: list[str], dim: int, seed: int):
    rng = np.random.default_rng(seed)
    pairs = []
    for label in labels:
        vec = rng.normal(size=dim)
        pairs.append((label, vec / np.linalg.norm(vec)))
    return table_from_pairs(pairs)
