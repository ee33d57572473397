"""Concept graph: assertion-dump ingestion, largest-component build, label search.

The graph is built once from a ConceptNet-style assertion dump and is
immutable afterwards: adjacency lives in CSR arrays (sorted by neighbor id)
and the vocabulary in a lexicographically sorted label table, so node id
order and label order coincide. Everything downstream (walk sampling,
autocomplete, snapshots) relies on that layout.
"""

from __future__ import annotations

import gzip
import io
import json
import re
import struct
from bisect import bisect_left
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, TextIO

import numpy as np

from .errors import (
    AssertionParseError,
    EmptyGraphError,
    InvalidLabelError,
    NotFoundError,
    SnapshotFormatError,
)

ConceptId = int

_ENGLISH_PREFIX = "/c/en/"
_WS_RUN = re.compile(r"\s+")

SNAPSHOT_MAGIC = b"IDMGRAPH"
SNAPSHOT_VERSION = 1


def normalize_label(text: str) -> str:
    """Canonical label form: lowercase, trimmed, whitespace runs -> underscore.

    Raises InvalidLabelError when nothing is left after normalization.
    """
    label = _WS_RUN.sub("_", text.strip().lower())
    if not label:
        raise InvalidLabelError(f"label is empty after normalization: {text!r}")
    return label


def _normalize_or_empty(text: str) -> str:
    return _WS_RUN.sub("_", text.strip().lower())


@dataclass(frozen=True)
class RawEdge:
    """An undirected weighted association between two concept labels."""

    a: str
    b: str
    weight: float


@dataclass
class IngestStats:
    """Counters accumulated while streaming a dump."""

    lines: int = 0
    edges: int = 0
    filtered: int = 0   # non-English endpoint, not an error
    malformed: int = 0  # recoverable parse errors (the skip events)


def _concept_label(uri: str) -> str | None:
    """English concept URI -> bare label; None for non-English concepts.

    A part-of-speech suffix (`/c/en/run/v`) is stripped so senses merge
    into one human-typable label.
    """
    if not uri.startswith(_ENGLISH_PREFIX):
        return None
    segment = uri[len(_ENGLISH_PREFIX):]
    if "/" in segment:
        segment = segment.split("/", 1)[0]
    label = _normalize_or_empty(segment)
    if not label:
        raise AssertionParseError(f"empty concept segment in URI: {uri!r}")
    return label


def parse_assertion_line(line: str) -> RawEdge | None:
    """One dump line -> RawEdge, or None when an endpoint is not English.

    Expects 5 tab-separated fields: assertion URI, relation URI, start URI,
    end URI, JSON metadata. Weight comes from the metadata; missing or
    non-positive weights fall back to 1.0 so walk probabilities stay defined.

    Raises AssertionParseError on a malformed line (wrong field count,
    unparsable JSON); callers are expected to count and continue.
    """
    fields = line.rstrip("\n").split("\t")
    if len(fields) != 5:
        raise AssertionParseError(f"expected 5 tab-separated fields, got {len(fields)}")
    start = _concept_label(fields[2])
    end = _concept_label(fields[3])
    if start is None or end is None:
        return None
    try:
        meta = json.loads(fields[4])
    except (json.JSONDecodeError, ValueError) as exc:
        raise AssertionParseError(f"bad metadata JSON: {exc}") from exc
    if not isinstance(meta, dict):
        raise AssertionParseError("metadata is not a JSON object")
    weight = meta.get("weight")
    if not isinstance(weight, (int, float)) or weight <= 0:
        weight = 1.0
    return RawEdge(start, end, float(weight))


def parse_assertions(lines: Iterable[str], stats: IngestStats | None = None) -> Iterator[RawEdge]:
    """Stream RawEdges out of dump lines, counting skips instead of aborting."""
    if stats is None:
        stats = IngestStats()
    for line in lines:
        stats.lines += 1
        try:
            edge = parse_assertion_line(line)
        except AssertionParseError:
            stats.malformed += 1
            continue
        if edge is None:
            stats.filtered += 1
            continue
        stats.edges += 1
        yield edge


def open_dump(path: str | Path) -> TextIO:
    """Open an assertion dump, transparently decompressing .gz files."""
    path = Path(path)
    if path.suffix == ".gz":
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
    return open(path, encoding="utf-8")


class _UnionFind:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def find(self, x: str) -> str:
        parent = self.parent
        root = parent.setdefault(x, x)
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: str, y: str) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


@dataclass(frozen=True)
class KnowledgeGraph:
    """Immutable undirected weighted concept graph over a sorted vocabulary.

    Node ids are positions in the sorted label table. Adjacency is CSR:
    neighbors of node i are indices[indptr[i]:indptr[i+1]], already sorted
    by id, with matching weights. Symmetric by construction.
    """

    labels: tuple[str, ...]
    indptr: np.ndarray   # int64, len n+1
    indices: np.ndarray  # int32, len 2E
    weights: np.ndarray  # float64, len 2E
    _label_to_id: dict[str, int] = field(repr=False, default_factory=dict)

    # -- vocabulary ---------------------------------------------------------

    @property
    def num_nodes(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    def label(self, cid: ConceptId) -> str:
        self._check(cid)
        return self.labels[cid]

    def find(self, text: str) -> ConceptId | None:
        """Concept id for free text, or None when not in the vocabulary."""
        return self._label_to_id.get(_normalize_or_empty(text))

    def contains(self, text: str) -> bool:
        return self.find(text) is not None

    def autocomplete(self, prefix: str, limit: int) -> list[str]:
        """Up to `limit` labels starting with the normalized prefix, ascending."""
        if limit < 1:
            raise ValueError("limit must be >= 1")
        norm = _normalize_or_empty(prefix)
        out: list[str] = []
        i = bisect_left(self.labels, norm)
        while i < len(self.labels) and len(out) < limit:
            if not self.labels[i].startswith(norm):
                break
            out.append(self.labels[i])
            i += 1
        return out

    # -- adjacency ----------------------------------------------------------

    def _check(self, cid: ConceptId) -> None:
        if not 0 <= cid < self.num_nodes:
            raise NotFoundError(f"unknown concept id {cid}")

    def degree(self, cid: ConceptId) -> int:
        self._check(cid)
        return int(self.indptr[cid + 1] - self.indptr[cid])

    def neighbors(self, cid: ConceptId) -> list[tuple[ConceptId, float]]:
        """Full adjacency of a node as (neighbor id, weight), ascending by id."""
        self._check(cid)
        lo, hi = int(self.indptr[cid]), int(self.indptr[cid + 1])
        return [(int(i), float(w)) for i, w in zip(self.indices[lo:hi], self.weights[lo:hi])]

    def neighbor_arrays(self, cid: ConceptId) -> tuple[np.ndarray, np.ndarray]:
        """CSR row views for the hot path: (neighbor ids, weights)."""
        self._check(cid)
        lo, hi = int(self.indptr[cid]), int(self.indptr[cid + 1])
        return self.indices[lo:hi], self.weights[lo:hi]

    def has_edge(self, a: ConceptId, b: ConceptId) -> bool:
        self._check(a)
        self._check(b)
        lo, hi = int(self.indptr[a]), int(self.indptr[a + 1])
        idx = np.searchsorted(self.indices[lo:hi], b)
        return idx < hi - lo and int(self.indices[lo + idx]) == b

    # -- snapshot cache -----------------------------------------------------

    def save_snapshot(self, path: str | Path) -> None:
        """Write the built graph to a versioned binary snapshot."""
        label_blob = "\n".join(self.labels).encode("utf-8")
        with open(path, "wb") as fh:
            fh.write(SNAPSHOT_MAGIC)
            fh.write(struct.pack("<IQQQ", SNAPSHOT_VERSION, self.num_nodes,
                                 self.num_edges, len(label_blob)))
            fh.write(label_blob)
            fh.write(self.indptr.astype("<i8").tobytes())
            fh.write(self.indices.astype("<i4").tobytes())
            fh.write(self.weights.astype("<f8").tobytes())

    @classmethod
    def load_snapshot(cls, path: str | Path) -> "KnowledgeGraph":
        with open(path, "rb") as fh:
            magic = fh.read(len(SNAPSHOT_MAGIC))
            if magic != SNAPSHOT_MAGIC:
                raise SnapshotFormatError("not a graph snapshot (bad magic)")
            version, n, m, blob_len = struct.unpack("<IQQQ", fh.read(28))
            if version != SNAPSHOT_VERSION:
                raise SnapshotFormatError(f"unsupported snapshot version {version}")
            labels = tuple(fh.read(blob_len).decode("utf-8").split("\n")) if blob_len else ()
            if len(labels) != n:
                raise SnapshotFormatError("label count does not match header")
            indptr = np.frombuffer(fh.read(8 * (n + 1)), dtype="<i8")
            indices = np.frombuffer(fh.read(4 * 2 * m), dtype="<i4")
            weights = np.frombuffer(fh.read(8 * 2 * m), dtype="<f8")
            if len(indptr) != n + 1 or len(indices) != 2 * m or len(weights) != 2 * m:
                raise SnapshotFormatError("truncated snapshot payload")
        return cls(labels=labels, indptr=indptr, indices=indices, weights=weights,
                   _label_to_id={lab: i for i, lab in enumerate(labels)})


def build_graph(edges: Iterable[RawEdge]) -> KnowledgeGraph:
    """Merge an edge stream into the largest connected component.

    Parallel and antiparallel edges merge by summing weights, self-loops are
    dropped, and the result is restricted to the largest component (ties go
    to the component holding the lexicographically smallest label, so builds
    are deterministic).
    """
    merged: dict[tuple[str, str], float] = {}
    uf = _UnionFind()
    for e in edges:
        if e.a == e.b:
            continue
        key = (e.a, e.b) if e.a < e.b else (e.b, e.a)
        merged[key] = merged.get(key, 0.0) + e.weight
        uf.union(e.a, e.b)
    if not merged:
        raise EmptyGraphError("no usable edges in the stream")

    components: dict[str, list[str]] = {}
    for node in uf.parent:
        components.setdefault(uf.find(node), []).append(node)
    best_size = max(len(c) for c in components.values())
    tied = [c for c in components.values() if len(c) == best_size]
    keep = min(tied, key=min)  # size ties go to the smallest member label

    labels = tuple(sorted(keep))
    label_to_id = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)

    degree = np.zeros(n, dtype=np.int64)
    kept_edges: list[tuple[int, int, float]] = []
    for (a, b), w in merged.items():
        ia = label_to_id.get(a)
        if ia is None:
            continue
        ib = label_to_id[b]
        kept_edges.append((ia, ib, w))
        degree[ia] += 1
        degree[ib] += 1

    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(degree, out=indptr[1:])
    indices = np.zeros(indptr[-1], dtype=np.int32)
    weights = np.zeros(indptr[-1], dtype=np.float64)
    cursor = indptr[:-1].copy()
    for ia, ib, w in kept_edges:
        indices[cursor[ia]], weights[cursor[ia]] = ib, w
        cursor[ia] += 1
        indices[cursor[ib]], weights[cursor[ib]] = ia, w
        cursor[ib] += 1
    # sort each row by neighbor id
    for i in range(n):
        lo, hi = indptr[i], indptr[i + 1]
        order = np.argsort(indices[lo:hi], kind="stable")
        indices[lo:hi] = indices[lo:hi][order]
        weights[lo:hi] = weights[lo:hi][order]

    return KnowledgeGraph(labels=labels, indptr=indptr, indices=indices,
                          weights=weights, _label_to_id=label_to_id)


def build_from_dump(path: str | Path) -> tuple[KnowledgeGraph, IngestStats]:
    """Ingest an assertion dump file and build the graph."""
    stats = IngestStats()
    with open_dump(path) as fh:
        graph = build_graph(parse_assertions(fh, stats))
    return graph, stats
