"""Mind-map document model: provenance-tagged nodes, unlabeled undirected links.

Links deliberately carry no label and no direction; the map only records
that two concepts are associated. Every node must stay reachable from the
root: node removal cascades to anything it disconnects, link removal is
refused when it would split the map.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Callable, Iterable

import numpy as np

from .errors import (
    ContractViolationError,
    DisconnectError,
    DuplicateConceptError,
    DuplicateLinkError,
    InvalidConceptError,
    MapDocumentError,
    NotFoundError,
    RootRemovalError,
    SelfLinkError,
    StaleBatchError,
)
from .graph import KnowledgeGraph
from .walker import SuggestionBatch, initial_neighbors

DOCUMENT_VERSION = 1
BOOTSTRAP_NEIGHBOR_COUNT = 5

Clock = Callable[[], str]


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class Provenance(str, Enum):
    ROOT = "root"
    MANUAL = "manual"
    SUGGESTED = "suggested"
    BOOTSTRAP = "bootstrap_neighbor"


@dataclass
class MindMapNode:
    node_id: int
    concept: str
    provenance: Provenance
    x: float | None = None
    y: float | None = None


class MindMap:
    """A single mind map; mutated in place by one writer at a time."""

    def __init__(self, map_id: str, created_at: str):
        self.map_id = map_id
        self.created_at = created_at
        self.nodes: dict[int, MindMapNode] = {}
        self.links: set[tuple[int, int]] = set()
        self._next_id = 0

    # -- construction -------------------------------------------------------

    @classmethod
    def create(cls, root_text: str, g: KnowledgeGraph, rng: np.random.Generator,
               bootstrap: int = BOOTSTRAP_NEIGHBOR_COUNT,
               clock: Clock = utc_now) -> "MindMap":
        """Root node plus up to `bootstrap` weight-sampled neighbors, linked to it."""
        root_cid = g.find(root_text)
        if root_cid is None:
            raise InvalidConceptError(f"{root_text!r} is not in the vocabulary")
        map_id = f"map-{int(rng.integers(0, 2 ** 32)):08x}"
        m = cls(map_id=map_id, created_at=clock())
        root_id = m._add_node(g.label(root_cid), Provenance.ROOT)
        for cid in initial_neighbors(g, root_cid, bootstrap, rng):
            node_id = m._add_node(g.label(cid), Provenance.BOOTSTRAP)
            m.links.add(_norm_link(root_id, node_id))
        return m

    def _add_node(self, concept: str, provenance: Provenance) -> int:
        if concept in self._concept_index():
            raise DuplicateConceptError(f"{concept!r} is already on the map")
        node_id = self._next_id
        self._next_id += 1
        self.nodes[node_id] = MindMapNode(node_id, concept, provenance)
        return node_id

    def _concept_index(self) -> dict[str, int]:
        return {node.concept: node.node_id for node in self.nodes.values()}

    # -- queries ------------------------------------------------------------

    @property
    def root_id(self) -> int:
        for node in self.nodes.values():
            if node.provenance is Provenance.ROOT:
                return node.node_id
        raise MapDocumentError("map has no root node")

    def concepts(self) -> set[str]:
        return {node.concept for node in self.nodes.values()}

    def node_for_concept(self, concept: str) -> MindMapNode | None:
        node_id = self._concept_index().get(concept)
        return self.nodes[node_id] if node_id is not None else None

    def has_link(self, a: int, b: int) -> bool:
        return _norm_link(a, b) in self.links

    def _reachable(self, start: int, links: set[tuple[int, int]]) -> set[int]:
        adj: dict[int, list[int]] = {nid: [] for nid in self.nodes}
        for u, v in links:
            adj[u].append(v)
            adj[v].append(u)
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt
        return seen

    # -- edits --------------------------------------------------------------

    def add_manual_node(self, text: str, attach_to: int, g: KnowledgeGraph) -> int:
        """Vocabulary-checked manual node, linked to an existing node."""
        cid = g.find(text)
        if cid is None:
            raise InvalidConceptError(f"{text!r} is not in the vocabulary")
        if attach_to not in self.nodes:
            raise NotFoundError(f"unknown attach point {attach_to}")
        node_id = self._add_node(g.label(cid), Provenance.MANUAL)
        self.links.add(_norm_link(attach_to, node_id))
        return node_id

    def accept_suggestion(self, batch: SuggestionBatch, chosen: int,
                          g: KnowledgeGraph) -> int:
        """Commit one suggestion from a batch; the rest are dismissed with it."""
        if batch.consumed:
            raise StaleBatchError("batch was already resolved")
        if chosen not in batch.suggestions:
            raise ContractViolationError(f"concept {chosen} was not offered")
        source = self.node_for_concept(g.label(batch.source))
        if source is None:
            raise ContractViolationError("batch source concept is not on the map")
        node_id = self._add_node(g.label(chosen), Provenance.SUGGESTED)
        self.links.add(_norm_link(source.node_id, node_id))
        batch.consumed = True
        return node_id

    def dismiss_suggestions(self, batch: SuggestionBatch) -> None:
        """Dismiss a whole batch; the map does not change."""
        if batch.consumed:
            raise StaleBatchError("batch was already resolved")
        batch.consumed = True

    def add_link(self, a: int, b: int) -> None:
        if a not in self.nodes or b not in self.nodes:
            raise NotFoundError("link endpoint does not exist")
        if a == b:
            raise SelfLinkError("a link must connect two distinct nodes")
        if self.has_link(a, b):
            raise DuplicateLinkError(f"link {{{a},{b}}} already exists")
        self.links.add(_norm_link(a, b))

    def remove_node(self, node_id: int) -> list[int]:
        """Remove a node, its links, and everything the cut disconnects."""
        if node_id not in self.nodes:
            raise NotFoundError(f"unknown node {node_id}")
        if node_id == self.root_id:
            raise RootRemovalError("the root node cannot be removed")
        del self.nodes[node_id]
        kept_links = {lk for lk in self.links if node_id not in lk}
        reachable = self._reachable(self.root_id, kept_links)
        removed = [nid for nid in self.nodes if nid not in reachable]
        for nid in removed:
            del self.nodes[nid]
        self.links = {lk for lk in kept_links
                      if lk[0] in reachable and lk[1] in reachable}
        return [node_id] + sorted(removed)

    def remove_link(self, a: int, b: int) -> None:
        """Remove one link; refused when the map would fall apart."""
        link = _norm_link(a, b)
        if link not in self.links:
            raise NotFoundError(f"no link {{{a},{b}}}")
        kept = self.links - {link}
        if len(self._reachable(self.root_id, kept)) != len(self.nodes):
            raise DisconnectError(f"removing link {{{a},{b}}} would disconnect the map")
        self.links = kept

    def move_node(self, node_id: int, x: float, y: float) -> None:
        if node_id not in self.nodes:
            raise NotFoundError(f"unknown node {node_id}")
        self.nodes[node_id].x = float(x)
        self.nodes[node_id].y = float(y)

    # -- metrics ------------------------------------------------------------

    def metrics(self) -> "MapMetrics":
        """Node count and mean root-distance (hops) of the non-root nodes."""
        root = self.root_id
        depth = {root: 0}
        frontier = [root]
        adj: dict[int, list[int]] = {nid: [] for nid in self.nodes}
        for u, v in self.links:
            adj[u].append(v)
            adj[v].append(u)
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if v not in depth:
                        depth[v] = depth[u] + 1
                        nxt.append(v)
            frontier = nxt
        non_root = [d for nid, d in depth.items() if nid != root]
        mean_depth = sum(non_root) / len(non_root) if non_root else 0.0
        return MapMetrics(node_count=len(self.nodes), mean_depth=mean_depth)

    # -- persistence --------------------------------------------------------

    def serialize(self) -> dict:
        """Versioned JSON-ready document; node and link order is canonical."""
        nodes = []
        for nid in sorted(self.nodes):
            node = self.nodes[nid]
            entry: dict = {"id": node.node_id, "concept": node.concept,
                           "provenance": node.provenance.value}
            if node.x is not None:
                entry["x"] = node.x
                entry["y"] = node.y
            nodes.append(entry)
        return {
            "version": DOCUMENT_VERSION,
            "map_id": self.map_id,
            "created_at": self.created_at,
            "nodes": nodes,
            "links": sorted([list(lk) for lk in self.links]),
        }

    @classmethod
    def deserialize(cls, doc: dict) -> "MindMap":
        """Validate and rebuild a map from its document form."""
        if not isinstance(doc, dict):
            raise MapDocumentError("document must be an object")
        if doc.get("version") != DOCUMENT_VERSION:
            raise MapDocumentError(f"unsupported document version {doc.get('version')!r}")
        for key in ("map_id", "created_at", "nodes", "links"):
            if key not in doc:
                raise MapDocumentError(f"missing field {key!r}")
        m = cls(map_id=doc["map_id"], created_at=doc["created_at"])
        roots = 0
        concepts: set[str] = set()
        for entry in doc["nodes"]:
            try:
                node_id = int(entry["id"])
                concept = str(entry["concept"])
                provenance = Provenance(entry["provenance"])
            except (KeyError, ValueError, TypeError) as exc:
                raise MapDocumentError(f"bad node entry {entry!r}") from exc
            if node_id in m.nodes:
                raise MapDocumentError(f"duplicate node id {node_id}")
            if concept in concepts:
                raise MapDocumentError(f"duplicate concept {concept!r}")
            concepts.add(concept)
            if provenance is Provenance.ROOT:
                roots += 1
            node = MindMapNode(node_id, concept, provenance)
            if "x" in entry:
                node.x = float(entry["x"])
                node.y = float(entry.get("y", 0.0))
            m.nodes[node_id] = node
        if not m.nodes:
            raise MapDocumentError("document has no nodes")
        if roots != 1:
            raise MapDocumentError(f"document must have exactly one root, found {roots}")
        for pair in doc["links"]:
            if len(pair) != 2:
                raise MapDocumentError(f"bad link entry {pair!r}")
            a, b = int(pair[0]), int(pair[1])
            if a not in m.nodes or b not in m.nodes:
                raise MapDocumentError(f"link {pair!r} references a missing node")
            if a == b:
                raise MapDocumentError(f"self-link {pair!r}")
            link = _norm_link(a, b)
            if link in m.links:
                raise MapDocumentError(f"duplicate link {pair!r}")
            m.links.add(link)
        if len(m._reachable(m.root_id, m.links)) != len(m.nodes):
            raise MapDocumentError("document is not connected from the root")
        m._next_id = max(m.nodes) + 1
        return m

    def __eq__(self, other) -> bool:
        if not isinstance(other, MindMap):
            return NotImplemented
        return self.serialize() == other.serialize()

    def __repr__(self) -> str:
        return (f"MindMap({self.map_id!r}, nodes={len(self.nodes)}, "
                f"links={len(self.links)})")


@dataclass(frozen=True)
class MapMetrics:
    node_count: int
    mean_depth: float


def _norm_link(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def create_map(root_text: str, g: KnowledgeGraph, rng: np.random.Generator,
               bootstrap: int = BOOTSTRAP_NEIGHBOR_COUNT,
               clock: Clock = utc_now) -> MindMap:
    return MindMap.create(root_text, g, rng, bootstrap=bootstrap, clock=clock)


def map_metrics(m: MindMap) -> MapMetrics:
    return m.metrics()


def provenance_counts(maps: Iterable[MindMap]) -> dict[str, int]:
    """Tally nodes by provenance across maps (report plumbing)."""
    counts = {prov.value: 0 for prov in Provenance}
    for m in maps:
        for node in m.nodes.values():
            counts[node.provenance.value] += 1
    return counts
