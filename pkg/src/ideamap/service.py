"""Session protocol: bootstrapped map, regime-toggled suggestions, append-only log.

A session holds one mind map and at most one pending suggestion batch.
Every suggestion request runs under the regime the previous one did not
(breadth-first and depth-first alternate), excludes every concept already
on the map, and appends a log entry carrying the sampled p and q. Given a
seed and a fixed clock, a scripted session replays byte-identically.
"""

from __future__ import annotations

import json
import threading

import numpy as np

from .errors import (
    ContractViolationError,
    NotFoundError,
    PendingBatchError,
    StaleBatchError,
)
from .graph import KnowledgeGraph
from .mindmap import Clock, MindMap, utc_now
from .walker import (
    DEFAULT_SUGGESTION_COUNT,
    DEFAULT_WALK_LENGTH,
    Regime,
    SuggestionBatch,
    generate_suggestions,
)

LOG_VERSION = 1


class SuggestionLogEntry:
    """One suggestion request: what was offered, under which parameters."""

    __slots__ = ("timestamp", "source", "regime", "p", "q", "offered", "accepted")

    def __init__(self, timestamp: str, source: str, regime: Regime,
                 p: float, q: float, offered: tuple[str, ...],
                 accepted: str | None = None):
        self.timestamp = timestamp
        self.source = source
        self.regime = regime
        self.p = p
        self.q = q
        self.offered = offered
        self.accepted = accepted

    def to_dict(self) -> dict:
        return {"timestamp": self.timestamp, "source": self.source,
                "regime": self.regime.value, "p": self.p, "q": self.q,
                "offered": list(self.offered), "accepted": self.accepted}

    @classmethod
    def from_dict(cls, entry: dict) -> "SuggestionLogEntry":
        return cls(timestamp=entry["timestamp"], source=entry["source"],
                   regime=Regime(entry["regime"]), p=float(entry["p"]),
                   q=float(entry["q"]), offered=tuple(entry["offered"]),
                   accepted=entry.get("accepted"))


class Session:
    """One user's mind-mapping session over a shared immutable graph."""

    def __init__(self, session_id: str, graph: KnowledgeGraph, mind_map: MindMap,
                 rng: np.random.Generator, first_regime: Regime, clock: Clock,
                 root: str, suggestion_count: int = DEFAULT_SUGGESTION_COUNT,
                 walk_length: int = DEFAULT_WALK_LENGTH):
        self.session_id = session_id
        self.graph = graph
        self.map = mind_map
        self.rng = rng
        self.next_regime = first_regime
        self.clock = clock
        self.root = root
        self.suggestion_count = suggestion_count
        self.walk_length = walk_length
        self.pending: SuggestionBatch | None = None
        self._pending_entry: int | None = None
        self.log: list[SuggestionLogEntry] = []
        self.lock = threading.Lock()

    # -- protocol -----------------------------------------------------------

    def request_suggestions(self, node_id: int) -> SuggestionBatch:
        """Sample a batch for a map node under the session's next regime.

        Refused while another batch is pending. On success the regime flips
        and a log entry is appended; an exhausted request changes nothing.
        """
        if self.pending is not None:
            raise PendingBatchError("resolve the pending batch first")
        node = self.map.nodes.get(node_id)
        if node is None:
            raise NotFoundError(f"unknown node {node_id}")
        source = self.graph.find(node.concept)
        exclude = {self.graph.find(c) for c in self.map.concepts()}
        exclude.discard(None)
        batch = generate_suggestions(
            self.graph, source, self.next_regime, exclude,
            k=self.suggestion_count, walk_length=self.walk_length, rng=self.rng)
        self.pending = batch
        self.next_regime = self.next_regime.other
        self.log.append(SuggestionLogEntry(
            timestamp=self.clock(), source=node.concept,
            regime=batch.params.regime, p=batch.params.p, q=batch.params.q,
            offered=tuple(self.graph.label(cid) for cid in batch.suggestions)))
        self._pending_entry = len(self.log) - 1
        return batch

    def resolve_accept(self, concept: str) -> int:
        """Accept one offered concept; its siblings are dismissed with it."""
        batch = self._require_pending()
        cid = self.graph.find(concept)
        if cid is None or cid not in batch.suggestions:
            raise ContractViolationError(f"{concept!r} was not offered")
        node_id = self.map.accept_suggestion(batch, cid, self.graph)
        self.log[self._pending_entry].accepted = self.graph.label(cid)
        self._clear_pending()
        return node_id

    def resolve_dismiss(self) -> None:
        """Dismiss the whole pending batch; the map does not change."""
        batch = self._require_pending()
        self.map.dismiss_suggestions(batch)
        self._clear_pending()

    def _require_pending(self) -> SuggestionBatch:
        if self.pending is None:
            raise StaleBatchError("no pending batch to resolve")
        return self.pending

    def _clear_pending(self) -> None:
        self.pending = None
        self._pending_entry = None

    # -- edits --------------------------------------------------------------

    def manual_add(self, text: str, attach_to: int) -> int:
        return self.map.add_manual_node(text, attach_to, self.graph)

    def link_add(self, a: int, b: int) -> None:
        self.map.add_link(a, b)

    def remove_node(self, node_id: int) -> list[int]:
        return self.map.remove_node(node_id)

    def remove_link(self, a: int, b: int) -> None:
        self.map.remove_link(a, b)

    def move(self, node_id: int, x: float, y: float) -> None:
        self.map.move_node(node_id, x, y)

    # -- export -------------------------------------------------------------

    def export(self) -> tuple[dict, dict]:
        """(map document, log document), both JSON-ready and canonical."""
        log_doc = {
            "version": LOG_VERSION,
            "session_id": self.session_id,
            "map_id": self.map.map_id,
            "root": self.root,
            "entries": [entry.to_dict() for entry in self.log],
        }
        return self.map.serialize(), log_doc


def create_session(graph: KnowledgeGraph, root_text: str, seed: int | None = None,
                   clock: Clock = utc_now,
                   suggestion_count: int = DEFAULT_SUGGESTION_COUNT,
                   walk_length: int = DEFAULT_WALK_LENGTH) -> Session:
    """Bootstrap a session: root + five neighbors, first regime by fair coin."""
    rng = np.random.default_rng(seed)
    session_id = f"s-{int(rng.integers(0, 2 ** 32)):08x}"
    mind_map = MindMap.create(root_text, graph, rng, clock=clock)
    first = Regime.BFS if rng.random() < 0.5 else Regime.DFS
    root_label = graph.label(graph.find(root_text))
    return Session(session_id=session_id, graph=graph, mind_map=mind_map,
                   rng=rng, first_regime=first, clock=clock, root=root_label,
                   suggestion_count=suggestion_count, walk_length=walk_length)


def canonical_json(doc: dict) -> bytes:
    """Stable byte encoding used for exports and replay comparison."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False).encode("utf-8")


def load_log_document(doc: dict) -> list[SuggestionLogEntry]:
    """Parse an exported log document back into entries."""
    if doc.get("version") != LOG_VERSION:
        raise ValueError(f"unsupported log version {doc.get('version')!r}")
    return [SuggestionLogEntry.from_dict(e) for e in doc["entries"]]
