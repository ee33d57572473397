"""Session protocol: toggling, pending discipline, logging, replay."""

from __future__ import annotations

import itertools

import pytest

from ideamap.errors import (
    ContractViolationError,
    InvalidConceptError,
    NotFoundError,
    PendingBatchError,
    RootRemovalError,
    StaleBatchError,
)
from ideamap.mindmap import MindMap, Provenance
from ideamap.service import canonical_json, create_session, load_log_document

from conftest import ring_graph


@pytest.fixture(scope="module")
def g():
    return ring_graph(100, chords=30, seed=17)


def fixed_clock():
    counter = itertools.count()
    return lambda: f"1970-01-01T00:00:{next(counter):02d}+00:00"


def test_create_session_bootstrap(g):
    s = create_session(g, g.labels[0], seed=5, clock=fixed_clock())
    assert len(s.map.nodes) <= 6
    assert s.log == []
    assert s.pending is None


def test_create_session_deterministic(g):
    a = create_session(g, g.labels[3], seed=9, clock=fixed_clock())
    b = create_session(g, g.labels[3], seed=9, clock=fixed_clock())
    assert a.session_id == b.session_id
    assert a.map == b.map
    assert a.next_regime == b.next_regime


def test_create_session_invalid_root(g):
    with pytest.raises(InvalidConceptError):
        create_session(g, "definitely not here", seed=1)


def test_regimes_alternate(g):
    s = create_session(g, g.labels[0], seed=11, clock=fixed_clock())
    regimes = []
    for _ in range(4):
        s.request_suggestions(s.map.root_id)
        regimes.append(s.log[-1].regime)
        s.resolve_dismiss()
    for first, second in zip(regimes, regimes[1:]):
        assert first != second


def test_batch_excludes_map_concepts(g):
    s = create_session(g, g.labels[0], seed=13, clock=fixed_clock())
    on_map = set(s.map.concepts())
    batch = s.request_suggestions(s.map.root_id)
    offered = {g.label(cid) for cid in batch.suggestions}
    assert len(offered) == 5
    assert not (offered & on_map)


def test_pending_discipline(g):
    s = create_session(g, g.labels[0], seed=15, clock=fixed_clock())
    s.request_suggestions(s.map.root_id)
    map_doc = s.map.serialize()
    log_len = len(s.log)
    with pytest.raises(PendingBatchError):
        s.request_suggestions(s.map.root_id)
    assert s.map.serialize() == map_doc
    assert len(s.log) == log_len


def test_accept_flow(g):
    s = create_session(g, g.labels[0], seed=19, clock=fixed_clock())
    batch = s.request_suggestions(s.map.root_id)
    chosen = g.label(batch.suggestions[2])
    before = s.map.metrics().node_count
    node_id = s.resolve_accept(chosen)
    assert s.map.metrics().node_count == before + 1
    assert s.map.nodes[node_id].concept == chosen
    assert s.map.nodes[node_id].provenance is Provenance.SUGGESTED
    assert s.map.has_link(s.map.root_id, node_id)
    assert s.log[-1].accepted == chosen
    assert s.pending is None


def test_dismiss_flow(g):
    s = create_session(g, g.labels[0], seed=23, clock=fixed_clock())
    s.request_suggestions(s.map.root_id)
    before = s.map.serialize()
    s.resolve_dismiss()
    assert s.map.serialize() == before
    assert s.log[-1].accepted is None
    assert len(s.log[-1].offered) == 5


def test_accept_not_offered_keeps_session(g):
    s = create_session(g, g.labels[0], seed=29, clock=fixed_clock())
    batch = s.request_suggestions(s.map.root_id)
    offered = {g.label(cid) for cid in batch.suggestions}
    outside = next(lab for lab in g.labels if lab not in offered
                   and lab not in s.map.concepts())
    with pytest.raises(ContractViolationError):
        s.resolve_accept(outside)
    assert s.pending is batch
    assert s.log[-1].accepted is None
    s.resolve_dismiss()


def test_resolve_without_pending(g):
    s = create_session(g, g.labels[0], seed=31, clock=fixed_clock())
    with pytest.raises(StaleBatchError):
        s.resolve_dismiss()
    with pytest.raises(StaleBatchError):
        s.resolve_accept("anything")


def test_edits_delegate(g):
    s = create_session(g, g.labels[0], seed=37, clock=fixed_clock())
    fresh = next(lab for lab in g.labels if lab not in s.map.concepts())
    nid = s.manual_add(fresh, s.map.root_id)
    assert s.map.nodes[nid].provenance is Provenance.MANUAL

    metrics_before = s.map.metrics()
    s.move(nid, 12.0, 34.0)
    assert (s.map.nodes[nid].x, s.map.nodes[nid].y) == (12.0, 34.0)
    assert s.map.metrics() == metrics_before

    with pytest.raises(RootRemovalError):
        s.remove_node(s.map.root_id)
    fresh2 = next(lab for lab in g.labels if lab not in s.map.concepts())
    with pytest.raises(NotFoundError):
        s.manual_add(fresh2, 999)
    with pytest.raises(InvalidConceptError):
        s.manual_add("zz not vocabulary zz", s.map.root_id)


def test_export_fresh_session(g):
    s = create_session(g, g.labels[0], seed=41, clock=fixed_clock())
    map_doc, log_doc = s.export()
    assert log_doc["entries"] == []
    assert log_doc["root"] == g.labels[0]
    assert len(map_doc["nodes"]) == len(s.map.nodes)
    assert MindMap.deserialize(map_doc) == s.map


def test_export_after_requests(g):
    s = create_session(g, g.labels[0], seed=43, clock=fixed_clock())
    for i in range(3):
        batch = s.request_suggestions(s.map.root_id)
        if i == 0:
            s.resolve_accept(g.label(batch.suggestions[0]))
        else:
            s.resolve_dismiss()
    map_doc, log_doc = s.export()
    assert len(log_doc["entries"]) == 3
    regimes = [e["regime"] for e in log_doc["entries"]]
    assert all(a != b for a, b in zip(regimes, regimes[1:]))
    entries = load_log_document(log_doc)
    assert entries[0].accepted is not None

    # log/map consistency both ways
    accepted = {e.accepted for e in entries if e.accepted}
    suggested_nodes = {n.concept for n in s.map.nodes.values()
                       if n.provenance is Provenance.SUGGESTED}
    assert accepted == suggested_nodes


def scripted_run(g, seed):
    s = create_session(g, g.labels[0], seed=seed, clock=fixed_clock())
    batch = s.request_suggestions(s.map.root_id)
    first = s.resolve_accept(g.label(batch.suggestions[0]))
    s.request_suggestions(first)
    s.resolve_dismiss()
    fresh = next(lab for lab in g.labels if lab not in s.map.concepts())
    manual = s.manual_add(fresh, s.map.root_id)
    s.link_add(manual, first)
    s.remove_link(manual, first)
    s.remove_node(first)
    map_doc, log_doc = s.export()
    return canonical_json(map_doc), canonical_json(log_doc)


def test_replay_determinism(g):
    assert scripted_run(g, 4242) == scripted_run(g, 4242)
    assert scripted_run(g, 4242) != scripted_run(g, 777)
