"""End-to-end CLI runs over exported fixtures."""

from __future__ import annotations

import itertools
import json

import pytest

from ideamap.cli import main
from ideamap.embeddings import save_embeddings
from ideamap.graph import KnowledgeGraph
from ideamap.service import canonical_json, create_session

from conftest import assertion_line, random_unit_table, ring_graph


@pytest.fixture()
def corpus_dirs(tmp_path):
    """Two groups of exported sessions plus a matching embedding file."""
    g = ring_graph(60, chords=20, seed=50)
    maps_dir = tmp_path / "maps"
    logs_dir = tmp_path / "logs"
    maps_dir.mkdir()
    logs_dir.mkdir()
    counter = itertools.count()
    clock = lambda: f"t{next(counter)}"
    for i, group in enumerate(["tool", "tool", "baseline", "baseline"]):
        s = create_session(g, g.labels[i * 7], seed=100 + i, clock=clock)
        batch = s.request_suggestions(s.map.root_id)
        if i % 2 == 0:
            s.resolve_accept(g.label(batch.suggestions[0]))
        else:
            s.resolve_dismiss()
        map_doc, log_doc = s.export()
        map_doc["condition"] = group
        log_doc["condition"] = group
        (maps_dir / f"map{i}.json").write_bytes(canonical_json(map_doc))
        (logs_dir / f"log{i}.json").write_bytes(canonical_json(log_doc))
    table = random_unit_table(list(g.labels), dim=8, seed=3)
    emb_path = tmp_path / "vectors.txt"
    save_embeddings(table, emb_path)
    return tmp_path, maps_dir, logs_dir, emb_path


def test_analyze_json_report(corpus_dirs, capsys):
    tmp_path, maps_dir, logs_dir, emb_path = corpus_dirs
    out = tmp_path / "report.json"
    code = main(["analyze", "--maps", str(maps_dir), "--embeddings", str(emb_path),
                 "--logs", str(logs_dir), "--group-by", "condition",
                 "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["groups"] == ["baseline", "tool"]
    assert report["totals"]["maps"] == 4
    assert report["acceptance"]["per_group"]["tool"]["offered"] == 10


def test_analyze_markdown_report(corpus_dirs):
    tmp_path, maps_dir, logs_dir, emb_path = corpus_dirs
    out = tmp_path / "report.md"
    code = main(["analyze", "--maps", str(maps_dir), "--embeddings", str(emb_path),
                 "--group-by", "condition", "--out", str(out)])
    assert code == 0
    assert "## Group summaries" in out.read_text()


def test_analyze_diagnoses_bad_files(corpus_dirs):
    tmp_path, maps_dir, logs_dir, emb_path = corpus_dirs
    (maps_dir / "broken.json").write_text("{not json")
    out = tmp_path / "report.json"
    code = main(["analyze", "--maps", str(maps_dir), "--embeddings", str(emb_path),
                 "--group-by", "condition", "--out", str(out)])
    assert code == 1  # report still written, nonzero exit with diagnostics
    assert out.exists()


def test_analyze_no_maps(tmp_path, corpus_dirs):
    _, _, _, emb_path = corpus_dirs
    empty = tmp_path / "none"
    empty.mkdir()
    code = main(["analyze", "--maps", str(empty), "--embeddings", str(emb_path),
                 "--out", str(tmp_path / "r.json")])
    assert code == 2


def test_ingest_snapshot(tmp_path):
    dump = tmp_path / "assertions.csv"
    lines = [assertion_line("a", "b"), assertion_line("b", "c"),
             assertion_line("x", "y"), "malformed"]
    dump.write_text("\n".join(lines) + "\n")
    snap = tmp_path / "graph.bin"
    code = main(["ingest", "--assertions", str(dump), "--out", str(snap)])
    assert code == 0
    g = KnowledgeGraph.load_snapshot(snap)
    assert g.labels == ("a", "b", "c")
