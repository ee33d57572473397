"""Command-line entry points: ingest, analyze, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import walker
from .analytics import corpus_report, render_markdown
from .embeddings import load_embeddings
from .errors import IdeamapError
from .graph import KnowledgeGraph, build_from_dump
from .mindmap import MindMap
from .service import load_log_document


def _cmd_ingest(args) -> int:
    graph, stats = build_from_dump(args.assertions)
    graph.save_snapshot(args.out)
    print(f"read {stats.lines} lines: {stats.edges} edges kept, "
          f"{stats.filtered} filtered, {stats.malformed} malformed")
    print(f"largest component: {graph.num_nodes} nodes, {graph.num_edges} edges "
          f"-> {args.out}")
    return 0


def _load_graph(args) -> KnowledgeGraph:
    if args.graph:
        return KnowledgeGraph.load_snapshot(args.graph)
    graph, stats = build_from_dump(args.assertions)
    print(f"built graph from dump: {graph.num_nodes} nodes, "
          f"{graph.num_edges} edges ({stats.malformed} malformed lines skipped)")
    return graph


def _cmd_serve(args) -> int:
    import uvicorn

    from .api import SessionStore, create_app

    graph = _load_graph(args)
    static = args.static
    if static is None:
        default_static = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static = default_static if default_static.is_dir() else None
    app = create_app(SessionStore(graph), static_dir=static)
    print(f"walk kernel backend: {walker.KERNEL_BACKEND}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _cmd_analyze(args) -> int:
    diagnostics: list[str] = []
    try:
        table = load_embeddings(args.embeddings)
    except (IdeamapError, OSError) as exc:
        print(f"error: cannot load embeddings: {exc}", file=sys.stderr)
        return 2

    maps_by_group: dict[str, list[MindMap]] = {}
    group_of_map: dict[str, str] = {}
    for path in sorted(Path(args.maps).glob("*.json")):
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
            m = MindMap.deserialize(doc)
        except (IdeamapError, json.JSONDecodeError, OSError) as exc:
            diagnostics.append(f"{path.name}: {exc}")
            continue
        group = str(doc.get(args.group_by, "all"))
        maps_by_group.setdefault(group, []).append(m)
        group_of_map[m.map_id] = group
    if not maps_by_group:
        print("error: no valid map documents found", file=sys.stderr)
        for line in diagnostics:
            print(f"  {line}", file=sys.stderr)
        return 2

    logs_by_group = None
    if args.logs:
        logs_by_group = {}
        for path in sorted(Path(args.logs).glob("*.json")):
            try:
                doc = json.loads(path.read_text(encoding="utf-8"))
                entries = load_log_document(doc)
            except (ValueError, KeyError, OSError) as exc:
                diagnostics.append(f"{path.name}: {exc}")
                continue
            group = str(doc.get(args.group_by,
                                group_of_map.get(doc.get("map_id"), "all")))
            logs_by_group.setdefault(group, []).extend(entries)

    report = corpus_report(maps_by_group, table, logs_by_group)
    out = Path(args.out)
    if out.suffix == ".md":
        out.write_text(render_markdown(report), encoding="utf-8")
    else:
        out.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                       encoding="utf-8")
    print(f"report written to {out}")
    if diagnostics:
        print(f"{len(diagnostics)} input file(s) skipped:", file=sys.stderr)
        for line in diagnostics:
            print(f"  {line}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="ideamap")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="build a graph snapshot from an assertion dump")
    p_ingest.add_argument("--assertions", required=True)
    p_ingest.add_argument("--out", required=True)
    p_ingest.set_defaults(func=_cmd_ingest)

    p_serve = sub.add_parser("serve", help="run the session HTTP service")
    src = p_serve.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", help="graph snapshot file")
    src.add_argument("--assertions", help="assertion dump to ingest at startup")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--static", help="directory with the built UI")
    p_serve.set_defaults(func=_cmd_serve)

    p_analyze = sub.add_parser("analyze", help="compute corpus metrics and statistics")
    p_analyze.add_argument("--maps", required=True, help="directory of map documents")
    p_analyze.add_argument("--embeddings", required=True)
    p_analyze.add_argument("--logs", help="directory of session log documents")
    p_analyze.add_argument("--group-by", default="group",
                           help="document field holding the condition label")
    p_analyze.add_argument("--out", required=True, help="report path (.json or .md)")
    p_analyze.set_defaults(func=_cmd_analyze)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IdeamapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
