"""Corpus metrics and statistics over exported mind maps and suggestion logs.

Diversity is the mean pairwise cosine distance of a map's concepts;
distinctness is, per concept, the mean cosine distance to every other
distinct concept pooled across the whole corpus (deduplicated, so repeated
concepts do not weight the mean). Group comparisons use Welch's t-test with
pooled-SD Cohen's d, and suggestion acceptance uses the 2x2 chi-square.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .embeddings import EmbeddingTable, cosine_distance
from .errors import InsufficientDataError, UndefinedStatisticError
from .mindmap import MindMap
from .stats import SampleSummary, TestResult, chi_square_2x2, cohens_d_pooled, welch_t_test

REPORT_VERSION = 1


@dataclass(frozen=True)
class DiversityResult:
    value: float
    resolved: int
    discarded: tuple[str, ...]


@dataclass(frozen=True)
class DistinctnessResult:
    scores: dict[str, float]
    discarded: tuple[str, ...]


@dataclass(frozen=True)
class SuggestionDistance:
    source: str
    suggestion: str
    distance: float
    accepted: bool


def _resolve(labels: Iterable[str], table: EmbeddingTable) -> tuple[list[str], np.ndarray, list[str]]:
    """Sorted labels -> (resolved labels, unit row matrix, discarded labels)."""
    resolved: list[str] = []
    rows: list[np.ndarray] = []
    discarded: list[str] = []
    for label in (labels if isinstance(labels, list) else sorted(labels)):
        vec = table.lookup(label)
        if vec is None:
            discarded.append(label)
        else:
            resolved.append(label)
            rows.append(vec / np.sqrt(np.dot(vec, vec)))
    matrix = np.stack(rows) if rows else np.zeros((0, table.dimension))
    return resolved, matrix, discarded


def map_diversity(m: MindMap, table: EmbeddingTable) -> DiversityResult:
    """Mean pairwise cosine distance over the map's resolvable concepts."""
    resolved, unit, discarded = _resolve(m.concepts(), table)
    k = len(resolved)
    if k < 2:
        raise InsufficientDataError(
            f"map {m.map_id} resolves only {k} concept(s); need 2")
    gram = unit @ unit.T
    iu, ju = np.triu_indices(k, k=1)
    value = float(np.mean(1.0 - gram[iu, ju]))
    return DiversityResult(value=value, resolved=k, discarded=tuple(discarded))


def concept_distinctness(corpus: Sequence[MindMap], table: EmbeddingTable) -> DistinctnessResult:
    """Per-concept mean distance to all other distinct concepts in the corpus."""
    pooled: set[str] = set()
    for m in corpus:
        pooled |= m.concepts()
    resolved, unit, discarded = _resolve(pooled, table)
    k = len(resolved)
    if k < 2:
        raise InsufficientDataError(
            f"corpus resolves only {k} distinct concept(s); need 2")
    gram = unit @ unit.T
    dist = 1.0 - gram
    np.fill_diagonal(dist, 0.0)
    scores = dist.sum(axis=1) / (k - 1)
    return DistinctnessResult(
        scores={label: float(s) for label, s in zip(resolved, scores)},
        discarded=tuple(discarded))


def suggestion_source_distance(entries: Sequence, table: EmbeddingTable) -> tuple[list[SuggestionDistance], int]:
    """Cosine distance from each offered suggestion to its source concept.

    Entries need `source`, `offered`, and `accepted` attributes (the session
    log entry shape). Pairs with an unresolvable endpoint are skipped and
    counted.
    """
    out: list[SuggestionDistance] = []
    skipped = 0
    for entry in entries:
        src_vec = table.lookup(entry.source)
        for label in entry.offered:
            vec = table.lookup(label)
            if src_vec is None or vec is None:
                skipped += 1
                continue
            out.append(SuggestionDistance(
                source=entry.source, suggestion=label,
                distance=cosine_distance(src_vec, vec),
                accepted=entry.accepted == label))
    return out, skipped


# -- report assembly ---------------------------------------------------------

_MAP_METRICS = ("node_count", "mean_depth", "diversity")


def _summary_cell(values: Sequence[float]) -> dict | None:
    if len(values) < 2:
        return None
    s = SampleSummary.from_sample(values)
    return {"n": s.n, "mean": s.mean, "sd": s.sd}


def _welch_cell(a: Sequence[float], b: Sequence[float]) -> dict:
    if len(a) < 2 or len(b) < 2:
        return {"insufficient": f"need 2+ per group, got {len(a)} and {len(b)}"}
    try:
        test: TestResult = welch_t_test(a, b)
        d = cohens_d_pooled(SampleSummary.from_sample(a), SampleSummary.from_sample(b))
    except UndefinedStatisticError as exc:
        return {"insufficient": str(exc)}
    return {"t": test.statistic, "df": test.df, "p_value": test.p_value,
            "ci95": list(test.ci95), "cohens_d": d}


def corpus_report(maps_by_group: Mapping[str, Sequence[MindMap]],
                  table: EmbeddingTable,
                  logs_by_group: Mapping[str, Sequence] | None = None) -> dict:
    """Assemble the full metrics/statistics report as a JSON-ready document.

    Cells that lack data are marked insufficient instead of aborting the
    rest of the report. Ordering is deterministic: groups and map ids are
    sorted.
    """
    groups = sorted(maps_by_group)
    per_map: list[dict] = []
    group_values: dict[str, dict[str, list[float]]] = {
        g: {metric: [] for metric in _MAP_METRICS} for g in groups}
    discard_labels: list[str] = []

    for group in groups:
        for m in sorted(maps_by_group[group], key=lambda mm: mm.map_id):
            metrics = m.metrics()
            row: dict = {"map_id": m.map_id, "group": group,
                         "node_count": metrics.node_count,
                         "mean_depth": metrics.mean_depth}
            try:
                div = map_diversity(m, table)
                row["diversity"] = div.value
                row["discarded"] = list(div.discarded)
                discard_labels.extend(div.discarded)
            except InsufficientDataError as exc:
                row["diversity"] = None
                row["diversity_error"] = str(exc)
                row["discarded"] = []
            per_map.append(row)
            group_values[group]["node_count"].append(float(metrics.node_count))
            group_values[group]["mean_depth"].append(metrics.mean_depth)
            if row["diversity"] is not None:
                group_values[group]["diversity"].append(row["diversity"])

    summaries = {
        g: {metric: _summary_cell(vals) for metric, vals in group_values[g].items()}
        for g in groups}

    welch_rows = []
    for i, ga in enumerate(groups):
        for gb in groups[i + 1:]:
            for metric in _MAP_METRICS:
                cell = _welch_cell(group_values[ga][metric], group_values[gb][metric])
                welch_rows.append({"metric": metric, "group_a": ga, "group_b": gb, **cell})

    # Distinctness pools every distinct concept across the corpus, then each
    # group samples the scores of concepts appearing on its own maps.
    all_maps = [m for g in groups for m in maps_by_group[g]]
    distinctness: dict = {}
    try:
        dres = concept_distinctness(all_maps, table)
        distinctness["per_concept"] = dict(sorted(dres.scores.items()))
        discard_labels.extend(dres.discarded)
        group_scores: dict[str, list[float]] = {}
        for g in groups:
            concepts: set[str] = set()
            for m in maps_by_group[g]:
                concepts |= m.concepts()
            group_scores[g] = [dres.scores[c] for c in sorted(concepts) if c in dres.scores]
        distinctness["group_summaries"] = {
            g: _summary_cell(vals) for g, vals in group_scores.items()}
        distinctness["welch_tests"] = [
            {"group_a": ga, "group_b": gb,
             **_welch_cell(group_scores[ga], group_scores[gb])}
            for i, ga in enumerate(groups) for gb in groups[i + 1:]]
    except InsufficientDataError as exc:
        distinctness["insufficient"] = str(exc)

    acceptance: dict = {}
    if logs_by_group:
        log_groups = sorted(logs_by_group)
        counts = {}
        distance_samples: dict[str, list[float]] = {}
        skipped_pairs = 0
        for g in log_groups:
            entries = list(logs_by_group[g])
            offered = sum(len(e.offered) for e in entries)
            accepted = sum(1 for e in entries if e.accepted is not None)
            counts[g] = {"offered": offered, "accepted": accepted,
                         "dismissed": offered - accepted}
            distances, skipped = suggestion_source_distance(entries, table)
            skipped_pairs += skipped
            distance_samples[g] = [r.distance for r in distances if r.accepted]
        acceptance["per_group"] = counts
        acceptance["skipped_pairs"] = skipped_pairs
        if len(log_groups) == 2:
            ga, gb = log_groups
            table2 = [[counts[ga]["accepted"], counts[ga]["dismissed"]],
                      [counts[gb]["accepted"], counts[gb]["dismissed"]]]
            try:
                chi = chi_square_2x2(table2)
                acceptance["chi_square"] = {"chi2": chi.statistic, "phi": chi.effect_size,
                                            "p_value": chi.p_value, "table": table2}
            except UndefinedStatisticError as exc:
                acceptance["chi_square"] = {"insufficient": str(exc)}
            acceptance["accepted_distance_welch"] = {
                "group_a": ga, "group_b": gb,
                **_welch_cell(distance_samples[ga], distance_samples[gb])}
        acceptance["accepted_distance_summaries"] = {
            g: _summary_cell(vals) for g, vals in distance_samples.items()}

    return {
        "version": REPORT_VERSION,
        "groups": groups,
        "per_map": per_map,
        "group_summaries": summaries,
        "welch_tests": welch_rows,
        "distinctness": distinctness,
        "acceptance": acceptance,
        "discards": {"count": len(discard_labels),
                     "labels": sorted(set(discard_labels))},
        "totals": {"maps": len(per_map),
                   "nodes": int(sum(r["node_count"] for r in per_map))},
    }


def render_markdown(report: dict) -> str:
    """Human-readable rendering of a report document."""
    lines = [f"# Corpus report (v{report['version']})", ""]
    lines.append(f"Maps: {report['totals']['maps']}   Nodes: {report['totals']['nodes']}")
    lines.append("")
    lines.append("## Per-map metrics")
    lines.append("")
    lines.append("| map | group | nodes | mean depth | diversity |")
    lines.append("|---|---|---|---|---|")
    for row in report["per_map"]:
        div = "-" if row["diversity"] is None else f"{row['diversity']:.4f}"
        lines.append(f"| {row['map_id']} | {row['group']} | {row['node_count']} "
                     f"| {row['mean_depth']:.3f} | {div} |")
    lines.append("")
    lines.append("## Group summaries")
    lines.append("")
    lines.append("| group | metric | n | mean | sd |")
    lines.append("|---|---|---|---|---|")
    for group in report["groups"]:
        for metric, cell in sorted(report["group_summaries"][group].items()):
            if cell is None:
                lines.append(f"| {group} | {metric} | - | - | - |")
            else:
                lines.append(f"| {group} | {metric} | {cell['n']} "
                             f"| {cell['mean']:.4f} | {cell['sd']:.4f} |")
    lines.append("")
    lines.append("## Welch tests (with pooled-SD Cohen's d)")
    lines.append("")
    lines.append("| metric | groups | t | df | p | d |")
    lines.append("|---|---|---|---|---|---|")
    for row in report["welch_tests"]:
        pair = f"{row['group_a']} vs {row['group_b']}"
        if "insufficient" in row:
            lines.append(f"| {row['metric']} | {pair} | - | - | - | - |")
        else:
            lines.append(f"| {row['metric']} | {pair} | {row['t']:.3f} | {row['df']:.2f} "
                         f"| {row['p_value']:.4g} | {row['cohens_d']:.3f} |")
    chi = report.get("acceptance", {}).get("chi_square")
    if chi and "insufficient" not in chi:
        lines.append("")
        lines.append("## Suggestion acceptance")
        lines.append("")
        lines.append(f"chi2(1) = {chi['chi2']:.2f}, phi = {chi['phi']:.3f}, "
                     f"p = {chi['p_value']:.3g}")
    if report["discards"]["count"]:
        lines.append("")
        lines.append(f"Discarded (no embedding): {report['discards']['count']} "
                     f"-> {', '.join(report['discards']['labels'])}")
    lines.append("")
    return "\n".join(lines)
