"""Render traces, resolutions, comparisons, and statistics.

Three text formats: ``tsv`` (tab-separated with a header row), ``jsonl``
(one self-describing record per unit or pronoun), and ``pretty`` (transition
label plus center per unit, in the annotation style used for hand analysis).
Output is deterministic: rows follow discourse order, JSON keys are sorted,
and no timestamps appear in data rows. The stats report can additionally
render its histograms as bar-chart figures next to the delimited output.
"""

from __future__ import annotations

import json
from typing import Optional

from .bfp import ComparisonReport
from .engine import CenteringTrace, PronounResolution
from .stats import (CLAUSE_CATEGORIES, SENTENCE_CATEGORIES, ChiSquare,
                    LocalityHistogram)


def _label(entity) -> str:
    return entity.label if entity is not None else "-"


def _cb_label(entity) -> str:
    return entity.label if entity is not None else "NULL"


def _marks(res: PronounResolution) -> str:
    marks = [res.strength]
    if res.para_applied:
        marks.append("PARA")
    if res.rule == "locality":
        marks.append("locality")
    if res.rule == "zero-parallel":
        marks.append("zero-parallel")
    if res.used_override:
        marks.append("override")
    return "; ".join(marks)


def _pronoun_line(res: PronounResolution) -> str:
    surface = res.mention.surface or "0"
    line = f"{surface} → {_label(res.entity)} ({_marks(res)})"
    if res.divergent:
        line += f" [gold={res.gold}]"
    return line


def _tsv(header: list[str], rows: list[list[str]]) -> str:
    lines = ["\t".join(header)]
    lines.extend("\t".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _jsonl(records: list[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True, ensure_ascii=False) + "\n"
                   for r in records)


# ---------------------------------------------------------------------------
# resolve

def render_resolve(trace: CenteringTrace, fmt: str) -> str:
    if fmt == "tsv":
        rows = []
        for record in trace.records:
            for res in record.pronouns:
                rows.append([trace.doc_id, record.unit_id, res.mention.id,
                             res.mention.surface or "0", _label(res.entity),
                             res.strength, res.rule,
                             "yes" if res.used_override else "no",
                             res.gold or "-",
                             "divergent" if res.divergent else "ok"])
        return _tsv(["doc", "unit", "mention", "surface", "entity", "strength",
                     "rule", "override", "gold", "vs_gold"], rows)
    if fmt == "jsonl":
        records = []
        for record in trace.records:
            for res in record.pronouns:
                records.append({
                    "type": "resolution", "doc": trace.doc_id,
                    "unit": record.unit_id, "mention": res.mention.id,
                    "surface": res.mention.surface or "0",
                    "entity": _label(res.entity), "strength": res.strength,
                    "rule": res.rule, "override": res.used_override,
                    "para": res.para_applied,
                    "candidates": [[e.label, tier] for e, tier in res.ranked],
                    "gold": res.gold, "divergent": res.divergent})
        return _jsonl(records)
    lines = [f"== {trace.doc_id}"]
    for record in trace.records:
        for res in record.pronouns:
            lines.append(f"{record.unit_id}  {_pronoun_line(res)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# trace

def render_trace(trace: CenteringTrace, fmt: str) -> str:
    if fmt == "tsv":
        rows = []
        for r in trace.records:
            rows.append([trace.doc_id, r.unit_id, str(r.level),
                         r.segment_kind.value,
                         "{" + ",".join(e.label for e in r.cm_in) + "}",
                         _cb_label(r.cb_in), _cb_label(r.cb_out),
                         r.transition.value,
                         " ".join(r.events_before + r.events_after) or "-",
                         "; ".join(_pronoun_line(p) for p in r.pronouns) or "-"])
        return _tsv(["doc", "unit", "level", "segment", "cm_in", "cb_in",
                     "cb_out", "transition", "events", "pronouns"], rows)
    if fmt == "jsonl":
        records = []
        for r in trace.records:
            records.append({
                "type": "unit", "doc": trace.doc_id, "unit": r.unit_id,
                "index": r.index, "level": r.level,
                "segment": r.segment_kind.value,
                "cm_in": [e.label for e in r.cm_in],
                "cb_in": _label(r.cb_in), "cb_out": _label(r.cb_out),
                "transition": r.transition.value,
                "events_before": r.events_before,
                "events_after": r.events_after,
                "cf_out": [e.entity.label for e in r.state_out.cf]})
            for res in r.pronouns:
                records.append({
                    "type": "pronoun", "doc": trace.doc_id, "unit": r.unit_id,
                    "mention": res.mention.id,
                    "surface": res.mention.surface or "0",
                    "entity": _label(res.entity), "strength": res.strength,
                    "rule": res.rule, "override": res.used_override,
                    "para": res.para_applied,
                    "filters": res.filters_used,
                    "candidates": [[e.label, tier] for e, tier in res.ranked],
                    "pool": [e.label for e in res.pool],
                    "gold": res.gold, "divergent": res.divergent})
        return _jsonl(records)
    lines = [f"== {trace.doc_id}"]
    for r in trace.records:
        for event in r.events_before:
            lines.append(f"-- {event}")
        cm_in = "{" + ", ".join(e.label for e in r.cm_in) + "}"
        lines.append(f"{r.transition.value}(Cb={_cb_label(r.cb_out)}): "
                     f"{r.unit_id} [L{r.level} {r.segment_kind.value}] cm_in={cm_in}")
        for res in r.pronouns:
            lines.append(f"    {_pronoun_line(res)}")
        for event in r.events_after:
            lines.append(f"-- {event}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# compare

def render_compare(report: ComparisonReport, fmt: str) -> str:
    if fmt == "tsv":
        rows = [[report.doc_id, row.unit_id, row.mention_id, row.surface,
                 row.salience, row.strength, row.bfp, row.gold or "-",
                 "divergent" if row.divergent else "agree"]
                for row in report.pronouns]
        return _tsv(["doc", "unit", "mention", "surface", "salience",
                     "strength", "bfp", "gold", "status"], rows)
    if fmt == "jsonl":
        records = [{"type": "comparison", "doc": report.doc_id,
                    "unit": row.unit_id, "mention": row.mention_id,
                    "surface": row.surface, "salience": row.salience,
                    "strength": row.strength, "bfp": row.bfp,
                    "gold": row.gold, "divergent": row.divergent}
                   for row in report.pronouns]
        records.extend({"type": "transitions", "doc": report.doc_id,
                        "unit": row.unit_id,
                        "salience": row.transition.value,
                        "bfp": row.bfp_transition.value if row.bfp_transition else "-"}
                       for row in report.units)
        return _jsonl(records)
    lines = [f"== {report.doc_id}"]
    for row in report.pronouns:
        status = "DIVERGENT" if row.divergent else "agree"
        lines.append(f"{row.unit_id}  {row.surface}: salience={row.salience} "
                     f"({row.strength}) bfp={row.bfp} gold={row.gold or '-'} "
                     f"[{status}]")
    lines.append(f"-- {len(report.divergences)} divergence(s)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# stats

def stats_records(hist: LocalityHistogram,
                  share: Optional[float],
                  chi: Optional[ChiSquare]) -> list[dict]:
    total = hist.total
    records = []
    pct = hist.percentages("sentence")
    for cat in SENTENCE_CATEGORIES:
        records.append({"type": "locality", "granularity": "sentence",
                        "category": cat, "count": hist.sentence[cat],
                        "pct": round(pct[cat], 1)})
    pct = hist.percentages("clause")
    for cat in CLAUSE_CATEGORIES:
        records.append({"type": "locality", "granularity": "utterance",
                        "category": cat, "count": hist.clause[cat],
                        "pct": round(pct[cat], 1)})
    records.append({"type": "total", "count": total,
                    "discourse_new": hist.discourse_new,
                    "skipped_no_gold": hist.skipped_no_gold})
    records.append({"type": "possessive_share",
                    "value": None if share is None else round(share, 4),
                    "defined": share is not None})
    if chi is not None:
        intra = hist.sentence["sameSentence"]
        records.append({"type": "chi_square", "split": "intra_vs_inter",
                        "a": intra, "b": total - intra,
                        "statistic": round(chi.statistic, 4), "band": chi.band})
    return records


def render_stats(hist: LocalityHistogram, share: Optional[float],
                 chi: Optional[ChiSquare], fmt: str) -> str:
    records = stats_records(hist, share, chi)
    if fmt == "jsonl":
        return _jsonl(records)
    rows = []
    for r in records:
        if r["type"] == "locality":
            rows.append(["locality", r["granularity"], r["category"],
                         str(r["count"]), f"{r['pct']:.1f}"])
        elif r["type"] == "total":
            rows.append(["total", "-", "-", str(r["count"]), "-"])
            rows.append(["discourse_new", "-", "-", str(r["discourse_new"]), "-"])
            rows.append(["skipped_no_gold", "-", "-", str(r["skipped_no_gold"]), "-"])
        elif r["type"] == "possessive_share":
            value = "undefined" if r["value"] is None else f"{r['value']:.4f}"
            rows.append(["possessive_share", "utterance", "sameUtterance", value, "-"])
        elif r["type"] == "chi_square":
            rows.append(["chi_square", r["split"], f"{r['a']}:{r['b']}",
                         f"{r['statistic']:.4f}", r["band"]])
    if fmt == "tsv":
        return _tsv(["record", "granularity", "category", "value", "extra"], rows)
    width = max(len(" ".join(row[:3])) for row in rows)
    lines = [f"{(' '.join(row[:3])).ljust(width)}  {row[3]:>10}  {row[4]}"
             for row in rows]
    return "\n".join(lines) + "\n"


def render_stats_figures(hist: LocalityHistogram, directory) -> list[str]:
    """Write one bar chart per locality granularity into ``directory`` and
    return the paths. Figure metadata is pinned so identical inputs produce
    identical bytes."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from pathlib import Path

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    panels = (("locality_sentence.png", "Antecedent location (sentences)",
               SENTENCE_CATEGORIES, hist.sentence),
              ("locality_utterance.png", "Antecedent location (utterance units)",
               CLAUSE_CATEGORIES, hist.clause))
    for filename, title, categories, counts in panels:
        fig, ax = plt.subplots(figsize=(7, 4))
        values = [counts[c] for c in categories]
        ax.bar(range(len(categories)), values, color="#4878a8")
        ax.set_xticks(range(len(categories)))
        ax.set_xticklabels(categories, rotation=20, ha="right", fontsize=8)
        ax.set_ylabel("pronouns")
        ax.set_title(title)
        for i, v in enumerate(values):
            ax.annotate(str(v), (i, v), ha="center", va="bottom", fontsize=8)
        fig.tight_layout()
        path = directory / filename
        fig.savefig(path, dpi=100, metadata={"Software": None})
        plt.close(fig)
        written.append(str(path))
    return written
