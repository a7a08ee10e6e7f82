"""Command-line front end.

Subcommands: ``resolve`` (per-pronoun assignments), ``trace`` (full
centering trace), ``compare`` (salience vs BFP divergence report),
``stats`` (locality histograms, possessive share, chi-square; optionally
with figures), and ``validate`` (diagnostics only). Output is byte-identical
across runs for identical inputs. Exit status: 0 success, 1 input error,
2 internal error.
"""

from __future__ import annotations

import argparse
import sys

from .bfp import bfp_run, compare_models
from .cda import CdaError, load_cda
from .engine import run_discourse
from .model import AnnotationError
from .report import (render_compare, render_resolve, render_stats,
                     render_stats_figures, render_trace)
from .segmenter import segment_document
from .stats import LocalityHistogram, chi_square_binary, locality_histogram


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="centering",
        description="Clause-based centering over CDA annotation files.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, model=False, fmt=True):
        p.add_argument("inputs", nargs="+", metavar="FILE", help="CDA file(s)")
        p.add_argument("--strict", action="store_true",
                       help="reject unknown keys in the annotation")
        p.add_argument("--out", metavar="PATH", default=None,
                       help="write the report to PATH instead of stdout")
        if model:
            p.add_argument("--model", choices=("salience", "bfp"),
                           default="salience")
        if fmt:
            p.add_argument("--format", choices=("tsv", "jsonl", "pretty"),
                           default="pretty", dest="fmt")

    add_common(sub.add_parser("resolve", help="per-pronoun assignments"),
               model=True)
    add_common(sub.add_parser("trace", help="full centering trace"),
               model=True)
    add_common(sub.add_parser("compare", help="salience vs BFP divergences"))
    stats = sub.add_parser("stats", help="locality histograms and chi-square")
    add_common(stats)
    stats.add_argument("--figures", metavar="DIR", default=None,
                       help="also render histogram figures into DIR")
    add_common(sub.add_parser("validate", help="check annotation files"),
               fmt=False)
    return parser


def _bfp_text(trace, fmt: str, with_units: bool) -> str:
    rows = []
    for anchor in trace.records:
        transition = anchor.transition.value if anchor.transition else "-"
        if with_units:
            rows.append(("unit", anchor.unit_id,
                         anchor.cb.label if anchor.cb else "NULL",
                         anchor.cp.label if anchor.cp else "NULL", transition))
        for mid, entity in anchor.assignment.items():
            rows.append(("pronoun", anchor.unit_id, mid, entity.label, transition))
        for mid in anchor.unresolved:
            rows.append(("pronoun", anchor.unit_id, mid, "-", "unresolved"))
    if fmt == "jsonl":
        import json
        keys = {"unit": ("kind", "unit", "cb", "cp", "transition"),
                "pronoun": ("kind", "unit", "mention", "entity", "transition")}
        return "".join(json.dumps(
            dict(zip(keys[r[0]], r), doc=trace.doc_id, type="bfp"),
            sort_keys=True) + "\n" for r in rows)
    if fmt == "tsv":
        lines = ["\t".join(("doc", "kind", "unit", "a", "b", "transition"))]
        lines.extend("\t".join((trace.doc_id, r[0], r[1], r[2], r[3], r[4]))
                     for r in rows)
        return "\n".join(lines) + "\n"
    lines = [f"== {trace.doc_id} (bfp)"]
    for r in rows:
        if r[0] == "unit":
            lines.append(f"{r[4]}(Cb={r[2]}, Cp={r[3]}): {r[1]}")
        elif with_units:
            lines.append(f"    {r[2]} → {r[3]}")
        else:
            lines.append(f"{r[1]}  {r[2]} → {r[3]} [{r[4]}]")
    return "\n".join(lines) + "\n"


def _run(args) -> tuple[str, int]:
    chunks = []
    if args.command == "validate":
        status = 0
        for path in args.inputs:
            try:
                doc = load_cda(path, strict=args.strict)
                segment_document(doc)
            except (CdaError, AnnotationError, OSError) as exc:
                chunks.append(f"{path}: INVALID: {exc}\n")
                status = 1
            else:
                chunks.append(f"{path}: OK\n")
        return "".join(chunks), status

    if args.command == "stats":
        merged = LocalityHistogram()
        for path in args.inputs:
            doc = load_cda(path, strict=args.strict)
            merged = merged.merge(locality_histogram(doc, segment_document(doc)))
        share = None
        if merged.clause["sameUtterance"]:
            share = merged.same_utterance_possessive / merged.clause["sameUtterance"]
        chi = None
        if merged.total:
            intra = merged.sentence["sameSentence"]
            chi = chi_square_binary(intra, merged.total - intra)
        text = render_stats(merged, share, chi, args.fmt)
        if args.figures:
            for figure in render_stats_figures(merged, args.figures):
                text += f"figure\t{figure}\n"
        return text, 0

    for path in args.inputs:
        doc = load_cda(path, strict=args.strict)
        segmented = segment_document(doc)
        if args.command == "compare":
            chunks.append(render_compare(compare_models(doc), args.fmt))
        elif getattr(args, "model", "salience") == "bfp":
            chunks.append(_bfp_text(bfp_run(segmented), args.fmt,
                                    with_units=args.command == "trace"))
        else:
            trace = run_discourse(segmented)
            if args.command == "resolve":
                chunks.append(render_resolve(trace, args.fmt))
            else:
                chunks.append(render_trace(trace, args.fmt))
    return "".join(chunks), 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text, status = _run(args)
    except (CdaError, AnnotationError, FileNotFoundError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - anything else is an internal fault
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
