"""Dataset ingestion, benchmark evaluation runs, ground-truth lint and reports."""

from __future__ import annotations

import hashlib
import json
import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .docmodel import SpecialTag, Table, parse_markdown
from .errors import DuplicateId, NoPredictions, SchemaError
from .filters import table_sparsity
from .metrics import (
    BleuCounts,
    ChrfCounts,
    MetricReport,
    PairCounts,
    bleu_from_counts,
    chrf_from_counts,
    evaluate_pair_counts,
    mars,
)
from .normalize import NormalizeConfig

MANIFEST_SCHEMA_VERSION = 1
REPORT_SCHEMA_VERSION = 1

VALID_SOURCES = {"synthetic", "real"}


@dataclass
class ManifestEntry:
    id: str
    image_path: str
    ground_truth_path: str
    source: str
    tags: tuple[str, ...] = ()
    flags: list[str] = field(default_factory=list)


@dataclass
class DatasetManifest:
    entries: list[ManifestEntry]
    schema_version: int = MANIFEST_SCHEMA_VERSION
    base_dir: str = "."

    def resolve(self, path: str) -> str:
        return path if os.path.isabs(path) else os.path.join(self.base_dir, path)


def load_manifest(path) -> DatasetManifest:
    """Read and validate a JSONL manifest; missing files flag the entry."""
    path = Path(path)
    lines = [ln for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]
    if not lines:
        raise SchemaError(f"{path}: empty manifest")
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    base_dir = str(path.parent)
    for lineno, line in enumerate(lines, start=1):
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}:{lineno}: invalid JSON: {exc}") from None
        if not isinstance(record, dict):
            raise SchemaError(f"{path}:{lineno}: expected an object")
        missing = {"id", "image_path", "ground_truth_path", "source"} - record.keys()
        if missing:
            raise SchemaError(f"{path}:{lineno}: missing fields {sorted(missing)}")
        if record["source"] not in VALID_SOURCES:
            raise SchemaError(f"{path}:{lineno}: source must be one of {sorted(VALID_SOURCES)}")
        entry_id = str(record["id"])
        if entry_id in seen:
            raise DuplicateId(entry_id)
        seen.add(entry_id)
        entry = ManifestEntry(entry_id, record["image_path"],
                              record["ground_truth_path"], record["source"],
                              tuple(record.get("tags", [])))
        for key in ("image_path", "ground_truth_path"):
            resolved = record[key] if os.path.isabs(record[key]) \
                else os.path.join(base_dir, record[key])
            if not os.path.exists(resolved):
                entry.flags.append(f"missing file: {record[key]}")
        entries.append(entry)
    return DatasetManifest(entries, base_dir=base_dir)


# ---------------------------------------------------------------------------
# Evaluation runs


@dataclass
class EvalReport:
    per_entry: dict[str, MetricReport]
    corpus: MetricReport
    model_name: str
    config_fingerprint: str
    schema_version: int = REPORT_SCHEMA_VERSION

    def to_json(self) -> str:
        return json.dumps({
            "schema_version": self.schema_version,
            "model_name": self.model_name,
            "config_fingerprint": self.config_fingerprint,
            "corpus": self.corpus.to_dict(),
            "per_entry": {k: v.to_dict() for k, v in sorted(self.per_entry.items())},
        }, ensure_ascii=False, sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "EvalReport":
        data = json.loads(text)
        return cls(
            {k: MetricReport.from_dict(v) for k, v in data["per_entry"].items()},
            MetricReport.from_dict(data["corpus"]),
            data["model_name"],
            data["config_fingerprint"],
            data.get("schema_version", REPORT_SCHEMA_VERSION),
        )


def config_fingerprint(cfg: NormalizeConfig, teds_scope: str) -> str:
    payload = json.dumps({"normalize": cfg.fingerprint_fields(),
                          "teds_scope": teds_scope}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _find_prediction(predictions_dir, entry_id: str) -> Path | None:
    for suffix in (".md", ".txt"):
        candidate = Path(predictions_dir) / f"{entry_id}{suffix}"
        if candidate.exists():
            return candidate
    return None


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("OCRKIT_WORKERS", "1")))
    except ValueError:
        return 1


def aggregate_counts(counts_by_id: dict[str, PairCounts]) -> MetricReport:
    """Corpus fold: WER/CER and n-gram counts pooled (micro), TEDS macro.

    Folding runs in sorted-id order so the result is byte-stable no matter
    how the entries were produced.
    """
    ids = sorted(counts_by_id)
    char_edits = sum(counts_by_id[i].char_edits for i in ids)
    char_ref = sum(counts_by_id[i].char_ref_len for i in ids)
    word_edits = sum(counts_by_id[i].word_edits for i in ids)
    word_ref = sum(counts_by_id[i].word_ref_len for i in ids)
    bleu_total = BleuCounts()
    chrf_total = ChrfCounts()
    warnings: list[str] = []
    for i in ids:
        bleu_total = bleu_total.add(counts_by_id[i].bleu)
        chrf_total = chrf_total.add(counts_by_id[i].chrf)
        warnings.extend(counts_by_id[i].warnings)
    teds_score = math.fsum(counts_by_id[i].teds for i in ids) / len(ids)
    chrf_score = chrf_from_counts(chrf_total)
    return MetricReport(
        wer=word_edits / word_ref if word_ref else 0.0,
        cer=char_edits / char_ref if char_ref else 0.0,
        bleu=bleu_from_counts(bleu_total),
        chrf=chrf_score,
        teds=teds_score,
        mars=mars(chrf_score, teds_score),
        warnings=warnings,
    )


def run_evaluation(manifest: DatasetManifest, predictions_dir,
                   cfg: NormalizeConfig = NormalizeConfig(),
                   teds_scope: str = "doc",
                   model_name: str = "model",
                   strict: bool = False) -> EvalReport:
    """Evaluate every manifest entry against ``predictions_dir/<id>.md|.txt``.

    A missing prediction scores as an empty hypothesis (with a warning) so a
    model cannot inflate its corpus score by skipping hard pages; ``strict``
    raises instead.
    """
    available = [e for e in manifest.entries
                 if _find_prediction(predictions_dir, e.id) is not None]
    if not available:
        raise NoPredictions(f"no prediction files found in {predictions_dir}")
    missing = [e.id for e in manifest.entries
               if _find_prediction(predictions_dir, e.id) is None]
    if strict and missing:
        raise NoPredictions(f"missing predictions for: {', '.join(sorted(missing))}")

    def evaluate_entry(entry: ManifestEntry):
        gt_text = Path(manifest.resolve(entry.ground_truth_path)).read_text(
            encoding="utf-8")
        pred_path = _find_prediction(predictions_dir, entry.id)
        warnings = []
        if pred_path is None:
            pred_text = ""
            warnings.append("missing prediction; scored as empty hypothesis")
        else:
            pred_text = pred_path.read_text(encoding="utf-8")
        reference = parse_markdown(gt_text, special_tags=cfg.special_tags,
                                   source_kind="reference", on_error="fallback")
        hypothesis = parse_markdown(pred_text, special_tags=cfg.special_tags,
                                    source_kind="prediction", on_error="fallback")
        report, counts = evaluate_pair_counts(reference, hypothesis, cfg, teds_scope)
        report.warnings = warnings + report.warnings
        counts.warnings = warnings + counts.warnings
        return entry.id, report, counts

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate_entry, manifest.entries))
    else:
        results = [evaluate_entry(e) for e in manifest.entries]

    per_entry = {entry_id: report for entry_id, report, _ in results}
    counts_by_id = {entry_id: counts for entry_id, _, counts in results}
    corpus = aggregate_counts(counts_by_id)
    return EvalReport(per_entry, corpus, model_name,
                      config_fingerprint(cfg, teds_scope))


# ---------------------------------------------------------------------------
# Ground-truth lint


@dataclass(frozen=True)
class Finding:
    entry_id: str
    kind: str
    detail: str


_LATIN_WORD_RE = re.compile(r"[A-Za-z][A-Za-z'\-]*")
_ARABIC_RE = re.compile(r"[؀-ۿ]")


def _longest_latin_run(text: str) -> int:
    best = run = 0
    for token in text.split():
        if _LATIN_WORD_RE.fullmatch(token.strip(".,;:!?\"'()[]")):
            run += 1
            best = max(best, run)
        else:
            run = 0
    return best


def lint_ground_truth(manifest: DatasetManifest,
                      latin_run_threshold: int = 5,
                      sparsity_threshold: float = 0.25) -> list[Finding]:
    """Heuristic quality checks over ground-truth files.

    Thresholds are configuration, not fixed constants: a long Latin-script
    sentence inside an Arabic document is a hallucination suspect, and every
    page is expected to carry a page_number tag.
    """
    findings: list[Finding] = []
    for entry in manifest.entries:
        if entry.flags:
            for flag in entry.flags:
                findings.append(Finding(entry.id, "MissingFile", flag))
            continue
        text = Path(manifest.resolve(entry.ground_truth_path)).read_text(
            encoding="utf-8")
        doc = parse_markdown(text, on_error="fallback")
        if doc.warnings:
            for warning in doc.warnings:
                findings.append(Finding(entry.id, "UnparseableHtml", warning))
        if _ARABIC_RE.search(text):
            run = _longest_latin_run(text)
            if run >= latin_run_threshold:
                findings.append(Finding(
                    entry.id, "HallucinationSuspect",
                    f"run of {run} consecutive Latin-script words"))
        has_page_number = any(
            isinstance(b, SpecialTag) and b.name == "page_number"
            for b in doc.blocks)
        if not has_page_number:
            findings.append(Finding(entry.id, "MissingPageNumber",
                                    "no <page_number> tag"))
        for block in doc.blocks:
            if isinstance(block, Table):
                sparsity = table_sparsity(block.tree)
                if sparsity > sparsity_threshold:
                    findings.append(Finding(
                        entry.id, "TableSparsity",
                        f"table with {sparsity:.0%} empty cells"))
    return findings


# ---------------------------------------------------------------------------
# Report rendering

_COLUMNS = ("WER ↓", "CER ↓", "BLEU ↑", "CHRF ↑",
            "TEDS ↑", "MARS ↑")


def format_metric_row(report: MetricReport) -> list[str]:
    """Printed precision: WER/CER/BLEU/CHRF 2 dp, TEDS integer, MARS 3 dp.

    MARS re-derives from the printed-precision ChrF and TEDS so the rendered
    row is internally consistent at its own precision.
    """
    chrf_rounded = round(report.chrf, 2)
    teds_rounded = round(report.teds)
    mars_printed = (chrf_rounded + teds_rounded) / 2.0
    return [f"{report.wer:.2f}", f"{report.cer:.2f}", f"{report.bleu:.2f}",
            f"{chrf_rounded:.2f}", f"{teds_rounded:d}", f"{mars_printed:.3f}"]


def render_report(report: EvalReport, format: str = "json") -> str:
    if format == "json":
        return report.to_json()
    if format != "markdown":
        raise ValueError(f"unknown format {format!r}")
    lines = ["| Entry | " + " | ".join(_COLUMNS) + " |",
             "|" + "---|" * (len(_COLUMNS) + 1)]
    for entry_id in sorted(report.per_entry):
        row = format_metric_row(report.per_entry[entry_id])
        lines.append(f"| {entry_id} | " + " | ".join(row) + " |")
    if report.per_entry:
        corpus_row = format_metric_row(report.corpus)
        lines.append(f"| **{report.model_name} (corpus)** | "
                     + " | ".join(corpus_row) + " |")
    return "\n".join(lines) + "\n"
