"""Text-level evaluation metrics: WER, CER, BLEU, ChrF and the MARS composite.

BLEU and ChrF expose both corpus-level (default) and mean-of-sentence modes.
Count accumulators are kept separate from score computation so the harness can
pool raw counts across a corpus instead of averaging rounded scores.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .docmodel import Document, document_to_tree, element, parse_markdown, serialize
from .errors import EmptyCorpus, EmptyReference, LengthMismatch, OutOfRange
from .normalize import NormalizeConfig, convert_md_tables, normalize_arabic, \
    standardize_with_warnings
from .teds import teds_similarity

BLEU_MAX_ORDER = 4
CHRF_MAX_ORDER = 6
CHRF_BETA = 2.0


def edit_distance(a, b) -> int:
    """Levenshtein distance with unit costs over any two sequences."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        cur = [i]
        for j, y in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def cer(reference: str, hypothesis: str) -> float:
    """Codepoint-level edit distance over reference length; may exceed 1."""
    if not reference:
        raise EmptyReference("reference is empty")
    return edit_distance(reference, hypothesis) / len(reference)


def wer(reference: str, hypothesis: str) -> float:
    """Whitespace-token edit distance over reference token count."""
    ref_tokens = reference.split()
    if not ref_tokens:
        raise EmptyReference("reference has no tokens")
    return edit_distance(ref_tokens, hypothesis.split()) / len(ref_tokens)


# ---------------------------------------------------------------------------
# BLEU


@dataclass
class BleuCounts:
    matches: list[int] = field(default_factory=lambda: [0] * BLEU_MAX_ORDER)
    totals: list[int] = field(default_factory=lambda: [0] * BLEU_MAX_ORDER)
    ref_len: int = 0
    hyp_len: int = 0

    def add(self, other: "BleuCounts") -> "BleuCounts":
        return BleuCounts(
            [a + b for a, b in zip(self.matches, other.matches)],
            [a + b for a, b in zip(self.totals, other.totals)],
            self.ref_len + other.ref_len,
            self.hyp_len + other.hyp_len,
        )


def _ngrams(tokens, n):
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu_pair_counts(reference: str, hypothesis: str) -> BleuCounts:
    ref_tokens = reference.split()
    hyp_tokens = hypothesis.split()
    counts = BleuCounts(ref_len=len(ref_tokens), hyp_len=len(hyp_tokens))
    for n in range(1, BLEU_MAX_ORDER + 1):
        ref_grams = _ngrams(ref_tokens, n)
        hyp_grams = _ngrams(hyp_tokens, n)
        counts.totals[n - 1] += sum(hyp_grams.values())
        counts.matches[n - 1] += sum((hyp_grams & ref_grams).values())
    return counts


def bleu_from_counts(counts: BleuCounts) -> float:
    """Geometric mean of modified precisions times the brevity penalty, x100.

    Precision 1 is unsmoothed (a zero unigram overlap scores 0); higher orders
    use add-one smoothing when their precision would be zero.
    """
    if counts.totals[0] == 0 or counts.matches[0] == 0:
        return 0.0
    log_sum = 0.0
    for n in range(BLEU_MAX_ORDER):
        m, t = counts.matches[n], counts.totals[n]
        if n > 0 and (m == 0 or t == 0):
            m, t = m + 1, t + 1
        log_sum += math.log(m / t)
    bp = 1.0
    if counts.hyp_len < counts.ref_len:
        bp = math.exp(1.0 - counts.ref_len / max(counts.hyp_len, 1))
    return bp * math.exp(log_sum / BLEU_MAX_ORDER) * 100.0


def bleu(references: list[str], hypotheses: list[str], level: str = "corpus") -> float:
    if len(references) != len(hypotheses):
        raise LengthMismatch(f"{len(references)} references vs {len(hypotheses)} hypotheses")
    if not references:
        raise EmptyCorpus("empty corpus")
    if level == "sentence":
        return sum(bleu_from_counts(bleu_pair_counts(r, h))
                   for r, h in zip(references, hypotheses)) / len(references)
    total = BleuCounts()
    for r, h in zip(references, hypotheses):
        total = total.add(bleu_pair_counts(r, h))
    return bleu_from_counts(total)


# ---------------------------------------------------------------------------
# ChrF


@dataclass
class ChrfCounts:
    matches: list[int] = field(default_factory=lambda: [0] * CHRF_MAX_ORDER)
    hyp_totals: list[int] = field(default_factory=lambda: [0] * CHRF_MAX_ORDER)
    ref_totals: list[int] = field(default_factory=lambda: [0] * CHRF_MAX_ORDER)

    def add(self, other: "ChrfCounts") -> "ChrfCounts":
        return ChrfCounts(
            [a + b for a, b in zip(self.matches, other.matches)],
            [a + b for a, b in zip(self.hyp_totals, other.hyp_totals)],
            [a + b for a, b in zip(self.ref_totals, other.ref_totals)],
        )


def _char_ngrams(text: str, n: int) -> Counter:
    chars = "".join(text.split())
    return Counter(chars[i:i + n] for i in range(len(chars) - n + 1))


def chrf_pair_counts(reference: str, hypothesis: str) -> ChrfCounts:
    counts = ChrfCounts()
    for n in range(1, CHRF_MAX_ORDER + 1):
        ref_grams = _char_ngrams(reference, n)
        hyp_grams = _char_ngrams(hypothesis, n)
        counts.ref_totals[n - 1] += sum(ref_grams.values())
        counts.hyp_totals[n - 1] += sum(hyp_grams.values())
        counts.matches[n - 1] += sum((hyp_grams & ref_grams).values())
    return counts


def chrf_from_counts(counts: ChrfCounts) -> float:
    """F_beta over precision/recall averaged across n-gram orders, x100.

    Orders with no n-grams on either side are excluded from the averages
    (short strings otherwise could never reach 100).
    """
    precisions, recalls = [], []
    for n in range(CHRF_MAX_ORDER):
        m, ht, rt = counts.matches[n], counts.hyp_totals[n], counts.ref_totals[n]
        if ht == 0 and rt == 0:
            continue
        precisions.append(m / ht if ht else 0.0)
        recalls.append(m / rt if rt else 0.0)
    if not precisions:
        return 0.0
    p = sum(precisions) / len(precisions)
    r = sum(recalls) / len(recalls)
    if p + r == 0.0:
        return 0.0
    beta_sq = CHRF_BETA ** 2
    return (1 + beta_sq) * p * r / (beta_sq * p + r) * 100.0


def chrf(references: list[str], hypotheses: list[str], level: str = "corpus") -> float:
    if len(references) != len(hypotheses):
        raise LengthMismatch(f"{len(references)} references vs {len(hypotheses)} hypotheses")
    if not references:
        raise EmptyCorpus("empty corpus")
    if level == "sentence":
        return sum(chrf_from_counts(chrf_pair_counts(r, h))
                   for r, h in zip(references, hypotheses)) / len(references)
    total = ChrfCounts()
    for r, h in zip(references, hypotheses):
        total = total.add(chrf_pair_counts(r, h))
    return chrf_from_counts(total)


# ---------------------------------------------------------------------------
# MARS and per-pair evaluation


def mars(chrf_score: float, teds_score: float) -> float:
    """Arithmetic mean of ChrF and TEDS, both on the 0..100 scale."""
    for name, value in (("chrf", chrf_score), ("teds", teds_score)):
        if not 0.0 <= value <= 100.0 or not math.isfinite(value):
            raise OutOfRange(f"{name} score {value} outside [0,100]")
    return (chrf_score + teds_score) / 2.0


@dataclass
class MetricReport:
    wer: float
    cer: float
    bleu: float
    chrf: float
    teds: float
    mars: float
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"wer": self.wer, "cer": self.cer, "bleu": self.bleu,
                "chrf": self.chrf, "teds": self.teds, "mars": self.mars,
                "warnings": list(self.warnings)}

    @classmethod
    def from_dict(cls, d: dict) -> "MetricReport":
        return cls(d["wer"], d["cer"], d["bleu"], d["chrf"], d["teds"],
                   d["mars"], list(d.get("warnings", [])))


@dataclass
class PairCounts:
    """Raw per-pair counts the harness pools for corpus aggregates."""
    char_edits: int
    char_ref_len: int
    word_edits: int
    word_ref_len: int
    bleu: BleuCounts
    chrf: ChrfCounts
    teds: float  # macro-averaged upstream; no natural count pooling
    warnings: list[str] = field(default_factory=list)


def normalize_document(doc: Document, cfg: NormalizeConfig) -> tuple[Document, list[str]]:
    """Apply the full standardization protocol to a parsed document."""
    text, warnings = standardize_with_warnings(serialize(doc), cfg)
    text = normalize_arabic(text, cfg)
    parsed = parse_markdown(text, special_tags=cfg.special_tags,
                            source_kind=doc.source_kind, on_error="fallback")
    converted = convert_md_tables(parsed)
    return converted, warnings + list(parsed.warnings)


def _scope_tree(doc: Document, teds_scope: str):
    if teds_scope == "tables":
        from .docmodel import Table
        tables = [b.tree for b in doc.blocks if isinstance(b, Table)]
        return element("tables", *tables)
    return document_to_tree(doc)


def evaluate_pair_counts(reference: Document, hypothesis: Document,
                         cfg: NormalizeConfig = NormalizeConfig(),
                         teds_scope: str = "doc") -> tuple[MetricReport, PairCounts]:
    ref_doc, ref_warn = normalize_document(reference, cfg)
    hyp_doc, hyp_warn = normalize_document(hypothesis, cfg)
    ref_text = serialize(ref_doc)
    hyp_text = serialize(hyp_doc)
    if not ref_text:
        raise EmptyReference("reference empty after normalization")

    char_edits = edit_distance(ref_text, hyp_text)
    ref_tokens = ref_text.split()
    word_edits = edit_distance(ref_tokens, hyp_text.split())
    bleu_counts = bleu_pair_counts(ref_text, hyp_text)
    chrf_counts = chrf_pair_counts(ref_text, hyp_text)
    teds_score = teds_similarity(_scope_tree(ref_doc, teds_scope),
                                 _scope_tree(hyp_doc, teds_scope)) * 100.0
    chrf_score = chrf_from_counts(chrf_counts)
    warnings = ref_warn + hyp_warn
    report = MetricReport(
        wer=word_edits / len(ref_tokens) if ref_tokens else 0.0,
        cer=char_edits / len(ref_text),
        bleu=bleu_from_counts(bleu_counts),
        chrf=chrf_score,
        teds=teds_score,
        mars=mars(chrf_score, teds_score),
        warnings=warnings,
    )
    counts = PairCounts(char_edits, len(ref_text), word_edits, len(ref_tokens),
                        bleu_counts, chrf_counts, teds_score, warnings)
    return report, counts


def evaluate_pair(reference: Document, hypothesis: Document,
                  cfg: NormalizeConfig = NormalizeConfig(),
                  teds_scope: str = "doc") -> MetricReport:
    return evaluate_pair_counts(reference, hypothesis, cfg, teds_scope)[0]
