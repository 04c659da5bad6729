"""Corpus-quality filters: n-gram perplexity and table-sparsity screening.

The disk-backed Kneser-Ney model the original pipeline used is replaced here
by an in-memory add-k n-gram model: the filter only needs a relative cohesion
ranking, and add-k is fully specifiable and testable.  Character level is the
default (vocabulary-free); word level is available via ``unit``.
"""

from __future__ import annotations

import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .docmodel import Document, HtmlTree, Table, serialize
from .errors import EmptyCorpus, EmptyText, NotATable

BOS = "\x02"
EOS = "\x03"

LM_SCHEMA_VERSION = 1


@dataclass
class CharNgramLm:
    order: int
    smoothing_k: float
    unit: str  # "char" or "word"
    vocab: set[str]
    counts: dict[tuple[str, ...], Counter]
    context_totals: dict[tuple[str, ...], int]

    @property
    def _event_space(self) -> int:
        # vocab plus a single unk bucket
        return len(self.vocab) + 1

    def log_prob(self, token: str, context: tuple[str, ...]) -> float:
        if token not in self.vocab:
            token = None  # unk bucket
        ctx_counter = self.counts.get(context)
        count = ctx_counter[token] if (ctx_counter and token is not None) else 0
        total = self.context_totals.get(context, 0)
        k = self.smoothing_k
        return math.log((count + k) / (total + k * self._event_space))

    def to_json(self) -> dict:
        return {
            "schema_version": LM_SCHEMA_VERSION,
            "order": self.order,
            "smoothing_k": self.smoothing_k,
            "unit": self.unit,
            "vocab": sorted(self.vocab),
            "counts": [
                {"context": list(ctx), "tokens": dict(counter)}
                for ctx, counter in self.counts.items()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CharNgramLm":
        if data.get("schema_version") != LM_SCHEMA_VERSION:
            raise ValueError(f"unsupported LM schema {data.get('schema_version')}")
        counts: dict[tuple[str, ...], Counter] = {}
        totals: dict[tuple[str, ...], int] = {}
        for entry in data["counts"]:
            ctx = tuple(entry["context"])
            counter = Counter(entry["tokens"])
            counts[ctx] = counter
            totals[ctx] = sum(counter.values())
        return cls(data["order"], data["smoothing_k"], data["unit"],
                   set(data["vocab"]), counts, totals)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, ensure_ascii=False)

    @classmethod
    def load(cls, path) -> "CharNgramLm":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def _tokenize(text: str, unit: str) -> list[str]:
    return list(text) if unit == "char" else text.split()


def train_lm(corpus: list[str], order: int = 5, k: float = 0.1,
             unit: str = "char") -> CharNgramLm:
    """Train an add-k smoothed n-gram model with begin/end padding."""
    if not corpus:
        raise EmptyCorpus("cannot train on an empty corpus")
    if not 1 <= order <= 6:
        raise ValueError(f"order {order} outside [1,6]")
    counts: dict[tuple[str, ...], Counter] = defaultdict(Counter)
    vocab: set[str] = set()
    for text in corpus:
        tokens = [BOS] * (order - 1) + _tokenize(text, unit) + [EOS]
        vocab.update(tokens[order - 1:])
        for i in range(order - 1, len(tokens)):
            context = tuple(tokens[i - order + 1:i])
            counts[context][tokens[i]] += 1
    totals = {ctx: sum(c.values()) for ctx, c in counts.items()}
    return CharNgramLm(order, k, unit, vocab, dict(counts), totals)


def perplexity(lm: CharNgramLm, text: str) -> float:
    """exp of the average negative log-likelihood, EOS included."""
    if not text:
        raise EmptyText("cannot score empty text")
    tokens = [BOS] * (lm.order - 1) + _tokenize(text, lm.unit) + [EOS]
    log_sum = 0.0
    n_scored = len(tokens) - (lm.order - 1)
    for i in range(lm.order - 1, len(tokens)):
        context = tuple(tokens[i - lm.order + 1:i])
        log_sum += lm.log_prob(tokens[i], context)
    return math.exp(-log_sum / n_scored)


def table_sparsity(table: HtmlTree) -> float:
    """Fraction of td/th cells whose text content is empty after trimming."""
    if table.label != "table":
        raise NotATable(f"root is <{table.label}>, not <table>")
    cells = [n for n in table.iter_nodes() if n.label in ("td", "th")]
    if not cells:
        return 1.0
    empty = sum(1 for c in cells if not c.text_content().strip())
    return empty / len(cells)


@dataclass(frozen=True)
class FilterConfig:
    ppl_threshold: float = 1000.0
    sparsity_threshold: float = 0.25


@dataclass
class Rejection:
    document: Document
    reason: str
    value: float


def filter_corpus(docs: list[Document], lm: CharNgramLm,
                  cfg: FilterConfig = FilterConfig()
                  ) -> tuple[list[Document], list[Rejection]]:
    """Partition docs into (kept, rejected-with-reason), order preserved.

    A document is rejected iff its perplexity exceeds the threshold or any of
    its tables is strictly sparser than the sparsity threshold (a table at
    exactly the threshold is retained).
    """
    kept: list[Document] = []
    rejected: list[Rejection] = []
    for doc in docs:
        sparsity_hit = None
        for block in doc.blocks:
            if isinstance(block, Table):
                sparsity = table_sparsity(block.tree)
                if sparsity > cfg.sparsity_threshold:
                    sparsity_hit = sparsity
                    break
        if sparsity_hit is not None:
            rejected.append(Rejection(doc, "table_sparsity", sparsity_hit))
            continue
        text = serialize(doc)
        ppl = perplexity(lm, text) if text else float("inf")
        if ppl > cfg.ppl_threshold:
            rejected.append(Rejection(doc, "perplexity", ppl))
        else:
            kept.append(doc)
    return kept, rejected
