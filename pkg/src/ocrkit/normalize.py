"""Output standardization so metric scores reflect content, not formatting.

The standardization pipeline applies, in order:

1. remove HTML tags outside table regions (inner text kept),
2. convert Markdown tables to HTML (``convert_md_tables``, document level),
3. normalize horizontal-rule spellings to one form,
4. rewrite headers as ATX with canonical spacing,
5. unify formatting tags inside tables (``<strong>``/``<em>`` -> ``<b>``/``<i>``),
6. remove model-specific tags together with their content.

Special-purpose tags (page_number, watermark, img) survive step 1 untouched;
step 6 is where the configured subset of them is dropped.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field, replace

from .docmodel import (
    DEFAULT_SPECIAL_TAGS,
    Document,
    Table,
    UnbalancedHtml,
    _find_table_regions,
)


@dataclass(frozen=True)
class NormalizeConfig:
    model_tags_to_remove: frozenset[str] = frozenset({"page_number", "watermark"})
    unicode_form: str = "NFC"
    strip_diacritics: bool = False
    hr_normal_form: str = "---"
    # Tags that are document vocabulary and must survive step 1.
    special_tags: frozenset[str] = DEFAULT_SPECIAL_TAGS

    def fingerprint_fields(self) -> dict:
        return {
            "model_tags_to_remove": sorted(self.model_tags_to_remove),
            "unicode_form": self.unicode_form,
            "strip_diacritics": self.strip_diacritics,
            "hr_normal_form": self.hr_normal_form,
            "special_tags": sorted(self.special_tags),
        }


_ANY_TAG_RE = re.compile(r"</?([a-zA-Z][a-zA-Z0-9_:-]*)(?:\"[^\"]*\"|'[^']*'|[^<>])*?/?>")
_HR_LINE_RE = re.compile(r"^\s*((-\s*){3,}|(\*\s*){3,}|(_\s*){3,})$")
_ATX_RE = re.compile(r"^\s{0,3}(#{1,6})\s*(.*?)\s*#*\s*$")
_SETEXT_H1_RE = re.compile(r"^\s*=+\s*$")
_SETEXT_H2_RE = re.compile(r"^\s*-{2,}\s*$")


def _strip_tags_outside_tables(text: str, keep: frozenset[str]) -> str:
    def repl(m: re.Match) -> str:
        return m.group(0) if m.group(1).lower() in keep else ""

    # Iterate to a fixpoint: removing a tag can juxtapose text that itself
    # reads as a tag, and idempotence of the whole pipeline depends on
    # draining those.
    for _ in range(10):
        stripped = _ANY_TAG_RE.sub(repl, text)
        if stripped == text:
            break
        text = stripped
    return text


def _normalize_rules_and_headers(text: str, hr_form: str) -> str:
    """Steps 3 and 4 in one line pass.

    A dash run directly under a text line is a Setext underline and becomes
    part of an ATX header; any other rule spelling becomes ``hr_form``, with a
    blank line guaranteed before it so the rewrite is stable under re-runs.
    """
    lines = text.split("\n")
    out: list[str] = []
    i = 0
    while i < len(lines):
        line = lines[i]
        nxt = lines[i + 1] if i + 1 < len(lines) else None
        atx = _ATX_RE.match(line) if line.lstrip().startswith("#") else None
        if atx:
            title = atx.group(2)
            out.append(atx.group(1) + (" " + title if title else ""))
            i += 1
            continue
        if (line.strip() and nxt is not None and not _HR_LINE_RE.match(line)):
            if _SETEXT_H1_RE.match(nxt):
                out.append("# " + line.strip())
                i += 2
                continue
            if _SETEXT_H2_RE.match(nxt):
                out.append("## " + line.strip())
                i += 2
                continue
        if _HR_LINE_RE.match(line):
            if out and out[-1].strip():
                out.append("")
            out.append(hr_form)
            i += 1
            continue
        out.append(line)
        i += 1
    return "\n".join(out)


def _unify_table_formatting(table_html: str) -> str:
    for src, dst in (("strong", "b"), ("em", "i")):
        table_html = re.sub(rf"<{src}\b[^>]*>", f"<{dst}>", table_html, flags=re.I)
        table_html = re.sub(rf"</{src}\s*>", f"</{dst}>", table_html, flags=re.I)
    return table_html


def _remove_model_tags(text: str, tags: frozenset[str]) -> str:
    for _ in range(10):
        before = text
        for tag in sorted(tags):
            esc = re.escape(tag)
            text = re.sub(rf"<{esc}\b[^>]*>.*?</{esc}\s*>", "", text,
                          flags=re.S | re.I)
            text = re.sub(rf"<{esc}\b[^>]*/?>", "", text, flags=re.I)
        if text == before:
            break
    return text


def _standardize_once(text: str, cfg: NormalizeConfig,
                      warnings: list[str]) -> str:
    try:
        regions = _find_table_regions(text)
    except UnbalancedHtml:
        message = "unbalanced <table>; treated as non-table text"
        if message not in warnings:
            warnings.append(message)
        regions = []

    keep = cfg.special_tags | cfg.model_tags_to_remove
    pieces: list[str] = []
    cursor = 0
    for start, end in regions:
        outside = text[cursor:start]
        pieces.append(_normalize_rules_and_headers(
            _strip_tags_outside_tables(outside, keep), cfg.hr_normal_form))
        pieces.append(_unify_table_formatting(text[start:end]))
        cursor = end
    tail = text[cursor:]
    pieces.append(_normalize_rules_and_headers(
        _strip_tags_outside_tables(tail, keep), cfg.hr_normal_form))
    result = "".join(pieces)
    return _remove_model_tags(result, cfg.model_tags_to_remove)


def standardize_with_warnings(text: str,
                              cfg: NormalizeConfig = NormalizeConfig()
                              ) -> tuple[str, list[str]]:
    """Full tag/rule/header standardization; returns (text, warnings).

    The passes run to a fixpoint: removing a model tag can uncover structure
    (a dangling Setext underline, a bare rule) that the earlier passes must
    see again for the whole pipeline to be idempotent.
    """
    warnings: list[str] = []
    for _ in range(10):
        result = _standardize_once(text, cfg, warnings)
        if result == text:
            break
        text = result
    return text, warnings


def standardize(text: str, cfg: NormalizeConfig = NormalizeConfig()) -> str:
    return standardize_with_warnings(text, cfg)[0]


def convert_md_tables(doc: Document) -> Document:
    """Step 2: make every Markdown-sourced table serialize as HTML."""
    blocks = tuple(
        replace(b, markdown_source=None)
        if isinstance(b, Table) and b.markdown_source is not None else b
        for b in doc.blocks
    )
    return Document(blocks, source_kind=doc.source_kind, warnings=doc.warnings)


_INLINE_WS_RE = re.compile(r"[^\S\n]+")


def normalize_arabic(text: str, cfg: NormalizeConfig = NormalizeConfig()) -> str:
    """Unicode-normalize, optionally drop combining marks, tidy whitespace.

    Whitespace runs inside a line collapse to one space and line ends are
    trimmed; newlines are preserved (storage order stays logical order).
    """
    text = unicodedata.normalize(cfg.unicode_form, text)
    if cfg.strip_diacritics:
        text = "".join(ch for ch in text if not unicodedata.combining(ch))
    lines = [_INLINE_WS_RE.sub(" ", line).strip() for line in text.split("\n")]
    return "\n".join(lines)
