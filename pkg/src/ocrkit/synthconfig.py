"""Document-rendering configuration sampling and render-job emission.

Only the Markdown-to-HTML step is performed here; the office-format / PDF /
image stages run in an external renderer that consumes the emitted
``<job_id>.html`` + ``<job_id>.json`` pair.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import asdict, dataclass
from importlib import resources

from .docmodel import (
    Document,
    Header,
    HorizontalRule,
    Paragraph,
    SpecialTag,
    Table,
    tree_to_html,
)

JOB_SCHEMA_VERSION = 1

PAGE_SIZES = ("A4", "A5", "Letter", "Legal", "Tabloid", "A3")
FONT_SIZES = tuple(range(8, 23, 2))

# Categorical weights; landscape and decoration probabilities are inventions
# (no principled weights exist) and are configurable.
ALIGNMENT_WEIGHTS = (("right", 0.65), ("left", 0.05), ("center", 0.30))
COLUMN_WEIGHTS = ((1, 0.75), (2, 0.20), (3, 0.05))
DARK_BACKGROUND_P = 0.25
RTL_P = 0.95
LANDSCAPE_P = 0.15
HIGHLIGHT_P = 0.10
COLORED_PARAGRAPH_P = 0.10


def _load_palettes() -> dict:
    path = resources.files("ocrkit.data").joinpath("palettes.json")
    return json.loads(path.read_text(encoding="utf-8"))


_PALETTES = _load_palettes()


@dataclass(frozen=True)
class RenderConfig:
    font: str
    page_size: str
    orientation: str        # portrait / landscape
    background: str         # hex color
    background_is_dark: bool
    text_color: str
    alignment: str          # right / left / center
    columns: int
    font_size_pt: int
    margin_cm: float
    line_height: float
    column_spacing_cm: float
    direction: str          # rtl / ltr
    decorations: tuple[str, ...]

    def to_dict(self) -> dict:
        return asdict(self) | {"decorations": list(self.decorations)}


def _weighted_choice(rng: random.Random, weights):
    roll = rng.random()
    acc = 0.0
    for value, p in weights:
        acc += p
        if roll < acc:
            return value
    return weights[-1][0]


def sample_render_config(rng_seed: int,
                         landscape_p: float = LANDSCAPE_P,
                         highlight_p: float = HIGHLIGHT_P,
                         colored_paragraph_p: float = COLORED_PARAGRAPH_P
                         ) -> RenderConfig:
    """Draw one configuration; each field sampled independently, per-seed pure.

    Dark backgrounds always pair with light text colors (legibility rule).
    """
    rng = random.Random(rng_seed)
    font = rng.choice(_PALETTES["fonts"])
    page_size = rng.choice(PAGE_SIZES)
    orientation = "landscape" if rng.random() < landscape_p else "portrait"
    dark = rng.random() < DARK_BACKGROUND_P
    background = rng.choice(
        _PALETTES["background_dark" if dark else "background_light"])
    text_color = rng.choice(_PALETTES["text_light" if dark else "text_dark"])
    alignment = _weighted_choice(rng, ALIGNMENT_WEIGHTS)
    columns = _weighted_choice(rng, COLUMN_WEIGHTS)
    font_size = rng.choice(FONT_SIZES)
    margin = rng.uniform(1.0, 2.5)
    line_height = rng.uniform(1.0, 1.6)
    column_spacing = rng.uniform(0.5, 1.2)
    direction = "rtl" if rng.random() < RTL_P else "ltr"
    decorations = []
    if rng.random() < highlight_p:
        decorations.append("highlight")
    if rng.random() < colored_paragraph_p:
        decorations.append("colored_paragraph")
    return RenderConfig(font, page_size, orientation, background, dark,
                        text_color, alignment, columns, font_size, margin,
                        line_height, column_spacing, direction,
                        tuple(decorations))


@dataclass(frozen=True)
class RenderJob:
    html: str
    config: RenderConfig
    job_id: str
    seed: int

    def config_json(self) -> str:
        payload = {"schema_version": JOB_SCHEMA_VERSION, "job_id": self.job_id,
                   "seed": self.seed, "config": self.config.to_dict()}
        return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2)


def _block_to_html(block) -> str:
    if isinstance(block, Header):
        return f"<h{block.level}>{block.text}</h{block.level}>"
    if isinstance(block, Paragraph):
        # Emphasis spans re-render as HTML tags instead of Markdown markers.
        html = block.text
        parts = []
        pos = 0
        for span in sorted(block.spans, key=lambda s: s.start):
            if span.start < pos:
                continue
            tag = "b" if span.kind == "bold" else "i"
            parts.append(html[pos:span.start])
            parts.append(f"<{tag}>{html[span.start:span.end]}</{tag}>")
            pos = span.end
        parts.append(html[pos:])
        return "<p>" + "".join(parts) + "</p>"
    if isinstance(block, HorizontalRule):
        return "<hr>"
    if isinstance(block, Table):
        return tree_to_html(block.tree)
    if isinstance(block, SpecialTag):
        if not block.content:
            return f"<{block.name}>"
        return f"<{block.name}>{block.content}</{block.name}>"
    raise TypeError(f"unknown block {block!r}")


def document_to_html(doc: Document, cfg: RenderConfig) -> str:
    """Step-1 conversion: structure and emphasis preserved, config embedded."""
    body = "\n".join(_block_to_html(b) for b in doc.blocks)
    style = (
        f"body {{ font-family: '{cfg.font}'; font-size: {cfg.font_size_pt}pt; "
        f"background: {cfg.background}; color: {cfg.text_color}; "
        f"text-align: {cfg.alignment}; line-height: {cfg.line_height}; "
        f"margin: {cfg.margin_cm:.4f}cm; column-count: {cfg.columns}; "
        f"column-gap: {cfg.column_spacing_cm:.4f}cm; }}"
    )
    config_block = json.dumps(cfg.to_dict(), ensure_ascii=False, sort_keys=True)
    return (
        f'<html dir="{cfg.direction}">\n<head>\n'
        f"<style>{style}</style>\n"
        f'<script type="application/json" id="render-config">{config_block}</script>\n'
        f"</head>\n<body>\n{body}\n</body>\n</html>\n"
    )


def emit_render_job(doc: Document, cfg: RenderConfig, seed: int) -> RenderJob:
    html = document_to_html(doc, cfg)
    digest = hashlib.sha256(
        html.encode("utf-8") + seed.to_bytes(8, "big", signed=False)).hexdigest()[:16]
    return RenderJob(html=html, config=cfg, job_id=f"job-{digest}", seed=seed)


def write_render_job(job: RenderJob, out_dir) -> tuple[str, str]:
    """Write ``<job_id>.html`` and ``<job_id>.json``; returns the two paths."""
    import os
    html_path = os.path.join(out_dir, f"{job.job_id}.html")
    json_path = os.path.join(out_dir, f"{job.job_id}.json")
    with open(html_path, "w", encoding="utf-8") as fh:
        fh.write(job.html)
    with open(json_path, "w", encoding="utf-8") as fh:
        fh.write(job.config_json())
    return html_path, json_path
