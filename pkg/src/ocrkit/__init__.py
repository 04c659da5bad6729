"""Batch toolkit for Arabic document OCR: parsing, standardization, metrics,
corpus filters, synthetic-document configuration and image augmentation."""

from .docmodel import (
    Document,
    Header,
    HorizontalRule,
    HtmlTree,
    Paragraph,
    SpecialTag,
    Table,
    document_to_tree,
    parse_html_table,
    parse_markdown,
    serialize,
)
from .metrics import (
    MetricReport,
    bleu,
    cer,
    chrf,
    evaluate_pair,
    mars,
    wer,
)
from .normalize import NormalizeConfig, convert_md_tables, normalize_arabic, standardize
from .teds import CostModel, teds_similarity, tree_edit_distance
from .filters import (
    CharNgramLm,
    FilterConfig,
    filter_corpus,
    perplexity,
    table_sparsity,
    train_lm,
)
from .synthconfig import (
    RenderConfig,
    RenderJob,
    document_to_html,
    emit_render_job,
    sample_render_config,
    write_render_job,
)
from .augment import (
    AugmentPlan,
    TransformSpec,
    apply_assignment,
    apply_transform,
    get_transform,
    plan_augmentation,
    registry,
)
from .harness import (
    DatasetManifest,
    EvalReport,
    lint_ground_truth,
    load_manifest,
    render_report,
    run_evaluation,
)

__version__ = "0.1.0"

__all__ = [
    "Document", "Header", "HorizontalRule", "HtmlTree", "Paragraph",
    "SpecialTag", "Table", "document_to_tree", "parse_html_table",
    "parse_markdown", "serialize",
    "MetricReport", "bleu", "cer", "chrf", "evaluate_pair", "mars", "wer",
    "NormalizeConfig", "convert_md_tables", "normalize_arabic", "standardize",
    "CostModel", "teds_similarity", "tree_edit_distance",
    "CharNgramLm", "FilterConfig", "filter_corpus", "perplexity",
    "table_sparsity", "train_lm",
    "RenderConfig", "RenderJob", "document_to_html", "emit_render_job",
    "sample_render_config", "write_render_job",
    "AugmentPlan", "TransformSpec", "apply_assignment", "apply_transform",
    "get_transform", "plan_augmentation", "registry",
    "DatasetManifest", "EvalReport", "lint_ground_truth", "load_manifest",
    "render_report", "run_evaluation",
    "__version__",
]
