"""Command-line surface: eval, lint, filter, sample-configs, augment."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np
from PIL import Image

from . import augment as aug
from . import synthconfig
from .docmodel import parse_markdown, serialize
from .errors import OcrKitError
from .filters import CharNgramLm, FilterConfig, filter_corpus, train_lm
from .harness import lint_ground_truth, load_manifest, render_report, run_evaluation
from .normalize import NormalizeConfig


def _normalize_options(fn):
    fn = click.option("--normalize-unicode-form", "unicode_form",
                      type=click.Choice(["NFC", "NFKC"]), default="NFC",
                      show_default=True)(fn)
    fn = click.option("--normalize-strip-diacritics", "strip_diacritics",
                      is_flag=True, default=False)(fn)
    fn = click.option("--normalize-hr-form", "hr_form", default="---",
                      show_default=True)(fn)
    fn = click.option("--normalize-remove-tag", "remove_tags", multiple=True,
                      default=("page_number", "watermark"), show_default=True)(fn)
    return fn


def _build_cfg(unicode_form, strip_diacritics, hr_form, remove_tags) -> NormalizeConfig:
    return NormalizeConfig(
        model_tags_to_remove=frozenset(remove_tags),
        unicode_form=unicode_form,
        strip_diacritics=strip_diacritics,
        hr_normal_form=hr_form,
    )


@click.group()
def main():
    """Batch toolkit for Arabic document OCR evaluation and data pipelines."""


@main.group()
def eval():
    """Benchmark evaluation runs."""


@eval.command("run")
@click.option("--manifest", "manifest_path", required=True,
              type=click.Path(exists=True))
@click.option("--pred", "predictions_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--report", "report_format", type=click.Choice(["md"]), default=None,
              help="Also print a Markdown table to stdout.")
@click.option("--teds-scope", type=click.Choice(["doc", "tables"]), default="doc",
              show_default=True)
@click.option("--model-name", default="model", show_default=True)
@click.option("--strict", is_flag=True, help="Error on missing predictions.")
@_normalize_options
def eval_run(manifest_path, predictions_dir, out_path, report_format, teds_scope,
             model_name, strict, unicode_form, strip_diacritics, hr_form,
             remove_tags):
    """Score predictions against a manifest's ground truth."""
    cfg = _build_cfg(unicode_form, strip_diacritics, hr_form, remove_tags)
    try:
        manifest = load_manifest(manifest_path)
        report = run_evaluation(manifest, predictions_dir, cfg,
                                teds_scope=teds_scope, model_name=model_name,
                                strict=strict)
    except OcrKitError as exc:
        raise click.ClickException(str(exc))
    Path(out_path).write_text(render_report(report, "json"), encoding="utf-8")
    if report_format == "md":
        click.echo(render_report(report, "markdown"))
    click.echo(f"wrote {out_path}", err=True)


@main.command("lint")
@click.option("--manifest", "manifest_path", required=True,
              type=click.Path(exists=True))
@click.option("--latin-run-threshold", default=5, show_default=True)
def lint(manifest_path, latin_run_threshold):
    """Report ground-truth quality findings."""
    try:
        manifest = load_manifest(manifest_path)
    except OcrKitError as exc:
        raise click.ClickException(str(exc))
    findings = lint_ground_truth(manifest, latin_run_threshold=latin_run_threshold)
    for f in findings:
        click.echo(f"{f.entry_id}\t{f.kind}\t{f.detail}")
    click.echo(f"{len(findings)} finding(s)", err=True)


@main.command("filter")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True),
              help="JSONL with one {'id':…, 'text':…} record per line.")
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--lm", "lm_path", type=click.Path(exists=True), default=None,
              help="Trained LM file; defaults to training on the corpus itself.")
@click.option("--save-lm", type=click.Path(), default=None)
@click.option("--ppl-threshold", default=1000.0, show_default=True)
@click.option("--sparsity-threshold", default=0.25, show_default=True)
@click.option("--lm-order", default=5, show_default=True)
@click.option("--lm-unit", type=click.Choice(["char", "word"]), default="char",
              show_default=True)
def filter_cmd(corpus_path, out_dir, lm_path, save_lm, ppl_threshold,
               sparsity_threshold, lm_order, lm_unit):
    """Split a JSONL corpus into kept.jsonl and rejected.jsonl."""
    records = []
    for line in Path(corpus_path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            records.append(json.loads(line))
    docs = [parse_markdown(r["text"], on_error="fallback") for r in records]
    if lm_path:
        lm = CharNgramLm.load(lm_path)
    else:
        lm = train_lm([r["text"] for r in records], order=lm_order, unit=lm_unit)
    if save_lm:
        lm.save(save_lm)
    cfg = FilterConfig(ppl_threshold=ppl_threshold,
                       sparsity_threshold=sparsity_threshold)
    kept, rejected = filter_corpus(docs, lm, cfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    kept_set = {id(d) for d in kept}
    reject_info = {id(r.document): r for r in rejected}
    with open(out / "kept.jsonl", "w", encoding="utf-8") as kf, \
            open(out / "rejected.jsonl", "w", encoding="utf-8") as rf:
        for record, doc in zip(records, docs):
            if id(doc) in kept_set:
                kf.write(json.dumps(record, ensure_ascii=False) + "\n")
            else:
                rej = reject_info[id(doc)]
                rf.write(json.dumps(record | {"reason": rej.reason,
                                              "value": rej.value},
                                    ensure_ascii=False) + "\n")
    click.echo(f"kept {len(kept)}, rejected {len(rejected)}", err=True)


@main.command("sample-configs")
@click.option("--count", default=10, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--corpus", "corpus_path", type=click.Path(exists=True), default=None,
              help="Optional JSONL of documents; emits one render job per doc.")
def sample_configs(count, seed, out_dir, corpus_path):
    """Sample render configurations and optionally emit render jobs."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    configs = [synthconfig.sample_render_config(seed + i) for i in range(count)]
    with open(out / "configs.jsonl", "w", encoding="utf-8") as fh:
        for i, cfg in enumerate(configs):
            fh.write(json.dumps({"seed": seed + i, "config": cfg.to_dict()},
                                ensure_ascii=False) + "\n")
    if corpus_path:
        records = [json.loads(ln) for ln
                   in Path(corpus_path).read_text(encoding="utf-8").splitlines()
                   if ln.strip()]
        with open(out / "jobs_manifest.jsonl", "w", encoding="utf-8") as mf:
            for i, record in enumerate(records):
                doc = parse_markdown(record["text"], on_error="fallback")
                cfg = synthconfig.sample_render_config(seed + i)
                job = synthconfig.emit_render_job(doc, cfg, seed + i)
                synthconfig.write_render_job(job, out)
                mf.write(json.dumps({"doc_id": record.get("id", str(i)),
                                     "job_id": job.job_id}) + "\n")
    click.echo(f"wrote {count} config(s) to {out}", err=True)


@main.group()
def augment():
    """Plan and run image degradation."""


def _image_ids(images_dir) -> list[str]:
    return sorted(p.stem for p in Path(images_dir).glob("*.png"))


@augment.command("plan")
@click.option("--images-dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--allow-remainder", is_flag=True)
def augment_plan(images_dir, seed, out_path, allow_remainder):
    """Assign 1/2/3 transforms to random thirds of the PNG set."""
    ids = _image_ids(images_dir)
    try:
        plan = aug.plan_augmentation(ids, seed, allow_remainder=allow_remainder)
    except OcrKitError as exc:
        raise click.ClickException(str(exc))
    Path(out_path).write_text(plan.to_jsonl(), encoding="utf-8")
    click.echo(f"planned {len(plan.assignments)} assignment(s)", err=True)


@augment.command("run")
@click.option("--plan", "plan_path", required=True, type=click.Path(exists=True))
@click.option("--images-dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
def augment_run(plan_path, images_dir, out_dir):
    """Apply a plan; the output manifest lists only augmented images."""
    plan = aug.AugmentPlan.from_jsonl(Path(plan_path).read_text(encoding="utf-8"))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "manifest.jsonl", "w", encoding="utf-8") as mf:
        for assignment in plan.assignments:
            src = Path(images_dir) / f"{assignment.image_id}.png"
            img = np.asarray(Image.open(src).convert("RGB"))
            result = aug.apply_assignment(img, assignment)
            dst = out / f"{assignment.image_id}.aug.png"
            Image.fromarray(result).save(dst)
            mf.write(json.dumps({"image_id": f"{assignment.image_id}.aug",
                                 "transforms": list(assignment.transforms),
                                 "seed": assignment.seed}) + "\n")
    click.echo(f"augmented {len(plan.assignments)} image(s)", err=True)


if __name__ == "__main__":
    sys.exit(main())
