"""End-to-end benchmark run.

A dataset is a JSONL manifest of (image, ground-truth) entries; predictions
are one file per entry id. This demo builds a tiny dataset on disk, scores an
imperfect "model" against it, lints the ground truth, and renders the report
table. The same flow is available from the command line:

    ocrkit eval run --manifest manifest.jsonl --pred preds/ --out report.json
    ocrkit lint --manifest manifest.jsonl
"""

import json
import tempfile
from pathlib import Path

from ocrkit import lint_ground_truth, load_manifest, render_report, run_evaluation

DOCS = {
    "doc01": "# عقد إيجار\n\nتم الاتفاق بين الطرفين على البنود التالية\n\n<page_number>1</page_number>",
    "doc02": "| البند | القيمة |\n|---|---|\n| المدة | سنة |\n\n<page_number>2</page_number>",
    "doc03": "فقرة ختامية توقع بعدها الأطراف\n\n<page_number>3</page_number>",
}

# doc01 perfect, doc02 drops a table cell, doc03 has a typo.
PREDICTIONS = {
    "doc01": DOCS["doc01"],
    "doc02": "| البند | القيمة |\n|---|---|\n| المدة |  |\n\n<page_number>2</page_number>",
    "doc03": "فقرة ختامية توقع بعدها الاطراف\n\n<page_number>3</page_number>",
}


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        (root / "gt").mkdir()
        (root / "img").mkdir()
        (root / "pred").mkdir()
        lines = []
        for entry_id, text in DOCS.items():
            (root / "gt" / f"{entry_id}.md").write_text(text, encoding="utf-8")
            (root / "img" / f"{entry_id}.png").write_bytes(b"")
            (root / "pred" / f"{entry_id}.md").write_text(
                PREDICTIONS[entry_id], encoding="utf-8")
            lines.append(json.dumps({
                "id": entry_id,
                "image_path": f"img/{entry_id}.png",
                "ground_truth_path": f"gt/{entry_id}.md",
                "source": "real",
            }))
        manifest_path = root / "manifest.jsonl"
        manifest_path.write_text("\n".join(lines), encoding="utf-8")

        manifest = load_manifest(manifest_path)
        findings = lint_ground_truth(manifest)
        print(f"lint: {len(findings)} finding(s)")

        report = run_evaluation(manifest, root / "pred", model_name="demo-model")
        print("\n" + render_report(report, "markdown"))


if __name__ == "__main__":
    main()
