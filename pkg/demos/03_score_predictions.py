"""Scoring a prediction against ground truth.

Six metrics cover complementary failure modes: WER/CER for transcription
accuracy, BLEU/ChrF for n-gram fidelity, TEDS for table structure, and MARS
(the mean of ChrF and TEDS) as the single headline number.
"""

from ocrkit import evaluate_pair, parse_markdown
from ocrkit.teds import teds_similarity
from ocrkit.docmodel import parse_html_table

REFERENCE = """\
# الميزانية السنوية

بلغ إجمالي الإيرادات ثلاثمئة ألف ريال هذا العام.

| البند | المبلغ |
|------|-------|
| إيرادات | ٣٠٠ |
| مصروفات | ٢١٠ |
"""

# The "model" dropped a word, typo'd another, and merged two table rows.
HYPOTHESIS = """\
# الميزانية السنوية

بلغ إجمالي الإيرادات ثلاثمئة ريال هذا العام.

| البند | المبلغ |
|------|-------|
| إيرادات | ٣٠٠ |
"""


def main() -> None:
    report = evaluate_pair(parse_markdown(REFERENCE), parse_markdown(HYPOTHESIS))
    print("full-document report:")
    for name in ("wer", "cer", "bleu", "chrf", "teds", "mars"):
        print(f"  {name.upper():5s} {getattr(report, name):8.3f}")

    print("\ntable-structure similarity in isolation:")
    ref_table = parse_html_table(
        "<table><tr><td>a</td><td>b</td></tr><tr><td>c</td><td>d</td></tr></table>")
    hyp_table = parse_html_table(
        "<table><tr><td>a</td><td>b</td></tr></table>")
    print(f"  TEDS = {teds_similarity(ref_table, hyp_table):.3f}"
          " (one of two rows missing)")


if __name__ == "__main__":
    main()
