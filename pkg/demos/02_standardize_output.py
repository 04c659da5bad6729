"""Output standardization before scoring.

Two model outputs can be semantically identical yet formatted differently:
Setext vs ATX headers, `***` vs `---` rules, Markdown vs HTML tables,
decorative wrapper tags. Scoring raw strings would penalize formatting, so
both sides are standardized first. This demo walks one messy output through
the pipeline.
"""

from ocrkit import NormalizeConfig, parse_markdown, serialize, standardize
from ocrkit.metrics import normalize_document

MESSY = """\
العنوان الرئيسي
===============

<div>نص تمهيدي داخل وسم <span>تغليف</span> لا معنى له</div>

***

| البند | القيمة |
|------|-------|
| أ | <strong>١</strong> |

<watermark>مسودة</watermark>

<page_number>3</page_number>
"""


def main() -> None:
    cfg = NormalizeConfig()

    print("== text-level standardization ==")
    print(standardize(MESSY, cfg))

    print("\n== full document pipeline (tables converted to HTML) ==")
    doc, warnings = normalize_document(parse_markdown(MESSY), cfg)
    print(serialize(doc))
    if warnings:
        print("\nwarnings:", warnings)

    print("\n== idempotence check ==")
    once = serialize(doc)
    again, _ = normalize_document(parse_markdown(once), cfg)
    print("stable under re-run:", serialize(again) == once)


if __name__ == "__main__":
    main()
