"""Parsing OCR output into a structured document.

OCR systems for Arabic documents emit Markdown with embedded HTML tables and
special-purpose tags. This demo parses such an output into typed blocks and
shows how tables become labeled trees.
"""

from ocrkit import parse_markdown, serialize
from ocrkit.docmodel import Table

RAW = """\
# تقرير المبيعات

ارتفعت المبيعات في الربع الأول بنسبة **ملحوظة** مقارنة بالعام الماضي.

| المنطقة | المبيعات |
|---------|---------|
| الرياض | ١٢٠ |
| جدة | ٩٥ |

<table><tr><td>إجمالي</td><td><b>٢١٥</b></td></tr></table>

<page_number>1</page_number>
"""


def main() -> None:
    doc = parse_markdown(RAW)
    print(f"parsed {len(doc.blocks)} blocks:")
    for block in doc.blocks:
        print(f"  - {type(block).__name__}")

    print("\ntables as trees:")
    for block in doc.blocks:
        if isinstance(block, Table):
            origin = "markdown" if block.markdown_source else "html"
            print(f"  {origin} table, {block.tree.size()} nodes:")
            for node in block.tree.iter_nodes():
                text = f" {node.text!r}" if node.is_text else ""
                print(f"    {node.label}{text}")

    print("\nround-trip serialization:")
    print(serialize(doc))


if __name__ == "__main__":
    main()
