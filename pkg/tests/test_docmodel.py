import random

import pytest
from hypothesis import given, strategies as st

from ocrkit.docmodel import (
    Document,
    Header,
    HorizontalRule,
    HtmlTree,
    Paragraph,
    SpecialTag,
    Table,
    document_to_tree,
    element,
    md_table_to_tree,
    parse_emphasis,
    parse_html_table,
    parse_markdown,
    render_emphasis,
    serialize,
    text_node,
)
from ocrkit.errors import IllegalNesting, UnbalancedHtml

from oracles import md_table_grammar_walk


class TestParseMarkdown:
    def test_header_and_paragraph(self):
        doc = parse_markdown("# عنوان\n\nنص")
        assert doc.blocks == (Header(1, "عنوان"), Paragraph("نص"))

    def test_page_number_tag(self):
        doc = parse_markdown("<page_number>5</page_number>")
        assert doc.blocks == (SpecialTag("page_number", "5"),)

    def test_markdown_table_cells_match_grammar_walk(self):
        md = "| a | b |\n|---|---|\n| 1 | 2 |"
        doc = parse_markdown(md)
        assert len(doc.blocks) == 1
        table = doc.blocks[0]
        assert isinstance(table, Table)
        walked = md_table_grammar_walk(md)
        tree_rows = [
            [td.text_content() for td in tr.children]
            for tr in table.tree.children
        ]
        assert tree_rows == walked == [["a", "b"], ["1", "2"]]

    def test_watermark_inline_splits_blocks(self):
        doc = parse_markdown("<watermark>مسودة</watermark>نص")
        assert doc.blocks == (SpecialTag("watermark", "مسودة"), Paragraph("نص"))

    def test_img_presence_tag(self):
        doc = parse_markdown("نص\n\n<img>")
        assert doc.blocks[-1] == SpecialTag("img", "")

    def test_horizontal_rule_variants(self):
        for raw in ("---", "***", "___", "- - -"):
            assert parse_markdown(raw).blocks == (HorizontalRule(),)

    def test_setext_headers(self):
        doc = parse_markdown("Title\n=====\n\nSub\n-----")
        assert doc.blocks == (Header(1, "Title"), Header(2, "Sub"))

    def test_unclosed_table_raises(self):
        with pytest.raises(UnbalancedHtml):
            parse_markdown("<table><tr><td>x")

    def test_unclosed_table_fallback(self):
        doc = parse_markdown("<table><tr><td>x", on_error="fallback")
        assert doc.warnings
        assert any(isinstance(b, Paragraph) for b in doc.blocks)

    def test_empty_lines_produce_no_blocks(self):
        assert parse_markdown("\n\n  \n\n").blocks == ()

    def test_no_block_is_empty(self):
        doc = parse_markdown("a\n\n\n\nb\n\n# h")
        for block in doc.blocks:
            if isinstance(block, (Paragraph, Header)):
                assert block.text.strip()


class TestParseHtmlTable:
    def test_size_four(self):
        tree = parse_html_table("<table><tr><td>x</td></tr></table>")
        assert tree.size() == 4
        assert tree.label == "table"

    def test_colspan_attribute(self):
        tree = parse_html_table('<table><tr><td colspan="2">x</td></tr></table>')
        td = tree.children[0].children[0]
        assert td.colspan == 2 and td.rowspan is None

    def test_styling_attributes_dropped(self):
        tree = parse_html_table(
            '<table class="x"><tr style="color:red"><td align="left">y</td></tr></table>')
        for node in tree.iter_nodes():
            assert node.rowspan is None and node.colspan is None or node.label == "td"

    def test_unclosed_tr(self):
        with pytest.raises(UnbalancedHtml):
            parse_html_table("<table><tr></table>")

    def test_tr_outside_table(self):
        with pytest.raises(IllegalNesting):
            parse_html_table("<tr><td>x</td></tr>")

    def test_whitespace_text_nodes_dropped(self):
        tree = parse_html_table("<table>\n  <tr>\n    <td>x</td>\n  </tr>\n</table>")
        assert tree.size() == 4

    def test_nested_tables_allowed(self):
        tree = parse_html_table(
            "<table><tr><td><table><tr><td>x</td></tr></table></td></tr></table>")
        inner = tree.children[0].children[0].children[0]
        assert inner.label == "table"

    def test_text_nodes_are_leaves(self):
        tree = parse_html_table("<table><tr><td><b>x</b>y</td></tr></table>")
        for node in tree.iter_nodes():
            if node.is_text:
                assert node.children == ()


class TestDocumentToTree:
    def test_empty_document(self):
        assert document_to_tree(Document(())).size() == 1

    def test_single_header(self):
        tree = document_to_tree(Document((Header(1, "a"),)))
        assert tree.size() == 3
        assert tree.children[0].label == "h1"

    def test_size_is_sum_of_blocks(self):
        table = parse_html_table("<table><tr><td>x</td></tr></table>")
        doc = Document((Paragraph("x"), Table(table)))
        assert document_to_tree(doc).size() == 1 + 2 + 4


class TestSerialize:
    def test_rule_normal_form(self):
        assert serialize(Document((HorizontalRule(),))) == "---"

    def test_empty(self):
        assert serialize(Document(())) == ""

    def test_header_atx(self):
        assert serialize(Document((Header(2, "t"),))) == "## t"

    @pytest.mark.parametrize("raw", [
        "# عنوان\n\nنص",
        "نص **عريض** و *مائل*",
        "| a | b |\n|---|---|\n| 1 | 2 |",
        "<table><tr><td>x</td></tr></table>",
        "<page_number>5</page_number>\n\nمتن\n\n---\n\n## آخر",
        "Title\n=====\n\nbody",
        "<watermark>مسودة</watermark>",
    ])
    def test_round_trip(self, raw):
        doc = parse_markdown(raw)
        again = parse_markdown(serialize(doc))
        assert again.blocks == doc.blocks

    def test_round_trip_random_documents(self, rng):
        words = ["نص", "كتاب", "a", "b", "##x", "**ق**"]
        for _ in range(50):
            parts = []
            for _ in range(rng.randint(1, 6)):
                kind = rng.random()
                if kind < 0.3:
                    parts.append("#" * rng.randint(1, 6) + " "
                                 + rng.choice(words).strip("#*"))
                elif kind < 0.5:
                    parts.append("---")
                else:
                    parts.append(" ".join(rng.choice(words)
                                          for _ in range(rng.randint(1, 5))))
            raw = "\n\n".join(parts)
            doc = parse_markdown(raw)
            assert parse_markdown(serialize(doc)).blocks == doc.blocks


class TestEmphasis:
    def test_bold_and_italic(self):
        text, spans = parse_emphasis("a **b** c *d*")
        assert text == "a b c d"
        assert [(s.kind, text[s.start:s.end]) for s in spans] == \
            [("bold", "b"), ("italic", "d")]

    def test_render_inverts_parse(self):
        raw = "قال **الكاتب** إن *النص* واضح"
        text, spans = parse_emphasis(raw)
        assert render_emphasis(text, spans) == raw

    @given(st.text(alphabet="ab*", max_size=20))
    def test_parse_emphasis_total(self, raw):
        text, spans = parse_emphasis(raw)
        for s in spans:
            assert 0 <= s.start <= s.end <= len(text)


class TestMdTableToTree:
    def test_single_column(self):
        tree, warnings = md_table_to_tree(["| a |", "|---|", "| 1 |"])
        assert warnings == []
        rows = [[td.text_content() for td in tr.children] for tr in tree.children]
        assert rows == [["a"], ["1"]]
        # header row lands in <td>, not <th>
        assert all(td.label == "td" for tr in tree.children for td in tr.children)

    def test_short_row_padded(self):
        tree, warnings = md_table_to_tree(
            ["| a | b |", "|---|---|", "| 1 |"])
        assert warnings
        assert all(len(tr.children) == 2 for tr in tree.children)

    def test_cell_text_preserved_exactly(self):
        md_lines = ["| **a** | b`c |", "|---|---|", "| ع | 2 |"]
        tree, _ = md_table_to_tree(md_lines)
        leaves = sorted(n.text for n in tree.iter_nodes() if n.is_text)
        assert leaves == sorted(["**a**", "b`c", "ع", "2"])


def test_parsing_total_on_noise(rng):
    alphabet = "ابت<>#|*-_ \nxyz/="
    for _ in range(200):
        raw = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 60)))
        doc = parse_markdown(raw, on_error="fallback")
        assert isinstance(doc, Document)


def test_tree_size_recursive_definition():
    t = element("a", element("b", text_node("x")), element("c"))
    assert t.size() == 1 + sum(c.size() for c in t.children) == 4
