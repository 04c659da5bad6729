import random
import re

import pytest
from hypothesis import given, settings, strategies as st

from ocrkit.docmodel import Table, parse_markdown, serialize
from ocrkit.normalize import (
    NormalizeConfig,
    convert_md_tables,
    normalize_arabic,
    standardize,
    standardize_with_warnings,
)

from oracles import drop_tags_keep_text


class TestStandardize:
    def test_rule_spellings(self):
        assert standardize("***") == "---"
        assert standardize("___") == "---"
        assert standardize("- - -") == "---"
        assert standardize("*****") == "---"

    def test_strong_to_b_inside_tables(self):
        raw = "<table><tr><td><strong>x</strong></td></tr></table>"
        assert standardize(raw) == "<table><tr><td><b>x</b></td></tr></table>"

    def test_em_to_i_inside_tables(self):
        raw = "<table><tr><td><em>x</em></td></tr></table>"
        assert standardize(raw) == "<table><tr><td><i>x</i></td></tr></table>"

    def test_tags_outside_tables_stripped_text_kept(self):
        assert standardize("نص <div>داخلي</div>") == "نص داخلي"

    def test_strip_matches_tokenizer_oracle(self, rng):
        words = ["نص", "على", "<span>", "</span>", "<div>", "</div>", "x"]
        for _ in range(100):
            raw = " ".join(rng.choice(words) for _ in range(rng.randint(1, 12)))
            assert standardize(raw) == drop_tags_keep_text(raw)

    def test_watermark_removed_with_content(self):
        assert standardize("<watermark>مسودة</watermark>نص") == "نص"

    def test_page_number_removed_with_content(self):
        assert standardize("قبل <page_number>12</page_number> بعد") == "قبل  بعد"

    def test_setext_rewritten_as_atx(self):
        assert standardize("Title\n=====") == "# Title"
        assert standardize("Sub\n---") == "## Sub"

    def test_atx_spacing_and_trailing_hashes(self):
        assert standardize("##   t  ##") == "## t"
        assert standardize("#t") == "# t"

    def test_strong_outside_tables_stripped(self):
        # Step 1 runs before step 5, so non-table <strong> loses its tags.
        assert standardize("<strong>x</strong>") == "x"

    def test_tag_order_insensitive(self):
        # Removing model tags first must agree with the pipeline order,
        # because step 6 removes whole elements.
        from ocrkit.normalize import _remove_model_tags
        cfg = NormalizeConfig()
        raw = "نص <watermark>مسودة</watermark>\n\n<b>عريض</b>\n\n***"
        via_pipeline = standardize(raw, cfg)
        pre_removed = _remove_model_tags(raw, cfg.model_tags_to_remove)
        assert standardize(pre_removed, cfg) == via_pipeline

    def test_malformed_html_flagged(self):
        text, warnings = standardize_with_warnings("<table><tr>نص")
        assert warnings
        assert "نص" in text

    def test_no_arabic_letters_deleted(self, rng):
        arabic = "ابتثجحخدذرزسشصضطظعغفقكلمنهوي"
        for _ in range(100):
            raw = "".join(rng.choice(arabic + " \n") for _ in range(40))
            result = standardize(raw)
            for ch in arabic:
                assert result.count(ch) >= raw.count(ch) - 0

    def test_custom_hr_form(self):
        cfg = NormalizeConfig(hr_normal_form="***")
        assert standardize("---", cfg) == "***"
        # the configured form must itself parse as a rule
        from ocrkit.docmodel import HorizontalRule
        assert parse_markdown(cfg.hr_normal_form).blocks == (HorizontalRule(),)


class TestConvertMdTables:
    def test_md_table_becomes_html_on_serialize(self):
        doc = parse_markdown("| a |\n|---|\n| 1 |")
        converted = convert_md_tables(doc)
        assert serialize(converted) == \
            "<table><tr><td>a</td></tr><tr><td>1</td></tr></table>"

    def test_html_tables_untouched(self):
        raw = "<table><tr><td>x</td></tr></table>"
        doc = parse_markdown(raw)
        assert serialize(convert_md_tables(doc)) == raw

    def test_document_without_tables_identical(self):
        doc = parse_markdown("نص\n\n# عنوان")
        assert convert_md_tables(doc) == doc

    def test_short_row_padded_with_warning(self):
        doc = parse_markdown("| a | b |\n|---|---|\n| 1 |")
        assert doc.warnings
        tree = doc.blocks[0].tree
        assert all(len(tr.children) == 2 for tr in tree.children)

    def test_cell_multiset_preserved(self):
        doc = parse_markdown("| a | b |\n|---|---|\n| ع | 2 |")
        tree = convert_md_tables(doc).blocks[0].tree
        leaves = sorted(n.text for n in tree.iter_nodes() if n.is_text)
        assert leaves == sorted(["a", "b", "ع", "2"])


class TestNormalizeArabic:
    def test_fixpoint_on_clean_text(self):
        text = "نص عادي"
        assert normalize_arabic(text) == text

    def test_strip_diacritics(self):
        cfg = NormalizeConfig(strip_diacritics=True)
        assert normalize_arabic("بَصير", cfg) == "بصير"

    def test_strip_matches_combining_class_oracle(self, rng):
        import unicodedata
        cfg = NormalizeConfig(strip_diacritics=True)
        samples = ["مُحَمَّدٌ", "كِتَابٌ", "القُرْآن", "بسم الله"]
        for s in samples:
            expected = "".join(
                ch for ch in unicodedata.normalize("NFC", s)
                if not unicodedata.combining(ch))
            assert normalize_arabic(s, cfg) == expected

    def test_whitespace_collapse(self):
        assert normalize_arabic("a  b\t c") == "a b c"

    def test_newlines_preserved(self):
        assert normalize_arabic("a \nb") == "a\nb"

    def test_diacritics_kept_by_default(self):
        assert normalize_arabic("بَصير") == "بَصير"


# Idempotence of every normalizer is an acceptance property; the heavy fuzzed
# version lives in test_acceptance.py, these are quick unit-level checks.
@given(st.text(alphabet="اب ت<>#*-_|\ndiv/strong", max_size=80))
@settings(max_examples=200, deadline=None)
def test_standardize_idempotent(raw):
    once = standardize(raw)
    assert standardize(once) == once


@given(st.text(max_size=80))
@settings(max_examples=100, deadline=None)
def test_normalize_arabic_idempotent(raw):
    cfg = NormalizeConfig(strip_diacritics=True)
    once = normalize_arabic(raw, cfg)
    assert normalize_arabic(once, cfg) == once


def test_convert_md_tables_idempotent():
    doc = parse_markdown("| a |\n|---|\n| 1 |\n\nنص")
    once = convert_md_tables(doc)
    assert convert_md_tables(once) == once
