import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from ocrkit.docmodel import parse_markdown
from ocrkit.errors import EmptyCorpus, EmptyReference, LengthMismatch, OutOfRange
from ocrkit.metrics import (
    bleu,
    cer,
    chrf,
    edit_distance,
    evaluate_pair,
    evaluate_pair_counts,
    mars,
    wer,
)
from ocrkit.normalize import NormalizeConfig

from oracles import direct_bleu, direct_chrf, recursive_levenshtein


class TestCer:
    def test_identical(self):
        assert cer("كتاب", "كتاب") == 0.0

    def test_one_substitution(self):
        assert cer("abcd", "abxd") == 0.25
        assert recursive_levenshtein("abcd", "abxd") == 1

    def test_empty_hypothesis(self):
        assert cer("ab", "") == 1.0

    def test_empty_reference_raises(self):
        with pytest.raises(EmptyReference):
            cer("", "x")

    def test_can_exceed_one(self):
        assert cer("a", "xyz") > 1.0


class TestWer:
    def test_one_substitution(self):
        assert wer("a b c", "a x c") == pytest.approx(1 / 3)

    def test_insertions_exceed_one(self):
        assert wer("a", "a b c") == 2.0

    def test_identical(self):
        assert wer("نص طويل هنا", "نص طويل هنا") == 0.0

    def test_empty_reference_raises(self):
        with pytest.raises(EmptyReference):
            wer("   ", "x")


class TestEditDistanceProperties:
    def test_symmetry_and_triangle(self, rng):
        alphabet = "abc"
        for _ in range(100):
            s = ["".join(rng.choice(alphabet) for _ in range(rng.randint(0, 6)))
                 for _ in range(3)]
            a, b, c = s
            assert edit_distance(a, b) == edit_distance(b, a)
            assert edit_distance(a, c) <= edit_distance(a, b) + edit_distance(b, c)

    @given(st.text(alphabet="abc", max_size=8), st.text(alphabet="abc", max_size=8))
    @settings(max_examples=300, deadline=None)
    def test_matches_recursive_definition(self, a, b):
        assert edit_distance(a, b) == recursive_levenshtein(a, b)

    def test_zero_iff_equal(self, rng):
        for _ in range(50):
            a = "".join(rng.choice("ابت") for _ in range(rng.randint(1, 6)))
            b = "".join(rng.choice("ابت") for _ in range(rng.randint(1, 6)))
            assert (edit_distance(a, b) == 0) == (a == b)


class TestBleu:
    def test_identical_corpus(self):
        refs = ["النص الأول هنا", "سطر ثان"]
        assert bleu(refs, list(refs)) == 100.0

    def test_zero_unigram_overlap(self):
        assert bleu(["a b c"], ["x y z"]) == 0.0

    def test_short_hypothesis_value(self):
        got = bleu(["the cat sat"], ["the cat"])
        assert got == pytest.approx(math.exp(1 - 3 / 2) * 100.0)

    def test_matches_direct_formula(self, rng):
        words = ["نص", "كتاب", "في", "على", "قال", "a", "b"]
        for _ in range(50):
            refs = [" ".join(rng.choice(words) for _ in range(rng.randint(1, 10)))
                    for _ in range(3)]
            hyps = [" ".join(rng.choice(words) for _ in range(rng.randint(1, 10)))
                    for _ in range(3)]
            assert bleu(refs, hyps) == pytest.approx(direct_bleu(refs, hyps), abs=1e-9)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            bleu(["a"], ["a", "b"])

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            bleu([], [])

    def test_permutation_invariant(self, rng):
        refs = ["نص واحد", "سطر اخر تماما", "كتاب قديم جدا هنا"]
        hyps = ["نص واحد", "سطر ثان", "كتاب جديد جدا"]
        base = bleu(refs, hyps)
        order = list(range(3))
        rng.shuffle(order)
        assert bleu([refs[i] for i in order], [hyps[i] for i in order]) == \
            pytest.approx(base)


class TestChrf:
    def test_identical(self):
        assert chrf(["نص عربي"], ["نص عربي"]) == 100.0

    def test_disjoint_alphabets(self):
        assert chrf(["aaaa"], ["bbbb"]) == 0.0

    def test_matches_direct_formula(self, rng):
        words = ["نص", "كتاب", "في", "abc", "xy"]
        for _ in range(50):
            refs = [" ".join(rng.choice(words) for _ in range(rng.randint(1, 8)))]
            hyps = [" ".join(rng.choice(words) for _ in range(rng.randint(1, 8)))]
            assert chrf(refs, hyps) == pytest.approx(direct_chrf(refs, hyps), abs=1e-9)

    def test_whitespace_excluded(self):
        assert chrf(["a b"], ["ab"]) == 100.0

    def test_permutation_invariant(self, rng):
        refs = ["نص واحد", "سطر اخر", "كتاب"]
        hyps = ["نص واحد", "سطر ثان", "مجلد"]
        base = chrf(refs, hyps)
        order = [2, 0, 1]
        assert chrf([refs[i] for i in order], [hyps[i] for i in order]) == \
            pytest.approx(base)


class TestMars:
    @pytest.mark.parametrize("c,t,expected", [
        (87.77, 66, 76.885),
        (89.55, 52, 70.775),
        (80.26, 56, 68.13),
    ])
    def test_reference_rows(self, c, t, expected):
        assert mars(c, t) == pytest.approx(expected, abs=1e-9)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            mars(101.0, 50.0)
        with pytest.raises(OutOfRange):
            mars(50.0, -1.0)

    def test_identity_and_monotonicity(self, rng):
        for _ in range(50):
            x = rng.uniform(0, 100)
            assert mars(x, x) == pytest.approx(x)
            y = rng.uniform(0, 100)
            bump = rng.uniform(0, 100 - y) if y < 100 else 0
            assert mars(x, y + bump) >= mars(x, y)


class TestEvaluatePair:
    def test_identical_documents(self):
        doc = parse_markdown("# عنوان\n\nنص المستند هنا")
        report = evaluate_pair(doc, doc)
        assert (report.wer, report.cer) == (0.0, 0.0)
        assert report.bleu == report.chrf == report.teds == report.mars == 100.0

    def test_empty_hypothesis(self):
        ref = parse_markdown("نص المرجع")
        hyp = parse_markdown("")
        report = evaluate_pair(ref, hyp)
        assert report.cer == 1.0
        assert report.chrf == 0.0
        assert report.bleu == 0.0
        assert 0.0 <= report.teds <= 100.0

    def test_rule_spelling_equivalent(self):
        ref = parse_markdown("نص\n\n---\n\nتكملة")
        hyp = parse_markdown("نص\n\n***\n\nتكملة")
        report = evaluate_pair(ref, hyp)
        assert (report.wer, report.cer) == (0.0, 0.0)
        assert report.mars == 100.0

    def test_empty_reference_raises(self):
        with pytest.raises(EmptyReference):
            evaluate_pair(parse_markdown(""), parse_markdown("نص"))

    def test_mars_composition(self):
        ref = parse_markdown("نص أول\n\n| a |\n|---|\n| 1 |")
        hyp = parse_markdown("نص ثان\n\n| a |\n|---|\n| 2 |")
        report = evaluate_pair(ref, hyp)
        assert report.mars == pytest.approx((report.chrf + report.teds) / 2)

    def test_formatting_noise_invariance(self, rng):
        base = "نص ثابت هنا\n\nفقرة أخرى"
        ref = parse_markdown(base)
        noise_tags = ["<div>", "</div>", "<span>", "</span>"]
        for _ in range(20):
            noisy = base
            for _ in range(rng.randint(1, 4)):
                pos = rng.randint(0, len(noisy))
                noisy = noisy[:pos] + rng.choice(noise_tags) + noisy[pos:]
            report = evaluate_pair(ref, parse_markdown(noisy, on_error="fallback"))
            assert report.cer == pytest.approx(0.0)
            assert report.chrf == 100.0

    def test_counts_fold_is_associative(self):
        from ocrkit.metrics import BleuCounts
        a = BleuCounts([1, 2, 3, 4], [5, 6, 7, 8], 9, 10)
        b = BleuCounts([2, 0, 1, 1], [3, 3, 3, 3], 4, 5)
        c = BleuCounts([0, 1, 0, 1], [1, 1, 2, 2], 3, 3)
        assert a.add(b).add(c) == a.add(b.add(c))

    def test_tables_scope(self):
        ref = parse_markdown("نص مختلف تماما\n\n| a |\n|---|\n| 1 |")
        hyp = parse_markdown("كلام آخر هنا\n\n| a |\n|---|\n| 1 |")
        report = evaluate_pair(ref, hyp, teds_scope="tables")
        assert report.teds == 100.0
