import json
from collections import Counter

import pytest

from ocrkit.docmodel import parse_markdown
from ocrkit.synthconfig import (
    FONT_SIZES,
    PAGE_SIZES,
    RenderConfig,
    document_to_html,
    emit_render_job,
    sample_render_config,
    write_render_job,
)

N_SMOKE = 20_000


@pytest.fixture(scope="module")
def samples():
    return [sample_render_config(seed) for seed in range(N_SMOKE)]


class TestSampleRenderConfig:
    def test_determinism(self):
        assert sample_render_config(42) == sample_render_config(42)

    def test_different_seeds_vary(self):
        configs = {sample_render_config(s).font for s in range(200)}
        assert len(configs) > 10

    def test_font_sizes_even_in_range(self, samples):
        for cfg in samples:
            assert cfg.font_size_pt in FONT_SIZES
            assert cfg.font_size_pt % 2 == 0

    def test_continuous_ranges(self, samples):
        for cfg in samples:
            assert 1.0 <= cfg.margin_cm <= 2.5
            assert 1.0 <= cfg.line_height <= 1.6
            assert 0.5 <= cfg.column_spacing_cm <= 1.2

    def test_alignment_distribution(self, samples):
        freq = Counter(c.alignment for c in samples)
        assert freq["right"] / N_SMOKE == pytest.approx(0.65, abs=0.02)
        assert freq["left"] / N_SMOKE == pytest.approx(0.05, abs=0.02)
        assert freq["center"] / N_SMOKE == pytest.approx(0.30, abs=0.02)

    def test_column_distribution(self, samples):
        freq = Counter(c.columns for c in samples)
        assert freq[1] / N_SMOKE == pytest.approx(0.75, abs=0.02)
        assert freq[2] / N_SMOKE == pytest.approx(0.20, abs=0.02)
        assert freq[3] / N_SMOKE == pytest.approx(0.05, abs=0.02)

    def test_direction_distribution(self, samples):
        freq = Counter(c.direction for c in samples)
        assert freq["rtl"] / N_SMOKE == pytest.approx(0.95, abs=0.02)

    def test_background_split(self, samples):
        dark = sum(c.background_is_dark for c in samples)
        assert dark / N_SMOKE == pytest.approx(0.25, abs=0.02)

    def test_contrast_rule(self, samples):
        light_text = set(json.loads(
            __import__("importlib.resources", fromlist=["files"])
            .files("ocrkit.data").joinpath("palettes.json")
            .read_text())["text_light"])
        for cfg in samples:
            if cfg.background_is_dark:
                assert cfg.text_color in light_text
            else:
                assert cfg.text_color not in light_text

    def test_page_sizes_and_orientation(self, samples):
        for cfg in samples:
            assert cfg.page_size in PAGE_SIZES
            assert cfg.orientation in ("portrait", "landscape")


class TestEmitRenderJob:
    def test_header_becomes_h1(self):
        doc = parse_markdown("# t")
        job = emit_render_job(doc, sample_render_config(1), seed=1)
        assert "<h1>t</h1>" in job.html

    def test_rtl_direction_marker(self):
        doc = parse_markdown("نص")
        cfg = sample_render_config(3)
        job = emit_render_job(doc, cfg, seed=3)
        assert f'dir="{cfg.direction}"' in job.html

    def test_byte_identical_per_seed(self):
        doc = parse_markdown("نص **عريض**\n\n| a |\n|---|\n| 1 |")
        cfg = sample_render_config(7)
        a = emit_render_job(doc, cfg, seed=7)
        b = emit_render_job(doc, cfg, seed=7)
        assert a.html == b.html and a.job_id == b.job_id

    def test_emphasis_preserved_as_html(self):
        doc = parse_markdown("نص **عريض** و *مائل*")
        html = document_to_html(doc, sample_render_config(2))
        assert "<b>عريض</b>" in html and "<i>مائل</i>" in html

    def test_config_embedded_machine_readable(self):
        doc = parse_markdown("نص")
        cfg = sample_render_config(9)
        job = emit_render_job(doc, cfg, seed=9)
        start = job.html.index('id="render-config">') + len('id="render-config">')
        end = job.html.index("</script>")
        payload = json.loads(job.html[start:end])
        assert payload == cfg.to_dict()

    def test_write_job_files(self, tmp_path):
        doc = parse_markdown("# عنوان")
        job = emit_render_job(doc, sample_render_config(4), seed=4)
        html_path, json_path = write_render_job(job, tmp_path)
        assert json.loads(open(json_path, encoding="utf-8").read())["job_id"] == job.job_id
        assert open(html_path, encoding="utf-8").read() == job.html

    def test_table_html_passes_through(self):
        doc = parse_markdown("<table><tr><td>x</td></tr></table>")
        html = document_to_html(doc, sample_render_config(5))
        assert "<table><tr><td>x</td></tr></table>" in html
