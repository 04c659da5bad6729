"""Sampling page-render configurations for synthetic data.

Synthetic training pages are produced by rendering real text under randomized
layouts. Each seed deterministically yields a configuration — font, size,
alignment, columns, colors, direction — and a render job bundles the HTML
with that configuration for an external renderer.
"""

from collections import Counter

from ocrkit import emit_render_job, parse_markdown, sample_render_config

TEXT = "# فاتورة\n\nبيان بالمشتريات لشهر آذار\n\n| الصنف | السعر |\n|---|---|\n| ورق | ٢٠ |"


def main() -> None:
    cfg = sample_render_config(42)
    print("configuration for seed 42:")
    for key, value in cfg.to_dict().items():
        print(f"  {key:20s} {value}")

    print("\ndistribution over 10,000 seeds:")
    samples = [sample_render_config(seed) for seed in range(10_000)]
    for attr in ("alignment", "columns", "direction", "background_is_dark"):
        freq = Counter(getattr(s, attr) for s in samples)
        shares = ", ".join(f"{k}: {v / len(samples):.1%}"
                           for k, v in sorted(freq.items(), key=str))
        print(f"  {attr:20s} {shares}")

    job = emit_render_job(parse_markdown(TEXT), cfg, seed=42)
    print(f"\nrender job {job.job_id}: {len(job.html)} bytes of HTML,"
          " config embedded as machine-readable JSON")


if __name__ == "__main__":
    main()
