"""Corpus statistics and stratified splitting on the bundled sample.

Run: python demos/05_corpus_pipeline.py
"""

import tempfile
from importlib import resources
from pathlib import Path

from simpkit import corpus

SAMPLE = str(resources.files("simpkit").joinpath("data/sample_corpus.tsv"))

records = corpus.load(SAMPLE)
print(f"loaded {len(records)} records from the bundled sample")
print(f"sources: {sorted({r.pair_id[:1] for r in records})} "
      f"({sum(1 for r in records if r.source == 'MSD')} MSD, "
      f"{sum(1 for r in records if r.source == 'SIMPWIKI')} SIMPWIKI)")

print()
print("=== Quality statistics (mean +/- population std) ===")
stats = corpus.stats(records)
for name, summary in stats.metrics.items():
    print(f"  {name:20s} {summary.mean:8.3f} +/- {summary.std:.3f}")
print("  edit counts:", stats.edit_counts)
direction = "<" if stats.metrics["fkgl_expert"].mean < stats.metrics["fkgl_simple"].mean else ">"
print(f"  expert FKGL {direction} simple FKGL "
      f"(simplification should lower the grade level)")

print()
print("=== Stratified split ===")
result = corpus.split(records, (0.75, 0.10, 0.15), seed=13)
print(f"sizes: train {len(result.train)}, dev {len(result.dev)}, "
      f"test {len(result.test)}")
print("per-stratum allocation (levenshtein-similarity buckets):")
for label, sizes in sorted(result.manifest["strata"].items()):
    print(f"  bucket {label}: {sizes}")

with tempfile.TemporaryDirectory() as tmp:
    prefix = Path(tmp) / "sample"
    for name, part in (("train", result.train), ("dev", result.dev),
                       ("test", result.test)):
        corpus.save(part, f"{prefix}.{name}.jsonl", "jsonl")
    written = sorted(p.name for p in Path(tmp).iterdir())
    print(f"\nwrote {written} to a temporary directory")
