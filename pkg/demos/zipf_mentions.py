"""
Mention frequencies follow Zipf's law
=====================================

Generate a synthetic flow and check that the most mentioned persons are
mentioned in proportion to ``1 / rank``.
"""

# %%
# A flat flow (no communities) with five persons per document.
from coconet.synth import GeneratorConfig, generate_concept_sets
from coconet.metrics import fit_loglog_slope, rank_series

cfg = GeneratorConfig(n_persons=250, n_docs=50000, seed=20080101, mentions_per_doc=5)
counts = {}
for people in generate_concept_sets(cfg, workers=4):
    for p in people:
        counts[p] = counts.get(p, 0) + 1

# %%
# Rank the persons and fit a line in log-log coordinates.
series = rank_series(counts)
fit = fit_loglog_slope(series)
print(f"slope {fit.slope:.3f}  (target -1.0), R^2 {fit.r2:.3f}")

for r, key, v in series.rows()[:5]:
    print(f"  rank {r:3d}  {key}  {int(v)} mentions")

# %%
# The slope flattens slightly because drawing persons without replacement
# inside a document caps how often the top names can appear.
