"""
Ranked edge weights decay exponentially
=======================================

Sort the edge weights of the top-50 network and fit ``ln v = a + lam * r``.
The cutoff rank ``ln(eps) / lam`` does not depend on ``a``, which is the
part that grows with the number of documents.
"""

# %%
from coconet.graph import CooccurGraph, GraphView, top_n_persons
from coconet.superimposed import edge_weight_series, fit_exponential_rank, predicted_rank_cutoff, superimpose
from coconet.synth import DEFAULT_CONFIG, generate_concept_sets

g = CooccurGraph()
for people in generate_concept_sets(DEFAULT_CONFIG, workers=4):
    g.add_document(people)
view = GraphView(g, 1, top_n_persons(g, 50))
series = edge_weight_series(view)

# %%
# Fit the head of the series, where the decay is cleanest.
for max_rank in (None, 300, 100):
    fit = fit_exponential_rank(series, max_rank)
    print(f"max_rank={max_rank!s:>4}: a={fit.a:.3f} lam={fit.lam:.5f} R^2={fit.r_squared:.3f}")

# %%
eps = 0.01
fit = fit_exponential_rank(series, 300)
print(f"predicted cutoff rank at eps={eps}: {predicted_rank_cutoff(fit, eps):.1f}")
print(f"observed superimposed edges:      {superimpose(view, eps).edge_count}")
