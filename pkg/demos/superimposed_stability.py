"""
The superimposed network holds still
====================================

Threshold each checkpoint at ``eps * v_max`` and watch the edge count,
``il`` and clustering once the flow is past 10000 documents.
"""

# %%
from coconet.graph import CooccurGraph, top_n_persons
from coconet.superimposed import stability_analysis
from coconet.synth import DEFAULT_CONFIG, exponential_weight_stream, generate_concept_sets

checkpoints = [1000, 2000, 5000, 10000, 20000, 50000]
g = CooccurGraph()
snaps = []
for i, people in enumerate(generate_concept_sets(DEFAULT_CONFIG, workers=4), 1):
    g.add_document(people)
    if i in checkpoints:
        snaps.append(g.snapshot())
wl = top_n_persons(snaps[-1], 50)

for eps in (0.001, 0.01, 0.05):
    rep = stability_analysis(snaps, eps, wl)
    print(f"eps={eps}")
    for row in rep.rows():
        print(f"  D={row['D']:6d} edges={row['edges_superimposed']:5d} "
              f"il={row['il']:.3f} C={row['mean_clustering']:.3f}")
    s = rep.summary()
    print(f"  deviations: edges {s['max_edge_count_deviation']:.2%}, "
          f"il {s['max_il_deviation']:.3f}, C {s['max_clustering_deviation']:.3f}")

# %%
# A stream built so that edge weights are exactly exponential in rank:
# each block of documents repeats, so weights grow but the cut stays put.
docs, block = exponential_weight_stream()
g = CooccurGraph()
snaps = []
for i, d in enumerate(docs, 1):
    g.add_document(d)
    if i % block == 0:
        snaps.append(g.snapshot())
rep = stability_analysis(snaps, 0.01, burn_in_D=0)
print("exact stream edge counts:", [r["edges_superimposed"] for r in rep.rows()])
