"""
Saturation of the top-50 network
================================

As documents accumulate, the network of the 50 most mentioned persons
fills in: the average inverse distance ``il`` and the mean clustering both
climb towards 1.
"""

# %%
from coconet.graph import CooccurGraph, GraphView, top_n_persons
from coconet.metrics import avg_inverse_distance, mean_clustering
from coconet.synth import DEFAULT_CONFIG, generate_concept_sets

checkpoints = [1000, 2000, 5000, 10000, 20000, 50000]
g = CooccurGraph()
snaps = []
for i, people in enumerate(generate_concept_sets(DEFAULT_CONFIG, workers=4), 1):
    g.add_document(people)
    if i in checkpoints:
        snaps.append(g.snapshot())

# %%
# The whitelist is fixed from the final snapshot so every checkpoint looks
# at the same 50 persons.
wl = top_n_persons(snaps[-1], 50)
print("      D      il   clustering   edges")
for s in snaps:
    v = GraphView(s, 1, wl)
    print(f"{s.doc_count:7d}  {avg_inverse_distance(v):.3f}   {mean_clustering(v):.3f}      {v.edge_count()}")

# %%
# With the noise filter (weight >= 2) the same curves rise more slowly,
# since early co-mentions are mostly single events.
for s in snaps[:3]:
    v = GraphView(s, 2, wl)
    print(f"{s.doc_count:7d}  {avg_inverse_distance(v):.3f}   {mean_clustering(v):.3f}  (filtered)")
