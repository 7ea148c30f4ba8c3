"""
Hubs are brokers
================

Compare node degree with betweenness on an early, sparse network. The
Spearman correlation summarises how often the best connected persons also
sit on the most shortest paths.
"""

from coconet.graph import CooccurGraph, GraphView, top_n_persons
from coconet.metrics import degree_betweenness_spearman, node_metrics
from coconet.synth import DEFAULT_CONFIG, generate_concept_sets

g = CooccurGraph()
for people in generate_concept_sets(DEFAULT_CONFIG, 0, 2000):
    g.add_document(people)
view = GraphView(g, 2, top_n_persons(g, 50))

# %%
rows = sorted(node_metrics(view), key=lambda r: -r["betweenness"])
print("id      degree  betweenness")
for r in rows[:8]:
    print(f"{r['id']}  {r['degree']:6d}  {r['betweenness']:.4f}")
print(f"\nSpearman(degree, betweenness) = {degree_betweenness_spearman(view):.3f}")
