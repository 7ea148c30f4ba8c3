import numpy as np
import pytest

from coconet.corpus_io import write_documents
from coconet.graph import CooccurGraph
from coconet.synth import (
    DEFAULT_CONFIG,
    GeneratorConfig,
    exponential_weight_stream,
    generate_concept_sets,
    generate_corpus,
    person_id,
    verify_generator,
)


def graph_of(cfg):
    g = CooccurGraph()
    for d in generate_concept_sets(cfg):
        g.add_document(d)
    return g


def test_same_seed_same_corpus(tmp_path):
    cfg = GeneratorConfig(40, 300, seed=5, mentions_per_doc=(1, 4), n_communities=3, community_affinity=0.5)
    write_documents(generate_corpus(cfg), tmp_path / "a.jsonl")
    write_documents(generate_corpus(cfg), tmp_path / "b.jsonl")
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
    other = GeneratorConfig(40, 300, seed=6, mentions_per_doc=(1, 4), n_communities=3, community_affinity=0.5)
    assert generate_concept_sets(other) != generate_concept_sets(cfg)


def test_slices_and_workers_match_sequential():
    cfg = GeneratorConfig(60, 500, seed=9, mentions_per_doc=(2, 5), n_communities=4, community_affinity=0.7)
    full = generate_concept_sets(cfg)
    assert generate_concept_sets(cfg, workers=4) == full
    assert generate_concept_sets(cfg, 123, 321) == full[123:321]


def test_single_mention_gives_no_edges():
    g = graph_of(GeneratorConfig(30, 400, seed=1, mentions_per_doc=1))
    assert not g.edges and g.doc_count == 400


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
def test_two_persons_one_edge(alpha):
    g = graph_of(GeneratorConfig(2, 250, seed=3, mentions_per_doc=2, n_communities=2, community_affinity=alpha))
    assert dict(g.edges) == {(person_id(1, 2), person_id(2, 2)): 250}


def test_documents_have_distinct_concepts():
    cfg = GeneratorConfig(8, 300, seed=2, mentions_per_doc=(3, 8), n_communities=2, community_affinity=0.9)
    for d in generate_concept_sets(cfg):
        assert len(d) == len(set(d))
        assert 3 <= len(d) <= 8


def test_corpus_ids_and_form():
    docs = list(generate_corpus(GeneratorConfig(5, 12, seed=0, mentions_per_doc=2)))
    assert [d.id for d in docs][:3] == ["s00", "s01", "s02"]
    assert all(k == "person" for d in docs for k, _ in d.concepts)


def test_config_validation():
    with pytest.raises(ValueError):
        GeneratorConfig(3, 10, seed=1, mentions_per_doc=4)
    with pytest.raises(ValueError):
        GeneratorConfig(3, 10, seed=1, community_affinity=1.5, mentions_per_doc=1)
    with pytest.raises(ValueError):
        GeneratorConfig(3, 10, seed=-1, mentions_per_doc=1)
    with pytest.raises(ValueError):
        GeneratorConfig(3, 10, seed=1, zipf_exponent=0, mentions_per_doc=1)
    assert DEFAULT_CONFIG.n_persons == 250 and DEFAULT_CONFIG.n_docs == 50000


def test_person_ids_sort_by_rank():
    ids = [person_id(r, 250) for r in range(1, 251)]
    assert ids == sorted(ids) and ids[0] == "P0001"


@pytest.mark.slow
@pytest.mark.parametrize("s", [1.0, 1.5])
def test_verify_generator_slope(s):
    diag = verify_generator(GeneratorConfig(250, 50000, seed=20080101, zipf_exponent=s, mentions_per_doc=5), tolerance=0.1 * s)
    assert diag.within_tolerance, diag
    assert abs(diag.slope + s) <= 0.1 * s


def test_verify_generator_degenerate():
    diag = verify_generator(GeneratorConfig(2, 100, seed=1, mentions_per_doc=2))
    assert diag.degenerate and diag.slope is None and not diag.within_tolerance


def test_top_pair_weight_matches_zipf_product():
    # two distinct draws without replacement from Zipf(1) over 250 persons
    n, docs = 250, 50000
    w = 1.0 / np.arange(1, n + 1)
    p = w / w.sum()
    expected = docs * (p[0] * p[1] / (1 - p[0]) + p[1] * p[0] / (1 - p[1]))
    g = graph_of(GeneratorConfig(n, docs, seed=77, mentions_per_doc=2))
    observed = g.weight(person_id(1, n), person_id(2, n))
    assert abs(observed - expected) <= 0.1 * expected


def test_exponential_stream_weights_scale_by_block():
    docs, block = exponential_weight_stream(n_persons=6, lam=-0.2, scale=500, n_blocks=3)
    assert len(docs) == 3 * block
    g1, g3 = CooccurGraph(), CooccurGraph()
    for d in docs[:block]:
        g1.add_document(d)
    for d in docs:
        g3.add_document(d)
    assert {k: 3 * v for k, v in g1.edges.items()} == dict(g3.edges)
    weights = sorted(g1.edges.values(), reverse=True)
    assert weights[0] == round(500 * np.exp(-0.2))
    with pytest.raises(ValueError):
        exponential_weight_stream(lam=0.1)
