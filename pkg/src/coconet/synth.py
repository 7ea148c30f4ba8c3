"""Reproducible synthetic document flows.

Persons have Zipf popularity (weight of popularity rank ``r`` proportional to
``r**-s``) and are dealt round-robin into communities. Each document picks
a focal community uniformly, then draws distinct persons: with probability
``community_affinity`` a pick comes from the focal community (Zipf-weighted
within it), otherwise from the whole population.

Randomness: document ``i`` is generated from its own PCG64 stream seeded by
``numpy.random.SeedSequence(seed, spawn_key=(i,))``, so any slice of the
flow can be produced independently and in parallel with identical output.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict
from typing import Iterator

import numpy as np

from .corpus_io import Document
from .metrics import fit_loglog_slope, rank_series

__all__ = [
    "GeneratorConfig",
    "DEFAULT_CONFIG",
    "person_id",
    "generate_corpus",
    "generate_concept_sets",
    "verify_generator",
    "GeneratorDiagnostics",
    "exponential_weight_stream",
]


@dataclass(frozen=True)
class GeneratorConfig:
    n_persons: int
    n_docs: int
    seed: int
    zipf_exponent: float = 1.0
    mentions_per_doc: int | tuple[int, int] = 5
    n_communities: int = 1
    community_affinity: float = 0.0

    def __post_init__(self):
        if self.n_persons < 1 or self.n_docs < 0:
            raise ValueError("n_persons must be >= 1 and n_docs >= 0")
        if not self.zipf_exponent > 0:
            raise ValueError("zipf_exponent must be > 0")
        lo, hi = self.mention_range
        if not 1 <= lo <= hi:
            raise ValueError("mentions_per_doc must be >= 1 (and lo <= hi for a range)")
        if hi > self.n_persons:
            raise ValueError("mentions_per_doc cannot exceed n_persons")
        if self.n_communities < 1:
            raise ValueError("n_communities must be >= 1")
        if not 0 <= self.community_affinity <= 1:
            raise ValueError("community_affinity must lie in [0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def mention_range(self) -> tuple[int, int]:
        m = self.mentions_per_doc
        if isinstance(m, (tuple, list)):
            return int(m[0]), int(m[1])
        return int(m), int(m)

    def to_dict(self) -> dict:
        d = asdict(self)
        lo, hi = self.mention_range
        d["mentions_per_doc"] = lo if lo == hi else [lo, hi]
        return d


# Desk-scale demo flow: 250 persons, the 1000- and 50000-document regimes
# are prefixes of the same stream.
DEFAULT_CONFIG = GeneratorConfig(
    n_persons=250,
    n_docs=50000,
    seed=20080101,
    zipf_exponent=1.0,
    mentions_per_doc=(1, 6),
    n_communities=5,
    community_affinity=0.7,
)


def person_id(rank: int, n_persons: int) -> str:
    """Zero-padded id so lexicographic order is popularity order."""
    width = max(4, len(str(n_persons)))
    return f"P{rank:0{width}d}"


class _Sampler:
    def __init__(self, cfg: GeneratorConfig):
        self.cfg = cfg
        ranks = np.arange(1, cfg.n_persons + 1, dtype=float)
        w = ranks ** (-cfg.zipf_exponent)
        self.global_cdf = np.cumsum(w) / w.sum()
        self.communities = []
        for c in range(cfg.n_communities):
            members = np.arange(c, cfg.n_persons, cfg.n_communities)
            if len(members) == 0:
                self.communities.append((members, None))
                continue
            cw = w[members]
            self.communities.append((members, np.cumsum(cw) / cw.sum()))

    @staticmethod
    def _draw(cdf: np.ndarray, u: float) -> int:
        return min(int(np.searchsorted(cdf, u, side="right")), len(cdf) - 1)

    def document(self, index: int) -> list[int]:
        cfg = self.cfg
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed, spawn_key=(index,))))
        lo, hi = cfg.mention_range
        m = lo if lo == hi else int(rng.integers(lo, hi + 1))
        members, ccdf = self.communities[int(rng.integers(cfg.n_communities))]
        chosen: set[int] = set()
        in_comm = 0
        while len(chosen) < m:
            use_comm = (
                cfg.community_affinity > 0
                and in_comm < len(members)
                and rng.random() < cfg.community_affinity
            )
            if use_comm:
                p = int(members[self._draw(ccdf, rng.random())])
            else:
                p = self._draw(self.global_cdf, rng.random())
            if p not in chosen:
                chosen.add(p)
                in_comm += p % cfg.n_communities == members[0] % cfg.n_communities
        return sorted(chosen)


def generate_concept_sets(
    config: GeneratorConfig, start: int = 0, stop: int | None = None, workers: int | None = None
) -> list[list[str]]:
    """Person-id lists for documents ``start..stop-1``."""
    stop = config.n_docs if stop is None else min(stop, config.n_docs)
    sampler = _Sampler(config)
    ids = [person_id(r + 1, config.n_persons) for r in range(config.n_persons)]

    def one(i: int) -> list[str]:
        return [ids[p] for p in sampler.document(i)]

    if workers is None or workers <= 1:
        return [one(i) for i in range(start, stop)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(start, stop)))


def generate_corpus(config: GeneratorConfig, workers: int | None = None) -> Iterator[Document]:
    """The synthetic flow as pre-extracted documents, in index order."""
    width = len(str(max(config.n_docs - 1, 0)))
    chunk = 4096
    for start in range(0, config.n_docs, chunk):
        for offset, people in enumerate(generate_concept_sets(config, start, start + chunk, workers)):
            i = start + offset
            yield Document(
                id=f"s{i:0{width}d}",
                concepts=tuple(("person", p) for p in people),
            )


@dataclass(frozen=True)
class GeneratorDiagnostics:
    target_slope: float
    slope: float | None
    r2: float | None
    n_ranked: int
    within_tolerance: bool
    degenerate: bool


def verify_generator(config: GeneratorConfig, tolerance: float = 0.1) -> GeneratorDiagnostics:
    """Fit the log-log rank-frequency slope of generated mention counts.

    As a rule of thumb ``n_docs * mentions`` should reach about 1e5 for the
    slope to be within 0.1 of ``-zipf_exponent``.
    """
    counts: dict[str, int] = {}
    for people in generate_concept_sets(config):
        for p in people:
            counts[p] = counts.get(p, 0) + 1
    target = -config.zipf_exponent
    if len(counts) < 3:
        return GeneratorDiagnostics(target, None, None, len(counts), False, True)
    fit = fit_loglog_slope(rank_series(counts))
    return GeneratorDiagnostics(
        target, fit.slope, fit.r2, len(counts), abs(fit.slope - target) <= tolerance, False
    )


def exponential_weight_stream(
    n_persons: int = 12,
    lam: float = -0.1,
    scale: float = 1000.0,
    n_blocks: int = 5,
) -> tuple[list[list[str]], int]:
    """Two-person documents whose edge weights decay exactly exponentially.

    All ``n_persons * (n_persons - 1) / 2`` pairs are ranked in a fixed
    order; pair of rank ``r`` gets ``max(1, round(scale * exp(lam * r)))``
    documents per block. Repeating the block multiplies every weight by the
    block count, so after each full block the weights are
    ``c * w_r = exp(ln(c * scale) + lam * r)`` up to the same rounding:
    the amplitude grows while the decay rate stays fixed.

    Returns the concept lists and the block length in documents.
    """
    if lam >= 0:
        raise ValueError("lam must be negative")
    ids = [person_id(r + 1, n_persons) for r in range(n_persons)]
    # pairs interleaved so every person carries heavy and light edges
    pairs = sorted(
        ((ids[i], ids[j]) for i in range(n_persons) for j in range(i + 1, n_persons)),
        key=lambda p: ((ids.index(p[1]) - ids.index(p[0])), p),
    )
    block: list[list[str]] = []
    for r, pair in enumerate(pairs, start=1):
        block.extend([list(pair)] * max(1, round(scale * math.exp(lam * r))))
    return [list(doc) for _ in range(n_blocks) for doc in block], len(block)
