"""Command-line entry point.

Commands::

    coconet simulate   --seed N --out corpus.jsonl
    coconet extract    --corpus raw.jsonl --surnames S.txt ... --out pre.jsonl
    coconet build      --corpus pre.jsonl --checkpoints 1000,5000 --out-dir net/
    coconet metrics    --edges net/edges_D5000.tsv --out metrics.csv
    coconet rankfit    --edges net/edges_D5000.tsv --out rankfit.csv
    coconet stability  --corpus pre.jsonl --epsilon 0.001 --out stability.csv
    coconet export-dot --edges net/edges_D5000.tsv --out net.dot

Every output is written atomically and gets a ``<output>.manifest`` JSON
sidecar recording the resolved arguments and input digests.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import re
import sys
import tempfile
from pathlib import Path
from typing import Iterable, Iterator

from . import __version__
from .corpus_io import CorpusFormatError, Document, read_documents, write_documents, write_table
from .extract import Lexicon, canonicalize, extract_document, extract_mentions
from .graph import (
    CooccurGraph,
    GraphView,
    read_edge_list,
    read_node_list,
    top_n_persons,
    write_edge_list,
    write_node_list,
)
from .metrics import degree_betweenness_spearman, metric_snapshot, node_metrics
from .superimposed import (
    edge_weight_series,
    fit_exponential_rank,
    predicted_rank_cutoff,
    stability_analysis,
)
from .synth import DEFAULT_CONFIG, GeneratorConfig, generate_concept_sets, generate_corpus

log = logging.getLogger("coconet")

DEFAULT_CHECKPOINTS = (1000, 2000, 5000, 10000, 20000, 50000)
LEXICON_FLAGS = ("given_names", "surnames", "company_suffixes", "known_companies")


class CommandError(Exception):
    pass


class _Outputs:
    """Collects outputs in temp files and renames them into place on success."""

    def __init__(self):
        self._pending: list[tuple[str, Path]] = []

    def path(self, final: str | os.PathLike) -> str:
        final = Path(final)
        final.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{final.name}.", suffix=".tmp", dir=final.parent)
        os.close(fd)
        self._pending.append((tmp, final))
        return tmp

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            for tmp, final in self._pending:
                os.replace(tmp, final)
        else:
            for tmp, _ in self._pending:
                if os.path.exists(tmp):
                    os.unlink(tmp)
        return False


def _digest(path: str | os.PathLike) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _manifest(args: argparse.Namespace, inputs: Iterable[str], seed: int | None = None) -> str:
    resolved = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")}
    for k, v in resolved.items():
        if isinstance(v, tuple):
            resolved[k] = list(v)
    doc = {
        "command": args.command,
        "args": resolved,
        "inputs": {str(p): _digest(p) for p in inputs if p is not None},
        "version": __version__,
        "seed": seed,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write_manifest(outs: _Outputs, output: str | os.PathLike, text: str) -> None:
    with open(outs.path(f"{output}.manifest"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("checkpoints must be positive integers")
    if vals != sorted(set(vals)):
        raise argparse.ArgumentTypeError("checkpoints must be strictly ascending")
    return vals


def _mention_spec(text: str) -> int | tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*(?:-\s*(\d+)\s*)?", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected N or LO-HI, got {text!r}")
    if m.group(2) is None:
        return int(m.group(1))
    return int(m.group(1)), int(m.group(2))


# -- lexicons and corpora ---------------------------------------------------

def _add_lexicon_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("lexicon tables (one entry per line, # comments)")
    g.add_argument("--given-names", help="allowable given names")
    g.add_argument("--surnames", help="allowable surnames")
    g.add_argument("--company-suffixes", help="company legal-form suffixes (default: built-in table)")
    g.add_argument("--known-companies", help="names of well-known firms")
    g.add_argument(
        "--kinds", default="person,company", help="concept kinds to extract (default: person,company)"
    )


def _load_lexicon(args) -> Lexicon:
    paths = {}
    for name in LEXICON_FLAGS:
        value = getattr(args, name, None)
        if value is None:
            continue
        if not os.path.isfile(value):
            raise CommandError(f"--{name.replace('_', '-')}: lexicon file not found: {value}")
        paths[name] = value
    return Lexicon.from_files(**paths)


def _kinds(args) -> tuple[str, ...]:
    kinds = tuple(k.strip() for k in args.kinds.split(",") if k.strip())
    bad = set(kinds) - {"person", "company"}
    if bad:
        raise CommandError(f"--kinds: unknown kind(s) {', '.join(sorted(bad))}")
    return kinds


def _lexicon_inputs(args) -> list[str]:
    return [getattr(args, n) for n in LEXICON_FLAGS if getattr(args, n, None) is not None]


def _concept_stream(args) -> Iterator[frozenset[str]]:
    """Concept-id sets of the corpus given on the command line, in order."""
    lexicon = _load_lexicon(args)
    kinds = _kinds(args)
    for doc in read_documents(args.corpus, args.format):
        yield extract_document(doc, lexicon, kinds)


def _generator_config(args) -> GeneratorConfig:
    if args.seed is None:
        raise CommandError("--seed is required for simulation (no implicit randomness)")
    return GeneratorConfig(
        n_persons=args.n_persons,
        n_docs=args.n_docs,
        seed=args.seed,
        zipf_exponent=args.zipf_exponent,
        mentions_per_doc=args.mentions_per_doc,
        n_communities=args.n_communities,
        community_affinity=args.community_affinity,
    )


def _add_generator_flags(p: argparse.ArgumentParser) -> None:
    d = DEFAULT_CONFIG
    g = p.add_argument_group("synthetic flow")
    g.add_argument("--seed", type=int, help="64-bit seed (required)")
    g.add_argument("--n-persons", type=int, default=d.n_persons)
    g.add_argument("--n-docs", type=int, default=d.n_docs)
    g.add_argument("--zipf-exponent", type=float, default=d.zipf_exponent)
    lo, hi = d.mention_range
    g.add_argument(
        "--mentions-per-doc",
        type=_mention_spec,
        default=lo if lo == hi else (lo, hi),
        help="fixed N or uniform range LO-HI",
    )
    g.add_argument("--n-communities", type=int, default=d.n_communities)
    g.add_argument("--community-affinity", type=float, default=d.community_affinity)


def _checkpoint_graphs(stream: Iterable[Iterable[str]], checkpoints: list[int]) -> list[CooccurGraph]:
    """Snapshots after each checkpoint; checkpoints past the end clip to the corpus size."""
    g = CooccurGraph()
    wanted = list(checkpoints)
    snaps = []
    k = 0
    for concepts in stream:
        g.add_document(concepts)
        while k < len(wanted) and g.doc_count == wanted[k]:
            snaps.append(g.snapshot())
            k += 1
    if k < len(wanted):
        log.warning(
            "checkpoint(s) %s exceed corpus size %d; clipped",
            ",".join(map(str, wanted[k:])),
            g.doc_count,
        )
        if not snaps or snaps[-1].doc_count != g.doc_count:
            snaps.append(g.snapshot())
    return snaps


# -- commands -----------------------------------------------------------------

def cmd_simulate(args) -> None:
    cfg = _generator_config(args)
    with _Outputs() as outs:
        write_documents(generate_corpus(cfg, args.workers), outs.path(args.out))
        _write_manifest(outs, args.out, _manifest(args, [], cfg.seed))


def cmd_extract(args) -> None:
    lexicon = _load_lexicon(args)
    kinds = _kinds(args)

    def docs() -> Iterator[Document]:
        for doc in read_documents(args.corpus, "raw-text"):
            seen = {}
            for kind, surface in extract_mentions(doc.text, lexicon, kinds):
                seen.setdefault(canonicalize(surface, kind, lexicon.company_suffixes), (kind, surface))
            yield Document(doc.id, doc.timestamp, concepts=tuple(seen.values()))

    with _Outputs() as outs:
        n = write_documents(docs(), outs.path(args.out))
        _write_manifest(outs, args.out, _manifest(args, [args.corpus, *_lexicon_inputs(args)]))
    log.info("extracted concepts from %d documents", n)


def cmd_build(args) -> None:
    snaps = _checkpoint_graphs(_concept_stream(args), args.checkpoints)
    if not snaps:
        raise CommandError("corpus is empty, nothing to build")
    whitelist = top_n_persons(snaps[-1], args.top_n) if len(snaps[-1]) else frozenset()
    out_dir = Path(args.out_dir)
    with _Outputs() as outs:
        for snap in snaps:
            view = GraphView(snap, args.min_weight, whitelist)
            write_edge_list(view, outs.path(out_dir / f"edges_D{snap.doc_count}.tsv"))
            write_node_list(view, outs.path(out_dir / f"nodes_D{snap.doc_count}.tsv"))
        _write_manifest(
            outs, out_dir / "build", _manifest(args, [args.corpus, *_lexicon_inputs(args)])
        )


def _load_edges(args) -> tuple[CooccurGraph, int | None]:
    nodes = read_node_list(args.nodes) if args.nodes else None
    doc_count = args.doc_count
    if doc_count is None:
        m = re.search(r"_D(\d+)\b", Path(args.edges).name)
        doc_count = int(m.group(1)) if m else None
    g = read_edge_list(args.edges, nodes, doc_count)
    return g, doc_count


def cmd_metrics(args) -> None:
    g, D = _load_edges(args)
    view = GraphView(g)
    snap = metric_snapshot(view, D, args.workers)
    row = snap.row()
    row["D"] = D
    if snap.m == 0:
        row["il"], row["mean_clustering"] = 0.0, 0.0
    row["degree_betweenness_spearman"] = (
        degree_betweenness_spearman(view, args.workers) if snap.n >= 3 else float("nan")
    )
    per_node = node_metrics(view, snap.betweenness)
    per_node_path = args.per_node or str(Path(args.out).with_suffix("")) + "_nodes.csv"
    with _Outputs() as outs:
        write_table([row], outs.path(args.out), "csv")
        write_table(per_node, outs.path(per_node_path), "csv", columns=["id", "degree", "betweenness", "clustering"])
        _write_manifest(outs, args.out, _manifest(args, [args.edges, args.nodes]))


def cmd_rankfit(args) -> None:
    g, _ = _load_edges(args)
    series = edge_weight_series(GraphView(g))
    fit = fit_exponential_rank(series, args.fit_max_rank)
    try:
        r_eps = predicted_rank_cutoff(fit, args.epsilon)
    except ValueError:
        r_eps = float("nan")
    row = {"a": fit.a, "lambda": fit.lam, "r2": fit.r_squared, "n_points": fit.n_points, "r_epsilon": r_eps}
    with _Outputs() as outs:
        write_table([row], outs.path(args.out), "csv")
        if args.series:
            write_table(
                [(r, v) for r, v in series], outs.path(args.series), "csv", columns=["r", "v"]
            )
        _write_manifest(outs, args.out, _manifest(args, [args.edges, args.nodes]))


def cmd_stability(args) -> None:
    if (args.corpus is None) == (not args.simulate):
        raise CommandError("give exactly one of --corpus or --simulate")
    if args.simulate:
        cfg = _generator_config(args)
        stream: Iterable[Iterable[str]] = generate_concept_sets(cfg, workers=args.workers)
        inputs, seed = [], cfg.seed
    else:
        stream = _concept_stream(args)
        inputs, seed = [args.corpus, *_lexicon_inputs(args)], None
    snaps = _checkpoint_graphs(stream, args.checkpoints)
    if not snaps:
        raise CommandError("corpus is empty")
    whitelist = top_n_persons(snaps[-1], args.top_n)
    report = stability_analysis(snaps, args.epsilon, whitelist, args.burn_in, args.min_weight)
    with _Outputs() as outs:
        path = outs.path(args.out)
        write_table(report.rows(), path, "csv", columns=["D", "edges_superimposed", "il", "mean_clustering"])
        with open(path, "a", encoding="utf-8", newline="\n") as fh:
            for k, v in report.summary().items():
                fh.write(f"# {k},{v!r}\n")
            for w in report.warnings:
                fh.write(f"# warning,{w}\n")
        _write_manifest(outs, args.out, _manifest(args, inputs, seed))


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def cmd_export_dot(args) -> None:
    g, _ = _load_edges(args)
    with _Outputs() as outs:
        with open(outs.path(args.out), "w", encoding="utf-8", newline="\n") as fh:
            fh.write("graph coconet {\n")
            for u in sorted(g.node_counts):
                fh.write(f"  {_dot_id(u)};\n")
            for (u, w), v in sorted(g.edges.items()):
                fh.write(f"  {_dot_id(u)} -- {_dot_id(w)} [weight={v}];\n")
            fh.write("}\n")
        _write_manifest(outs, args.out, _manifest(args, [args.edges, args.nodes]))


# -- parser -------------------------------------------------------------------

def _add_edge_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--edges", required=True, help="edge-list TSV (u, w, weight)")
    p.add_argument("--nodes", help="node-list TSV; keeps isolated nodes in the analysis")
    p.add_argument("--doc-count", type=int, help="documents behind the graph (default: from a _D<N> file name)")


def _add_corpus_input(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--corpus", required=required, help="JSON Lines corpus")
    p.add_argument("--format", choices=["raw-text", "pre-extracted"], default="pre-extracted")
    _add_lexicon_flags(p)


def _add_network_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--checkpoints",
        type=_int_list,
        default=list(DEFAULT_CHECKPOINTS),
        help="ascending document counts, e.g. 1000,2000,5000",
    )
    p.add_argument("--top-n", type=int, default=50, help="restrict to the N most-mentioned concepts")
    p.add_argument("--min-weight", type=int, default=2, help="drop edges lighter than this")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coconet", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic pre-extracted corpus")
    _add_generator_flags(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("extract", help="extract persons/companies from a raw-text corpus")
    p.add_argument("--corpus", required=True)
    _add_lexicon_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("build", help="write checkpointed edge and node lists")
    _add_corpus_input(p)
    _add_network_flags(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("metrics", help="network metrics of an edge list")
    _add_edge_input(p)
    p.add_argument("--out", required=True, help="one-row metrics CSV")
    p.add_argument("--per-node", help="per-node CSV (default: <out>_nodes.csv)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("rankfit", help="fit exponential decay of ranked edge weights")
    _add_edge_input(p)
    p.add_argument("--epsilon", type=float, default=0.001)
    p.add_argument("--fit-max-rank", type=int, help="fit only the first R ranks")
    p.add_argument("--series", help="also write the (r, v) rank series CSV here")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_rankfit)

    p = sub.add_parser("stability", help="superimposed-network stability over checkpoints")
    _add_corpus_input(p, required=False)
    p.add_argument("--simulate", action="store_true", help="use a synthetic flow instead of --corpus")
    _add_generator_flags(p)
    _add_network_flags(p)
    p.add_argument("--epsilon", type=float, default=0.001)
    p.add_argument("--burn-in", type=int, default=10000, help="first D included in deviations")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("export-dot", help="Graphviz description of an edge list")
    _add_edge_input(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="coconet: %(levelname)s: %(message)s",
    )
    try:
        args.func(args)
    except (CommandError, CorpusFormatError, OSError, ValueError) as exc:
        print(f"coconet {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
