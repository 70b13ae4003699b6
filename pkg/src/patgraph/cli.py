"""Command-line interface.

Exit status: 0 success, 2 usage error, 3 data error, 4 I/O error. Failures
print one ``error: <Category>: <Type>: <message>`` line on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .analytics import (AVG_DEGREE_NOTE, betweenness_centrality, degree_centrality,
                        ipc_frequency_table, pagerank, structural_summary)
from .community import girvan_newman, read_partition, write_partition
from .config import PipelineConfig, load_config, parse_config
from .corpus import read_records, resolve_institutions, write_records
from .embed import ALGORITHMS, embed_graph, load_embeddings, save_embeddings
from .errors import DataError, PatgraphError, UsageError
from .graph import NodeKind, build_graph, export_graph, load_graph
from .project import tsne
from .recommend import evaluate_recommender, recommend

log = logging.getLogger("patgraph")

EXIT_USAGE, EXIT_DATA, EXIT_IO = 2, 3, 4


def _threads() -> int:
    try:
        cap = int(os.environ.get("PATGRAPH_THREADS", "1"))
    except ValueError:
        raise UsageError("PATGRAPH_THREADS must be an integer") from None
    return max(1, min(cap, os.cpu_count() or 1))


def write_meta(path, seed=None, config_hash=None, **extra) -> None:
    """Sidecar ``<path>.meta.json`` recording tool version, seed and config hash."""
    meta = {"tool": "patgraph", "version": __version__, "seed": seed,
            "config_hash": config_hash, **extra}
    with open(str(path) + ".meta.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, sort_keys=True, indent=1, default=str)
        fh.write("\n")


def _args_hash(args) -> str:
    d = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "output")}
    return hashlib.sha256(json.dumps(d, sort_keys=True, default=str).encode()).hexdigest()[:16]


def _graph_paths(spec: str):
    if "," in spec:
        nodes, edges = spec.split(",", 1)
        return Path(nodes), Path(edges)
    base = Path(spec)
    return base / "nodes.csv", base / "edges.csv"


def _load_graph(spec):
    return load_graph(*_graph_paths(spec))


def _load_aliases(path):
    if not path:
        return {}
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        if path.suffix == ".json":
            return json.load(fh)
        out = {}
        for line in fh:
            if line.strip() and not line.startswith("#"):
                src, dst = line.rstrip("\n").split("\t", 1)
                out[src] = dst
        return out


def _require_seed(args):
    if os.environ.get("CI") and args.seed is None:
        raise UsageError(f"{args.command} needs --seed in CI mode")
    return 0 if args.seed is None else args.seed


def _mkdir(path) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, ensure_ascii=False, sort_keys=True, indent=1)
        fh.write("\n")


# -- subcommands -----------------------------------------------------------

def cmd_ingest(args):
    records = read_records(args.input, strict=args.strict)
    out = _mkdir(args.out)
    mapping = resolve_institutions(records, _load_aliases(args.aliases))
    write_records(records, out / "records.jsonl")
    _write_json(out / "institutions.json", mapping)
    h = _args_hash(args)
    write_meta(out / "records.jsonl", config_hash=h, records=len(records))
    write_meta(out / "institutions.json", config_hash=h)
    print(f"ingested {len(records)} records, {len(set(mapping.values()))} institutions")


def cmd_build(args):
    records = read_records(args.input, strict=args.strict)
    mapping = resolve_institutions(records, _load_aliases(args.aliases))
    g = build_graph(records, mapping, strict=args.strict)
    out = _mkdir(args.out)
    export_graph(g, out / "nodes.csv", out / "edges.csv")
    h = _args_hash(args)
    write_meta(out / "nodes.csv", config_hash=h)
    write_meta(out / "edges.csv", config_hash=h)
    counts = {k.value: len(g.nodes_of_kind(k)) for k in NodeKind}
    print(f"built graph: {g.n} nodes, {g.m} edges " + json.dumps(counts, sort_keys=True))


def _format_stats(summary) -> str:
    rows = [(k, summary[k]) for k in ("n", "m", "avg_degree", "avg_path_length", "isolated",
                                      "powerlaw_alpha", "powerlaw_xmin")]
    lines = []
    for k, v in rows:
        lines.append(f"{k:<16} {v:.6f}" if isinstance(v, float) else f"{k:<16} {v}")
    return "\n".join(lines)


def cmd_stats(args):
    g = _load_graph(args.graph)
    summary = structural_summary(g)
    print(_format_stats(summary))
    print(AVG_DEGREE_NOTE)
    if args.records:
        print("\nsection  count  percent")
        for row in ipc_frequency_table(read_records(args.records)):
            print(f"{row.section:<8} {row.count:>5}  {row.percentage:6.2f}")
    if args.json:
        _write_json(args.json, summary)
        write_meta(args.json, config_hash=_args_hash(args))


def cmd_centrality(args):
    g = _load_graph(args.graph)
    metrics = ["degree", "betweenness", "pagerank"] if args.metric == "all" else [args.metric]
    out = _mkdir(args.out)
    for metric in metrics:
        if metric == "degree":
            rep = degree_centrality(g, normalized=args.normalized)
        elif metric == "betweenness":
            rep = betweenness_centrality(g)
        else:
            rep = pagerank(g, damping=args.damping)
        path = out / f"centrality_{metric}.csv"
        rep.to_csv(path)
        write_meta(path, config_hash=_args_hash(args))
        print(f"[{metric}]")
        for key, kind, score in rep.top(args.top):
            print(f"  {key}\t{kind}\t{score:.6g}")


def cmd_communities(args):
    g = _load_graph(args.graph)
    dendro, best = girvan_newman(g, max_removals=args.max_removals, plateau=args.plateau)
    out = _mkdir(args.out)
    write_partition(g, best, out / "communities.csv")
    summary = {"community_count": best.community_count,
               "nontrivial_count": best.nontrivial_count,
               "best_modularity": best.modularity, "removals": dendro.removals}
    _write_json(out / "communities.json", summary)
    h = _args_hash(args)
    write_meta(out / "communities.csv", config_hash=h)
    write_meta(out / "communities.json", config_hash=h)
    print(json.dumps(summary, sort_keys=True))


def _embed_config(args):
    algo = args.algo
    cfg = getattr(PipelineConfig(), algo)
    mapping = {"dim": "dim", "walk_length": "walk_length", "num_walks": "num_walks",
               "window": "window", "epochs": "epochs", "p": "p", "q": "q",
               "order": "order", "batch_size": "batch_size"}
    updates = {}
    for arg, name in mapping.items():
        value = getattr(args, arg)
        if value is None:
            continue
        if name not in type(cfg).field_names():
            if name == "dim" and algo == "sdne":
                updates["hidden_sizes"] = (cfg.hidden_sizes[0], value)
                continue
            raise UsageError(f"--{arg.replace('_', '-')} does not apply to {algo}")
        updates[name] = value
    return type(cfg)(**{**{f: getattr(cfg, f) for f in type(cfg).field_names()}, **updates})


def _embedding_graph(g, include_institutions):
    return g if include_institutions else g.without_kind(NodeKind.INSTITUTION)


def cmd_embed(args):
    seed = _require_seed(args)
    g = _embedding_graph(_load_graph(args.graph), args.include_institutions)
    cfg = _embed_config(args)
    threads = 1 if args.deterministic else _threads()
    e = embed_graph(g, args.algo, cfg, seed, threads)
    save_embeddings(e, args.out)
    write_meta(args.out, seed=seed, config_hash=_args_hash(args), algo=e.algo,
               mode="deterministic" if threads == 1 else "parallel-walks",
               params={k: v for k, v in e.meta.items() if k != "epoch_loss"})
    print(f"wrote {len(e)} x {e.dim} {e.algo} embeddings to {args.out}")


def cmd_project(args):
    seed = _require_seed(args)
    e = load_embeddings(args.embeddings)
    proj = tsne(e, perplexity=args.perplexity, iterations=args.iterations,
                learning_rate=args.learning_rate, seed=seed)
    labels = read_partition(args.labels) if args.labels else None
    proj.to_csv(args.out, labels)
    write_meta(args.out, seed=seed, config_hash=_args_hash(args), final_kl=proj.final_kl)
    print(f"projected {len(proj.keys)} points, final KL {proj.final_kl:.6f}")


def cmd_recommend(args):
    e = load_embeddings(args.embeddings)
    g = _load_graph(args.graph)
    rec = recommend(g, e, args.query, args.k)
    text = json.dumps(rec.to_dict(), ensure_ascii=False, indent=1)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
        write_meta(args.out, config_hash=_args_hash(args))
    print(text)


def run_pipeline(cfg: PipelineConfig, out) -> dict:
    """ingest -> build -> stats -> communities -> embed -> recommend."""
    if not cfg.input:
        raise UsageError("pipeline needs an input path (config 'input' or --input)")
    out = _mkdir(out)
    h = cfg.hash()
    records = read_records(cfg.input, strict=cfg.strict)
    mapping = resolve_institutions(records, _load_aliases(cfg.aliases))
    write_records(records, out / "records.jsonl")
    _write_json(out / "institutions.json", mapping)

    g = build_graph(records, mapping, strict=cfg.strict)
    export_graph(g, out / "nodes.csv", out / "edges.csv")

    summary = structural_summary(g)
    summary["ipc_sections"] = [[r.section, r.count, r.percentage] for r in ipc_frequency_table(records)]
    _write_json(out / "stats.json", summary)

    dendro, best = girvan_newman(g, max_removals=cfg.max_removals, plateau=cfg.plateau)
    write_partition(g, best, out / "communities.csv")
    _write_json(out / "communities.json", {
        "community_count": best.community_count, "nontrivial_count": best.nontrivial_count,
        "best_modularity": best.modularity, "removals": dendro.removals})

    sub = _embedding_graph(g, cfg.include_institutions)
    threads = 1 if cfg.deterministic else _threads()
    e = embed_graph(sub, cfg.algo, cfg.algo_config(), cfg.seed, threads)
    save_embeddings(e, out / "embeddings.txt")

    precision = evaluate_recommender(sub, e, cfg.k)
    with open(out / "recommendations.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for i in sub.nodes_of_kind(NodeKind.PATENT):
            rec = recommend(sub, e, sub.keys[i], cfg.k)
            fh.write(json.dumps(rec.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")
    result = {"precision_at_k": precision, "k": cfg.k, "n": g.n, "m": g.m,
              "best_modularity": best.modularity}
    _write_json(out / "summary.json", result)

    for name in ("records.jsonl", "institutions.json", "nodes.csv", "edges.csv", "stats.json",
                 "communities.csv", "communities.json", "embeddings.txt",
                 "recommendations.jsonl", "summary.json"):
        write_meta(out / name, seed=cfg.seed, config_hash=h,
                   mode="deterministic" if threads == 1 else "parallel-walks")
    return result


def cmd_pipeline(args):
    overrides = {"input": args.input, "seed": args.seed}
    if args.deterministic:
        overrides["deterministic"] = True
    cfg = load_config(args.config, overrides) if args.config else parse_config("", overrides)
    if os.environ.get("CI") and args.seed is None and "seed" not in _config_keys(args.config):
        raise UsageError("pipeline needs --seed in CI mode")
    out = args.out or cfg.output
    if not out:
        raise UsageError("pipeline needs an output directory (config 'output' or --out)")
    result = run_pipeline(cfg, out)
    print(json.dumps(result, sort_keys=True))


def _config_keys(path):
    if not path:
        return set()
    with open(path, encoding="utf-8") as fh:
        return {line.split("=", 1)[0].strip() for line in fh if "=" in line.split("#", 1)[0]}


# -- argument parsing ------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patgraph", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"patgraph {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("ingest", help="normalize JSONL records and resolve institutions")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--aliases", help="JSON object or TSV of institution aliases")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("build", help="build the graph and export node/edge CSVs")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--aliases")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("stats", help="structural statistics")
    p.add_argument("--graph", required=True, help="directory or nodes.csv,edges.csv")
    p.add_argument("--json")
    p.add_argument("--records", help="records JSONL for the IPC section table")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("centrality", help="degree, betweenness and PageRank")
    p.add_argument("--graph", required=True)
    p.add_argument("--metric", choices=["degree", "betweenness", "pagerank", "all"], default="all")
    p.add_argument("--out", required=True)
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--damping", type=float, default=0.85)
    p.set_defaults(func=cmd_centrality)

    p = sub.add_parser("communities", help="Girvan-Newman communities")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-removals", type=int)
    p.add_argument("--plateau", type=int, help="stop after this many splits without improvement")
    p.set_defaults(func=cmd_communities)

    p = sub.add_parser("embed", help="train node embeddings")
    p.add_argument("--graph", required=True)
    p.add_argument("--algo", choices=ALGORITHMS, default="node2vec")
    p.add_argument("--out", required=True)
    p.add_argument("--dim", type=int)
    p.add_argument("--walk-length", type=int)
    p.add_argument("--num-walks", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--order", choices=["1", "2", "concat"])
    p.add_argument("--batch-size", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--deterministic", action="store_true")
    p.add_argument("--include-institutions", action="store_true")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("project", help="t-SNE projection to 2D CSV")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--labels", help="communities.csv to join as a label column")
    p.add_argument("--perplexity", type=float, default=30.0)
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--learning-rate", type=float, default=200.0)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("recommend", help="top-k similar patents")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("pipeline", help="ingest, build, stats, communities, embed, recommend")
    p.add_argument("--config")
    p.add_argument("--input")
    p.add_argument("--out")
    p.add_argument("--seed", type=int)
    p.add_argument("--deterministic", action="store_true")
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"error: UsageError: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, PatgraphError, ValueError, KeyError) as exc:
        print(f"error: DataError: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: IoError: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
