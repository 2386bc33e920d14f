"""Command-line entry point: ``jmsnet {analyze,score,network,benchmark,compare,export}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from . import corpus_io
from .corpus_io import CorpusError
from .graphmetrics import RandomGraphSpec, benchmark_report, graph_report
from .export import dot_string, graphml_string, nodes_csv_string
from .pipeline import (PipelineConfig, PipelineError, _csv, build_network, bundle_files,
                       run_pipeline, run_tests, score_records, write_outputs)
from .semnet import build_graph, read_matrix

log = logging.getLogger("jmsnet")

WINDOWS = {"sentence": "sentence", "text": "whole_text"}


def _drop_list(values: list[str] | None) -> tuple[str, ...]:
    out = []
    for value in values or []:
        out.extend(w for w in value.split(",") if w.strip())
    return tuple(out)


def _add_text_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--stopwords", type=Path, metavar="FILE",
                   help="replace the bundled stopword list (one word per line)")
    p.add_argument("--drop", action="append", metavar="WORD[,WORD...]",
                   help="extra low-information words to drop (repeatable)")
    p.add_argument("--drop-numeric", action="store_true", help="drop purely numeric tokens")
    p.add_argument("--merge-plurals", action="store_true",
                   help="merge naive -s/-es plurals into their singular in networks")


def _add_corpus_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", type=Path, required=True, help="corpus file (.csv or .jsonl)")
    p.add_argument("--lenient", action="store_true",
                   help="skip invalid rows instead of aborting")
    p.add_argument("--json-diagnostics", action="store_true",
                   help="report row errors as JSON on stderr")


def _config(args, **overrides) -> PipelineConfig:
    kwargs = dict(
        input=args.input,
        out=getattr(args, "out", None),
        stopwords_file=args.stopwords,
        drop=_drop_list(args.drop),
        drop_numeric=args.drop_numeric,
        merge_plural_singular=args.merge_plurals,
        window=WINDOWS[getattr(args, "window", None) or "sentence"],
        fraction=getattr(args, "fraction", 0.10),
        seed=getattr(args, "seed", 42),
        adjust=getattr(args, "adjust", "none"),
        min_country_n=getattr(args, "min_country_n", 1),
        workers=getattr(args, "workers", 1),
    )
    if args.command == "analyze" and args.format:
        kwargs["formats"] = frozenset(args.format)
    kwargs.update(overrides)
    return PipelineConfig(**kwargs)


def _load(args) -> corpus_io.Corpus:
    try:
        corpus = corpus_io.load_corpus(args.input, strict=not args.lenient)
    except CorpusError as exc:
        corpus_io.report_diagnostics(exc.diagnostics, args.json_diagnostics)
        raise PipelineError("ingest", str(exc)) from exc
    except OSError as exc:
        raise PipelineError("ingest", str(exc)) from exc
    if corpus.diagnostics:
        corpus_io.report_diagnostics(corpus.diagnostics, args.json_diagnostics)
    return corpus


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")


def cmd_analyze(args) -> int:
    config = _config(args)
    corpus = _load(args)
    bundle = run_pipeline(config, corpus)
    written = write_outputs(bundle_files(bundle, config.formats), config.out)
    print(f"{len(bundle.scores)} records scored, {len(bundle.tests)} tests, "
          f"{len(written)} files written to {config.out}")
    return 0


def cmd_score(args) -> int:
    config = _config(args)
    corpus = _load(args)
    scores, errors = score_records(corpus, config.policy())
    for err in errors:
        log.warning("%s: %s", err["id"], err["reason"])
    if args.format == "json":
        text = json.dumps([asdict(s) for s in scores], indent=2) + "\n"
    else:
        text = _csv([asdict(s) for s in scores])
    _emit(text, args.out)
    return 0


def cmd_network(args) -> int:
    config = _config(args)
    corpus = _load(args)
    if args.slice != "all":
        corpus = corpus_io.slice_by_metric_percentile(corpus, config.fraction, args.slice)
    texts = {r.id: getattr(r, args.column) for r in corpus if getattr(r, args.column).strip()}
    window = WINDOWS[args.window] if args.window else (
        "whole_text" if args.column == "title" else "sentence")
    name = f"{args.column}_{args.slice}"
    net = build_network(name, texts, config.policy(), window, config.seed, config.workers,
                        config.top_terms)
    report = {"network": name, "metrics": net.metrics.summary(),
              "top_terms": [[t, c] for t, c in net.top_terms]}
    files = {f"{name}_metrics.json": json.dumps(report, indent=2, sort_keys=True) + "\n",
             f"{name}_nodes.csv": nodes_csv_string(net.graph, net.metrics),
             f"{name}_matrix.csv": _csv([{"source": u, "target": v, "count": c}
                                         for (u, v), c in net.matrix.counts.items()]),
             f"{name}_terms.csv": _csv([{"term": t, "frequency": net.matrix.frequencies[t]}
                                        for t in net.matrix.terms])}
    formats = set(args.format or ["graphml"])
    if "graphml" in formats:
        files[f"{name}.graphml"] = graphml_string(net.graph, net.metrics)
    if "dot" in formats:
        files[f"{name}.dot"] = dot_string(net.graph, net.metrics, name)
    if args.out is None:
        sys.stdout.write(files[f"{name}_metrics.json"])
    else:
        write_outputs(files, args.out)
    return 0


def cmd_benchmark(args) -> int:
    rows = []
    for n in args.n:
        for seed in range(args.seed, args.seed + args.repeats):
            report = benchmark_report(RandomGraphSpec(n, args.p, seed), args.workers)
            summary = report.summary()
            summary.pop("top_betweenness")
            rows.append({"n_requested": n, "p": args.p, "seed": seed, **summary})
    text = json.dumps(rows, indent=2) + "\n" if args.format == "json" else _csv(rows)
    _emit(text, args.out)
    return 0


def cmd_compare(args) -> int:
    config = _config(args)
    corpus = _load(args)
    scores, _ = score_records(corpus, config.policy())
    tests, notes = run_tests(corpus, scores, tuple(args.group), config.adjust)
    for note in notes:
        log.info(note)
    rows = [t.to_row() for t in tests]
    if args.format == "json":
        text = json.dumps({"tests": rows, "notes": notes}, indent=2) + "\n"
    else:
        text = _csv(rows, ["test", "group_labels", "statistic", "p_value", "effect_size", "n",
                           "method", "z", "u", "p_unadjusted"])
    _emit(text, args.out)
    return 0


def cmd_export(args) -> int:
    try:
        matrix = read_matrix(args.matrix, args.terms)
        graph = build_graph(matrix)
    except (OSError, ValueError) as exc:
        raise PipelineError("ingest", str(exc)) from exc
    metrics = graph_report(graph, seed=args.seed, workers=args.workers)
    if args.format == "graphml":
        text = graphml_string(graph, metrics)
    elif args.format == "dot":
        text = dot_string(graph, metrics, Path(args.out).stem if args.out else "G")
    else:
        text = nodes_csv_string(graph, metrics)
    try:
        _emit(text, args.out)
    except OSError as exc:
        raise PipelineError("export", str(exc)) from exc
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jmsnet", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full pipeline")
    _add_corpus_options(p)
    _add_text_options(p)
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--fraction", type=float, default=0.10,
                   help="SJR slice fraction for the top/bottom JMS networks")
    p.add_argument("--window", choices=sorted(WINDOWS), default="sentence")
    p.add_argument("--format", action="append", choices=["csv", "json", "graphml", "dot"],
                   help="output formats (repeatable; default all)")
    p.add_argument("--adjust", choices=["none", "holm"], default="none")
    p.add_argument("--min-country-n", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("score", help="FKGL and Yule's K per record")
    _add_corpus_options(p)
    _add_text_options(p)
    p.add_argument("--out", type=Path, help="output file (default stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("network", help="build one co-occurrence network with metrics")
    _add_corpus_options(p)
    _add_text_options(p)
    p.add_argument("--column", choices=["title", "mission"], default="mission")
    p.add_argument("--slice", choices=["all", "top", "bottom"], default="all")
    p.add_argument("--fraction", type=float, default=0.10)
    p.add_argument("--window", choices=sorted(WINDOWS),
                   help="default: text for titles, sentence for missions")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--format", action="append", choices=["graphml", "dot"])
    p.add_argument("--out", type=Path, help="output directory (default: metrics to stdout)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_network)

    p = sub.add_parser("benchmark", help="directed G(n, p) baseline metrics")
    p.add_argument("--n", type=int, action="append", required=True, help="node count (repeatable)")
    p.add_argument("--p", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--repeats", type=int, default=1, help="consecutive seeds per n")
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("--out", type=Path)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("compare", help="normality, rank-sum, Kruskal-Wallis and Dunn tests")
    _add_corpus_options(p)
    _add_text_options(p)
    p.add_argument("--group", action="append",
                   choices=["access", "quartile", "publisher_country"],
                   help="grouping keys (repeatable; default access and quartile)")
    p.add_argument("--adjust", choices=["none", "holm"], default="none")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("export", help="graph file from an exported co-occurrence matrix")
    p.add_argument("--matrix", type=Path, required=True, help="source,target,count CSV")
    p.add_argument("--terms", type=Path, help="term,frequency CSV")
    p.add_argument("--format", choices=["graphml", "dot", "csv"], default="graphml")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", type=Path)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "group", "unset") is None:
        args.group = ["access", "quartile"]
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except PipelineError as exc:
        print(f"jmsnet: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"jmsnet: [{args.command}] {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
