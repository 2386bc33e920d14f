"""End-to-end study: ingest, score, build networks, benchmark, test, export."""

from __future__ import annotations

import csv
import io
import json
import logging
import shutil
from dataclasses import asdict, dataclass, field
from pathlib import Path
from statistics import median
from typing import Iterable, Literal

from . import corpus_io
from .corpus_io import Corpus, JournalRecord
from .export import dot_string, graphml_string, nodes_csv_string
from .graphmetrics import GraphMetricsReport, RandomGraphSpec, benchmark_report, graph_report
from .lexmetrics import LexScores, score_prepared
from .semnet import (CooccurrenceMatrix, SemanticGraph, Window, build_graph, cooccurrence_matrix,
                     term_frequencies)
from .stats import (DescriptiveSummary, TestResult, describe, dunn_pairwise, kruskal_wallis,
                    pearson, shapiro_wilk, wilcoxon_rank_sum)
from .textprep import StopPolicy, prepare

log = logging.getLogger(__name__)

METRICS = ("fkgl", "yules_k")
EXPORT_FORMATS = frozenset({"graphml", "dot", "csv", "json"})


class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


@dataclass
class PipelineConfig:
    input: Path
    out: Path | None = None
    stopwords_file: Path | None = None
    drop: tuple[str, ...] = ()
    drop_numeric: bool = False
    merge_plural_singular: bool = False
    window: Window = "sentence"
    fraction: float = 0.10
    seed: int = 42
    wiring_probability: float = 0.05
    # None derives one benchmark per network family from the observed node counts
    benchmarks: tuple[RandomGraphSpec, ...] | None = None
    group_keys: tuple[str, ...] = ("access", "quartile")
    formats: frozenset[str] = EXPORT_FORMATS
    adjust: Literal["none", "holm"] = "none"
    min_country_n: int = 1
    top_terms: int = 20
    workers: int = 1

    def __post_init__(self):
        self.input = Path(self.input)
        if self.out is not None:
            self.out = Path(self.out)
        if not 0 < self.fraction <= 0.5:
            raise ValueError(f"slice fraction must be in (0, 0.5], got {self.fraction}")
        unknown = set(self.formats) - EXPORT_FORMATS
        if unknown:
            raise ValueError(f"unknown export formats {sorted(unknown)}")
        if self.window not in ("sentence", "whole_text"):
            raise ValueError(f"unknown window {self.window!r}")

    def policy(self) -> StopPolicy:
        base = StopPolicy(drop_numeric=self.drop_numeric,
                          merge_plural_singular=self.merge_plural_singular)
        return base.with_overrides(self.stopwords_file, self.drop)

    def describe(self) -> dict:
        """Run parameters recorded in the bundle; paths reduced to file names."""
        return {
            "input": self.input.name,
            "window": self.window,
            "fraction": self.fraction,
            "seed": self.seed,
            "wiring_probability": self.wiring_probability,
            "drop": sorted(self.drop),
            "drop_numeric": self.drop_numeric,
            "merge_plural_singular": self.merge_plural_singular,
            "stopwords": self.stopwords_file.name if self.stopwords_file else "bundled",
            "group_keys": list(self.group_keys),
            "adjust": self.adjust,
            "min_country_n": self.min_country_n,
        }


@dataclass(frozen=True)
class RecordScore:
    id: str
    fkgl: float
    yules_k: float
    word_count: int
    sentence_count: int
    syllable_count: int


@dataclass(frozen=True)
class CountryMedian:
    country: str
    n: int
    median_fkgl: float
    median_yules_k: float
    below_min_n: bool


@dataclass
class NetworkResult:
    name: str
    record_ids: tuple[str, ...]
    matrix: CooccurrenceMatrix
    graph: SemanticGraph
    metrics: GraphMetricsReport
    top_terms: list[tuple[str, int]]


@dataclass
class ReportBundle:
    config: dict
    scores: list[RecordScore]
    record_errors: list[dict]
    summaries: dict[str, dict[str, DescriptiveSummary]]
    networks: dict[str, NetworkResult]
    benchmarks: dict[str, GraphMetricsReport]
    tests: list[TestResult]
    country_medians: list[CountryMedian]
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "scores": [asdict(s) for s in self.scores],
            "record_errors": self.record_errors,
            "summaries": {
                metric: {group: asdict(s) for group, s in groups.items()}
                for metric, groups in self.summaries.items()
            },
            "networks": {
                name: {
                    "records": list(net.record_ids),
                    "metrics": net.metrics.summary(),
                    "top_terms": [[t, c] for t, c in net.top_terms],
                }
                for name, net in self.networks.items()
            },
            "benchmarks": {name: r.summary() for name, r in self.benchmarks.items()},
            "tests": [t.to_row() for t in self.tests],
            "country_medians": [asdict(c) for c in self.country_medians],
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# stages


def score_records(records: Iterable[JournalRecord], policy: StopPolicy
                  ) -> tuple[list[RecordScore], list[dict]]:
    scores = []
    errors = []
    for record in records:
        try:
            prepared = prepare(record.mission, policy)
            lex = score_prepared(prepared)
        except ValueError as exc:
            errors.append({"id": record.id, "stage": "score", "reason": str(exc)})
            continue
        scores.append(RecordScore(record.id, lex.fkgl, lex.yules_k, prepared.word_count,
                                  prepared.sentence_count, prepared.syllable_count))
    return scores, errors


def build_network(name: str, texts: dict[str, str], policy: StopPolicy, window: Window,
                  seed: int, workers: int = 1, top: int = 20) -> NetworkResult:
    prepared = [prepare(text, policy) for text in texts.values() if text.strip()]
    matrix = cooccurrence_matrix(prepared, window)
    graph = build_graph(matrix)
    metrics = graph_report(graph, seed=seed, workers=workers)
    return NetworkResult(name, tuple(texts), matrix, graph, metrics,
                         term_frequencies(prepared, top))


def country_medians(corpus: Corpus, scores: Iterable[RecordScore | tuple[str, LexScores]],
                    min_n: int = 1) -> list[CountryMedian]:
    """Median FKGL and Yule's K per publisher country, sorted by country code."""
    by_id = {}
    for item in scores:
        if isinstance(item, RecordScore):
            by_id[item.id] = (item.fkgl, item.yules_k)
        else:
            rec_id, lex = item
            by_id[rec_id] = (lex.fkgl, lex.yules_k)
    rows = []
    for country, group in corpus_io.group_by(corpus, "publisher_country").items():
        if country == corpus_io.MISSING:
            continue
        values = [by_id[r.id] for r in group if r.id in by_id]
        if not values:
            continue
        rows.append(CountryMedian(
            country=country,
            n=len(values),
            median_fkgl=float(median(v[0] for v in values)),
            median_yules_k=float(median(v[1] for v in values)),
            below_min_n=len(values) < min_n,
        ))
    return rows


def _group_values(corpus: Corpus, key: str, scores: dict[str, RecordScore], metric: str
                  ) -> dict[str, list[float]]:
    groups = {}
    for label, group in corpus_io.group_by(corpus, key).items():
        if label == corpus_io.MISSING:
            continue
        values = [getattr(scores[r.id], metric) for r in group if r.id in scores]
        if values:
            groups[label] = values
    return groups


def run_tests(corpus: Corpus, scores: list[RecordScore], group_keys: Iterable[str],
              adjust: str = "none") -> tuple[list[TestResult], list[str]]:
    """Normality, group comparisons and the FKGL ~ Yule's K correlation."""
    tests: list[TestResult] = []
    notes: list[str] = []
    by_id = {s.id: s for s in scores}

    try:
        tests.append(pearson([s.fkgl for s in scores], [s.yules_k for s in scores],
                             ("fkgl", "yules_k")))
    except ValueError as exc:
        notes.append(f"pearson fkgl~yules_k skipped: {exc}")

    for key in group_keys:
        for metric in METRICS:
            groups = _group_values(corpus, key, by_id, metric)
            for label, values in groups.items():
                try:
                    tests.append(shapiro_wilk(values, f"{metric}:{key}={label}"))
                except ValueError as exc:
                    notes.append(f"shapiro_wilk {metric} {key}={label} skipped: {exc}")
            if len(groups) < 2:
                notes.append(f"{metric} by {key}: insufficient groups ({len(groups)})")
                continue
            labels = tuple(f"{metric}:{key}={g}" for g in groups)
            if key == "access":
                # open access first so the statistic is the OA rank sum
                order = sorted(groups, key=lambda g: g != corpus_io.Access.OPEN.value)
                a, b = (groups[g] for g in order)
                tests.append(wilcoxon_rank_sum(
                    a, b, tuple(f"{metric}:{key}={g}" for g in order)))
            else:
                values = list(groups.values())
                tests.append(kruskal_wallis(values, labels))
                tests.extend(dunn_pairwise(values, labels, adjust))
    return tests, notes


def summarize(corpus: Corpus, scores: list[RecordScore], group_keys: Iterable[str]
              ) -> dict[str, dict[str, DescriptiveSummary]]:
    by_id = {s.id: s for s in scores}
    out: dict[str, dict[str, DescriptiveSummary]] = {}
    for metric in METRICS:
        groups = {"all": describe([getattr(s, metric) for s in scores])}
        for key in group_keys:
            for label, values in _group_values(corpus, key, by_id, metric).items():
                groups[f"{key}={label}"] = describe(values)
        out[metric] = groups
    return out


def _benchmark_specs(config: PipelineConfig, networks: dict[str, NetworkResult]
                     ) -> dict[str, RandomGraphSpec]:
    if config.benchmarks is not None:
        return {f"benchmark_n{s.n}_p{s.p}_s{s.seed}": s for s in config.benchmarks}
    specs = {}
    if "titles" in networks:
        specs["benchmark_titles"] = RandomGraphSpec(
            networks["titles"].graph.n, config.wiring_probability, config.seed)
    jms = [networks[k].graph.n for k in ("jms_top", "jms_bottom") if k in networks]
    if jms:
        specs["benchmark_jms"] = RandomGraphSpec(
            round(sum(jms) / len(jms)), config.wiring_probability, config.seed)
    return specs


def run_pipeline(config: PipelineConfig, corpus: Corpus | None = None) -> ReportBundle:
    """Full analysis; each failure is re-raised as a stage-tagged PipelineError."""
    stage = "ingest"
    try:
        if corpus is None:
            corpus = corpus_io.load_corpus(config.input)
        policy = config.policy()

        stage = "score"
        scores, record_errors = score_records(corpus, policy)
        if not scores:
            raise ValueError("no record could be scored")

        stage = "summaries"
        summaries = summarize(corpus, scores, config.group_keys)

        stage = "networks"
        notes: list[str] = []
        networks: dict[str, NetworkResult] = {}
        titles = {r.id: r.title for r in corpus if r.title.strip()}
        if len(titles) < len(corpus):
            notes.append(f"titles network: {len(corpus) - len(titles)} empty title(s) skipped")
        networks["titles"] = build_network("titles", titles, policy, "whole_text", config.seed,
                                           config.workers, config.top_terms)
        for end in ("top", "bottom"):
            subset = corpus_io.slice_by_metric_percentile(corpus, config.fraction, end)
            networks[f"jms_{end}"] = build_network(
                f"jms_{end}", {r.id: r.mission for r in subset}, policy, config.window,
                config.seed, config.workers, config.top_terms)

        stage = "benchmark"
        benchmarks = {}
        for name, spec in _benchmark_specs(config, networks).items():
            benchmarks[name] = benchmark_report(spec, config.workers)

        stage = "tests"
        tests, test_notes = run_tests(corpus, scores, config.group_keys, config.adjust)
        notes.extend(test_notes)

        stage = "countries"
        medians = country_medians(corpus, scores, config.min_country_n)
    except PipelineError:
        raise
    except (ValueError, OSError) as exc:
        raise PipelineError(stage, str(exc)) from exc

    return ReportBundle(
        config=config.describe(),
        scores=scores,
        record_errors=record_errors + [
            {"id": "", "stage": "ingest", "reason": str(d)} for d in corpus.diagnostics],
        summaries=summaries,
        networks=networks,
        benchmarks=benchmarks,
        tests=tests,
        country_medians=medians,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# output


def _csv(rows: list[dict], fields: list[str] | None = None) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    writer = csv.DictWriter(buf, fieldnames=fields or list(rows[0]), lineterminator="\n",
                            extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def bundle_files(bundle: ReportBundle, formats: Iterable[str]) -> dict[str, str]:
    """Relative path -> file content for every configured output."""
    formats = set(formats)
    files: dict[str, str] = {}
    if "json" in formats:
        files["bundle.json"] = bundle.to_json()
    if "csv" in formats:
        files["scores.csv"] = _csv([asdict(s) for s in bundle.scores])
        test_fields = ["test", "group_labels", "statistic", "p_value", "effect_size", "n",
                       "method", "z", "u", "p_unadjusted"]
        files["tests.csv"] = _csv([t.to_row() for t in bundle.tests], test_fields)
        files["summaries.csv"] = _csv([
            {"metric": metric, "group": group, **asdict(s)}
            for metric, groups in bundle.summaries.items() for group, s in groups.items()
        ])
        files["country_medians.csv"] = _csv([asdict(c) for c in bundle.country_medians])
        files["term_frequencies.csv"] = _csv([
            {"network": name, "rank": i + 1, "term": t, "count": c}
            for name, net in bundle.networks.items() for i, (t, c) in enumerate(net.top_terms)
        ])
        files["network_metrics.csv"] = _csv([
            {"network": name, **{k: v for k, v in r.summary().items() if k != "top_betweenness"}}
            for name, r in [*((k, n.metrics) for k, n in bundle.networks.items()),
                            *bundle.benchmarks.items()]
        ])
    for name, net in bundle.networks.items():
        if "graphml" in formats:
            files[f"networks/{name}.graphml"] = graphml_string(net.graph, net.metrics)
        if "dot" in formats:
            files[f"networks/{name}.dot"] = dot_string(net.graph, net.metrics, name)
        if "csv" in formats:
            files[f"networks/{name}_nodes.csv"] = nodes_csv_string(net.graph, net.metrics)
            files[f"networks/{name}_matrix.csv"] = _csv([
                {"source": u, "target": v, "count": c}
                for (u, v), c in sorted(net.matrix.counts.items())
            ], ["source", "target", "count"])
            files[f"networks/{name}_terms.csv"] = _csv([
                {"term": t, "frequency": net.matrix.frequencies.get(t, 0)}
                for t in net.matrix.terms
            ], ["term", "frequency"])
    return files


def write_outputs(files: dict[str, str], out: Path) -> list[Path]:
    """Write into a staging directory, then move into ``out``; nothing is left
    behind if any write fails."""
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    staging = out.parent / f".{out.name}.partial"
    shutil.rmtree(staging, ignore_errors=True)
    try:
        for rel, content in files.items():
            target = staging / rel
            target.parent.mkdir(parents=True, exist_ok=True)
            with target.open("w", encoding="utf-8", newline="") as fh:
                fh.write(content)
        written = []
        for rel in files:
            final = out / rel
            final.parent.mkdir(parents=True, exist_ok=True)
            (staging / rel).replace(final)
            written.append(final)
    except OSError as exc:
        raise PipelineError("export", str(exc)) from exc
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    return written


def run_and_write(config: PipelineConfig) -> tuple[ReportBundle, list[Path]]:
    bundle = run_pipeline(config)
    if config.out is None:
        return bundle, []
    return bundle, write_outputs(bundle_files(bundle, config.formats), config.out)
