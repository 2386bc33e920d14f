import dataclasses
import json
from statistics import median

import pytest

from jmsnet.corpus_io import (Corpus, JournalRecord, load_corpus, slice_by_metric_percentile,
                              write_corpus)
from jmsnet.graphmetrics import RandomGraphSpec, graph_report
from jmsnet.lexmetrics import score_text
from jmsnet.pipeline import (PipelineConfig, PipelineError, bundle_files, country_medians,
                             run_and_write, run_pipeline, score_records, write_outputs)
from jmsnet.semnet import build_graph, cooccurrence_matrix
from jmsnet.textprep import StopPolicy, prepare

WORDS = ("market firm policy growth trade labor credit risk price capital innovation network "
         "audit brand supply demand tourism health energy data").split()


def synthetic(n, countries=("US",), quartiles=("Q1", "Q2", "Q3", "Q4")):
    records = []
    for i in range(n):
        w = [WORDS[(i * k + 3) % len(WORDS)] for k in (1, 2, 5, 7)]
        records.append(JournalRecord(
            id=f"S{i:04d}", title=f"Journal of {w[0].title()} and {w[1].title()}",
            mission=f"The journal studies {w[0]} and {w[1]}. It covers {w[2]}, {w[3]} and {w[0]}.",
            jms_kind="overview", sjr=float((i * 37) % 101) + i / 1e4, h_index=i,
            coverage_years=1 + i % 30, quartile=quartiles[i % len(quartiles)],
            access="open_access" if i % 3 == 0 else "non_open_access",
            publisher_country=countries[i % len(countries)]))
    return Corpus(tuple(records))


def config(tmp_path, **kw):
    return PipelineConfig(input=tmp_path / "corpus.csv", **kw)


def test_golden_bundle(mini_corpus_path, data_dir):
    bundle = run_pipeline(PipelineConfig(input=mini_corpus_path, seed=42))
    assert bundle.to_json() == (data_dir / "golden_bundle.json").read_text(encoding="utf-8")


def test_bundle_contents(mini_corpus_path):
    bundle = run_pipeline(PipelineConfig(input=mini_corpus_path))
    assert set(bundle.networks) == {"titles", "jms_top", "jms_bottom"}
    assert set(bundle.benchmarks) == {"benchmark_titles", "benchmark_jms"}
    assert {t.test for t in bundle.tests} == {"pearson", "shapiro_wilk", "wilcoxon_rank_sum",
                                             "kruskal_wallis", "dunn_pair"}
    assert [t.test for t in bundle.tests].count("wilcoxon_rank_sum") == 2
    assert [t.test for t in bundle.tests].count("kruskal_wallis") == 2
    assert set(bundle.summaries) == {"fkgl", "yules_k"}


def test_every_record_scored_or_reported(tmp_path):
    corpus = synthetic(30)
    bad = dataclasses.replace(corpus.records[0], mission="!!! ???")
    corpus = Corpus((bad,) + corpus.records[1:])
    scores, errors = score_records(corpus, StopPolicy())
    ids = [s.id for s in scores] + [e["id"] for e in errors]
    assert sorted(ids) == sorted(corpus.ids())
    assert [e["id"] for e in errors] == ["S0000"]


def test_all_q1_notes_insufficient_groups(tmp_path):
    bundle = run_pipeline(config(tmp_path), synthetic(24, quartiles=("Q1",)))
    assert any("insufficient groups" in n and "quartile" in n for n in bundle.notes)
    assert not any(t.test == "kruskal_wallis" for t in bundle.tests)


def test_slice_sizes_on_1502_records(tmp_path):
    corpus = synthetic(1502)
    bundle = run_pipeline(config(tmp_path, benchmarks=()), corpus)
    assert len(bundle.networks["jms_top"].record_ids) == 151
    assert len(bundle.networks["jms_bottom"].record_ids) == 151
    assert len(bundle.scores) == 1502


def test_country_medians_single_country():
    corpus = synthetic(9)
    scores, _ = score_records(corpus, StopPolicy())
    [row] = country_medians(corpus, scores)
    assert row.n == 9
    assert row.median_fkgl == median(s.fkgl for s in scores)
    assert row.median_yules_k == median(s.yules_k for s in scores)


def test_country_medians_disjoint_ranges():
    plain = "The cat sat on the mat. The dog ran."
    dense = ("Interdisciplinary organizational investigations characterize institutional "
             "transformation across international administrative environments.")
    records = [JournalRecord(f"C{i}", "T", plain if i < 3 else dense, "overview", 1.0, 1, 1,
                             "Q1", "open_access", "AA" if i < 3 else "ZZ") for i in range(6)]
    corpus = Corpus(tuple(records))
    scores, _ = score_records(corpus, StopPolicy())
    rows = country_medians(corpus, scores, min_n=4)
    assert [r.country for r in rows] == ["AA", "ZZ"]
    assert rows[0].median_fkgl < rows[1].median_fkgl
    assert all(r.below_min_n for r in rows)


def test_54_countries_54_rows():
    codes = [a + b for a in "ABCDEFGHI" for b in "ABCDEF"][:54]
    corpus = synthetic(108, countries=codes)
    scores, _ = score_records(corpus, StopPolicy())
    assert len(country_medians(corpus, scores)) == 54


def test_stage_tagged_failure_and_no_partial_output(tmp_path):
    # every mission is stopwords only, so the JMS networks have no co-occurrence
    corpus = Corpus(tuple(dataclasses.replace(r, mission="It is what it is.")
                          for r in synthetic(10).records))
    write_corpus(corpus, tmp_path / "corpus.csv")
    out = tmp_path / "out"
    with pytest.raises(PipelineError) as info:
        run_and_write(config(tmp_path, out=out))
    assert info.value.stage == "networks"
    assert str(info.value).startswith("[networks]")
    assert not out.exists()


def test_write_outputs_cleans_up_on_failure(tmp_path):
    out = tmp_path / "out"
    files = {"a.csv": "x\n", "b/c.csv": "y\n", "b": "collides with a directory\n"}
    with pytest.raises(PipelineError) as info:
        write_outputs(files, out)
    assert info.value.stage == "export"
    assert not (tmp_path / ".out.partial").exists()
    assert not out.exists() or not any(out.rglob("*.csv"))


def test_ingest_failure_is_tagged(tmp_path):
    with pytest.raises(PipelineError, match=r"^\[ingest\]"):
        run_pipeline(config(tmp_path))


def test_config_validation(tmp_path):
    with pytest.raises(ValueError):
        config(tmp_path, fraction=0.6)
    with pytest.raises(ValueError):
        config(tmp_path, formats=frozenset({"pdf"}))


def test_composability(mini_corpus_path):
    cfg = PipelineConfig(input=mini_corpus_path, seed=7)
    bundle = run_pipeline(cfg)
    corpus = load_corpus(mini_corpus_path)
    policy = StopPolicy()
    for score, record in zip(bundle.scores, corpus):
        lex = score_text(record.mission, policy)
        assert (score.id, score.fkgl, score.yules_k) == (record.id, lex.fkgl, lex.yules_k)
    titles = build_graph(cooccurrence_matrix([prepare(r.title, policy) for r in corpus],
                                             "whole_text"))
    assert bundle.networks["titles"].graph == titles
    assert bundle.networks["titles"].metrics.summary() == graph_report(titles, seed=7).summary()
    top = slice_by_metric_percentile(corpus, 0.10, "top")
    assert bundle.networks["jms_top"].record_ids == tuple(top.ids())


def test_explicit_benchmarks(mini_corpus_path):
    spec = RandomGraphSpec(30, 0.1, 3)
    bundle = run_pipeline(PipelineConfig(input=mini_corpus_path, benchmarks=(spec,)))
    assert list(bundle.benchmarks) == ["benchmark_n30_p0.1_s3"]
    assert bundle.benchmarks["benchmark_n30_p0.1_s3"].n == 30


def test_written_files(tmp_path, mini_corpus_path):
    cfg = PipelineConfig(input=mini_corpus_path, out=tmp_path / "run",
                         formats=frozenset({"json", "dot"}))
    bundle, written = run_and_write(cfg)
    names = sorted(p.relative_to(tmp_path / "run").as_posix() for p in written)
    assert names == ["bundle.json", "networks/jms_bottom.dot", "networks/jms_top.dot",
                     "networks/titles.dot"]
    assert json.loads((tmp_path / "run" / "bundle.json").read_text()) == bundle.to_dict()
    assert set(bundle_files(bundle, {"csv"})) >= {"scores.csv", "tests.csv",
                                                  "country_medians.csv"}
