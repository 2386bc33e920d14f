"""Lexical networks, readability and lexical diversity of journal mission statements."""

from .corpus_io import Corpus, CorpusError, JournalRecord, group_by, load_corpus, \
    slice_by_metric_percentile, write_corpus
from .graphmetrics import (GraphMetricsReport, Partition, RandomGraphSpec, average_path_length,
                           benchmark_report, betweenness, density, graph_report,
                           louvain_communities, modularity, random_directed_gnp)
from .lexmetrics import FrequencySpectrum, LexScores, fkgl, frequency_spectrum, score_text, yules_k
from .semnet import (CooccurrenceMatrix, SemanticGraph, build_graph, cooccurrence_matrix,
                     term_frequencies)
from .stats import (DescriptiveSummary, TestResult, describe, dunn_pairwise, kruskal_wallis,
                    pearson, shapiro_wilk, wilcoxon_rank_sum)
from .textprep import PreparedText, StopPolicy, Token, apply_stoppolicy, count_syllables, \
    prepare, split_sentences, tokenize

__version__ = "0.1.0"
