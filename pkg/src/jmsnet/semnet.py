"""Directed co-occurrence matrices and the semantic graphs built from them."""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Literal, Mapping, Sequence

import numpy as np

from .textprep import PreparedText, Token

Window = Literal["sentence", "whole_text"]


@dataclass(frozen=True)
class CooccurrenceMatrix:
    """Sparse ordered-pair counts plus the filtered vocabulary they range over.

    ``frequencies`` holds post-filter term frequencies; every term of the
    vocabulary has an entry.
    """

    terms: tuple[str, ...]
    counts: Mapping[tuple[str, str], int]
    frequencies: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for (u, v), c in self.counts.items():
            if u == v:
                raise ValueError(f"self-pair ({u!r}, {u!r}) in co-occurrence matrix")
            if c < 1:
                raise ValueError(f"non-positive count {c} for ({u!r}, {v!r})")

    def total(self) -> int:
        return sum(self.counts.values())

    def __add__(self, other: CooccurrenceMatrix) -> CooccurrenceMatrix:
        """Cell-wise sum, used to merge partial matrices."""
        counts = Counter(self.counts)
        counts.update(other.counts)
        freqs = Counter(self.frequencies)
        freqs.update(other.frequencies)
        terms = tuple(sorted(set(self.terms) | set(other.terms)))
        return CooccurrenceMatrix(terms, dict(sorted(counts.items())), dict(sorted(freqs.items())))


@dataclass(frozen=True, eq=False)
class SemanticGraph:
    """Directed weighted graph over named nodes.

    Edges live in parallel arrays sorted by (source, target) index; node index
    is position in ``nodes``.
    """

    nodes: tuple[str, ...]
    frequency: np.ndarray
    source: np.ndarray
    target: np.ndarray
    weight: np.ndarray

    def __post_init__(self):
        if np.any(self.source == self.target):
            raise ValueError("self-loops are not allowed")
        if len(self.weight) and self.weight.min() < 1:
            raise ValueError("edge weights must be >= 1")

    @classmethod
    def from_edges(cls, nodes: Sequence[str], edges: Mapping[tuple[str, str], float],
                   frequency: Mapping[str, int] | None = None) -> SemanticGraph:
        index = {name: i for i, name in enumerate(nodes)}
        if len(index) != len(nodes):
            raise ValueError("duplicate node names")
        items = sorted(((index[u], index[v]), w) for (u, v), w in edges.items())
        src = np.array([k[0] for k, _ in items], dtype=np.int64)
        dst = np.array([k[1] for k, _ in items], dtype=np.int64)
        weight = np.array([w for _, w in items], dtype=np.float64)
        freq = np.array([(frequency or {}).get(name, 0) for name in nodes], dtype=np.int64)
        return cls(tuple(nodes), freq, src, dst, weight)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.source)

    def edges(self) -> Iterator[tuple[str, str, float]]:
        for u, v, w in zip(self.source.tolist(), self.target.tolist(), self.weight.tolist()):
            yield self.nodes[u], self.nodes[v], w

    def edge_dict(self) -> dict[tuple[str, str], float]:
        return {(u, v): w for u, v, w in self.edges()}

    def adjacency(self) -> np.ndarray:
        """Dense weighted adjacency matrix (small graphs only)."""
        a = np.zeros((self.n, self.n))
        a[self.source, self.target] = self.weight
        return a

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SemanticGraph):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and np.array_equal(self.frequency, other.frequency)
            and np.array_equal(self.source, other.source)
            and np.array_equal(self.target, other.target)
            and np.array_equal(self.weight, other.weight)
        )

    __hash__ = None


def _windows(texts: Iterable[PreparedText], window: Window) -> Iterator[list[str]]:
    for text in texts:
        if window == "sentence":
            for sentence in text.filtered_sentences:
                yield [t.surface for t in sentence]
        elif window == "whole_text":
            yield [t.surface for s in text.filtered_sentences for t in s]
        else:
            raise ValueError(f"unknown window {window!r}")


def count_window(tokens: Sequence[str], counts: Counter) -> None:
    """Add every ordered pair (earlier occurrence, later occurrence) of distinct terms."""
    for i, u in enumerate(tokens):
        for v in tokens[i + 1:]:
            if u != v:
                counts[(u, v)] += 1


def cooccurrence_matrix(texts: Iterable[PreparedText], window: Window = "sentence"
                        ) -> CooccurrenceMatrix:
    counts: Counter = Counter()
    freqs: Counter = Counter()
    for tokens in _windows(texts, window):
        freqs.update(tokens)
        count_window(tokens, counts)
    return CooccurrenceMatrix(
        terms=tuple(sorted(freqs)),
        counts=dict(sorted(counts.items())),
        frequencies=dict(sorted(freqs.items())),
    )


def build_graph(matrix: CooccurrenceMatrix) -> SemanticGraph:
    """One edge per matrix cell; terms without any co-occurrence are dropped."""
    if not matrix.counts:
        raise ValueError("no co-occurrences")
    linked = sorted({t for pair in matrix.counts for t in pair})
    freq = {t: matrix.frequencies.get(t, 0) for t in linked}
    return SemanticGraph.from_edges(linked, matrix.counts, freq)


def term_frequencies(texts: Iterable[PreparedText] | Iterable[Sequence[Token]], k: int = 20
                     ) -> list[tuple[str, int]]:
    """Top-``k`` filtered terms by frequency, ties in lexicographic order."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    counts: Counter = Counter()
    for text in texts:
        tokens = text.filtered_tokens() if isinstance(text, PreparedText) else text
        counts.update(t.surface for t in tokens)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]


def write_matrix(matrix: CooccurrenceMatrix, path: str | Path,
                 terms_path: str | Path | None = None) -> None:
    """``source,target,count`` triples; term frequencies optionally to ``terms_path``."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["source", "target", "count"])
        for (u, v), c in sorted(matrix.counts.items()):
            writer.writerow([u, v, c])
    if terms_path is not None:
        with Path(terms_path).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["term", "frequency"])
            for term in matrix.terms:
                writer.writerow([term, matrix.frequencies.get(term, 0)])


def read_matrix(path: str | Path, terms_path: str | Path | None = None) -> CooccurrenceMatrix:
    counts: dict[tuple[str, str], int] = {}
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["source", "target", "count"]:
            raise ValueError(f"{path}: expected header source,target,count, got {header}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            u, v, c = row
            if (u, v) in counts:
                raise ValueError(f"{path}:{lineno}: duplicate cell ({u}, {v})")
            counts[(u, v)] = int(c)
    freqs: dict[str, int] = {}
    if terms_path is not None:
        with Path(terms_path).open(newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            for row in reader:
                freqs[row["term"]] = int(row["frequency"])
    terms = set(freqs) | {t for pair in counts for t in pair}
    return CooccurrenceMatrix(tuple(sorted(terms)), dict(sorted(counts.items())),
                              dict(sorted(freqs.items())))
