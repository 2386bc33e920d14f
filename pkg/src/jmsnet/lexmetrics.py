"""Flesch-Kincaid grade level and Yule's K."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .textprep import PreparedText, StopPolicy, Token, prepare


@dataclass(frozen=True)
class FrequencySpectrum:
    """Counts of types occurring exactly ``i`` times in ``n_tokens`` tokens."""

    n_tokens: int
    n_types: int
    spectrum: Mapping[int, int]


@dataclass(frozen=True)
class LexScores:
    fkgl: float
    yules_k: float


def fkgl_from_counts(words: int, sentences: int, syllables: int) -> float:
    if words < 1 or sentences < 1:
        raise ValueError(f"FKGL needs at least one word and one sentence, got "
                         f"words={words}, sentences={sentences}")
    return 0.39 * (words / sentences) + 11.8 * (syllables / words) - 15.59


def fkgl(stats: PreparedText) -> float:
    """Flesch-Kincaid grade level of a prepared text (unfiltered counts)."""
    return fkgl_from_counts(stats.word_count, stats.sentence_count, stats.syllable_count)


def frequency_spectrum(tokens: Iterable[Token | str]) -> FrequencySpectrum:
    counts = Counter(str(t) for t in tokens)
    if not counts:
        raise ValueError("frequency spectrum of an empty token list")
    spectrum = Counter(counts.values())
    return FrequencySpectrum(
        n_tokens=sum(counts.values()),
        n_types=len(counts),
        spectrum=dict(sorted(spectrum.items())),
    )


def yules_k(spec: FrequencySpectrum) -> float:
    """Yule's K: ``1e4 * (-1/N + sum_i f(i) (i/N)^2)``.

    Evaluated as ``1e4 * (S - N) / N^2`` with the integer ``S = sum_i f(i) i^2``,
    so the only rounding is the final division.
    """
    n = spec.n_tokens
    second_moment = sum(f * i * i for i, f in spec.spectrum.items())
    return 1e4 * (second_moment - n) / (n * n)


def score_prepared(prepared: PreparedText) -> LexScores:
    return LexScores(fkgl=fkgl(prepared), yules_k=yules_k(frequency_spectrum(prepared.tokens())))


def score_text(text: str, policy: StopPolicy | None = None) -> LexScores:
    """FKGL on the full prose and Yule's K over all word tokens (stopwords kept)."""
    return score_prepared(prepare(text, policy))
