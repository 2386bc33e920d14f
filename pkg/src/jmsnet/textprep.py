"""Sentence splitting, tokenization, stopword filtering and syllable counts."""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

DEFAULT_EXTRA_DROP = frozenset({"journal", "journals"})

# letters/digits with internal hyphens or apostrophes kept
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’\-‐][^\W_]+)*")
_SENTENCE_END_RE = re.compile(r"[.!?]+[\"'”’)\]]*(?=\s|$)")
_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")
_DIGIT_GROUP_RE = re.compile(r"\d+")


def read_word_list(path: str | Path) -> frozenset[str]:
    """Plain-text word list: one entry per line, ``#`` starts a comment."""
    text = Path(path).read_text(encoding="utf-8")
    return _parse_word_list(text)


def _parse_word_list(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            words.add(line)
    return frozenset(words)


@lru_cache(maxsize=None)
def _bundled(name: str) -> frozenset[str]:
    return _parse_word_list(resources.files("jmsnet.data").joinpath(name).read_text("utf-8"))


def default_stopwords() -> frozenset[str]:
    return _bundled("stopwords_en.txt")


def default_abbreviations() -> frozenset[str]:
    return _bundled("abbreviations_en.txt")


@dataclass(frozen=True)
class Token:
    surface: str
    position: tuple[int, int]

    def __str__(self) -> str:
        return self.surface


@dataclass(frozen=True)
class StopPolicy:
    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    extra_drop: frozenset[str] = DEFAULT_EXTRA_DROP
    drop_numeric: bool = False
    merge_plural_singular: bool = False

    def __post_init__(self):
        object.__setattr__(self, "stopwords", frozenset(w.lower() for w in self.stopwords))
        object.__setattr__(self, "extra_drop", frozenset(w.lower() for w in self.extra_drop))

    @classmethod
    def empty(cls) -> StopPolicy:
        return cls(frozenset(), frozenset())

    def with_overrides(self, stopwords_file: str | Path | None = None,
                       drop: Iterable[str] = ()) -> StopPolicy:
        policy = self
        if stopwords_file is not None:
            policy = replace(policy, stopwords=read_word_list(stopwords_file))
        drop = [w.strip().lower() for w in drop if w.strip()]
        if drop:
            policy = replace(policy, extra_drop=policy.extra_drop | frozenset(drop))
        return policy

    def drops(self, surface: str) -> bool:
        if surface in self.stopwords or surface in self.extra_drop:
            return True
        return self.drop_numeric and is_numeric(surface)


@dataclass(frozen=True)
class PreparedText:
    sentences: tuple[tuple[Token, ...], ...]
    filtered_sentences: tuple[tuple[Token, ...], ...]
    word_count: int
    sentence_count: int
    syllable_count: int

    def tokens(self) -> list[Token]:
        return [t for s in self.sentences for t in s]

    def filtered_tokens(self) -> list[Token]:
        return [t for s in self.filtered_sentences for t in s]


def split_sentences(text: str, abbreviations: frozenset[str] | None = None) -> list[str]:
    """Split on terminal ``.``, ``!`` or ``?`` followed by whitespace.

    A period closing a known abbreviation (``e.g.``, ``vol.``...) does not end
    a sentence. Text without terminal punctuation is a single sentence.
    """
    if not text or not text.strip():
        raise ValueError("empty text")
    if abbreviations is None:
        abbreviations = default_abbreviations()
    max_words = max((a.count(" ") + 1 for a in abbreviations), default=1)

    sentences = []
    start = 0
    for match in _SENTENCE_END_RE.finditer(text):
        end = match.end()
        if match.group().startswith(".") and len(match.group().rstrip("\"'”’)]")) == 1:
            head = text[start:match.start() + 1].split()
            if any(" ".join(head[-k:]).lower() in abbreviations
                   for k in range(1, min(max_words, len(head)) + 1)):
                continue
        chunk = text[start:end].strip()
        if chunk:
            sentences.append(chunk)
        start = end
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def tokenize(sentence: str, sentence_index: int = 0) -> list[Token]:
    """Lowercase word tokens in order; punctuation other than internal hyphens
    and apostrophes is discarded."""
    return [
        Token(m.group().lower().replace("’", "'").replace("‐", "-"), (sentence_index, i))
        for i, m in enumerate(_TOKEN_RE.finditer(sentence))
    ]


def is_numeric(surface: str) -> bool:
    return not any(ch.isalpha() for ch in surface)


def singularize(word: str, guard: frozenset[str] | None = None) -> str:
    """Naive ``-s``/``-es`` stripping; words in ``guard`` are left alone."""
    if guard is None:
        guard = _bundled("plural_guard_en.txt")
    if word in guard or len(word) <= 3 or is_numeric(word):
        return word
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith(("sses", "xes", "zes", "ches", "shes")):
        return word[:-2]
    if word.endswith("s") and not word.endswith(("ss", "us", "is", "'s")):
        return word[:-1]
    return word


def apply_stoppolicy(tokens: Iterable[Token], policy: StopPolicy) -> list[Token]:
    kept = [t for t in tokens if not policy.drops(t.surface)]
    if policy.merge_plural_singular:
        kept = [replace(t, surface=singularize(t.surface)) for t in kept]
        kept = [t for t in kept if not policy.drops(t.surface)]
    return kept


def count_syllables(word: str, exceptions: Mapping[str, int] | None = None) -> int:
    """Heuristic syllable count, at least 1.

    Counts maximal vowel groups (``y`` included), minus a silent final ``e``
    unless the word ends in consonant + ``le``. Purely numeric tokens count one
    syllable per digit group.
    """
    word = word.lower()
    if exceptions and word in exceptions:
        return exceptions[word]
    if is_numeric(word):
        return max(1, len(_DIGIT_GROUP_RE.findall(word)))
    word = word.split("'", 1)[0] or word
    return max(1, sum(_count_part(part) for part in word.split("-")))


def _count_part(part: str) -> int:
    if not part:
        return 0
    if is_numeric(part):
        return len(_DIGIT_GROUP_RE.findall(part))
    groups = len(_VOWEL_GROUP_RE.findall(part))
    if (
        part.endswith("e")
        and len(part) > 2
        and part[-2] not in "aeiouy"
        and not (part.endswith("le") and part[-3] not in "aeiouy")
    ):
        groups -= 1
    return max(1, groups)


def prepare(text: str, policy: StopPolicy | None = None,
            abbreviations: frozenset[str] | None = None) -> PreparedText:
    """Tokenize ``text`` sentence by sentence and apply ``policy``.

    Word, sentence and syllable counts describe the unfiltered prose.
    """
    if policy is None:
        policy = StopPolicy()
    raw_sentences = split_sentences(text, abbreviations)
    sentences = []
    filtered = []
    for index, raw in enumerate(raw_sentences):
        tokens = tokenize(raw, index)
        if not tokens:
            continue
        sentences.append(tuple(tokens))
        filtered.append(tuple(apply_stoppolicy(tokens, policy)))
    word_count = sum(len(s) for s in sentences)
    syllables = sum(count_syllables(t.surface) for s in sentences for t in s)
    return PreparedText(
        sentences=tuple(sentences),
        filtered_sentences=tuple(filtered),
        word_count=word_count,
        sentence_count=max(1, len(sentences)),
        syllable_count=syllables,
    )
