import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jmsnet.corpus_io import load_corpus
from jmsnet.lexmetrics import (fkgl, fkgl_from_counts, frequency_spectrum, score_text,
                               yules_k)
from jmsnet.textprep import prepare

CITED = ("The International Journal of Educational Organization and Leadership inquiries "
         "into the nature and processes of effective educational administration and leadership.")

words = st.lists(st.sampled_from("abcdefghij"), min_size=1, max_size=60)


def k_exact(tokens) -> Fraction:
    """Yule's K straight from the definition, in rationals."""
    counts = Counter(tokens)
    n = sum(counts.values())
    spectrum = Counter(counts.values())
    return 10_000 * (Fraction(-1, n) + sum(f * Fraction(i, n) ** 2 for i, f in spectrum.items()))


def test_spectrum_unique():
    spec = frequency_spectrum(["a", "b", "c"])
    assert (spec.n_tokens, spec.n_types, dict(spec.spectrum)) == (3, 3, {1: 3})


def test_spectrum_counts():
    spec = frequency_spectrum(["a", "a", "b"])
    assert (spec.n_tokens, spec.n_types, dict(spec.spectrum)) == (3, 2, {1: 1, 2: 1})


def test_spectrum_cited_sentence_identities():
    tokens = prepare(CITED).tokens()
    spec = frequency_spectrum(tokens)
    brute = Counter(Counter(t.surface for t in tokens).values())
    assert dict(spec.spectrum) == dict(brute)
    assert sum(spec.spectrum.values()) == spec.n_types
    assert sum(i * f for i, f in spec.spectrum.items()) == spec.n_tokens == len(tokens)


def test_spectrum_empty():
    with pytest.raises(ValueError):
        frequency_spectrum([])


def test_k_all_unique_is_zero():
    assert yules_k(frequency_spectrum(list("abcdefg"))) == 0.0


@pytest.mark.parametrize("n", [2, 10, 100])
def test_k_single_type(n):
    assert yules_k(frequency_spectrum(["a"] * n)) == 1e4 * (1 - 1 / n)


def test_k_aab():
    assert yules_k(frequency_spectrum(["a", "a", "b"])) == pytest.approx(2222.2222222222, abs=1e-9)


@given(words)
def test_k_matches_rational_definition(tokens):
    assert yules_k(frequency_spectrum(tokens)) == pytest.approx(float(k_exact(tokens)),
                                                                rel=1e-12, abs=1e-9)


@given(words, st.randoms())
def test_k_permutation_invariant(tokens, rnd):
    shuffled = list(tokens)
    rnd.shuffle(shuffled)
    assert yules_k(frequency_spectrum(shuffled)) == yules_k(frequency_spectrum(tokens))


@given(words, st.integers(1, 5))
def test_k_repetition_spectrum(tokens, k):
    base = frequency_spectrum(tokens)
    rep = frequency_spectrum(tokens * k)
    assert rep.n_tokens == k * base.n_tokens
    assert dict(rep.spectrum) == {i * k: f for i, f in base.spectrum.items()}
    assert yules_k(rep) == pytest.approx(float(k_exact(tokens * k)), rel=1e-12, abs=1e-9)


@given(words)
def test_k_bounds(tokens):
    n = len(tokens)
    k = yules_k(frequency_spectrum(tokens))
    assert 0 <= k <= 1e4 * (1 - 1 / n) + 1e-9


def test_fkgl_hand_cases():
    assert fkgl_from_counts(6, 1, 6) == pytest.approx(-1.45, abs=1e-12)
    assert fkgl_from_counts(1, 1, 1) == pytest.approx(-3.40, abs=1e-12)
    assert fkgl(prepare("The cat sat on the mat.")) == pytest.approx(-1.45, abs=1e-12)


@pytest.mark.parametrize("args", [(0, 1, 0), (3, 0, 3)])
def test_fkgl_rejects_zero_counts(args):
    with pytest.raises(ValueError):
        fkgl_from_counts(*args)


@given(st.integers(1, 500), st.integers(1, 50), st.integers(0, 1500))
def test_fkgl_monotone(w, s, syl):
    syl = max(syl, w)
    base = fkgl_from_counts(w, s, syl)
    assert fkgl_from_counts(w, s, syl + 1) > base
    if s > 1:
        # more words per sentence at fixed syllables-per-word ratio
        assert fkgl_from_counts(w, s - 1, syl) > base


def test_technical_paragraph_in_band(data_dir):
    text = (data_dir / "technical_paragraph.txt").read_text(encoding="utf-8")
    assert 9 <= score_text(text).fkgl <= 23


def test_single_word_text():
    scores = score_text("Word")
    assert scores.fkgl == pytest.approx(-3.40, abs=1e-12)
    assert scores.yules_k == 0.0


def test_doubled_text():
    text = "Research on markets and firms. The markets move fast, and firms adapt."
    once, twice = prepare(text), prepare(text + " " + text)
    assert twice.sentence_count == 2 * once.sentence_count
    assert fkgl(twice) == fkgl(once)
    s1 = frequency_spectrum(once.tokens())
    s2 = frequency_spectrum(twice.tokens())
    assert dict(s2.spectrum) == {2 * i: f for i, f in s1.spectrum.items()}


def test_cited_sentence_has_highest_k(mini_corpus_path):
    corpus = load_corpus(mini_corpus_path)
    ks = {r.id: score_text(r.mission).yules_k for r in corpus}
    cited = [r.id for r in corpus if r.mission.startswith(CITED[:60])]
    assert cited == ["J12"]
    assert max(ks, key=ks.get) == "J12"


def test_k_uses_stopwords():
    # "the" repeated keeps K above zero even though it is a stopword
    assert score_text("The model and the data and the theory.").yules_k > 0
    assert math.isfinite(score_text("Alpha beta gamma.").fkgl)
