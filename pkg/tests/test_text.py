import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from explora.text import (
    EmptyInputError,
    build_idf,
    cosine,
    jaccard,
    sentence_score,
    split_sentences,
    tokenize,
)

LN2 = math.log(2)

# Small alphabet so random vectors share terms often.
terms_st = st.sampled_from(["a", "b", "c", "d", "e", "f", "g", "h"])
vector_st = st.dictionaries(
    terms_st,
    st.floats(min_value=1e-6, max_value=1e3, allow_nan=False),
    min_size=1,
    max_size=6,
)
token_st = st.text(alphabet="abcdefg", min_size=1, max_size=5)


class TestTokenize:
    def test_backstory_topic(self):
        assert tokenize("Martin Luther King Jr.") == ["martin", "luther", "king", "jr"]

    def test_empty(self):
        assert tokenize("") == []

    def test_case_and_punctuation_fold(self):
        assert tokenize("A a, A!") == ["a", "a", "a"]

    def test_inner_punctuation_kept(self):
        assert tokenize("rock'n'roll --what--") == ["rock'n'roll", "what"]

    @given(st.lists(token_st, max_size=8))
    def test_idempotent_on_own_output(self, tokens):
        once = tokenize(" ".join(tokens))
        assert tokenize(" ".join(once)) == once


class TestSplitSentences:
    def test_two_terminators(self):
        assert split_sentences("He led. He spoke!") == ["He led.", "He spoke!"]

    def test_no_terminator(self):
        assert split_sentences("No terminator") == ["No terminator"]

    def test_mixed_terminators_by_hand(self):
        # Rule applied by hand: split after '?' and '.', trailing segment kept.
        assert split_sentences("A? B. C") == ["A?", "B.", "C"]

    def test_terminator_inside_word_does_not_split(self):
        assert split_sentences("see example.com now") == ["see example.com now"]

    @given(st.text(alphabet="ab .!?", max_size=60))
    def test_concatenation_recovers_input_modulo_whitespace(self, text):
        parts = split_sentences(text)
        assert "".join("".join(parts).split()) == "".join(text.split())
        assert all(p == p.strip() and p for p in parts)


class TestBuildIdf:
    def test_hand_counts(self):
        table = build_idf([["a", "b"], ["a", "c"]])
        assert table.df == {"a": 2, "b": 1, "c": 1}
        assert table.idf("a") == 0.0
        assert table.idf("b") == pytest.approx(LN2, abs=1e-12)
        assert table.idf("c") == pytest.approx(LN2, abs=1e-12)

    def test_single_document_all_zero(self):
        table = build_idf([["x", "y", "z"]])
        assert all(table.idf(t) == 0.0 for t in ("x", "y", "z"))

    def test_term_in_all_docs_zero(self):
        table = build_idf([["t", "a"], ["t", "b"], ["t"]])
        assert table.idf("t") == 0.0

    def test_empty_corpus_rejected(self):
        with pytest.raises(EmptyInputError):
            build_idf([])

    @given(st.lists(st.lists(token_st, min_size=0, max_size=5), min_size=1, max_size=8))
    def test_idf_nonnegative_and_zero_iff_ubiquitous(self, docs):
        table = build_idf(docs)
        for term in table.df:
            value = table.idf(term)
            assert value >= 0.0
            in_all = all(term in doc for doc in docs)
            assert (value == 0.0) == in_all


class TestSentenceScore:
    def test_hand_computed_half_ln2(self):
        table = build_idf([["a", "b"], ["a", "c"]])
        assert sentence_score(["a", "b"], table) == pytest.approx(LN2 / 2, abs=1e-12)

    def test_all_zero_idf(self):
        table = build_idf([["a"]])
        assert sentence_score(["a", "a"], table) == 0.0

    def test_repeated_token_hand_computed(self):
        table = build_idf([["a", "b"], ["a", "c"]])
        # [b, b]: (2 * ln2) / 2 = ln2
        assert sentence_score(["b", "b"], table) == pytest.approx(LN2, abs=1e-12)

    def test_empty_sentence_rejected(self):
        with pytest.raises(EmptyInputError):
            sentence_score([], build_idf([["a"]]))

    @given(st.lists(token_st, min_size=1, max_size=10), st.randoms())
    def test_invariant_under_reordering(self, tokens, rng):
        table = build_idf([tokens, tokens[:1], ["zzz"]])
        shuffled = list(tokens)
        rng.shuffle(shuffled)
        assert sentence_score(shuffled, table) == sentence_score(tokens, table)


class TestCosine:
    def test_identical_vectors_exactly_one(self):
        vec = {"x": 1.3, "y": 0.2, "z": 7.0}
        assert cosine(vec, dict(vec)) == 1.0

    def test_disjoint_supports_zero(self):
        assert cosine({"x": 1.0}, {"y": 1.0}) == 0.0

    def test_half_overlap_hand_computed(self):
        # 1 / (sqrt(2) * sqrt(2)) = 0.5
        assert cosine({"x": 1.0, "y": 1.0}, {"x": 1.0, "z": 1.0}) == pytest.approx(
            0.5, abs=1e-12
        )

    def test_empty_vector_zero(self):
        assert cosine({}, {"x": 1.0}) == 0.0
        assert cosine({}, {}) == 0.0

    @given(vector_st, vector_st)
    def test_symmetry(self, a, b):
        assert cosine(a, b) == pytest.approx(cosine(b, a), abs=1e-12)

    @given(vector_st, vector_st, st.floats(min_value=1e-3, max_value=1e3))
    def test_scale_invariance(self, a, b, lam):
        scaled = {t: lam * w for t, w in a.items()}
        assert cosine(scaled, b) == pytest.approx(cosine(a, b), abs=1e-9)

    @given(vector_st, vector_st)
    def test_range(self, a, b):
        assert 0.0 <= cosine(a, b) <= 1.0


class TestJaccard:
    def test_three_quarters(self):
        a = set(tokenize("martin luther king jr"))
        b = set(tokenize("martin luther king"))
        assert jaccard(a, b) == 0.75

    def test_empty_sets(self):
        assert jaccard(set(), {"a"}) == 0.0
        assert jaccard(set(), set()) == 0.0


def test_vector_math_property_sweep():
    # Bulk random check at the acceptance tolerances, cheap and seeded.
    rng = random.Random(20260810)
    terms = [f"t{i}" for i in range(12)]
    for _ in range(2000):
        a = {t: rng.uniform(0.01, 5.0) for t in rng.sample(terms, rng.randint(1, 6))}
        b = {t: rng.uniform(0.01, 5.0) for t in rng.sample(terms, rng.randint(1, 6))}
        lam = rng.uniform(1e-3, 1e3)
        assert abs(cosine(a, b) - cosine(b, a)) <= 1e-9
        assert abs(cosine({t: lam * w for t, w in a.items()}, b) - cosine(a, b)) <= 1e-9
        assert cosine(a, dict(a)) == 1.0
