"""Text and sparse-vector primitives: tokenization, sentence splitting,
TF-IDF weighting and cosine similarity.

Every function here is pure and deterministic; the summarizer, the image
ranker, the intent matcher and the query archive are all built on top of
these. Term vectors are plain ``dict[str, float]`` maps with no zero-weight
entries stored.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

# A term vector is a sparse map term -> nonnegative weight.
TermVector = dict[str, float]

_SENTENCE_END = re.compile(r"(?<=[.!?])(?=\s|$)")


class EmptyInputError(ValueError):
    """Raised when an operation requires nonempty input."""


def tokenize(text: str) -> list[str]:
    """Split ``text`` into lowercase tokens.

    Tokens are whitespace-separated runs with leading/trailing
    non-alphanumeric characters stripped; empty tokens are dropped. No
    stopword removal or stemming takes place.
    """
    tokens = []
    for raw in text.lower().split():
        start, end = 0, len(raw)
        while start < end and not raw[start].isalnum():
            start += 1
        while end > start and not raw[end - 1].isalnum():
            end -= 1
        if start < end:
            tokens.append(raw[start:end])
    return tokens


def split_sentences(paragraph: str) -> list[str]:
    """Split a paragraph into sentences.

    A sentence ends after '.', '!' or '?' followed by whitespace or end of
    text. Terminators are kept, segments are trimmed and empty segments
    dropped, so joining the result recovers the input modulo inter-sentence
    whitespace. Abbreviations are not special-cased ("Jr." ends a sentence).
    """
    parts = _SENTENCE_END.split(paragraph)
    return [p.strip() for p in parts if p.strip()]


@dataclass
class IdfTable:
    """Document-frequency statistics over a corpus of token lists."""

    n_docs: int
    df: dict[str, int]

    def idf(self, term: str) -> float:
        """ln(n_docs / df), and 0.0 for terms never seen."""
        count = self.df.get(term)
        if not count:
            return 0.0
        return math.log(self.n_docs / count)


def build_idf(documents: list[list[str]]) -> IdfTable:
    """Count document frequencies over ``documents`` (lists of tokens).

    Raises EmptyInputError when no documents are given. A term present in
    every document gets idf 0.
    """
    if not documents:
        raise EmptyInputError("no documents")
    df: dict[str, int] = {}
    for doc in documents:
        for term in set(doc):
            df[term] = df.get(term, 0) + 1
    return IdfTable(n_docs=len(documents), df=df)


def sentence_score(sentence_tokens: list[str], idf: IdfTable) -> float:
    """Length-normalised TF-IDF score of one sentence.

    The sum of idf over token occurrences (tf taken as the raw
    within-sentence count) divided by the token count of the sentence.
    """
    if not sentence_tokens:
        raise EmptyInputError("empty sentence")
    counts: dict[str, int] = {}
    for tok in sentence_tokens:
        counts[tok] = counts.get(tok, 0) + 1
    # Sum per distinct term in sorted order so the score is exactly
    # invariant under token reordering.
    total = sum(n * idf.idf(t) for t, n in sorted(counts.items()))
    return total / len(sentence_tokens)


def tf_vector(tokens: list[str]) -> TermVector:
    """Raw term-count vector of a token list."""
    vec: TermVector = {}
    for tok in tokens:
        vec[tok] = vec.get(tok, 0.0) + 1.0
    return vec


def tfidf_vector(tokens: list[str], idf: IdfTable) -> TermVector:
    """tf*idf vector of a token list; zero-weight terms are not stored."""
    vec: TermVector = {}
    for term, count in tf_vector(tokens).items():
        weight = count * idf.idf(term)
        if weight > 0.0:
            vec[term] = weight
    return vec


def cosine(a: TermVector, b: TermVector) -> float:
    """Cosine similarity of two sparse vectors, in [0, 1].

    Returns 0.0 when either vector is empty or all-zero. Shared terms are
    accumulated in sorted order, which makes the result symmetric in its
    arguments and exactly 1.0 for identical nonzero vectors.
    """
    if not a or not b:
        return 0.0
    shared = sorted(a.keys() & b.keys())
    dot = sum(a[t] * b[t] for t in shared)
    if dot == 0.0:
        return 0.0
    na = sum(w * w for _, w in sorted(a.items()))
    nb = sum(w * w for _, w in sorted(b.items()))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return min(1.0, dot / math.sqrt(na * nb))


def jaccard(a: set[str], b: set[str]) -> float:
    """Token-set Jaccard similarity; 0.0 when either set is empty."""
    if not a or not b:
        return 0.0
    return len(a & b) / len(a | b)
