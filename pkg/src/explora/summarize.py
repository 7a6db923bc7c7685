"""Extractive section summarizer.

Pipeline: split the paragraph into sentences, treat each sentence as a
document for TF-IDF, keep the top half by length-normalised score, cluster
the survivors with DBSCAN over cosine distance (noise points become
singleton clusters), rank clusters against the section heading and keep the
top 70%, then emit the surviving sentences in their original order.

The pairwise-distance and label-expansion loops run on the compiled kernels
when the extension is available (see :mod:`explora.kernels`).
"""
from __future__ import annotations

import math
from array import array
from dataclasses import dataclass

from explora import kernels
from explora.text import (
    EmptyInputError,
    IdfTable,
    TermVector,
    build_idf,
    cosine,
    sentence_score,
    split_sentences,
    tfidf_vector,
    tokenize,
)


@dataclass(frozen=True)
class SummarizerConfig:
    """Tunable knobs; defaults follow the shipped service config."""

    eps: float = 0.6
    min_pts: int = 2
    sentence_fraction: float = 0.5
    cluster_fraction: float = 0.7


@dataclass(frozen=True)
class ScoredSentence:
    index: int  # position in the source section, 0-based
    text: str
    tokens: tuple[str, ...]
    vector: TermVector
    score: float


@dataclass(frozen=True)
class Cluster:
    members: frozenset[int]  # original sentence indices
    centroid: TermVector

    def __post_init__(self):
        if not self.members:
            raise ValueError("cluster must have members")


@dataclass(frozen=True)
class Summary:
    section_heading: str
    sentences: tuple[tuple[int, str], ...]  # (original index, verbatim text)


def _keep_count(fraction: float, n: int) -> int:
    return max(1, math.ceil(fraction * n))


def select_top_sentences(
    scored: list[ScoredSentence], fraction: float = 0.5
) -> list[ScoredSentence]:
    """The max(1, ceil(fraction*n)) highest scorers, descending.

    Ties go to the sentence earlier in the section.
    """
    if not scored:
        raise EmptyInputError("no sentences to select from")
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must be in (0, 1]")
    ranked = sorted(scored, key=lambda s: (-s.score, s.index))
    return ranked[: _keep_count(fraction, len(scored))]


def _to_csr(points: list[TermVector]) -> tuple[array, array, array]:
    """Sparse dicts -> CSR arrays with term ids from the sorted vocabulary."""
    vocab: dict[str, int] = {
        term: i
        for i, term in enumerate(sorted({t for vec in points for t in vec}))
    }
    indptr = array("q", [0])
    terms = array("q")
    weights = array("d")
    for vec in points:
        for term, weight in sorted(vec.items(), key=lambda kv: vocab[kv[0]]):
            terms.append(vocab[term])
            weights.append(weight)
        indptr.append(len(terms))
    return indptr, terms, weights


def dbscan(points: list[TermVector], eps: float, min_pts: int) -> list[int]:
    """DBSCAN over cosine distance (1 - cosine), labels in input order.

    Returns one label per point: cluster ids from 0 in discovery order,
    -1 for noise. A point whose vector is empty is at distance 1 from
    everything, itself included.
    """
    if eps <= 0.0:
        raise ValueError("eps must be > 0")
    if min_pts < 1:
        raise ValueError("min_pts must be >= 1")
    if not points:
        return []
    indptr, terms, weights = _to_csr(points)
    dist = kernels.pairwise_cosine_distances(indptr, terms, weights)
    return list(kernels.dbscan_from_distances(dist, len(points), eps, min_pts))


def _mean_vector(vectors: list[TermVector]) -> TermVector:
    acc: dict[str, float] = {}
    for vec in vectors:
        for term, weight in vec.items():
            acc[term] = acc.get(term, 0.0) + weight
    return {t: w / len(vectors) for t, w in sorted(acc.items()) if w > 0.0}


def make_clusters(
    selected: list[ScoredSentence], labels: list[int]
) -> list[Cluster]:
    """Group selected sentences by DBSCAN label; noise becomes singletons."""
    by_label: dict[int, list[ScoredSentence]] = {}
    singletons: list[ScoredSentence] = []
    for sent, label in zip(selected, labels):
        if label == -1:
            singletons.append(sent)
        else:
            by_label.setdefault(label, []).append(sent)
    clusters = []
    for label in sorted(by_label):
        group = by_label[label]
        clusters.append(
            Cluster(
                members=frozenset(s.index for s in group),
                centroid=_mean_vector([s.vector for s in group]),
            )
        )
    for sent in singletons:
        clusters.append(
            Cluster(members=frozenset([sent.index]), centroid=dict(sent.vector))
        )
    return clusters


def rank_clusters(
    clusters: list[Cluster],
    heading_vector: TermVector,
    fraction: float = 0.7,
) -> list[Cluster]:
    """Keep the max(1, ceil(fraction*c)) clusters most similar to the heading.

    Similarity is cosine(centroid, heading); ties go to the cluster whose
    earliest member appears first in the section.
    """
    if not clusters:
        raise EmptyInputError("no clusters to rank")
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must be in (0, 1]")
    ranked = sorted(
        clusters,
        key=lambda c: (-cosine(c.centroid, heading_vector), min(c.members)),
    )
    return ranked[: _keep_count(fraction, len(clusters))]


def score_sentences(sentences: list[str], idf: IdfTable) -> list[ScoredSentence]:
    """Tokenize, vectorize and score each sentence against the given table.

    A sentence that tokenizes to nothing gets an empty vector and score 0
    so it stays a valid (if hopeless) candidate.
    """
    scored = []
    for i, text in enumerate(sentences):
        tokens = tokenize(text)
        vector = tfidf_vector(tokens, idf)
        score = sentence_score(tokens, idf) if tokens else 0.0
        scored.append(
            ScoredSentence(
                index=i, text=text, tokens=tuple(tokens), vector=vector, score=score
            )
        )
    return scored


def summarize_section(
    heading: str, paragraph: str, cfg: SummarizerConfig | None = None
) -> Summary:
    """Summarize one section's prose; see the module docstring for stages.

    A single-sentence paragraph short-circuits to that sentence.
    """
    cfg = cfg or SummarizerConfig()
    if not paragraph.strip():
        raise EmptyInputError("nothing to summarize")
    sentences = split_sentences(paragraph)
    if len(sentences) == 1:
        return Summary(section_heading=heading, sentences=((0, sentences[0]),))

    idf = build_idf([tokenize(s) for s in sentences])
    scored = score_sentences(sentences, idf)
    selected = select_top_sentences(scored, cfg.sentence_fraction)
    labels = dbscan([s.vector for s in selected], cfg.eps, cfg.min_pts)
    clusters = make_clusters(selected, labels)
    heading_vector = tfidf_vector(tokenize(heading), idf)
    kept = rank_clusters(clusters, heading_vector, cfg.cluster_fraction)

    surviving = sorted(i for cluster in kept for i in cluster.members)
    return Summary(
        section_heading=heading,
        sentences=tuple((i, sentences[i]) for i in surviving),
    )
