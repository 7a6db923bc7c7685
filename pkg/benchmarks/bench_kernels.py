#!/usr/bin/env python3
"""Benchmark the clustering hot path: compiled kernels vs pure Python.

Times the pairwise cosine-distance matrix plus DBSCAN labeling over random
sparse TF-IDF-like vectors, at several point counts. Run from the repo root:

    python benchmarks/bench_kernels.py
"""
import random
import time

from explora.kernels import _pykernels
from explora.summarize import _to_csr

try:
    from explora.kernels import _ckernels
except ImportError:
    _ckernels = None

SIZES = (50, 150, 300)
VOCAB = 500
TERMS_PER_VECTOR = 12
EPS = 0.6
MIN_PTS = 2
REPEATS = 5


def random_vectors(rng, n):
    terms = [f"t{i}" for i in range(VOCAB)]
    return [
        {t: rng.uniform(0.05, 4.0) for t in rng.sample(terms, TERMS_PER_VECTOR)}
        for _ in range(n)
    ]


def run_backend(backend, indptr, terms, weights, n):
    best = float("inf")
    labels = None
    for _ in range(REPEATS):
        started = time.perf_counter()
        dist = backend.pairwise_cosine_distances(indptr, terms, weights)
        labels = backend.dbscan_from_distances(dist, n, EPS, MIN_PTS)
        best = min(best, time.perf_counter() - started)
    return best, labels


def main():
    rng = random.Random(2468)
    print(f"{'points':>7} {'python (ms)':>12} {'compiled (ms)':>14} {'speedup':>8}")
    for n in SIZES:
        points = random_vectors(rng, n)
        indptr, terms, weights = _to_csr(points)
        py_time, py_labels = run_backend(_pykernels, indptr, terms, weights, n)
        if _ckernels is None:
            print(f"{n:>7} {py_time * 1e3:>12.2f} {'not built':>14} {'-':>8}")
            continue
        c_time, c_labels = run_backend(_ckernels, indptr, terms, weights, n)
        assert list(py_labels) == list(c_labels), "backends disagree"
        print(
            f"{n:>7} {py_time * 1e3:>12.2f} {c_time * 1e3:>14.2f} "
            f"{py_time / c_time:>7.1f}x"
        )


if __name__ == "__main__":
    main()
