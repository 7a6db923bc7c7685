"""Pure-Python kernels for the clustering hot path.

Same contract as the compiled twin in ``_ckernels.pyx``: sparse rows arrive
in CSR form (indptr / term ids / weights, term ids sorted within each row),
``pairwise_cosine_distances`` returns a flat row-major ``array('d')`` and
``dbscan_from_distances`` a list of labels. Arithmetic is ordered exactly
like the compiled version so both backends agree to the last bit.
"""
from __future__ import annotations

import math
from array import array

BACKEND = "python"


def pairwise_cosine_distances(indptr, terms, weights) -> array:
    """Flat row-major n*n matrix of cosine distances (1 - cosine).

    A row with no stored terms (or zero norm) has distance 1.0 to every
    row, itself included.
    """
    n = len(indptr) - 1
    norms = [0.0] * n
    for i in range(n):
        acc = 0.0
        for k in range(indptr[i], indptr[i + 1]):
            acc += weights[k] * weights[k]
        norms[i] = acc

    dist = array("d", bytes(8 * n * n))
    for i in range(n):
        for j in range(i, n):
            d = 1.0
            if norms[i] > 0.0 and norms[j] > 0.0:
                dot = 0.0
                a, a_end = indptr[i], indptr[i + 1]
                b, b_end = indptr[j], indptr[j + 1]
                while a < a_end and b < b_end:
                    ta, tb = terms[a], terms[b]
                    if ta == tb:
                        dot += weights[a] * weights[b]
                        a += 1
                        b += 1
                    elif ta < tb:
                        a += 1
                    else:
                        b += 1
                if dot > 0.0:
                    cos = dot / math.sqrt(norms[i] * norms[j])
                    if cos > 1.0:
                        cos = 1.0
                    d = 1.0 - cos
            dist[i * n + j] = d
            dist[j * n + i] = d
    return dist


def dbscan_from_distances(dist, n: int, eps: float, min_pts: int) -> list[int]:
    """Label points by DBSCAN over a precomputed distance matrix.

    Neighborhoods are ``d <= eps`` (a point is its own neighbor whenever its
    self-distance allows). Points are scanned in input order; cluster ids
    count up from 0 in discovery order and noise is -1.
    """
    UNVISITED = -2
    labels = [UNVISITED] * n
    cid = 0
    for i in range(n):
        if labels[i] != UNVISITED:
            continue
        seeds = [j for j in range(n) if dist[i * n + j] <= eps]
        if len(seeds) < min_pts:
            labels[i] = -1
            continue
        labels[i] = cid
        queue = [j for j in seeds if j != i]
        k = 0
        while k < len(queue):
            q = queue[k]
            k += 1
            if labels[q] == -1:
                labels[q] = cid  # noise becomes a border point
                continue
            if labels[q] != UNVISITED:
                continue
            labels[q] = cid
            reach = [j for j in range(n) if dist[q * n + j] <= eps]
            if len(reach) >= min_pts:
                for j in reach:
                    if labels[j] == UNVISITED or labels[j] == -1:
                        queue.append(j)
        cid += 1
    return labels
