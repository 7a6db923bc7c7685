# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the clustering hot path.

Mirrors ``_pykernels`` exactly: same CSR inputs, same scan order, same
arithmetic order (the build disables FP contraction), so the two backends
produce identical distances and labels.
"""
from cpython cimport array
from cpython.mem cimport PyMem_Free, PyMem_Malloc
from libc.math cimport sqrt

import array as _arraymod

BACKEND = "c"

cdef array.array _DOUBLE_TEMPLATE = _arraymod.array("d", [])


def pairwise_cosine_distances(long long[::1] indptr, long long[::1] terms,
                              double[::1] weights):
    """Flat row-major n*n ``array('d')`` of cosine distances (1 - cosine)."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t i, j, k, a, b, a_end, b_end
    cdef long long ta, tb
    cdef double acc, dot, cos, d

    cdef array.array out = array.clone(_DOUBLE_TEMPLATE, n * n, zero=False)
    cdef double* dist = out.data.as_doubles
    cdef double* norms = <double*> PyMem_Malloc(n * sizeof(double)) if n else NULL
    if n and norms == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            acc = 0.0
            for k in range(indptr[i], indptr[i + 1]):
                acc += weights[k] * weights[k]
            norms[i] = acc

        for i in range(n):
            for j in range(i, n):
                d = 1.0
                if norms[i] > 0.0 and norms[j] > 0.0:
                    dot = 0.0
                    a = indptr[i]
                    a_end = indptr[i + 1]
                    b = indptr[j]
                    b_end = indptr[j + 1]
                    while a < a_end and b < b_end:
                        ta = terms[a]
                        tb = terms[b]
                        if ta == tb:
                            dot += weights[a] * weights[b]
                            a += 1
                            b += 1
                        elif ta < tb:
                            a += 1
                        else:
                            b += 1
                    if dot > 0.0:
                        cos = dot / sqrt(norms[i] * norms[j])
                        if cos > 1.0:
                            cos = 1.0
                        d = 1.0 - cos
                dist[i * n + j] = d
                dist[j * n + i] = d
        return out
    finally:
        PyMem_Free(norms)


def dbscan_from_distances(double[::1] dist, Py_ssize_t n, double eps,
                          Py_ssize_t min_pts):
    """DBSCAN labels over a precomputed distance matrix (noise = -1)."""
    cdef Py_ssize_t UNVISITED = -2
    cdef Py_ssize_t i, j, q, k, qlen, count, cid
    # Queue entries may repeat (a noise point adjacent to several cores is
    # appended by each), so size for the worst case n seeds + n appends per
    # expanded core.
    cdef Py_ssize_t* labels = <Py_ssize_t*> PyMem_Malloc(n * sizeof(Py_ssize_t)) if n else NULL
    cdef Py_ssize_t* queue = <Py_ssize_t*> PyMem_Malloc(n * (n + 1) * sizeof(Py_ssize_t)) if n else NULL
    if n and (labels == NULL or queue == NULL):
        PyMem_Free(labels)
        PyMem_Free(queue)
        raise MemoryError()
    try:
        for i in range(n):
            labels[i] = UNVISITED
        cid = 0
        for i in range(n):
            if labels[i] != UNVISITED:
                continue
            count = 0
            for j in range(n):
                if dist[i * n + j] <= eps:
                    count += 1
            if count < min_pts:
                labels[i] = -1
                continue
            labels[i] = cid
            qlen = 0
            for j in range(n):
                if j != i and dist[i * n + j] <= eps:
                    queue[qlen] = j
                    qlen += 1
            k = 0
            while k < qlen:
                q = queue[k]
                k += 1
                if labels[q] == -1:
                    labels[q] = cid  # noise becomes a border point
                    continue
                if labels[q] != UNVISITED:
                    continue
                labels[q] = cid
                count = 0
                for j in range(n):
                    if dist[q * n + j] <= eps:
                        count += 1
                if count >= min_pts:
                    for j in range(n):
                        if dist[q * n + j] <= eps and (
                                labels[j] == UNVISITED or labels[j] == -1):
                            queue[qlen] = j
                            qlen += 1
            cid += 1
        return [labels[i] for i in range(n)]
    finally:
        PyMem_Free(labels)
        PyMem_Free(queue)
