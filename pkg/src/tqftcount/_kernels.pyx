# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels over a group multiplication table.

Signatures and results match :mod:`tqftcount._kernels_py` exactly.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int32_t idx_t


def commutator_counts(const idx_t[:, ::1] mul, const idx_t[::1] inv):
    """counts[g] = #{(a, b) : a b a^-1 b^-1 = g}."""
    cdef Py_ssize_t n = mul.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.zeros(n, dtype=np.int64)
    cdef Py_ssize_t a, b
    cdef idx_t ab, ia
    for a in range(n):
        ia = inv[a]
        for b in range(n):
            ab = mul[a, b]
            counts[mul[mul[ab, ia], inv[b]]] += 1
    return counts


def commutator_table(const idx_t[:, ::1] mul, const idx_t[::1] inv):
    cdef Py_ssize_t n = mul.shape[0]
    cdef cnp.ndarray[idx_t, ndim=2] out = np.empty((n, n), dtype=np.int32)
    cdef Py_ssize_t a, b
    cdef idx_t ia
    for a in range(n):
        ia = inv[a]
        for b in range(n):
            out[a, b] = mul[mul[mul[a, b], ia], inv[b]]
    return out


cdef long long _descend(const idx_t[:, ::1] mul, const idx_t[:, ::1] comm,
                        idx_t prefix, int pairs_left, idx_t identity):
    cdef Py_ssize_t n = mul.shape[0]
    cdef Py_ssize_t a, b
    cdef long long total = 0
    if pairs_left == 1:
        for a in range(n):
            for b in range(n):
                if mul[prefix, comm[a, b]] == identity:
                    total += 1
        return total
    for a in range(n):
        for b in range(n):
            total += _descend(mul, comm, mul[prefix, comm[a, b]], pairs_left - 1, identity)
    return total


def hom_count_naive(const idx_t[:, ::1] mul, const idx_t[::1] inv, int genus, int identity=0):
    """Count tuples (A1, B1, ..., Ag, Bg) with [A1, B1] ... [Ag, Bg] = 1 by visiting every tuple."""
    if genus == 0:
        return 1
    comm = commutator_table(mul, inv)
    cdef const idx_t[:, ::1] cview = comm
    return int(_descend(mul, cview, <idx_t>identity, genus, <idx_t>identity))


def conjugation_orbits(const idx_t[:, ::1] mul, const idx_t[::1] inv, const idx_t[::1] gens):
    """Label each element by the index of its orbit under conjugation by ``gens``.

    Orbits are numbered in order of their smallest element.
    """
    cdef Py_ssize_t n = mul.shape[0]
    cdef Py_ssize_t ngens = gens.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] label = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[idx_t, ndim=1] stack = np.empty(n, dtype=np.int32)
    cdef Py_ssize_t start, top, i
    cdef idx_t x, y, s
    cdef long long current = 0
    for start in range(n):
        if label[start] >= 0:
            continue
        label[start] = current
        stack[0] = <idx_t>start
        top = 1
        while top > 0:
            top -= 1
            x = stack[top]
            for i in range(ngens):
                s = gens[i]
                y = mul[mul[s, x], inv[s]]
                if label[y] < 0:
                    label[y] = current
                    stack[top] = y
                    top += 1
        current += 1
    return label
