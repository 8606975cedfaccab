"""Pure-Python (numpy) versions of the enumeration kernels.

Used when the compiled extension is unavailable or ``TQFTCOUNT_PURE=1``.
"""

import itertools

import numpy as np


def commutator_table(mul, inv):
    n = mul.shape[0]
    a = np.arange(n)[:, None]
    ab = mul[a, np.arange(n)[None, :]]
    return mul[mul[ab, inv[a]], inv[None, :]].astype(np.int32)


def commutator_counts(mul, inv):
    """counts[g] = #{(a, b) : a b a^-1 b^-1 = g}."""
    n = mul.shape[0]
    return np.bincount(commutator_table(mul, inv).ravel(), minlength=n).astype(np.int64)


def hom_count_naive(mul, inv, genus, identity=0):
    if genus == 0:
        return 1
    n = mul.shape[0]
    comm = commutator_table(mul, inv).ravel()
    total = 0
    # outer pairs enumerated one tuple at a time, the last pair vectorised
    for outer in itertools.product(range(n * n), repeat=genus - 1):
        prefix = identity
        for flat in outer:
            prefix = mul[prefix, comm[flat]]
        total += int(np.count_nonzero(mul[prefix, comm] == identity))
    return total


def conjugation_orbits(mul, inv, gens):
    n = mul.shape[0]
    label = np.full(n, -1, dtype=np.int64)
    perms = [mul[mul[s, :], inv[s]] for s in gens]
    current = 0
    for start in range(n):
        if label[start] >= 0:
            continue
        label[start] = current
        stack = [start]
        while stack:
            x = stack.pop()
            for perm in perms:
                y = perm[x]
                if label[y] < 0:
                    label[y] = current
                    stack.append(y)
        current += 1
    return label
