"""Exact linear algebra over Q on numpy object arrays of Fractions."""

from fractions import Fraction

import numpy as np


def qarray(data) -> np.ndarray:
    """Object array with every entry converted to Fraction."""
    arr = np.array(data, dtype=object)
    flat = arr.reshape(-1)
    for i, v in enumerate(flat):
        if isinstance(v, np.integer):
            v = int(v)
        flat[i] = v if isinstance(v, Fraction) else Fraction(v)
    return flat.reshape(arr.shape)


def qzeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def qeye(n: int) -> np.ndarray:
    out = qzeros((n, n))
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def rref(matrix):
    """Reduced row echelon form and pivot columns."""
    m = qarray(matrix).copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = [i for i in range(r, rows) if m[i, c] != 0]
        if not nz:
            continue
        i = nz[0]
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = m[r] / m[r, c]
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i] = m[i] - m[i, c] * m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def solve(A, b):
    """Exact solution x of A x = b, or None when the system is inconsistent.

    Free variables (if any) are set to zero.
    """
    A = qarray(A)
    b = qarray(b)
    vector = b.ndim == 1
    if vector:
        b = b.reshape(-1, 1)
    aug = np.concatenate([A, b], axis=1)
    red, pivots = rref(aug)
    n = A.shape[1]
    if any(p >= n for p in pivots):
        return None
    x = qzeros((n, b.shape[1]))
    for row, p in enumerate(pivots):
        x[p] = red[row, n:]
    return x.reshape(-1) if vector else x


def nullspace(matrix) -> list:
    red, pivots = rref(matrix)
    n = red.shape[1]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = qzeros(n)
        v[f] = Fraction(1)
        for row, p in enumerate(pivots):
            v[p] = -red[row, f]
        basis.append(v)
    return basis


def is_zero(arr) -> bool:
    return all(v == 0 for v in np.asarray(arr, dtype=object).reshape(-1))


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text) -> Fraction:
    return Fraction(str(text))
