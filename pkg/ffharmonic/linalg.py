"""
Linear algebra over F_q: row reduction, null spaces and enumeration of
subspaces through their reduced row echelon forms.
"""
import itertools
from collections.abc import Iterator

import numpy as np


def rref(matrix: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """
    Reduced row echelon form mod q.

    Returns:
        (reduced matrix with zero rows dropped, pivot columns)
    """
    A = np.array(matrix, dtype=np.int64) % q
    rows, cols = A.shape if A.ndim == 2 else (0, 0)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.flatnonzero(A[r:, c])
        if nonzero.size == 0:
            continue
        pivot_row = r + int(nonzero[0])
        A[[r, pivot_row]] = A[[pivot_row, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, q)) % q
        others = np.arange(rows) != r
        A[others] = (A[others] - np.outer(A[others, c], A[r])) % q
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(matrix: np.ndarray, q: int) -> int:
    return len(rref(matrix, q)[1])


def null_space(matrix: np.ndarray, q: int, n: int | None = None) -> np.ndarray:
    """
    Basis (as rows) of {x : matrix @ x = 0 mod q}.

    Args:
        matrix: Array of shape (m, n); m may be zero
        n: Number of columns when matrix has no rows
    """
    A = np.asarray(matrix, dtype=np.int64)
    if n is None:
        n = A.shape[1]
    if A.size == 0:
        return np.eye(n, dtype=np.int64)
    reduced, pivots = rref(A, q)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, p in enumerate(pivots):
            basis[i, p] = (-reduced[row, f]) % q
    return basis


def span_points(directions: np.ndarray, q: int) -> np.ndarray:
    """All q^k combinations of k direction rows, as a (q^k, n) array."""
    directions = np.asarray(directions, dtype=np.int64)
    k = directions.shape[0]
    if k == 0:
        return np.zeros((1, directions.shape[1] if directions.ndim == 2 else 0), dtype=np.int64)
    index = np.arange(q ** k, dtype=np.int64)
    coefficients = (index[:, None] // (q ** np.arange(k, dtype=np.int64))[None, :]) % q
    return (coefficients @ directions) % q


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def echelon_bases(n: int, k: int, q: int) -> Iterator[np.ndarray]:
    """
    Yield one reduced echelon basis (k x n) per k-dimensional subspace of F_q^n.

    Pivot columns run over all k-combinations; entries right of a pivot in
    non-pivot columns are free.
    """
    if k == 0:
        yield np.zeros((0, n), dtype=np.int64)
        return
    for pivots in itertools.combinations(range(n), k):
        free_slots = [
            (row, col)
            for row, p in enumerate(pivots)
            for col in range(p + 1, n)
            if col not in pivots
        ]
        for values in itertools.product(range(q), repeat=len(free_slots)):
            basis = np.zeros((k, n), dtype=np.int64)
            for row, p in enumerate(pivots):
                basis[row, p] = 1
            for (row, col), value in zip(free_slots, values):
                basis[row, col] = value
            yield basis
