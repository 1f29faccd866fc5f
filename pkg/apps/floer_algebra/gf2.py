"""
Linear algebra over Z/2 on uint8 numpy matrices.

Elimination always takes the lowest available row index as pivot so
results are deterministic.
"""
from typing import List, Optional, Tuple

import numpy as np


def as_gf2(matrix) -> np.ndarray:
    return np.asarray(matrix, dtype=np.int64).astype(np.uint8) % 2


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return ((a.astype(np.int64) @ b.astype(np.int64)) % 2).astype(np.uint8)


def row_reduce(matrix) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form and the pivot columns."""
    reduced = as_gf2(matrix).copy()
    rows, cols = reduced.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        candidates = np.flatnonzero(reduced[r:, c])
        if not len(candidates):
            continue
        p = r + int(candidates[0])
        if p != r:
            reduced[[r, p]] = reduced[[p, r]]
        others = np.flatnonzero(reduced[:, c])
        others = others[others != r]
        reduced[others] ^= reduced[r]
        pivots.append(c)
        r += 1
    return reduced, pivots


def rank(matrix) -> int:
    return len(row_reduce(matrix)[1])


def nullspace(matrix) -> np.ndarray:
    """Kernel basis as the columns of an (n, d) matrix."""
    matrix = as_gf2(matrix)
    n = matrix.shape[1]
    reduced, pivots = row_reduce(matrix)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((n, len(free)), dtype=np.uint8)
    for column, f in enumerate(free):
        basis[f, column] = 1
        for row, p in enumerate(pivots):
            basis[p, column] = reduced[row, f]
    return basis


def solve(a, b) -> Optional[np.ndarray]:
    """Some x with a x = b, or None when b is outside the column space."""
    a = as_gf2(a)
    b = as_gf2(b).reshape(-1, 1)
    n = a.shape[1]
    reduced, pivots = row_reduce(np.hstack([a, b]))
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.uint8)
    for row, p in enumerate(pivots):
        x[p] = reduced[row, n]
    return x


def extend_basis(base: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Columns of ``candidates`` that extend the span of ``base``, greedily in order."""
    chosen = []
    span = base
    current = rank(base)
    for column in candidates.T:
        trial = np.hstack([span, column.reshape(-1, 1)])
        grown = rank(trial)
        if grown > current:
            chosen.append(column)
            span, current = trial, grown
    if not chosen:
        return np.zeros((candidates.shape[0], 0), dtype=np.uint8)
    return np.stack(chosen, axis=1)
