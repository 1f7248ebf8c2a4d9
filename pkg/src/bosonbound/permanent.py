"""Matrix permanents.

Two interchangeable Ryser backends live here:

* ``*_numba`` kernels walk subsets in Gray-code order, updating one column
  of running row sums per step (O(k 2^k), allocation free);
* ``*_numpy`` kernels evaluate the same formula over blocks of subsets with
  a matrix product, trading an extra factor k of arithmetic for vectorization.

:data:`bosonbound._backend.USE_NUMBA` picks which one the public functions use.
"""

import itertools
import math

import numpy as np

from . import _backend
from .errors import DimensionError, SizeLimitError, SpecError
from .linalg import as_square

MAX_PERMANENT_DIM = 30

# subsets per numpy block; bounds the (batch, k, block) row-sum temporary
_NUMPY_BLOCK = 1 << 14


@_backend.njit
def _ryser_gray(a):
    k = a.shape[0]
    if k == 0:
        return 1.0 + 0.0j
    rowsum = np.zeros(k, dtype=np.complex128)
    total = 0.0 + 0.0j
    for i in range(1, 1 << k):
        # Gray code g(i) = i ^ (i >> 1) flips the bit at trailing_zeros(i)
        j = 0
        while not (i >> j) & 1:
            j += 1
        g = i ^ (i >> 1)
        if (g >> j) & 1:
            for r in range(k):
                rowsum[r] += a[r, j]
        else:
            for r in range(k):
                rowsum[r] -= a[r, j]
        prod = 1.0 + 0.0j
        for r in range(k):
            prod *= rowsum[r]
        # |g(i)| has the parity of i
        if i & 1:
            total -= prod
        else:
            total += prod
    if k & 1:
        return -total
    return total


@_backend.njit
def permanent_numba(a):
    return _ryser_gray(np.ascontiguousarray(a))


@_backend.njit
def batch_permanents_numba(U, rows, cols):
    B, k = rows.shape
    out = np.empty(B, dtype=np.complex128)
    sub = np.empty((k, k), dtype=np.complex128)
    for b in range(B):
        for r in range(k):
            for c in range(k):
                sub[r, c] = U[rows[b, r], cols[b, c]]
        out[b] = _ryser_gray(sub)
    return out


def _subset_block(k, start, stop):
    idx = np.arange(start, stop, dtype=np.int64)
    bits = ((idx[:, None] >> np.arange(k, dtype=np.int64)) & 1).astype(np.float64)
    signs = np.where(bits.sum(axis=1) % 2 == k % 2, 1.0, -1.0)
    return bits, signs


def batch_permanents_numpy(U, rows, cols):
    U = np.asarray(U, dtype=np.complex128)
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    B, k = rows.shape
    if k == 0:
        return np.ones(B, dtype=np.complex128)
    subs = U[rows[:, :, None], cols[:, None, :]]
    total = np.zeros(B, dtype=np.complex128)
    n_subsets = 1 << k
    block = max(1, min(n_subsets, _NUMPY_BLOCK // max(1, B)))
    for start in range(1, n_subsets, block):
        bits, signs = _subset_block(k, start, min(start + block, n_subsets))
        rowsums = subs @ bits.T  # (B, k, block)
        total += np.prod(rowsums, axis=1) @ signs
    return total


def permanent_numpy(a):
    a = np.asarray(a, dtype=np.complex128)
    k = a.shape[0]
    idx = np.arange(k, dtype=np.int64)[None, :]
    return complex(batch_permanents_numpy(a, idx, idx)[0])


def batch_permanents(U, rows, cols):
    """Permanents of many submatrices ``U[rows[b]][:, cols[b]]`` of one matrix.

    ``rows`` and ``cols`` are (B, k) integer arrays of (possibly repeated)
    indices; repeated indices realize multiplicities.
    """
    U = np.ascontiguousarray(U, dtype=np.complex128)
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    cols = np.ascontiguousarray(cols, dtype=np.int64)
    if rows.shape != cols.shape or rows.ndim != 2:
        raise DimensionError(f"rows/cols index arrays differ: {rows.shape} vs {cols.shape}")
    if rows.shape[1] > MAX_PERMANENT_DIM:
        raise SizeLimitError(f"permanent dimension {rows.shape[1]} exceeds {MAX_PERMANENT_DIM}")
    if _backend.USE_NUMBA:
        return batch_permanents_numba(U, rows, cols)
    return batch_permanents_numpy(U, rows, cols)


def permanent(M):
    """Permanent of a square complex matrix by Ryser's formula.

    >>> permanent([[1, 2], [3, 4]])
    (10+0j)
    """
    A = as_square(M)
    k = A.shape[0]
    if k > MAX_PERMANENT_DIM:
        raise SizeLimitError(f"permanent dimension {k} exceeds {MAX_PERMANENT_DIM}")
    if _backend.USE_NUMBA:
        return complex(permanent_numba(A))
    return permanent_numpy(A)


def permanent_naive(M):
    """Leibniz sum over all k! permutations; test oracle only."""
    A = as_square(M)
    k = A.shape[0]
    rows = np.arange(k)
    total = 0j
    for perm in itertools.permutations(range(k)):
        total += np.prod(A[rows, perm])
    return complex(total)


def expand_counts(counts):
    """Multiplicity vector -> repeated index list, e.g. (2, 0, 1) -> [0, 0, 2]."""
    counts = np.asarray(counts, dtype=np.int64)
    if np.any(counts < 0):
        raise SpecError(f"multiplicities must be nonnegative, got {counts.tolist()}")
    return np.repeat(np.arange(counts.size, dtype=np.int64), counts)


def expanded_submatrix(U, row_counts, col_counts):
    U = np.asarray(U, dtype=np.complex128)
    r = expand_counts(row_counts)
    c = expand_counts(col_counts)
    if r.size != c.size:
        raise SpecError(f"row multiplicities sum to {r.size}, column multiplicities to {c.size}")
    if len(row_counts) != U.shape[0] or len(col_counts) != U.shape[1]:
        raise DimensionError("multiplicity vectors must match the matrix shape")
    return U[np.ix_(r, c)]


def permanent_sub(U, row_counts, col_counts):
    """Permanent of ``U`` with row i repeated ``row_counts[i]`` times and column j ``col_counts[j]`` times."""
    sub = expanded_submatrix(U, row_counts, col_counts)
    if sub.shape[0] == 0:
        return 1.0 + 0.0j
    return permanent(sub)


def factorial_product(counts):
    """``s_1! s_2! ... s_m!`` as an exact integer."""
    return math.prod(math.factorial(int(s)) for s in counts)
