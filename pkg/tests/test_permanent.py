import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from bosonbound.errors import DimensionError, SizeLimitError, SpecError
from bosonbound.linalg import haar_random_unitary
from bosonbound.permanent import (
    MAX_PERMANENT_DIM,
    batch_permanents_numba,
    batch_permanents_numpy,
    expanded_submatrix,
    factorial_product,
    permanent,
    permanent_naive,
    permanent_numba,
    permanent_numpy,
    permanent_sub,
)


def random_complex(rng, k):
    return rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))


def test_small_examples():
    assert permanent(np.eye(3)) == 1
    assert permanent(np.ones((3, 3))) == pytest.approx(6)
    assert permanent([[1, 2], [3, 4]]) == 10
    assert permanent(np.ones((7, 7))) == pytest.approx(math.factorial(7))


def test_matches_naive_5x5():
    A = random_complex(np.random.default_rng(1), 5)
    ref = permanent_naive(A)
    assert abs(permanent(A) - ref) <= 1e-10 * abs(ref)


@pytest.mark.parametrize("kernel", [permanent_numba, permanent_numpy], ids=["numba", "numpy"])
def test_both_backends_match_naive(kernel):
    rng = np.random.default_rng(2)
    for k in range(1, 7):
        for _ in range(20):
            A = random_complex(rng, k)
            ref = permanent_naive(A)
            assert abs(kernel(A) - ref) <= 1e-10 * (1 + abs(ref))


def test_batch_backends_agree():
    U = haar_random_unitary(6, 0)
    rng = np.random.default_rng(3)
    rows = rng.integers(0, 6, size=(50, 4))
    cols = rng.integers(0, 6, size=(50, 4))
    a = batch_permanents_numba(U, rows, cols)
    b = batch_permanents_numpy(U, rows, cols)
    np.testing.assert_allclose(a, b, atol=1e-13)
    ref = [permanent_naive(U[np.ix_(r, c)]) for r, c in zip(rows, cols)]
    np.testing.assert_allclose(a, ref, atol=1e-13)


def test_numpy_path_chunks_large_k():
    # k = 16 spans several subset blocks
    A = random_complex(np.random.default_rng(4), 16) / 4
    assert abs(permanent_numba(A) - permanent_numpy(A)) <= 1e-9 * abs(permanent_numba(A))


def test_empty_matrix_permanent_is_one():
    assert permanent_numpy(np.zeros((0, 0))) == 1
    assert permanent_numba(np.zeros((0, 0), dtype=complex)) == 1


def test_errors():
    with pytest.raises(DimensionError):
        permanent(np.ones((2, 3)))
    with pytest.raises(SizeLimitError):
        permanent(np.eye(MAX_PERMANENT_DIM + 1))


matrices = st.integers(1, 8).flatmap(
    lambda k: arrays(np.complex128, (k, k), elements=st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_transpose_symmetry(A):
    p = permanent(A)
    assert abs(permanent(A.T) - p) <= 1e-12 * max(1.0, np.prod(np.abs(A).sum(axis=1)))


@settings(max_examples=60, deadline=None)
@given(matrices, st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), st.data())
def test_row_scaling(A, c, data):
    i = data.draw(st.integers(0, A.shape[0] - 1))
    B = A.copy()
    B[i] *= c
    scale = max(1.0, np.prod(np.abs(B).sum(axis=1)))
    assert abs(permanent(B) - c * permanent(A)) <= 1e-12 * scale


def test_permanent_sub_identity():
    I = np.eye(5)
    assert permanent_sub(I, (1, 1, 1, 0, 0), (1, 1, 1, 0, 0)) == 1
    assert permanent_sub(I, (1, 1, 0, 0, 0), (0, 1, 1, 0, 0)) == 0


def test_permanent_sub_repeated_column():
    U = haar_random_unitary(6, 5)
    rows, cols = (1, 1, 1, 0, 0, 0), (2, 1, 0, 0, 0, 0)
    explicit = U[np.ix_([0, 1, 2], [0, 0, 1])]
    assert abs(permanent_sub(U, rows, cols) - permanent_naive(explicit)) <= 1e-12
    np.testing.assert_array_equal(expanded_submatrix(U, rows, cols), explicit)


def test_permanent_sub_mismatched_sums():
    with pytest.raises(SpecError):
        permanent_sub(np.eye(3), (1, 1, 0), (1, 0, 0))


def test_factorial_product():
    assert factorial_product((2, 0, 3)) == 12
