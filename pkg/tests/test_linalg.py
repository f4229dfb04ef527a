import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynla import linalg
from dynla.errors import IndexOutOfRange, NotSquare
from dynla.gf import DEFAULT_PRIME, Field, Rng

F7 = Field(7)
F101 = Field(101)
FBIG = Field(DEFAULT_PRIME)


def test_rank_oracle_basics():
    assert linalg.rank_oracle(F101, linalg.identity(3)) == 3
    assert linalg.rank_oracle(F101, linalg.zeros(3)) == 0
    assert linalg.rank_oracle(F7, np.array([[1, 2], [2, 4]], dtype=np.int64)) == 1


def test_det_oracle_basics():
    assert linalg.det_oracle(F101, linalg.identity(4)) == 1
    assert linalg.det_oracle(F7, np.array([[2, 0], [0, 3]], dtype=np.int64)) == 6
    assert linalg.det_oracle(F7, np.array([[1, 2], [3, 4]], dtype=np.int64)) == 5
    with pytest.raises(NotSquare):
        linalg.det_oracle(F7, linalg.zeros(2, 3))


def test_det_matches_signed_permutation_sum():
    rng = Rng(4)
    for n in (3, 4):
        for _ in range(25):
            a = linalg.random_matrix(F101, rng, n)
            assert linalg.det_oracle(F101, a) == linalg.det_perm_sum(F101, a)


def test_submatrix_and_delete():
    i3 = linalg.identity(3)
    assert np.array_equal(linalg.delete(i3, [1], [1]), linalg.identity(2))
    a = np.arange(1, 10, dtype=np.int64).reshape(3, 3)
    assert np.array_equal(linalg.submatrix(a, [1, 2, 3], [1, 2, 3]), a)
    assert np.array_equal(
        linalg.delete(a, [2], [3]), np.array([[1, 2], [7, 8]], dtype=np.int64)
    )
    with pytest.raises(IndexOutOfRange):
        linalg.submatrix(a, [0], [1])
    with pytest.raises(IndexOutOfRange):
        linalg.delete(a, [4], [1])


def test_in_span_oracle():
    assert linalg.in_span_oracle(
        F101, linalg.identity(2), np.array([3, 4], dtype=np.int64)
    )
    assert not linalg.in_span_oracle(
        F101, np.array([[1], [0]], dtype=np.int64), np.array([0, 1], dtype=np.int64)
    )
    assert linalg.in_span_oracle(
        F7, np.array([[1], [2]], dtype=np.int64), np.array([3, 6], dtype=np.int64)
    )


def test_matmul_no_overflow_at_large_prime():
    rng = Rng(8)
    a = linalg.random_matrix(FBIG, rng, 40)
    b = linalg.random_matrix(FBIG, rng, 40)
    got = linalg.matmul(FBIG, a, b)
    want = np.array(
        [
            [
                sum(int(a[i, t]) * int(b[t, j]) for t in range(40)) % FBIG.p
                for j in range(40)
            ]
            for i in range(40)
        ],
        dtype=np.int64,
    )
    assert np.array_equal(got, want)


def test_rank_transpose_invariance():
    rng = Rng(5)
    for _ in range(10):
        a = linalg.random_rank_matrix(F101, rng, 12, 9, rng.randrange(7))
        assert linalg.rank_oracle(F101, a) == linalg.rank_oracle(F101, a.T.copy())


def test_random_rank_matrix_hits_requested_rank():
    rng = Rng(6)
    for r in range(0, 9):
        a = linalg.random_rank_matrix(FBIG, rng, 16, 16, r)
        assert linalg.rank_oracle(FBIG, a) == r


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10 ** 6))
def test_det_nonzero_iff_full_rank(n, seed):
    rng = Rng(seed)
    a = linalg.random_matrix(F101, rng, n)
    full = linalg.rank_oracle(F101, a) == n
    assert (linalg.det_oracle(F101, a) != 0) == full


def test_invert_oracle_round_trip():
    rng = Rng(7)
    a = linalg.random_matrix(FBIG, rng, 10)
    inv = linalg.invert_oracle(FBIG, a)
    if inv is not None:
        assert np.array_equal(linalg.matmul(FBIG, a, inv), linalg.identity(10))
    assert linalg.invert_oracle(FBIG, linalg.zeros(4)) is None


def test_nonsingular_minor_is_maximal_and_nonsingular():
    rng = Rng(9)
    for r in (0, 2, 5):
        a = linalg.random_rank_matrix(F101, rng, 8, 8, r)
        rows, cols = linalg.nonsingular_minor(F101, a)
        assert len(rows) == len(cols) == r
        if r:
            assert linalg.det_oracle(F101, linalg.submatrix(a, rows, cols)) != 0
