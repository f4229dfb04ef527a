"""Tests for the full-rank submatrix maintainer."""

import math

import numpy as np
import pytest

from dynla import linalg
from dynla.errors import IndexOutOfRange
from dynla.gf import Field, Rng
from dynla.submatrix import SubmatrixState

F101 = Field(101)
FBIG = Field()


def _check(st, field=F101):
    a = st.matrix()
    i_set, j_set = st.rows(), st.cols()
    assert len(i_set) == len(j_set) == linalg.rank_oracle(field, a)
    if i_set:
        assert linalg.det_oracle(field, linalg.submatrix(a, i_set, j_set)) != 0


def test_init_identity():
    st = SubmatrixState(F101, linalg.identity(3), Rng(1))
    assert st.rows() == [1, 2, 3] and st.cols() == [1, 2, 3]


def test_init_zero():
    st = SubmatrixState(F101, linalg.zeros(4), Rng(1))
    assert st.rows() == [] and st.cols() == [] and st.rank() == 0


def test_init_rank_two():
    a = linalg.random_rank_matrix(F101, Rng(2), 4, 4, 2)
    st = SubmatrixState(F101, a, Rng(3))
    assert st.rank() == 2
    _check(st)


def test_entry_update_rank_drop():
    st = SubmatrixState(F101, linalg.identity(3), Rng(1))
    rows, cols = st.entry_update(1, 1, 0)
    assert rows == [2, 3] and cols == [2, 3]
    _check(st)


def test_entry_update_same_value_is_noop():
    st = SubmatrixState(F101, linalg.identity(2), Rng(1))
    before = (st.rows(), st.cols(), st.probes)
    rows, cols = st.entry_update(1, 1, 1)
    assert (rows, cols) == (before[0], before[1])
    assert st.probes == before[2]  # nothing to ask


def test_all_ones_from_zero_leftmost_tie_break():
    st = SubmatrixState(F101, linalg.zeros(3), Rng(9))
    for i in range(1, 4):
        for j in range(1, 4):
            rows, cols = st.entry_update(i, j, 1)
            _check(st)
    assert (rows, cols) == ([1], [1])


def test_augment_search_only_candidate():
    st = SubmatrixState(F101, linalg.identity(2), Rng(1))
    # Force the maintainer back to I = J = {1} by zeroing and restoring (2,2).
    st.entry_update(2, 2, 0)
    assert st.rows() == [1] and st.cols() == [1]
    rows, cols = st.entry_update(2, 2, 1)
    assert rows == [1, 2] and cols == [1, 2]


def test_augment_search_none_at_fixpoint():
    a = linalg.random_rank_matrix(F101, Rng(5), 6, 6, 3)
    st = SubmatrixState(F101, a, Rng(6))
    assert st.rank() == 3
    assert st.augment_search() is None


def test_augment_from_empty_reaches_full_rank():
    rng = Rng(8)
    a = linalg.random_matrix(F101, rng, 8)
    st = SubmatrixState(F101, linalg.zeros(8), rng.spawn(1))
    for i in range(1, 9):
        for j in range(1, 9):
            st.entry_update(i, j, int(a[i - 1, j - 1]))
    assert st.rank() == linalg.rank_oracle(F101, a)
    _check(st)


def test_probe_budget_per_search():
    rng = Rng(11)
    n = 16
    budget = 2 * math.ceil(math.log2(n)) + 1
    a = linalg.random_matrix(F101, rng, n)
    st = SubmatrixState(F101, a, rng.spawn(1))
    for _ in range(150):
        before = st.probes
        i = rng.randrange(n) + 1
        j = rng.randrange(n) + 1
        st.entry_update(i, j, rng.sample(F101))
        # One delta probe plus at most two full searches.
        assert st.probes - before <= 1 + 2 * budget
        before_search = st.probes
        st.augment_search()
        assert st.probes - before_search <= budget


def test_adversarial_replay_small_prime():
    rng = Rng(13)
    for n in (3, 5, 8):
        a = linalg.random_rank_matrix(F101, rng, n, n, max(1, n // 2))
        st = SubmatrixState(F101, a.copy(), rng.spawn(n))
        for _ in range(120):
            i = rng.randrange(n) + 1
            j = rng.randrange(n) + 1
            val = rng.randrange(4)  # sparse values force frequent rank moves
            st.entry_update(i, j, val)
            _check(st)


def test_row_and_column_basis_property():
    rng = Rng(17)
    a = linalg.random_rank_matrix(FBIG, rng, 8, 8, 5)
    st = SubmatrixState(FBIG, a, rng.spawn(1))
    i_set, j_set = st.rows(), st.cols()
    rows = a[[i - 1 for i in i_set], :]
    cols = a[:, [j - 1 for j in j_set]]
    assert linalg.rank_oracle(FBIG, rows) == linalg.rank_oracle(FBIG, a)
    assert linalg.rank_oracle(FBIG, cols) == linalg.rank_oracle(FBIG, a)


def test_index_bounds():
    st = SubmatrixState(F101, linalg.identity(3), Rng(1))
    with pytest.raises(IndexOutOfRange):
        st.entry_update(0, 1, 5)
    with pytest.raises(IndexOutOfRange):
        st.entry_update(1, 4, 5)


def test_non_power_of_two_padding():
    rng = Rng(19)
    a = linalg.random_matrix(F101, rng, 5)
    st = SubmatrixState(F101, a.copy(), rng.spawn(1))
    _check(st)
    for _ in range(60):
        st.entry_update(rng.randrange(5) + 1, rng.randrange(5) + 1, rng.sample(F101))
        _check(st)


def test_verify_and_repair_reports_clean_state():
    rng = Rng(23)
    a = linalg.random_matrix(F101, rng, 6)
    st = SubmatrixState(F101, a, rng.spawn(1))
    assert st.verify_and_repair() is True
