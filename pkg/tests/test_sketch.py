import math

import numpy as np

from dynla import linalg, sketch
from dynla.gf import DEFAULT_PRIME, Field, Rng

FBIG = Field(DEFAULT_PRIME)


def _build(rng, n, k):
    return sketch.SketchMatrix(FBIG, rng, n, sketch.RATE * k)


def test_row_sparsity_exactly_two():
    for seed in range(20):
        m = _build(Rng(seed), 16, 4)
        dense = m.dense()
        assert all(np.count_nonzero(dense[i]) == 2 for i in range(16))


def test_column_load_cap():
    for seed in range(20):
        for n, k in ((16, 4), (64, 8), (100, 8)):
            m = _build(Rng(seed), n, k)
            cap = 2 * math.ceil(n / m.r)
            assert max(m.column_loads()) <= cap


def test_wide_sketch_preserves_identity_rank():
    hits = 0
    n, k = 16, 4  # r = 16 = n
    for seed in range(100):
        m = _build(Rng(seed), n, k)
        if linalg.rank_oracle(FBIG, m.dense()) == n:
            hits += 1
    assert hits >= 90


def test_apply_right_and_left():
    rng = Rng(3)
    m = _build(rng, 12, 3)
    assert not m.apply_right(linalg.zeros(5, 12)).any()
    assert np.array_equal(m.apply_right(linalg.identity(12)), m.dense())
    a = linalg.random_matrix(FBIG, rng, 12, 12)
    assert np.array_equal(m.apply_right(a), linalg.matmul(FBIG, a, m.dense()))
    assert np.array_equal(m.apply_left(a), linalg.matmul(FBIG, m.dense().T.copy(), a))


def test_projected_rank_frequency_single_copy():
    hits = 0
    for seed in range(100):
        rng = Rng(seed)
        a = linalg.random_rank_matrix(FBIG, rng, 32, 32, 3)
        m = _build(rng.spawn(1), 32, 8)
        n_ = _build(rng.spawn(2), 32, 8)
        proj = n_.apply_right(m.apply_left(a))
        if linalg.rank_oracle(FBIG, proj) == 3:
            hits += 1
    assert hits >= 50


def test_propagate_column_update_matches_recompute():
    rng = Rng(11)
    n = 20
    a = linalg.random_matrix(FBIG, rng, n)
    m = _build(rng.spawn(1), n, 8)
    n_ = _build(rng.spawn(2), n, 8)
    prod = n_.apply_right(m.apply_left(a))
    for step in range(60):
        c = rng.randrange(n)
        z = 1 + rng.randrange(3)
        idx = np.array([rng.randrange(n) for _ in range(z)], dtype=np.int64)
        val = np.array([rng.sample(FBIG) for _ in range(z)], dtype=np.int64)
        deltas = sketch.propagate_column_update(m, n_, c, idx, val)
        assert len(deltas) <= 2
        for col, dvec in deltas:
            prod[:, col] = (prod[:, col] + dvec) % FBIG.p
        for i, v in zip(idx, val):
            a[i, c] = (a[i, c] + v) % FBIG.p
        assert np.array_equal(prod, n_.apply_right(m.apply_left(a)))


def test_propagate_empty_update_is_noop():
    rng = Rng(12)
    m = _build(rng, 10, 8)
    n_ = _build(rng, 10, 8)
    empty = np.zeros(0, dtype=np.int64)
    assert sketch.propagate_column_update(m, n_, 0, empty, empty) == []
