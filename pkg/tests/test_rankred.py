import numpy as np
import pytest

from dynla import linalg
from dynla.errors import AlreadyActive, AlreadyInactive, IndexOutOfRange, KTooSmall
from dynla.gf import DEFAULT_PRIME, Field, Rng
from dynla.rankred import BoundedRankDS, UnboundedRankDS, default_copies

FBIG = Field(DEFAULT_PRIME)


def test_bounded_rejects_small_k():
    with pytest.raises(KTooSmall):
        BoundedRankDS(FBIG, linalg.zeros(16), 4, Rng(0))


def test_bounded_zero_matrix():
    ds = BoundedRankDS(FBIG, linalg.zeros(16), 8, Rng(0))
    assert not ds.q.any()
    assert ds.activate() == 0


def test_bounded_products_match_fresh_projection():
    rng = Rng(1)
    a = linalg.random_matrix(FBIG, rng, 20)
    ds = BoundedRankDS(FBIG, a, 8, rng.spawn(1))
    for copy in range(ds.copies):
        fresh = ds.sketches[copy][1].apply_right(ds.sketches[copy][0].apply_left(a))
        assert np.array_equal(ds.q[copy], fresh)


def test_bounded_activation_contract_and_errors():
    rng = Rng(2)
    a = np.zeros((16, 16), dtype=np.int64)
    a[:8, :8] = linalg.identity(8)
    ds = BoundedRankDS(FBIG, a, 16, rng)
    assert ds.activate() == 8  # min(16, rank)
    with pytest.raises(AlreadyActive):
        ds.activate()
    ds.deactivate()
    with pytest.raises(AlreadyInactive):
        ds.deactivate()


def test_bounded_caps_at_k():
    rng = Rng(3)
    a = linalg.random_rank_matrix(FBIG, rng, 32, 32, 12)
    ds = BoundedRankDS(FBIG, a.copy(), 8, rng.spawn(1))
    assert ds.activate() == 8  # min(k, rank)


def test_bounded_inactive_updates_keep_products_consistent():
    rng = Rng(4)
    a = linalg.random_matrix(FBIG, rng, 12)
    ds = BoundedRankDS(FBIG, a.copy(), 8, rng.spawn(1))
    for _ in range(30):
        j = rng.randrange(12) + 1
        delta = {rng.randrange(12) + 1: rng.sample(FBIG)}
        assert ds.column_update(j, delta) is None  # inactive: no rank output
        for i, v in delta.items():
            a[i - 1, j - 1] = (a[i - 1, j - 1] + v) % FBIG.p
    for copy in range(ds.copies):
        fresh = ds.sketches[copy][1].apply_right(ds.sketches[copy][0].apply_left(a))
        assert np.array_equal(ds.q[copy], fresh)


def test_bounded_active_replay_matches_oracle():
    misses = 0
    for seed in range(20):
        rng = Rng(seed)
        a = linalg.random_rank_matrix(FBIG, rng, 24, 24, 4)
        ds = BoundedRankDS(FBIG, a.copy(), 8, rng.spawn(1))
        ds.activate()
        ok = True
        for _ in range(50):
            j = rng.randrange(24) + 1
            # low-rank churn: add multiples of an existing column
            src = rng.randrange(24)
            delta = {
                i + 1: int(a[i, src]) * 3 % FBIG.p
                for i in range(24)
                if a[i, src]
            }
            got = ds.column_update(j, delta)
            for i, v in delta.items():
                a[i - 1, j - 1] = (a[i - 1, j - 1] + v) % FBIG.p
            if got != min(8, linalg.rank_oracle(FBIG, a)):
                ok = False
        misses += not ok
    assert misses <= 1


def test_default_copies():
    assert default_copies(64) == 8


def _unbounded_replay(seed, n=32, steps=120, worst_case=False):
    rng = Rng(seed)
    a = np.zeros((n, n), dtype=np.int64)
    ds = UnboundedRankDS(FBIG, a.copy(), rng.spawn(1), worst_case=worst_case)
    outputs = []
    ok = True
    for step in range(steps):
        if step < 20:  # growth phase: add unit columns
            j = step + 1
            delta = {j: 1}
        elif step < 40:  # shrink back
            j = step - 19
            delta = {j: (-int(a[j - 1, j - 1])) % FBIG.p}
        else:  # random churn
            j = rng.randrange(n) + 1
            delta = {rng.randrange(n) + 1: rng.sample(FBIG)}
        got = ds.column_update(j, delta)
        for i, v in delta.items():
            a[i - 1, j - 1] = (a[i - 1, j - 1] + v) % FBIG.p
        outputs.append(got)
        if got != linalg.rank_oracle(FBIG, a):
            ok = False
        ds.check_invariants()
    return outputs, ok


def test_unbounded_growth_shrink_churn_matches_oracle():
    misses = sum(not _unbounded_replay(seed)[1] for seed in range(10))
    assert misses == 0


def test_worst_case_mode_output_equality():
    for seed in (0, 1, 2):
        amortized, ok_a = _unbounded_replay(seed, worst_case=False)
        spread, ok_b = _unbounded_replay(seed, worst_case=True)
        assert ok_a and ok_b
        assert amortized == spread


def test_stationary_rank_keeps_head_level():
    rng = Rng(9)
    a = linalg.random_rank_matrix(FBIG, rng, 32, 32, 6)
    ds = UnboundedRankDS(FBIG, a.copy(), rng.spawn(1))
    j0 = ds.j
    for _ in range(60):
        # replace a column by a random combination of existing columns
        j = rng.randrange(32) + 1
        src = rng.randrange(32)
        coef = rng.sample_nonzero(FBIG)
        delta = {
            i + 1: int(a[i, src]) * coef % FBIG.p for i in range(32) if a[i, src]
        }
        ds.column_update(j, delta)
        for i, v in delta.items():
            a[i - 1, j - 1] = (a[i - 1, j - 1] + v) % FBIG.p
        assert linalg.rank_oracle(FBIG, a) == 6
        assert ds.j == j0
    assert ds.rank == 6


def test_unbounded_entry_update_and_bounds():
    ds = UnboundedRankDS(FBIG, linalg.zeros(8), Rng(1))
    assert ds.entry_update(1, 1, 5) == 1
    with pytest.raises(IndexOutOfRange):
        ds.entry_update(9, 1, 5)
    with pytest.raises(IndexOutOfRange):
        ds.column_update(0, {1: 1})
