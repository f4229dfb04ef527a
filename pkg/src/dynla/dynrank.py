"""Exact deterministic rank maintenance under column updates.

``DynRankState`` keeps an invertible transform U with ``U @ A = R`` where R
is in reduced (row-)echelon shape: the rows below ``rank`` are zero and each
pivot column is a unit vector.  A column update changes a single column of
R (via ``U @ v``) plus a constant number of pivot repairs, so the cost is
O(n^2) per update and the rank moves by at most one.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, IndexOutOfRange
from .gf import Field


class DynRankState:
    """Exact rank of a square GF(p) matrix under entry/column updates."""

    def __init__(self, field: Field, a: np.ndarray):
        if a.ndim != 2:
            raise DimensionMismatch("expected a 2-d matrix")
        self.field = field
        self.a = a % field.p
        r, u, pcol, prow, rank, mults = _kernels.echelon_init(self.a.copy(), field.p)
        self._r = r
        self._u = u
        self._pcol_of_row = pcol
        self._prow_of_col = prow
        self.rank = int(rank)
        self.mults = int(mults)

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def column_update(self, j: int, delta: dict[int, int]) -> int:
        """Apply A[:, j] += v for sparse v ({row: value}, 1-based) and
        return the new rank."""
        n, m = self.a.shape
        if not 1 <= j <= m:
            raise IndexOutOfRange(f"column {j} outside [1, {m}]")
        idx = []
        val = []
        for i, v in sorted(delta.items()):
            if not 1 <= i <= n:
                raise IndexOutOfRange(f"row {i} outside [1, {n}]")
            v %= self.field.p
            if v:
                idx.append(i - 1)
                val.append(v)
        return self._column_delta0(j - 1, idx, val)

    def entry_update(self, i: int, j: int, value: int) -> int:
        """Assign A[i, j] = value (1-based) and return the new rank."""
        n, m = self.a.shape
        if not (1 <= i <= n and 1 <= j <= m):
            raise IndexOutOfRange(f"entry ({i}, {j}) outside [1, {n}] x [1, {m}]")
        delta = (value - int(self.a[i - 1, j - 1])) % self.field.p
        if delta == 0:
            return self.rank
        return self._column_delta0(j - 1, [i - 1], [delta])

    def _column_delta0(self, c: int, idx: list[int], val: list[int]) -> int:
        """0-based sparse column delta; the fast path used by other layers."""
        if not idx:
            return self.rank
        p = self.field.p
        self.a[idx, c] = (self.a[idx, c] + val) % p
        rank, mults = _kernels.echelon_set_column(
            self._r,
            self._u,
            self._pcol_of_row,
            self._prow_of_col,
            self.rank,
            c,
            np.asarray(idx, dtype=np.int64),
            np.asarray(val, dtype=np.int64),
            p,
        )
        self.rank = int(rank)
        self.mults += int(mults)
        return self.rank

    def check_invariants(self) -> None:
        """Assert the factorization invariant (intended for small n tests)."""
        from . import linalg

        p = self.field.p
        assert (linalg.matmul(self.field, self._u, self.a) == self._r).all()
        assert linalg.det_oracle(self.field, self._u) != 0
        assert not self._r[self.rank:, :].any()
        for s in range(self.rank):
            c = int(self._pcol_of_row[s])
            col = np.zeros(self.a.shape[0], dtype=np.int64)
            col[s] = 1
            assert (self._r[:, c] == col).all()
