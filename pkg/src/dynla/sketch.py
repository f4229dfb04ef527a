"""Sparse rank-preserving sketches.

A sketch is an ``n x r`` random matrix M with exactly two nonzero entries
per row and at most ``2*ceil(n/r)`` nonzeros per column, built in O(n).
For a matrix A of rank at most k and ``r = 4k``, ``rank(A @ M)`` equals
``min(rank(A), r)`` with constant probability; independent copies are
combined by taking the maximum rank.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch
from .gf import Field, Rng

#: Width multiplier: a sketch for rank bound k has r = RATE * k columns.
RATE = 4

#: Smallest rank bound the sketch guarantees are stated for.
K_MIN = 8


class SketchMatrix:
    """n x r two-nonzeros-per-row sketch with a bounded column load.

    Row i's nonzeros sit at columns ``cols[i, 0], cols[i, 1]`` with values
    ``vals[i, 0], vals[i, 1]``; the first column index is spread over a
    block partition, the second drawn uniformly with redraws against the
    per-column cap, so construction is O(n).
    """

    __slots__ = ("n", "r", "field", "cols", "vals")

    def __init__(self, field: Field, rng: Rng, n: int, r: int):
        if n < 1 or r < 2:
            raise DimensionMismatch(f"sketch needs n >= 1, r >= 2, got {n}x{r}")
        self.n = n
        self.r = r
        self.field = field
        cap = 2 * ((n + r - 1) // r)
        first = [i * r // n for i in range(n)]
        load = [0] * r
        for c in first:
            load[c] += 1
        # Remaining capacity as a shuffled multiset of column slots; total
        # slack is cap*r - n >= n, so every row gets a second column.
        slots: list[int] = []
        for c in range(r):
            slots.extend([c] * (cap - load[c]))
        for i in range(len(slots) - 1, 0, -1):
            j = rng.randrange(i + 1)
            slots[i], slots[j] = slots[j], slots[i]
        for i in range(n):
            if slots[i] == first[i]:
                # Swap with any slot usable here that does not create a new
                # collision at the donor position; one exists because each
                # column occupies at most cap slots.
                for j in range(len(slots)):
                    if slots[j] != first[i] and (j >= n or first[j] != slots[i]):
                        slots[i], slots[j] = slots[j], slots[i]
                        break
        cols = np.empty((n, 2), dtype=np.int64)
        vals = np.empty((n, 2), dtype=np.int64)
        for i in range(n):
            cols[i, 0] = first[i]
            cols[i, 1] = slots[i]
            vals[i, 0] = rng.sample_nonzero(field)
            vals[i, 1] = rng.sample_nonzero(field)
        self.cols = cols
        self.vals = vals

    def dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.r), dtype=np.int64)
        rows = np.arange(self.n)
        out[rows, self.cols[:, 0]] = self.vals[:, 0]
        out[rows, self.cols[:, 1]] = self.vals[:, 1]
        return out

    def column_loads(self) -> list[int]:
        load = [0] * self.r
        for i in range(self.n):
            load[self.cols[i, 0]] += 1
            load[self.cols[i, 1]] += 1
        return load

    def apply_right(self, a: np.ndarray) -> np.ndarray:
        """A @ M for an (m x n) matrix A."""
        if a.shape[1] != self.n:
            raise DimensionMismatch(f"A has {a.shape[1]} columns, sketch has {self.n} rows")
        p = self.field.p
        out = np.zeros((a.shape[0], self.r), dtype=np.int64)
        for s in (0, 1):
            np.add.at(out.T, self.cols[:, s], (a.T * self.vals[:, s][:, None]) % p)
        return out % p

    def apply_left(self, a: np.ndarray) -> np.ndarray:
        """M^T @ A for an (n x m) matrix A."""
        if a.shape[0] != self.n:
            raise DimensionMismatch(f"A has {a.shape[0]} rows, sketch has {self.n} rows")
        p = self.field.p
        out = np.zeros((self.r, a.shape[1]), dtype=np.int64)
        for s in (0, 1):
            np.add.at(out, self.cols[:, s], (a * self.vals[:, s][:, None]) % p)
        return out % p

    def project_vector(self, idx: np.ndarray, val: np.ndarray) -> np.ndarray:
        """M^T @ v for a sparse vector v given as (0-based indices, values)."""
        p = self.field.p
        out = np.zeros(self.r, dtype=np.int64)
        np.add.at(out, self.cols[idx].ravel(), ((self.vals[idx] * val[:, None]) % p).ravel())
        return out % p

    def row_entries(self, i: int) -> tuple[tuple[int, int], tuple[int, int]]:
        """The two (column, value) pairs of sketch row i (0-based)."""
        return (
            (int(self.cols[i, 0]), int(self.vals[i, 0])),
            (int(self.cols[i, 1]), int(self.vals[i, 1])),
        )


def propagate_column_update(
    left: SketchMatrix,
    right: SketchMatrix,
    i: int,
    idx: np.ndarray,
    val: np.ndarray,
) -> list[tuple[int, np.ndarray]]:
    """Column deltas to P = M^T A N under A <- A + v e_i^T.

    ``left`` is M (sketching rows), ``right`` is N (sketching columns), the
    sparse delta v is given 0-based.  Since row i of N has exactly two
    nonzeros, at most two columns of P change; each delta is
    (M^T v) * N[i, c].
    """
    p = left.field.p
    mv = left.project_vector(np.asarray(idx, dtype=np.int64), np.asarray(val, dtype=np.int64))
    if not mv.any():
        return []
    (c1, w1), (c2, w2) = right.row_entries(i)
    return [(c1, mv * w1 % p), (c2, mv * w2 % p)]
