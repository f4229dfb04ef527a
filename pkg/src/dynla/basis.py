"""Column-basis maintenance under column updates.

``BasisState`` keeps an index set whose columns are linearly independent and
span the column space of A.  Membership probes use random block combinations
A @ v^(level, block), where v is a fixed random vector and v^(level, block)
keeps the entries with index in (block * 2^level, (block + 1) * 2^level].
These dyadic products form a ladder (each block equals the sum of its two
children) maintained at O(z log n) per column update, and a binary descent
through the ladder finds the smallest-index column outside the current span
in at most 2*ceil(log2 n) + 1 span probes.

A probe appends a candidate vector to a spare column slot of a rank
structure over the stored basis copies and checks whether the rank
increments.  Plain mode uses the exact echelon maintainer; low-rank mode
runs the sketch-boosted rank maintainer instead, making probe cost depend
on the rank rather than on n, with identical outputs w.h.p.

If a parent probe succeeds but both child probes fail (the signature of a
random-evaluation miss), v is resampled and the ladder rebuilt once before
a ProbabilisticFailure surfaces.
"""

from __future__ import annotations

import math

import numpy as np

from .dynrank import DynRankState
from .errors import DimensionMismatch, IndexOutOfRange, ProbabilisticFailure
from .gf import Field, Rng
from .rankred import UnboundedRankDS


class DyadicProducts:
    """All block products A @ v^(level, block) for one random vector v."""

    def __init__(self, field: Field, a: np.ndarray, rng: Rng):
        self.field = field
        self.n_rows, self.n_cols = a.shape
        self.depth = max(0, math.ceil(math.log2(max(1, self.n_cols))))
        self.v = np.array(
            [rng.sample_nonzero(field) for _ in range(self.n_cols)], dtype=np.int64
        )
        # products[level] is an (n_blocks, n_rows) array of block products.
        self.products: list[np.ndarray] = []
        base = (a * self.v[np.newaxis, :]) % field.p  # level 0: single columns
        self.products.append(base.T.copy())
        for level in range(1, self.depth + 1):
            prev = self.products[level - 1]
            pairs = prev.shape[0] // 2
            merged = (prev[0 : 2 * pairs : 2] + prev[1 : 2 * pairs : 2]) % field.p
            if prev.shape[0] % 2:
                merged = np.vstack([merged, prev[-1:]])
            self.products.append(merged)

    def block_count(self, level: int) -> int:
        return self.products[level].shape[0]

    def product(self, level: int, block: int) -> np.ndarray:
        return self.products[level][block]

    def column_update(self, i: int, u: dict[int, int]) -> None:
        """Apply A <- A + u e_i^T: one block per level changes."""
        if not 1 <= i <= self.n_cols:
            raise IndexOutOfRange(f"column {i} outside [1, {self.n_cols}]")
        if not u:
            return
        rows = np.array([r - 1 for r in u], dtype=np.int64)
        vals = np.array([v % self.field.p for v in u.values()], dtype=np.int64)
        scaled = vals * int(self.v[i - 1]) % self.field.p
        for level in range(self.depth + 1):
            block = (i - 1) >> level
            tgt = self.products[level][block]
            tgt[rows] = (tgt[rows] + scaled) % self.field.p


class _PlainRank:
    """Exact echelon rank structure over the basis work matrix."""

    def __init__(self, field: Field, work: np.ndarray, rng: Rng):
        self.state = DynRankState(field, work)

    def column_update(self, j: int, delta: dict[int, int]) -> int:
        return self.state.column_update(j, delta)

    @property
    def rank(self) -> int:
        return self.state.rank


class _SketchedRank:
    """Sketch-boosted rank structure; probe cost scales with the rank."""

    def __init__(self, field: Field, work: np.ndarray, rng: Rng):
        self.state = UnboundedRankDS(field, work, rng)

    def column_update(self, j: int, delta: dict[int, int]) -> int:
        return self.state.column_update(j, delta)

    @property
    def rank(self) -> int:
        return self.state.rank


class BasisState:
    """Column-basis indices of A, updated under column assignments."""

    def __init__(self, field: Field, a: np.ndarray, rng: Rng, lowrank: bool = False):
        if a.ndim != 2:
            raise DimensionMismatch("expected a matrix")
        self.field = field
        self.rng = rng
        self.a = a % field.p
        self.n_rows, self.n_cols = self.a.shape
        self.lowrank = lowrank
        self.probes = 0
        self.searches = 0
        self.max_probes_per_search = 0
        self._resamples = 0
        self.dyadic = DyadicProducts(field, self.a, rng.spawn(1))
        # Work matrix: one slot per potential basis column plus a spare
        # probe slot at index n_cols + 1.  Slots hold explicit copies, so
        # eviction never consults A's history.
        cap = min(self.n_rows, self.n_cols)
        self._spare = cap + 1
        work = np.zeros((self.n_rows, cap + 1), dtype=np.int64)
        maker = _SketchedRank if lowrank else _PlainRank
        self.structure = maker(field, work, rng.spawn(2))
        self.basis: list[int] = []  # column index of A held by each slot
        self._slot_cols = np.zeros((self.n_rows, cap + 1), dtype=np.int64)
        # Build the initial basis by repeated search from the empty set.
        while True:
            found = self.find_independent_column()
            if found is None:
                break
            self._append(found)

    # -- slot plumbing --------------------------------------------------------

    def _write_slot(self, slot: int, target: np.ndarray) -> int:
        cur = self._slot_cols[:, slot - 1]
        diff = (target - cur) % self.field.p
        nz = np.nonzero(diff)[0]
        delta = {int(r) + 1: int(diff[r]) for r in nz}
        self._slot_cols[:, slot - 1] = target
        if delta:
            return self.structure.column_update(slot, delta)
        return self.structure.rank

    def _append(self, col: int) -> None:
        slot = len(self.basis) + 1
        self.basis.append(col)
        self._write_slot(slot, self.a[:, col - 1])

    def _evict(self, pos: int) -> None:
        """Drop basis position ``pos`` (0-based), compacting the slots."""
        last = len(self.basis)
        if pos + 1 != last:
            self.basis[pos] = self.basis[last - 1]
            self._write_slot(pos + 1, self._slot_cols[:, last - 1])
        self.basis.pop()
        self._write_slot(last, np.zeros(self.n_rows, dtype=np.int64))

    def _probe(self, vec: np.ndarray) -> bool:
        """True when vec is independent of the stored basis columns."""
        self.probes += 1
        self._probes_this_search += 1
        before = self.structure.rank
        after = self._write_slot(self._spare, vec % self.field.p)
        self._write_slot(self._spare, np.zeros(self.n_rows, dtype=np.int64))
        return after > before

    # -- operations ------------------------------------------------------------

    def column_update(self, i: int, u: dict[int, int]) -> list[int]:
        """Apply A <- A + u e_i^T; returns the new sorted basis index set."""
        if not 1 <= i <= self.n_cols:
            raise IndexOutOfRange(f"column {i} outside [1, {self.n_cols}]")
        u = {r: v % self.field.p for r, v in u.items() if v % self.field.p}
        for r in u:
            if not 1 <= r <= self.n_rows:
                raise IndexOutOfRange(f"row {r} outside [1, {self.n_rows}]")
        if u:
            self.dyadic.column_update(i, u)
            for r, v in u.items():
                self.a[r - 1, i - 1] = (self.a[r - 1, i - 1] + v) % self.field.p
            if i in self.basis:
                pos = self.basis.index(i)
                before = self.structure.rank
                after = self._write_slot(pos + 1, self.a[:, i - 1])
                if after < before:
                    self._evict(pos)
        found = self.find_independent_column()
        if found is not None:
            self._append(found)
        return self.indices()

    def set_column(self, i: int, values: dict[int, int]) -> list[int]:
        """Absolute assignment of entries within column i."""
        u = {
            r: (v - int(self.a[r - 1, i - 1])) % self.field.p
            for r, v in values.items()
            if 1 <= r <= self.n_rows
        }
        for r in values:
            if not 1 <= r <= self.n_rows:
                raise IndexOutOfRange(f"row {r} outside [1, {self.n_rows}]")
        return self.column_update(i, u)

    def find_independent_column(self) -> int | None:
        """Smallest column index outside span(basis), or None.

        Descends the dyadic ladder left child first; uses at most
        2*ceil(log2 n) + 1 probes.
        """
        self.searches += 1
        self._probes_this_search = 0
        try:
            result = self._descend()
        except _Inconsistent:
            # Resample v, rebuild the ladder, retry once.
            self._resamples += 1
            self.dyadic = DyadicProducts(
                self.field, self.a, self.rng.spawn(1000 + self._resamples)
            )
            try:
                result = self._descend()
            except _Inconsistent as exc:
                raise ProbabilisticFailure(
                    "repeated inconsistent span probes during basis search"
                ) from exc
        self.max_probes_per_search = max(
            self.max_probes_per_search, self._probes_this_search
        )
        return result

    def _descend(self) -> int | None:
        level = self.dyadic.depth
        if not self._probe(self.dyadic.product(level, 0)):
            return None
        block = 0
        while level > 0:
            level -= 1
            left = 2 * block
            right = left + 1
            if self._probe(self.dyadic.product(level, left)):
                block = left
            elif right < self.dyadic.block_count(level) and self._probe(
                self.dyadic.product(level, right)
            ):
                block = right
            else:
                raise _Inconsistent
        return block + 1

    # -- queries -----------------------------------------------------------------

    def indices(self) -> list[int]:
        return sorted(self.basis)

    def matrix(self) -> np.ndarray:
        return self.a.copy()


class _Inconsistent(Exception):
    """Parent probe succeeded but both children failed."""
