"""Rank-scaled dynamic rank maintenance via sketched products.

``BoundedRankDS`` answers rank queries capped at a bound k: it keeps
boosted copies of the product ``M^T A N`` for independent sparse sketches
M, N with ``r = 4k`` columns.  The products are always maintained (cheap:
a column update touches at most two columns of each product); the exact
echelon structures on top of them exist only while the copy is *active*.

``UnboundedRankDS`` stacks bounded structures at levels ``k = 2^i`` and
moves a window of active levels with the current rank, so update cost
scales with the rank rather than with n.
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels
from .errors import (
    AlreadyActive,
    AlreadyInactive,
    IndexOutOfRange,
    KTooSmall,
)
from .gf import Field, Rng
from .sketch import K_MIN, RATE, SketchMatrix

#: Smallest level exponent: levels start at k = 2**I_MIN = K_MIN.
I_MIN = 3


def default_copies(n: int) -> int:
    """Boost count: ceil(log2 n) + 2 independent sketch pairs."""
    return max(1, math.ceil(math.log2(max(2, n)))) + 2


class BoundedRankDS:
    """Rank capped at k, maintained on sketched r x r products (r = 4k).

    All boosted copies are stored as stacked 3-d arrays so that one update
    is a single compiled pass over every copy.
    """

    def __init__(
        self,
        field: Field,
        a: np.ndarray,
        k: int,
        rng: Rng,
        copies: int | None = None,
        active: bool = False,
    ):
        if k < K_MIN:
            raise KTooSmall(f"rank bound {k} below minimum {K_MIN}")
        self.field = field
        self.k = k
        self.r = RATE * k
        nrows, ncols = a.shape
        self.shape = (nrows, ncols)
        self.copies = copies if copies is not None else default_copies(max(nrows, ncols))
        self.active = False
        self.mults = {"inner": 0, "propagate": 0, "activation": 0}
        self.sketches: list[tuple[SketchMatrix, SketchMatrix]] = []
        qs = []
        for t in range(self.copies):
            child = rng.spawn(2 * t + 1)
            m = SketchMatrix(field, child, nrows, self.r)
            n = SketchMatrix(field, child.spawn(1), ncols, self.r)
            self.sketches.append((m, n))
            qs.append(n.apply_right(m.apply_left(a)))  # M^T A N, r x r
        self.q = np.stack(qs)
        self._colsM = np.stack([m.cols for m, _ in self.sketches])
        self._valsM = np.stack([m.vals for m, _ in self.sketches])
        self._colsN = np.stack([n.cols for _, n in self.sketches])
        self._valsN = np.stack([n.vals for _, n in self.sketches])
        self._echelon: tuple | None = None  # (R, U, pcol, prow, ranks)
        if active:
            self.activate()

    def column_update(self, j: int, delta: dict[int, int]) -> int | None:
        """A[:, j] += v (1-based sparse v); returns the output if active."""
        nrows, ncols = self.shape
        if not 1 <= j <= ncols:
            raise IndexOutOfRange(f"column {j} outside [1, {ncols}]")
        idx, val = [], []
        for i, v in sorted(delta.items()):
            if not 1 <= i <= nrows:
                raise IndexOutOfRange(f"row {i} outside [1, {nrows}]")
            v %= self.field.p
            if v:
                idx.append(i - 1)
                val.append(v)
        return self._column_delta0(np.asarray(idx, dtype=np.int64),
                                   np.asarray(val, dtype=np.int64), j - 1)

    def _column_delta0(self, idx: np.ndarray, val: np.ndarray, c: int) -> int | None:
        if len(idx) == 0:
            return self.output()
        p = self.field.p
        if self.active:
            r3, u3, pcol, prow, ranks = self._echelon
            best, prop, inner = _kernels.level_update_active(
                self.q, r3, u3, pcol, prow, ranks,
                self._colsM, self._valsM, self._colsN, self._valsN,
                c, idx, val, p,
            )
            self.mults["propagate"] += int(prop)
            self.mults["inner"] += int(inner)
            return min(self.k, int(best))
        prop = _kernels.level_propagate(
            self.q, self._colsM, self._valsM, self._colsN, self._valsN,
            c, idx, val, p,
        )
        self.mults["propagate"] += int(prop)
        return None

    def activate(self) -> int:
        if self.active:
            raise AlreadyActive(f"level k={self.k} is already active")
        rs, us, pcols, prows, ranks = [], [], [], [], []
        for t in range(self.copies):
            r2, u2, pcol, prow, rank, mults = _kernels.echelon_init(
                self.q[t].copy(), self.field.p
            )
            rs.append(r2)
            us.append(u2)
            pcols.append(pcol)
            prows.append(prow)
            ranks.append(rank)
            self.mults["activation"] += int(mults)
        self._echelon = (
            np.stack(rs),
            np.stack(us),
            np.stack(pcols),
            np.stack(prows),
            np.array(ranks, dtype=np.int64),
        )
        self.active = True
        return self.output()

    def deactivate(self) -> None:
        if not self.active:
            raise AlreadyInactive(f"level k={self.k} is already inactive")
        self._echelon = None
        self.active = False

    def output(self) -> int | None:
        """min(k, rank(A)) w.h.p.; None while inactive."""
        if not self.active:
            return None
        ranks = self._echelon[4]
        return min(self.k, int(ranks.max()))


class UnboundedRankDS:
    """Exact rank (w.h.p.) with update cost scaling in the current rank.

    Level invariants maintained after every update (rank rho, head level j):
      * 2^j / 4 <= rho <= 2^j  (lower bound once rho >= 2),
      * every level i with 2^i / 2 <= rho <= 2^i is active,
      * no level outside [j-2, j+1] is active.
    """

    def __init__(
        self,
        field: Field,
        a: np.ndarray,
        rng: Rng,
        copies: int | None = None,
        worst_case: bool = False,
    ):
        self.field = field
        self.a = a % field.p
        nrows, ncols = a.shape
        self.i_min = I_MIN
        self.i_max = max(I_MIN, math.ceil(math.log2(max(2, max(nrows, ncols)))))
        self.worst_case = worst_case
        self.levels: dict[int, BoundedRankDS] = {}
        for i in range(self.i_min, self.i_max + 1):
            self.levels[i] = BoundedRankDS(
                field, self.a, 2**i, rng.spawn(100 + i), copies=copies
            )
        self._pending: dict[int, int] = {}  # level -> remaining countdown
        # Activation sweep: walk levels upward until one is not saturated.
        rank = 0
        for i in range(self.i_min, self.i_max + 1):
            rank = self.levels[i].activate()
            if rank < 2**i:
                break
        self.rank = rank
        self.j = max(self.i_min, math.ceil(math.log2(rank)) if rank >= 2 else self.i_min)
        self._enforce_window()

    # -- update entry points ------------------------------------------------

    def column_update(self, j: int, delta: dict[int, int]) -> int:
        nrows, ncols = self.a.shape
        if not 1 <= j <= ncols:
            raise IndexOutOfRange(f"column {j} outside [1, {ncols}]")
        idx, val = [], []
        for i, v in sorted(delta.items()):
            if not 1 <= i <= nrows:
                raise IndexOutOfRange(f"row {i} outside [1, {nrows}]")
            v %= self.field.p
            if v:
                idx.append(i - 1)
                val.append(v)
        return self._column_delta0(
            np.asarray(idx, dtype=np.int64), np.asarray(val, dtype=np.int64), j - 1
        )

    def entry_update(self, i: int, j: int, value: int) -> int:
        nrows, ncols = self.a.shape
        if not (1 <= i <= nrows and 1 <= j <= ncols):
            raise IndexOutOfRange(f"entry ({i}, {j}) out of range")
        delta = (value - int(self.a[i - 1, j - 1])) % self.field.p
        if delta == 0:
            return self.rank
        return self._column_delta0(
            np.array([i - 1], dtype=np.int64), np.array([delta], dtype=np.int64), j - 1
        )

    def _column_delta0(self, idx: np.ndarray, val: np.ndarray, c: int) -> int:
        if len(idx):
            p = self.field.p
            self.a[idx, c] = (self.a[idx, c] + val) % p
            for level in self.levels.values():
                level._column_delta0(idx, val, c)
        self._tick_pending()
        self.rank = self._readout()
        self._adjust_head()
        self._enforce_window()
        return self.rank

    # -- level management ---------------------------------------------------

    def _readout(self) -> int:
        best = 0
        for i, level in self.levels.items():
            if level.active:
                out = level.output()
                if out > best:
                    best = out
        return best

    def _adjust_head(self) -> None:
        rho = self.rank
        if rho >= 2**self.j and self.j < self.i_max:
            self.j += 1
        elif rho < 2**self.j // 4 and self.j > self.i_min:
            self.j = max(self.i_min, self.j - 2)

    def _forced(self, rho: int) -> set[int]:
        forced = {
            i
            for i in self.levels
            if 2**i // 2 <= rho <= 2**i
        }
        if rho < 4:
            forced.add(self.i_min)
        return forced

    def _enforce_window(self) -> None:
        rho = self.rank
        for i in self._forced(rho):
            level = self.levels[i]
            if not level.active:
                if self.worst_case and i in self._pending:
                    # Early trigger should have finished by now; finish it.
                    del self._pending[i]
                level.activate()
        if self.worst_case:
            for i, level in self.levels.items():
                if (
                    not level.active
                    and i not in self._pending
                    and self.j - 2 <= i <= self.j + 1
                    and rho >= 2**i // 4
                ):
                    self._pending[i] = max(1, 2**i // 8)
        for i, level in self.levels.items():
            if level.active and not (self.j - 2 <= i <= self.j + 1) and i not in self._forced(rho):
                level.deactivate()
            if i in self._pending and not (self.j - 2 <= i <= self.j + 1):
                del self._pending[i]

    def _tick_pending(self) -> None:
        if not self.worst_case:
            return
        # Spread activation work: burn two countdown units per update.
        for i in list(self._pending):
            self._pending[i] -= 2
            if self._pending[i] <= 0:
                del self._pending[i]
                level = self.levels[i]
                if not level.active:
                    level.activate()

    def check_invariants(self) -> None:
        rho = self.rank
        assert rho <= 2**self.j, (rho, self.j)
        if rho >= 2 and self.j > self.i_min:
            assert 2**self.j // 4 <= rho, (rho, self.j)
        for i in self._forced(rho):
            assert self.levels[i].active or (self.worst_case and i in self._pending)
        for i, level in self.levels.items():
            if level.active:
                assert self.j - 2 <= i <= self.j + 1 or i in self._forced(rho)

    def counters(self) -> dict[str, int]:
        total = {"inner": 0, "propagate": 0, "activation": 0}
        for level in self.levels.values():
            for key in total:
                total[key] += level.mults[key]
        return total
