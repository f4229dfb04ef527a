"""Dynamic matrix inverse with singularity detection.

``DynInvState`` keeps a nonsingular matrix H together with its inverse.
An entry update ``H[i, j] += delta`` is screened with the Sherman-Morrison
identity: the updated matrix is singular exactly when
``1 + delta * Hinv[j, i] == 0``.  Singular updates are rejected and
reported; accepted ones update the inverse in O(n^2).  A log of accepted
deltas supports reverting.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import EmptyLog, IndexOutOfRange, NotSquare, SingularInit, WouldBeSingular
from .gf import Field


class DynInvState:
    """Inverse maintenance for a square nonsingular GF(p) matrix."""

    def __init__(self, field: Field, h: np.ndarray):
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise NotSquare(f"expected a square matrix, got shape {h.shape}")
        self.field = field
        self.h = h % field.p
        ok, inv = _kernels.invert(self.h, field.p)
        if not ok:
            raise SingularInit("initial matrix is singular")
        self.hinv = inv
        self.n = h.shape[0]
        self.mults = 0
        self._log: list[tuple[int, int, int]] = []

    def would_be_singular(self, i: int, j: int, delta: int) -> bool:
        """Whether H + delta * e_i e_j^T is singular (1-based, no change)."""
        i0, j0 = self._check(i, j)
        delta %= self.field.p
        self.mults += 1
        return (1 + delta * int(self.hinv[j0, i0])) % self.field.p == 0

    def try_entry_update(self, i: int, j: int, delta: int) -> None:
        """Apply H[i, j] += delta, or raise WouldBeSingular (not applied)."""
        i0, j0 = self._check(i, j)
        delta %= self.field.p
        if delta == 0:
            self._log.append((i0, j0, 0))
            return
        ok, mults = _kernels.sm_entry_update(self.h, self.hinv, i0, j0, delta, self.field.p)
        self.mults += int(mults)
        if not ok:
            raise WouldBeSingular(f"update ({i}, {j}) += {delta} makes H singular")
        self._log.append((i0, j0, delta))

    def revert(self) -> None:
        """Undo the most recent accepted update."""
        if not self._log:
            raise EmptyLog("no applied updates to revert")
        i0, j0, delta = self._log.pop()
        if delta == 0:
            return
        ok, mults = _kernels.sm_entry_update(
            self.h, self.hinv, i0, j0, (-delta) % self.field.p, self.field.p
        )
        self.mults += int(mults)
        # H was nonsingular before the reverted update was accepted, so
        # undoing it cannot fail.
        assert ok, "revert of an accepted update cannot be singular"

    def log_size(self) -> int:
        return len(self._log)

    def entry(self, i: int, j: int) -> int:
        i0, j0 = self._check(i, j)
        return int(self.h[i0, j0])

    def _check(self, i: int, j: int) -> tuple[int, int]:
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexOutOfRange(f"entry ({i}, {j}) outside [1, {self.n}]^2")
        return i - 1, j - 1

    def check_invariants(self) -> None:
        from . import linalg

        prod = linalg.matmul(self.field, self.h, self.hinv)
        assert (prod == linalg.identity(self.n)).all()
