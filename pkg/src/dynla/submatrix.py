"""Maximal nonsingular submatrix maintenance under entry updates.

``SubmatrixState`` keeps index sets I, J with ``det(A[I, J]) != 0`` and
``|I| = |J| = rank(A)``.  The machinery is the block matrix

    H = [[A, diag(x)], [diag(y), B]]

where B is the gadget biadjacency (tree edges 1, switch edges fresh random
nonzero values) and x, y are random nonzero vectors.  det(H) expands over
minors of A paired with minors of B, and the gadget pins the surviving
B-minors, so a Sherman-Morrison singularity probe on H answers questions
about A's minors in O(|H|^2) per probe.

Per entry update: if the delta would make det(A[I, J]) vanish, the slot
holding (i, j) is retired first (I and J shrink by one; the cofactor
argument makes every step of that transition provably nonsingular); then
the update is applied and two augment searches run, each binary-searching
a new (column, row) pair through interval relabelings of one switch slot.

Instrumentation: ``probes`` counts informative singularity questions
(at most 2*ceil(log2 n) + 1 per augment search), ``relinks`` counts switch
edge moves, ``rebuilds`` counts full re-randomizations.

n is padded to the next power of two; padded rows/columns of A are zero and
are never selected into I or J.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .dyninv import DynInvState
from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    ProbabilisticFailure,
    WouldBeSingular,
)
from .gadget import GadgetGraph, Label, assemble_block
from .gf import Field, Rng

_ADD_RETRIES = 8


class SubmatrixState:
    """I, J with det(A[I, J]) nonzero and |I| = rank(A), under entry updates."""

    def __init__(self, field: Field, a: np.ndarray, rng: Rng):
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch("expected a square matrix")
        self.field = field
        self.rng = rng
        self.n_real = a.shape[0]
        npad = 1
        while npad < self.n_real:
            npad *= 2
        npad = max(npad, 2)
        self.n = npad
        self.a = np.zeros((npad, npad), dtype=np.int64)
        self.a[: self.n_real, : self.n_real] = a % field.p
        rows, cols = linalg.nonsingular_minor(field, self.a)
        self.i_set: set[int] = set(rows)
        self.j_set: set[int] = set(cols)
        # Slot bookkeeping: slot -> (u_label, v_label) when attached, None
        # when the pair edge u_slot - v_slot is present.  u-side labels hold
        # column indices of A, v-side labels hold row indices.
        self.slots: dict[int, tuple[Label, Label] | None] = {}
        self.geometry = GadgetGraph(npad, [], [])
        self.probes = 0
        self.relinks = 0
        self.rebuilds = 0
        self._build()

    # -- construction --------------------------------------------------------

    def _build(self) -> None:
        """(Re)build H and its inverse from (a, i_set, j_set) bookkeeping."""
        cols = sorted(self.j_set)
        rows = sorted(self.i_set)
        k = len(rows)
        self.slots = {s: None for s in range(1, self.n + 1)}
        for t in range(k):
            self.slots[t + 1] = ((cols[t], cols[t]), (rows[t], rows[t]))
        self._edge_vals: dict[tuple[int, int], int] = {}
        self.x = [self.rng.sample_nonzero(self.field) for _ in range(self.n)]
        self.y = [self.rng.sample_nonzero(self.field) for _ in range(self.n)]
        b = np.zeros((self.geometry.m, self.geometry.m), dtype=np.int64)
        for lab, u in self.geometry._tree_edges:
            b[self.geometry.left_label_pos(lab), self.geometry.right_unlabeled_pos(u)] = 1
            b[self.geometry.left_unlabeled_prime_pos(u), self.geometry.right_label_pos(lab)] = 1
        for slot, state in self.slots.items():
            if state is None:
                cells = [self.geometry.pair_edge_pos(slot)]
            else:
                lab_u, lab_v = state
                cells = [
                    self.geometry.u_edge_pos(slot, lab_u),
                    self.geometry.v_edge_pos(slot, lab_v),
                ]
            for cell in cells:
                val = self.rng.sample_nonzero(self.field)
                self._edge_vals[cell] = val
                b[cell] = val
        h = assemble_block(self.field, self.a, b, self.x, self.y)
        # A resting configuration always has exactly one surviving B-minor,
        # paired with det(A[I, J]) != 0, so H is nonsingular by construction.
        self.detector = DynInvState(self.field, h)

    def _rebuild(self) -> None:
        self.rebuilds += 1
        self._build()

    # -- low-level edge operations on the B block of H -----------------------

    def _hcell(self, cell: tuple[int, int]) -> tuple[int, int]:
        return (self.n + cell[0] + 1, self.n + cell[1] + 1)

    def _add_edge(self, cell: tuple[int, int]) -> None:
        """Insert a switch edge with a fresh random value.  At most one value
        in the field can be refused (det is linear in it), so retries fail
        with probability <= (p - 1)^-RETRIES."""
        hi, hj = self._hcell(cell)
        for _ in range(_ADD_RETRIES):
            val = self.rng.sample_nonzero(self.field)
            try:
                self.detector.try_entry_update(hi, hj, val)
            except WouldBeSingular:
                continue
            self._edge_vals[cell] = val
            return
        raise ProbabilisticFailure("could not insert a switch edge")

    def _remove_edge(self, cell: tuple[int, int]) -> bool:
        """Try to delete a switch edge; False when the result is singular
        (nothing changes in that case)."""
        hi, hj = self._hcell(cell)
        val = self._edge_vals[cell]
        try:
            self.detector.try_entry_update(hi, hj, -val)
        except WouldBeSingular:
            return False
        del self._edge_vals[cell]
        return True

    def _remove_edge_forced(self, cell: tuple[int, int]) -> None:
        """Delete a switch edge whose removal is known to stay nonsingular
        (up to the usual random-evaluation slack); rebuild on surprise.

        Callers update slot bookkeeping before forced removals, so the
        rebuild lands exactly on the intended target configuration (which
        also clears any half-moved edges, hence the missing-cell guard).
        """
        if cell not in self._edge_vals:
            return
        if not self._remove_edge(cell):
            del self._edge_vals[cell]
            self._rebuild()

    # -- relinks --------------------------------------------------------------

    def _relink_u(self, slot: int, new_lab: Label) -> bool:
        """Move slot's u edge to ``new_lab``; False (state restored) when the
        target configuration is singular.  Counts as one probe."""
        old_lab, lab_v = self.slots[slot]
        old_cell = self.geometry.u_edge_pos(slot, old_lab)
        new_cell = self.geometry.u_edge_pos(slot, new_lab)
        self.relinks += 1
        self.probes += 1
        self._add_edge(new_cell)
        if not self._remove_edge(old_cell):
            self._remove_edge_forced(new_cell)
            return False
        self.slots[slot] = (new_lab, lab_v)
        return True

    def _relink_v(self, slot: int, new_lab: Label) -> bool:
        lab_u, old_lab = self.slots[slot]
        old_cell = self.geometry.v_edge_pos(slot, old_lab)
        new_cell = self.geometry.v_edge_pos(slot, new_lab)
        self.relinks += 1
        self.probes += 1
        self._add_edge(new_cell)
        if not self._remove_edge(old_cell):
            self._remove_edge_forced(new_cell)
            return False
        self.slots[slot] = (lab_u, new_lab)
        return True

    def _relink_u_forced(self, slot: int, new_lab: Label) -> None:
        old_lab, lab_v = self.slots[slot]
        self.slots[slot] = (new_lab, lab_v)
        self.relinks += 1
        self._add_edge(self.geometry.u_edge_pos(slot, new_lab))
        self._remove_edge_forced(self.geometry.u_edge_pos(slot, old_lab))

    def _relink_v_forced(self, slot: int, new_lab: Label) -> None:
        lab_u, old_lab = self.slots[slot]
        self.slots[slot] = (lab_u, new_lab)
        self.relinks += 1
        self._add_edge(self.geometry.v_edge_pos(slot, new_lab))
        self._remove_edge_forced(self.geometry.v_edge_pos(slot, old_lab))

    # -- update protocol -------------------------------------------------------

    def entry_update(self, i: int, j: int, value: int) -> tuple[list[int], list[int]]:
        """Assign A[i, j] = value (1-based) and return (sorted I, sorted J)."""
        if not (1 <= i <= self.n_real and 1 <= j <= self.n_real):
            raise IndexOutOfRange(f"entry ({i}, {j}) outside [1, {self.n_real}]^2")
        delta = (value - int(self.a[i - 1, j - 1])) % self.field.p
        if delta != 0:
            try:
                self.detector.try_entry_update(i, j, delta)
                self.a[i - 1, j - 1] = value % self.field.p
            except WouldBeSingular:
                self._shrink(i, j, delta)
        for _ in range(2):
            self.augment_search()
        return self.rows(), self.cols()

    def column_update(self, j: int, delta: dict[int, int]) -> tuple[list[int], list[int]]:
        """Column delta applied entry by entry through the update protocol."""
        out = (self.rows(), self.cols())
        for i, v in sorted(delta.items()):
            new_val = (int(self.a[i - 1, j - 1]) + v) % self.field.p
            out = self.entry_update(i, j, new_val)
        return out

    def _shrink(self, i: int, j: int, delta: int) -> None:
        """The pending delta kills det(A[I, J]): retire i from I and j from J,
        then apply the delta.  Every step below is nonsingular by the
        cofactor argument, so failures are resample events."""
        slot_v = next(s for s, st in self.slots.items() if st and st[1] == (i, i))
        slot_u = next(s for s, st in self.slots.items() if st and st[0] == (j, j))
        if slot_u != slot_v:
            # Swap u-labels so the slot holding row i also holds column j.
            # Bookkeeping first: a rebuild inside a forced removal then
            # lands on the swapped configuration.
            lab_a = self.slots[slot_v][0]
            self.slots[slot_v] = ((j, j), (i, i))
            self.slots[slot_u] = (lab_a, self.slots[slot_u][1])
            self.relinks += 2
            self._add_edge(self.geometry.u_edge_pos(slot_v, (j, j)))
            self._add_edge(self.geometry.u_edge_pos(slot_u, lab_a))
            self._remove_edge_forced(self.geometry.u_edge_pos(slot_v, lab_a))
            self._remove_edge_forced(self.geometry.u_edge_pos(slot_u, (j, j)))
        slot = slot_v
        self._add_edge(self.geometry.pair_edge_pos(slot))
        try:
            self.detector.try_entry_update(i, j, delta)
        except WouldBeSingular:
            # With the pair edge present det(H) has the nonzero cofactor
            # term, so this is a chance cancellation: rebuild at the target.
            self.a[i - 1, j - 1] = (self.a[i - 1, j - 1] + delta) % self.field.p
            self.i_set.discard(i)
            self.j_set.discard(j)
            self._rebuild()
            return
        self.a[i - 1, j - 1] = (self.a[i - 1, j - 1] + delta) % self.field.p
        self.slots[slot] = None
        self.i_set.discard(i)
        self.j_set.discard(j)
        self._remove_edge_forced(self.geometry.u_edge_pos(slot, (j, j)))
        self._remove_edge_forced(self.geometry.v_edge_pos(slot, (i, i)))

    def augment_search(self) -> tuple[int, int] | None:
        """One binary search for a row/column pair that extends the minor.

        Returns (i', j') and grows I, J when det(A[I+i', J+j']) != 0 for some
        pair; returns None otherwise.  Uses <= 2*ceil(log2 n) + 1 probes.
        """
        free = [s for s, st in self.slots.items() if st is None]
        if not free:
            return None
        slot = min(free)
        full = (1, self.n)
        # Attach the slot to the full-interval labels; removing its pair
        # edge is the "does any extension exist" probe.
        self._add_edge(self.geometry.u_edge_pos(slot, full))
        self._add_edge(self.geometry.v_edge_pos(slot, full))
        self.relinks += 1
        self.probes += 1
        if not self._remove_edge(self.geometry.pair_edge_pos(slot)):
            self._remove_edge_forced(self.geometry.v_edge_pos(slot, full))
            self._remove_edge_forced(self.geometry.u_edge_pos(slot, full))
            return None
        self.slots[slot] = (full, full)
        # Row side first, then column: ties resolve to the lexicographically
        # least (row, column) pair since each halving prefers the lower half.
        row = self._binary_search(slot, u_side=False)
        col = self._binary_search(slot, u_side=True)
        self.i_set.add(row)
        self.j_set.add(col)
        return (row, col)

    def _binary_search(self, slot: int, u_side: bool) -> int:
        relink = self._relink_u if u_side else self._relink_v
        lo, hi = 1, self.n
        while lo < hi:
            mid = (lo + hi) // 2
            if relink(slot, (lo, mid)):
                hi = mid
            else:
                lo = mid + 1
        attached = self.slots[slot][0 if u_side else 1]
        if attached != (lo, lo):
            # Pinning to the found singleton is implied nonsingular.
            if u_side:
                self._relink_u_forced(slot, (lo, lo))
            else:
                self._relink_v_forced(slot, (lo, lo))
        return lo

    # -- queries ---------------------------------------------------------------

    def rows(self) -> list[int]:
        return sorted(self.i_set)

    def cols(self) -> list[int]:
        return sorted(self.j_set)

    def rank(self) -> int:
        return len(self.i_set)

    def matrix(self) -> np.ndarray:
        """Current A restricted to its real (unpadded) indices."""
        return self.a[: self.n_real, : self.n_real].copy()

    def verify_and_repair(self, max_attempts: int = 3) -> bool:
        """Oracle spot-check; re-randomize and re-run the greedy selection on
        disagreement.  Returns True when the state checks out."""
        for _ in range(max_attempts):
            real = self.matrix()
            ok = (
                len(self.i_set) == len(self.j_set) == linalg.rank_oracle(self.field, real)
                and linalg.det_oracle(
                    self.field, linalg.submatrix(self.a, self.rows(), self.cols())
                )
                != 0
                if self.i_set
                else linalg.rank_oracle(self.field, real) == 0
            )
            if ok:
                return True
            rows, cols = linalg.nonsingular_minor(self.field, self.a)
            self.i_set = set(rows)
            self.j_set = set(cols)
            self._rebuild()
        raise ProbabilisticFailure("submatrix state failed repeated repair")
