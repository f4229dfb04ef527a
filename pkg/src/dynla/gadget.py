"""Interval-tree gadget used to binary-search nonsingular minors.

For a ground set [n] the label tree T(1, n) has one labeled vertex per
interval produced by repeated halving (leaves are the singletons) and one
unlabeled vertex per internal interval, wired as: interval vertex --
unlabeled child -- the two half-interval vertices.

The gadget graph for two label assignments a, b (one per side) consists of
the tree for side a, a second copy for side b, and n switch pairs
(u_i, v_i): the first k switches attach u_i / v_i to the labels a_i / b_i,
the rest are pairwise connected.  Its biadjacency matrix B has the
property that the minor deleting leaf rows T and leaf columns S is nonzero
exactly when T and S are complements of "singleton labels plus one index
from the interval label" selections, which is what the search layer
exploits.

Vertex order (a fixed, documented implementation constant):
  left  = [leaves of T | internal labels of T, BFS | unlabeled of T', BFS | v_1..v_n]
  right = [leaves of T' | internal labels of T', BFS | unlabeled of T, BFS | u_1..u_n]
"""

from __future__ import annotations

from collections import deque
from itertools import combinations

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange
from .gf import Field

Label = tuple[int, int]


def tree_structure(n: int) -> tuple[list[Label], list[Label], list[tuple[Label, int]]]:
    """Labels and wiring of the tree on [1, n].

    Returns (internal_labels, unlabeled_intervals, edges) where edges pair a
    label with the index (into ``unlabeled_intervals``) of an unlabeled
    vertex; every unlabeled vertex has exactly three incident edges: its
    labeled parent and the two half-interval roots.  Orders are BFS.
    """
    if n < 1:
        raise DimensionMismatch("tree size must be >= 1")
    internal: list[Label] = []
    unlabeled: list[Label] = []
    edges: list[tuple[Label, int]] = []
    queue: deque[Label] = deque([(1, n)])
    while queue:
        l, r = queue.popleft()
        if l == r:
            continue
        internal.append((l, r))
        u = len(unlabeled)
        unlabeled.append((l, r))
        m = (l + r) // 2
        edges.append(((l, r), u))
        edges.append(((l, m), u))
        edges.append(((m + 1, r), u))
        queue.append((l, m))
        queue.append((m + 1, r))
    return internal, unlabeled, edges


def label_set(n: int) -> list[Label]:
    """All 2n-1 labels: singletons ascending, then internal intervals BFS."""
    internal, _, _ = tree_structure(n)
    return [(i, i) for i in range(1, n + 1)] + internal


def tree_biadjacency(n: int) -> np.ndarray:
    """(n-1) x (2n-1) unlabeled-by-labeled biadjacency of the tree.

    Columns follow :func:`label_set` (leaves first, then internal labels in
    BFS order); rows are the unlabeled vertices in BFS order.
    """
    internal, unlabeled, edges = tree_structure(n)
    col = {lab: i for i, lab in enumerate(label_set(n))}
    out = np.zeros((len(unlabeled), 2 * n - 1), dtype=np.int64)
    for lab, u in edges:
        out[u, col[lab]] = 1
    return out


class GadgetGraph:
    """Gadget biadjacency for assignments a (u-side tree) and b (v-side).

    ``a`` and ``b`` are equal-length lists of labels; switches 1..k attach
    to them, switches k+1..n are pairwise connected.  Entries are 0/1 (every
    admissible minor has at most one perfect matching, so no random weights
    are needed for the static characterization).
    """

    def __init__(self, n: int, a: list[Label], b: list[Label]):
        if len(a) != len(b) or len(a) > n:
            raise DimensionMismatch("assignments must have equal length <= n")
        self.n = n
        self.k = len(a)
        self.a = list(a)
        self.b = list(b)
        self.m = 4 * n - 2
        internal, unlabeled, edges = tree_structure(n)
        self._label_pos = {lab: i for i, lab in enumerate(label_set(n))}
        valid = set(self._label_pos)
        for lab in self.a + self.b:
            if lab not in valid:
                raise IndexOutOfRange(f"{lab} is not a label of the tree on [1, {n}]")
        self._n_unlabeled = len(unlabeled)
        self._tree_edges = edges
        mat = np.zeros((self.m, self.m), dtype=np.int64)
        for lab, u in edges:
            mat[self.left_label_pos(lab), self.right_unlabeled_pos(u)] = 1  # tree T
            mat[self.left_unlabeled_prime_pos(u), self.right_label_pos(lab)] = 1  # tree T'
        for i in range(1, n + 1):
            if i <= self.k:
                mat[self.u_edge_pos(i, self.a[i - 1])] = 1
                mat[self.v_edge_pos(i, self.b[i - 1])] = 1
            else:
                mat[self.pair_edge_pos(i)] = 1
        self.matrix = mat

    # -- vertex positions (0-based into the biadjacency) --------------------

    def left_label_pos(self, lab: Label) -> int:
        return self._label_pos[lab]

    def right_label_pos(self, lab: Label) -> int:
        return self._label_pos[lab]

    def left_unlabeled_prime_pos(self, u: int) -> int:
        return 2 * self.n - 1 + u

    def right_unlabeled_pos(self, u: int) -> int:
        return 2 * self.n - 1 + u

    def left_v_pos(self, i: int) -> int:
        return 3 * self.n - 2 + (i - 1)

    def right_u_pos(self, i: int) -> int:
        return 3 * self.n - 2 + (i - 1)

    # -- edge cells ----------------------------------------------------------

    def u_edge_pos(self, i: int, lab: Label) -> tuple[int, int]:
        """Cell of the edge from switch u_i to label ``lab`` of tree T."""
        return (self.left_label_pos(lab), self.right_u_pos(i))

    def v_edge_pos(self, i: int, lab: Label) -> tuple[int, int]:
        """Cell of the edge from switch v_i to label ``lab`` of tree T'."""
        return (self.left_v_pos(i), self.right_label_pos(lab))

    def pair_edge_pos(self, i: int) -> tuple[int, int]:
        """Cell of the edge pairing switches u_i and v_i."""
        return (self.left_v_pos(i), self.right_u_pos(i))

    def relink(self, side: str, i: int, lab: Label) -> list[tuple[int, int, int]]:
        """Move switch i's single edge to label ``lab``; O(1) entry deltas.

        ``side`` is "u" or "v".  Slots 1..k move an existing edge (2 deltas,
        or none for a no-op).  Slot k+1 attaches a freed pair: the first call
        on either side also drops the pairing edge; k grows once both sides
        are attached.
        """
        if side not in ("u", "v"):
            raise DimensionMismatch(f"side must be 'u' or 'v', got {side!r}")
        if lab not in self._label_pos:
            raise IndexOutOfRange(f"{lab} is not a label of the tree on [1, {self.n}]")
        if not 1 <= i <= min(self.k + 1, self.n):
            raise IndexOutOfRange(f"switch slot {i} outside [1, {self.k + 1}]")
        deltas: list[tuple[int, int, int]] = []
        if i == self.k + 1:
            pr, pc = self.pair_edge_pos(i)
            if self.matrix[pr, pc]:
                self.matrix[pr, pc] = 0
                deltas.append((pr, pc, -1))
            if len(self.a) < i:
                self.a.append(None)
                self.b.append(None)
        cur = self.a if side == "u" else self.b
        old = cur[i - 1]
        if old == lab:
            return deltas
        edge_pos = self.u_edge_pos if side == "u" else self.v_edge_pos
        if old is not None:
            r, c = edge_pos(i, old)
            self.matrix[r, c] = 0
            deltas.append((r, c, -1))
        r, c = edge_pos(i, lab)
        self.matrix[r, c] = 1
        deltas.append((r, c, 1))
        cur[i - 1] = lab
        if i == self.k + 1 and self.a[i - 1] is not None and self.b[i - 1] is not None:
            self.k = i
        return deltas

    def to_dot(self) -> str:
        """GraphViz DOT rendering of the current gadget."""
        def lname(lab: Label) -> str:
            return f"L{lab[0]}_{lab[1]}"

        lines = ["graph gadget {"]
        for lab in label_set(self.n):
            lines.append(f'  {lname(lab)} [label="{lab[0]}..{lab[1]}"];')
            lines.append(f'  {lname(lab)}p [label="{lab[0]}..{lab[1]}\'"];')
        for lab, u in self._tree_edges:
            lines.append(f"  {lname(lab)} -- x{u};")
            lines.append(f"  {lname(lab)}p -- x{u}p;")
        for i in range(1, self.n + 1):
            if i <= self.k:
                lines.append(f"  u{i} -- {lname(self.a[i - 1])};")
                lines.append(f"  v{i} -- {lname(self.b[i - 1])}p;")
            else:
                lines.append(f"  u{i} -- v{i};")
        lines.append("}")
        return "\n".join(lines)


def assemble_block(
    field: Field, a: np.ndarray, bmat: np.ndarray, x: list[int], y: list[int]
) -> np.ndarray:
    """Block matrix [[A, diag(x) pad], [diag(y) pad, B]] of size (n+m)^2."""
    n = a.shape[0]
    m = bmat.shape[0]
    if a.shape != (n, n) or bmat.shape != (m, m) or len(x) != n or len(y) != n or m < n:
        raise DimensionMismatch("incompatible block shapes")
    h = np.zeros((n + m, n + m), dtype=np.int64)
    h[:n, :n] = a % field.p
    h[n:, n:] = bmat % field.p
    for i in range(n):
        h[i, n + i] = x[i] % field.p
        h[n + i, i] = y[i] % field.p
    return h


def block_det_expansion(
    field: Field, a: np.ndarray, bmat: np.ndarray, x: list[int], y: list[int]
) -> int:
    """Reference expansion: det(H) as the signed sum over index pairs S, T of
    det(A without rows S / cols T) * det(B without rows T / cols S) * x^S y^T.

    Exponential in n; used by tests and verify mode on small instances.
    """
    from . import linalg

    n = a.shape[0]
    total = 0
    for size in range(n + 1):
        for s_set in combinations(range(1, n + 1), size):
            xs = 1
            for i in s_set:
                xs = xs * x[i - 1] % field.p
            for t_set in combinations(range(1, n + 1), size):
                da = linalg.det_oracle(field, linalg.delete(a, s_set, t_set))
                if da == 0:
                    continue
                db = linalg.det_oracle(field, linalg.delete(bmat, t_set, s_set))
                if db == 0:
                    continue
                term = da * db % field.p * xs % field.p
                for j in t_set:
                    term = term * y[j - 1] % field.p
                if size % 2:
                    term = field.p - term
                total = (total + term) % field.p
    return total % field.p
