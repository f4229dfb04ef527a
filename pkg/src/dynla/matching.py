"""Algebraic dynamic matching on top of the rank and submatrix maintainers.

Four maintained quantities:

* general graphs — the randomized skew-symmetric adjacency matrix (fresh
  nonzero value per edge insertion, antisymmetric placement) has rank equal
  to twice the maximum matching size w.h.p.;
* bipartite graphs — the randomized biadjacency matrix has rank equal to
  the maximum matching size w.h.p.;
* weighted bipartite graphs — each vertex is split into W_max copies and a
  weight-w edge {u, v} becomes the diagonal edges {u_a, v_{w+1-a}} for
  a = 1..w; the expanded graph's maximum matching size equals the maximum
  matching weight of the original graph;
* matched vertex set — the full-rank submatrix maintainer runs directly on
  the randomized skew-symmetric matrix; its row and column index sets agree
  as vertex sets and induce a subgraph with a perfect matching.

Each edge update translates to O(1) (or O(W) in the weighted case) entry
updates pushed into the underlying rank structure.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    IndexOutOfRange,
    NegativeWeight,
    ProbabilisticFailure,
    SelfLoop,
    WeightTooLarge,
)
from .gf import Field, Rng
from .rankred import UnboundedRankDS
from .submatrix import SubmatrixState


class TutteInstance:
    """Maximum matching size of a general graph via a skew-symmetric matrix."""

    def __init__(self, field: Field, n: int, rng: Rng, worst_case: bool = False):
        self.field = field
        self.n = n
        self.rng = rng
        self.edges: set[tuple[int, int]] = set()
        self.structure = UnboundedRankDS(
            field, np.zeros((n, n), dtype=np.int64), rng.spawn(1), worst_case=worst_case
        )

    def _check(self, u: int, v: int) -> tuple[int, int]:
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        if not (1 <= u <= self.n and 1 <= v <= self.n):
            raise IndexOutOfRange(f"edge ({u}, {v}) outside [1, {self.n}]")
        return (min(u, v), max(u, v))

    def edge_update(self, u: int, v: int, present: bool) -> int:
        """Insert (fresh random value, also on re-insertion) or delete {u, v};
        returns the maximum matching size."""
        u, v = self._check(u, v)
        if present:
            x = self.rng.sample_nonzero(self.field)
            self.edges.add((u, v))
        else:
            x = 0
            self.edges.discard((u, v))
        self.structure.entry_update(u, v, x)
        rank = self.structure.entry_update(v, u, (-x) % self.field.p)
        return rank // 2

    def size(self) -> int:
        return self.structure.rank // 2

    def check_invariants(self) -> None:
        a = self.structure.a
        assert np.array_equal(a, (-a.T) % self.field.p)
        assert not np.diagonal(a).any()
        support = {(i + 1, j + 1) for i, j in zip(*np.nonzero(a)) if i < j}
        assert support == self.edges


class BipartiteInstance:
    """Maximum matching size of a bipartite graph via its biadjacency rank."""

    def __init__(
        self, field: Field, nl: int, nr: int, rng: Rng, worst_case: bool = False
    ):
        self.field = field
        self.nl = nl
        self.nr = nr
        self.rng = rng
        self.edges: set[tuple[int, int]] = set()
        self.structure = UnboundedRankDS(
            field, np.zeros((nl, nr), dtype=np.int64), rng.spawn(1), worst_case=worst_case
        )

    def edge_update(self, u: int, v: int, present: bool) -> int:
        """u indexes the left side, v the right side (both 1-based)."""
        if not (1 <= u <= self.nl and 1 <= v <= self.nr):
            raise IndexOutOfRange(f"edge ({u}, {v}) outside {self.nl}x{self.nr}")
        if present:
            x = self.rng.sample_nonzero(self.field)
            self.edges.add((u, v))
        else:
            x = 0
            self.edges.discard((u, v))
        return self.structure.entry_update(u, v, x)

    def size(self) -> int:
        return self.structure.rank


class KLSTInstance:
    """Maximum matching weight of a bipartite graph with integer weights.

    Vertex u on the left owns rows (u-1)*wmax + 1 .. u*wmax of the expanded
    biadjacency (copies u_1..u_wmax); similarly for right-side columns.
    """

    def __init__(
        self,
        field: Field,
        nl: int,
        nr: int,
        wmax: int,
        rng: Rng,
        worst_case: bool = False,
    ):
        self.field = field
        self.nl = nl
        self.nr = nr
        self.wmax = wmax
        self.rng = rng
        self.weights: dict[tuple[int, int], int] = {}
        self.structure = UnboundedRankDS(
            field,
            np.zeros((nl * wmax, nr * wmax), dtype=np.int64),
            rng.spawn(1),
            worst_case=worst_case,
        )

    def _cells(self, u: int, v: int, w: int) -> list[tuple[int, int]]:
        return [
            ((u - 1) * self.wmax + a, (v - 1) * self.wmax + (w + 1 - a))
            for a in range(1, w + 1)
        ]

    def edge_update(self, u: int, v: int, w: int) -> int:
        """Set the weight of {u, v} (0 deletes); returns max matching weight."""
        if w < 0:
            raise NegativeWeight(f"weight {w} for edge ({u}, {v})")
        if w > self.wmax:
            raise WeightTooLarge(f"weight {w} exceeds declared maximum {self.wmax}")
        if not (1 <= u <= self.nl and 1 <= v <= self.nr):
            raise IndexOutOfRange(f"edge ({u}, {v}) outside {self.nl}x{self.nr}")
        old = self.weights.pop((u, v), 0)
        for i, j in self._cells(u, v, old):
            self.structure.entry_update(i, j, 0)
        rank = self.structure.rank
        if w > 0:
            self.weights[(u, v)] = w
            for i, j in self._cells(u, v, w):
                rank = self.structure.entry_update(
                    i, j, self.rng.sample_nonzero(self.field)
                )
        return rank

    def weight(self) -> int:
        return self.structure.rank

    def expanded_edges(self) -> set[tuple[int, int]]:
        """Edge set of the expanded graph (left copy index, right copy index)."""
        out = set()
        for (u, v), w in self.weights.items():
            out.update(self._cells(u, v, w))
        return out


class VertexSetInstance:
    """Vertex set of one maximum matching of a general graph.

    The full-rank submatrix maintainer runs on the randomized skew-symmetric
    matrix; its row set I and column set J coincide as vertex sets (the rows
    of a skew-symmetric matrix that form a row basis index the same vertices
    as a column basis).  On the rare random-evaluation event where they
    disagree, the instance re-randomizes all edge values and rebuilds.
    """

    _REBUILD_ATTEMPTS = 3

    def __init__(self, field: Field, n: int, rng: Rng):
        self.field = field
        self.n = n
        self.rng = rng
        self.edges: set[tuple[int, int]] = set()
        self._fresh_state()

    def _fresh_state(self) -> None:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            x = self.rng.sample_nonzero(self.field)
            a[u - 1, v - 1] = x
            a[v - 1, u - 1] = (-x) % self.field.p
        self.state = SubmatrixState(self.field, a, self.rng.spawn(7))

    def edge_update(self, u: int, v: int, present: bool) -> list[int]:
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        if not (1 <= u <= self.n and 1 <= v <= self.n):
            raise IndexOutOfRange(f"edge ({u}, {v}) outside [1, {self.n}]")
        u, v = min(u, v), max(u, v)
        x = self.rng.sample_nonzero(self.field) if present else 0
        if present:
            self.edges.add((u, v))
        else:
            self.edges.discard((u, v))
        self.state.entry_update(u, v, x)
        self.state.entry_update(v, u, (-x) % self.field.p)
        return self.vertex_set()

    def vertex_set(self) -> list[int]:
        for _ in range(self._REBUILD_ATTEMPTS):
            rows, cols = self.state.rows(), self.state.cols()
            if set(rows) == set(cols):
                return rows
            self._fresh_state()
        raise ProbabilisticFailure("row/column vertex sets keep disagreeing")
