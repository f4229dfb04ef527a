"""Deterministic combinatorial maximum matching for bipartite graphs.

``HybridGraph`` stores edges both in an n x n grid (O(1) membership) and in
circular doubly-linked per-row/per-column neighbor lists threaded through
numpy index arrays (O(1) insert/delete, O(1 + skips) "first neighbor outside
S" walks).  Sentinel index n acts as every list's head.

``CombiState`` keeps a maximum matching M.  An update only does real work
when it can change |M|: it builds S = V(M) plus the updated endpoints,
collects one external neighbor per S-vertex by walking neighbor lists and
skipping S-members (each walk ends within |S| + 1 steps because every
skipped vertex is a distinct member of S), materializes the induced
subgraph on W = S union those externals, and runs one layered BFS for an
augmenting path.  Since updates change the maximum matching size by at most
one, one augmentation restores maximality; total cost O(|M|^2) independent
of n.  Ties are always broken toward the smallest vertex index, so replays
are byte-identical.  ``steps`` counts the S-proportional work.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    DuplicateInsert,
    IndexOutOfRange,
    MissingDelete,
    NotBipartite,
)


class HybridGraph:
    """Adjacency grid + linked neighbor lists over vertices 1..n."""

    def __init__(self, n: int):
        self.n = n
        self.grid = np.zeros((n, n), dtype=bool)
        # Row list of u: indices are neighbor vertices (0-based), slot n is
        # the head sentinel.  Column lists are symmetric.
        self.rnext = np.full((n, n + 1), -1, dtype=np.int64)
        self.rprev = np.full((n, n + 1), -1, dtype=np.int64)
        self.rnext[:, n] = n
        self.rprev[:, n] = n
        self._mark = np.zeros(n + 1, dtype=bool)

    def _check(self, u: int, v: int) -> tuple[int, int]:
        if not (1 <= u <= self.n and 1 <= v <= self.n) or u == v:
            raise IndexOutOfRange(f"edge ({u}, {v}) outside [1, {self.n}]")
        return u - 1, v - 1

    def test(self, u: int, v: int) -> bool:
        u0, v0 = self._check(u, v)
        return bool(self.grid[u0, v0])

    def _link(self, row: int, col: int) -> None:
        head_next = self.rnext[row, self.n]
        self.rnext[row, col] = head_next
        self.rprev[row, col] = self.n
        self.rprev[row, head_next] = col
        self.rnext[row, self.n] = col

    def _unlink(self, row: int, col: int) -> None:
        p, nx = self.rprev[row, col], self.rnext[row, col]
        self.rnext[row, p] = nx
        self.rprev[row, nx] = p

    def insert(self, u: int, v: int) -> None:
        u0, v0 = self._check(u, v)
        if self.grid[u0, v0]:
            raise DuplicateInsert(f"edge ({u}, {v}) already present")
        self.grid[u0, v0] = True
        self.grid[v0, u0] = True
        self._link(u0, v0)
        self._link(v0, u0)

    def delete(self, u: int, v: int) -> None:
        u0, v0 = self._check(u, v)
        if not self.grid[u0, v0]:
            raise MissingDelete(f"edge ({u}, {v}) not present")
        self.grid[u0, v0] = False
        self.grid[v0, u0] = False
        self._unlink(u0, v0)
        self._unlink(v0, u0)

    def subgraph(self, s: list[int]) -> np.ndarray:
        """|S| x |S| adjacency of the induced subgraph (grid reads only)."""
        idx = np.array([v - 1 for v in s], dtype=np.int64)
        if len(idx) == 0:
            return np.zeros((0, 0), dtype=bool)
        return self.grid[np.ix_(idx, idx)]

    def external_neighbors(self, s: list[int]) -> dict[int, int | None]:
        """For each v in S, a neighbor outside S (or None).

        Walks v's neighbor list skipping S-members; each skip consumes a
        distinct member of S, so a walk ends within |S| + 1 steps.  Returns
        the number of steps through ``self.steps_hook`` if set by the caller.
        """
        for v in s:
            self._mark[v - 1] = True
        out: dict[int, int | None] = {}
        steps = 0
        for v in s:
            row = v - 1
            cur = self.rnext[row, self.n]
            found: int | None = None
            while cur != self.n:
                steps += 1
                if not self._mark[cur]:
                    found = int(cur) + 1
                    break
                cur = self.rnext[row, cur]
            out[v] = found
        for v in s:
            self._mark[v - 1] = False
        self.last_walk_steps = steps
        return out


class CombiState:
    """Maximum matching of a bipartite graph under edge insert/delete."""

    def __init__(self, nl: int, nr: int):
        self.nl = nl
        self.nr = nr
        self.n = nl + nr
        self.g = HybridGraph(self.n)
        self.mate = [0] * (self.n + 1)  # 0 = free
        self.steps = 0
        self.last_update_steps = 0

    # -- helpers ---------------------------------------------------------------

    def _side(self, v: int) -> int:
        return 0 if v <= self.nl else 1

    def _check_bipartite(self, u: int, v: int) -> None:
        if not (1 <= u <= self.n and 1 <= v <= self.n):
            raise IndexOutOfRange(f"edge ({u}, {v}) outside [1, {self.n}]")
        if self._side(u) == self._side(v):
            raise NotBipartite(f"vertices {u} and {v} are on the same side")

    def matching(self) -> list[tuple[int, int]]:
        return sorted(
            (u, self.mate[u]) for u in range(1, self.nl + 1) if self.mate[u]
        )

    def size(self) -> int:
        return len(self.matching())

    # -- updates -----------------------------------------------------------------

    def insert(self, u: int, v: int) -> list[tuple[int, int]]:
        self._check_bipartite(u, v)
        self.last_update_steps = 0
        self.g.insert(u, v)
        if not self.mate[u] and not self.mate[v]:
            self.mate[u] = v
            self.mate[v] = u
        else:
            self._augment_once(u, v)
        self._account()
        return self.matching()

    def delete(self, u: int, v: int) -> list[tuple[int, int]]:
        self._check_bipartite(u, v)
        self.last_update_steps = 0
        self.g.delete(u, v)
        if self.mate[u] == v:
            self.mate[u] = 0
            self.mate[v] = 0
            self._augment_once(u, v)
        self._account()
        return self.matching()

    def _account(self) -> None:
        self.steps += self.last_update_steps

    def _augment_once(self, u: int, v: int) -> None:
        """Find one augmenting path in the induced subgraph on W and flip it.

        S is V(M) plus the endpoints of the updated edge; any augmenting
        path in G has an analogue in G[W] with its free endpoints replaced
        by external neighbors of their S-successors, and one augmentation
        suffices because an update moves the maximum by at most one.
        """
        s_set = {w for w in (u, v)} | {
            w for w in range(1, self.n + 1) if self.mate[w]
        }
        s = sorted(s_set)
        externals = self.g.external_neighbors(s)
        self.last_update_steps += self.g.last_walk_steps
        w_list = sorted(s_set | {x for x in externals.values() if x is not None})
        adj = self.g.subgraph(w_list)
        self.last_update_steps += len(w_list) ** 2
        path = self._bfs_augment(w_list, adj)
        if path is not None:
            # Odd-position edges were matched and are implicitly unmatched
            # by overwriting their endpoints' mates.
            for i in range(0, len(path) - 1, 2):
                a, b = path[i], path[i + 1]
                self.mate[a] = b
                self.mate[b] = a

    def _bfs_augment(
        self, w_list: list[int], adj: np.ndarray
    ) -> list[int] | None:
        """Layered BFS from all free left vertices of W to a free right
        vertex, alternating non-matching/matching edges; smallest-index
        tie-breaks make the result deterministic."""
        pos = {v: i for i, v in enumerate(w_list)}
        parent: dict[int, int] = {}
        frontier = [v for v in w_list if self._side(v) == 0 and not self.mate[v]]
        visited = set(frontier)
        while frontier:
            nxt = []
            for a in frontier:  # frontier is kept sorted: ties → smallest a
                for bi in np.nonzero(adj[pos[a]])[0]:
                    self.last_update_steps += 1
                    b = w_list[bi]
                    if b in visited or self.mate[a] == b:
                        continue
                    visited.add(b)
                    parent[b] = a
                    if not self.mate[b]:
                        path = [b]
                        while path[-1] in parent:
                            path.append(parent[path[-1]])
                        return path
                    c = self.mate[b]
                    if c in visited or c not in pos:
                        continue
                    visited.add(c)
                    parent[c] = b
                    nxt.append(c)
            frontier = sorted(nxt)
        return None
