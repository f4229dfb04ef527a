"""Independent combinatorial matching oracles (networkx-backed).

These are the cross-checks for the algebraic maintainers and the
deterministic bipartite matcher; they share no code with either.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping

import networkx as nx


def matching_size_general(n: int, edges: Iterable[tuple[int, int]]) -> int:
    """Maximum matching size of a general graph on vertices 1..n."""
    g = nx.Graph()
    g.add_nodes_from(range(1, n + 1))
    g.add_edges_from(edges)
    return len(nx.max_weight_matching(g, maxcardinality=True))


def matching_size_bipartite(
    nl: int, nr: int, edges: Iterable[tuple[int, int]]
) -> int:
    """Maximum matching size; edges pair a left index 1..nl with a right
    index 1..nr."""
    g = nx.Graph()
    left = [("L", u) for u in range(1, nl + 1)]
    g.add_nodes_from(left, bipartite=0)
    g.add_nodes_from([("R", v) for v in range(1, nr + 1)], bipartite=1)
    g.add_edges_from((("L", u), ("R", v)) for u, v in edges)
    match = nx.bipartite.hopcroft_karp_matching(g, top_nodes=left)
    return len(match) // 2


def max_matching_weight_bipartite(
    weights: Mapping[tuple[int, int], int]
) -> int:
    """Maximum total weight over all matchings of a weighted bipartite graph."""
    g = nx.Graph()
    for (u, v), w in weights.items():
        if w > 0:
            g.add_edge(("L", u), ("R", v), weight=w)
    match = nx.max_weight_matching(g)
    return sum(g[a][b]["weight"] for a, b in match)


def hopcroft_karp(nl: int, nr: int, edges: Iterable[tuple[int, int]]) -> int:
    """Maximum bipartite matching size, O(E sqrt(V)); edges are
    (left 1..nl, right 1..nr) pairs.  Self-contained for fast replays."""
    adj: list[list[int]] = [[] for _ in range(nl + 1)]
    for u, v in edges:
        adj[u].append(v)
    mate_l = [0] * (nl + 1)
    mate_r = [0] * (nr + 1)
    inf = float("inf")
    size = 0
    while True:
        dist = [inf] * (nl + 1)
        queue = [u for u in range(1, nl + 1) if not mate_l[u]]
        for u in queue:
            dist[u] = 0
        found = False
        qi = 0
        while qi < len(queue):
            u = queue[qi]
            qi += 1
            for v in adj[u]:
                w = mate_r[v]
                if w == 0:
                    found = True
                elif dist[w] is inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if not found:
            return size

        def dfs(u: int) -> bool:
            for v in adj[u]:
                w = mate_r[v]
                if w == 0 or (dist[w] == dist[u] + 1 and dfs(w)):
                    mate_l[u] = v
                    mate_r[v] = u
                    return True
            dist[u] = inf
            return False

        for u in range(1, nl + 1):
            if not mate_l[u] and dfs(u):
                size += 1


def has_perfect_matching(vertices: list[int], edges: Iterable[tuple[int, int]]) -> bool:
    """Does the induced subgraph on ``vertices`` have a perfect matching?"""
    vs = set(vertices)
    if len(vs) % 2:
        return False
    g = nx.Graph()
    g.add_nodes_from(vs)
    g.add_edges_from((u, v) for u, v in edges if u in vs and v in vs)
    return len(nx.max_weight_matching(g, maxcardinality=True)) * 2 == len(vs)
