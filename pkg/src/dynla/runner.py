"""Drive a maintainer over a parsed update stream.

One output line per post-``begin`` operation; optional per-update oracle
verification and a final JSON counters block.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import graph_oracles, linalg
from .basis import BasisState
from .combi import CombiState
from .dynrank import DynRankState
from .errors import ModeMismatch, VerificationFailure
from .gf import DEFAULT_PRIME, Field, Rng
from .matching import (
    BipartiteInstance,
    KLSTInstance,
    TutteInstance,
    VertexSetInstance,
)
from .rankred import UnboundedRankDS
from .streams import Op, UpdateStream
from .submatrix import SubmatrixState

MODES = (
    "rank",
    "rank-exact",
    "basis",
    "submatrix",
    "match-general",
    "match-bipartite",
    "match-weighted",
    "vset",
    "combi",
)

_STREAM_KIND = {
    "rank": "matrix",
    "rank-exact": "matrix",
    "basis": "matrix",
    "submatrix": "matrix",
    "match-general": "graph",
    "match-bipartite": "bipartite",
    "match-weighted": "weighted",
    "vset": "graph",
    "combi": "bipartite",
}


@dataclass
class RunResult:
    lines: list[str]
    values: list[float]  # one scalar per update, for report trajectories
    stats: dict

    def stats_json(self) -> str:
        return json.dumps(self.stats, indent=2, sort_keys=True)


def _fmt_ids(ids: list[int]) -> str:
    return ",".join(str(i) for i in ids)


def run(
    stream: UpdateStream,
    mode: str,
    prime: int | None = None,
    seed: int | None = None,
    copies: int | None = None,
    verify: bool = False,
    worst_case: bool = False,
    lowrank: bool = False,
) -> RunResult:
    if mode not in MODES:
        raise ModeMismatch(f"unknown mode {mode!r}")
    if stream.kind != _STREAM_KIND[mode]:
        raise ModeMismatch(
            f"mode {mode!r} needs a {_STREAM_KIND[mode]!r} stream, got {stream.kind!r}"
        )
    p = prime if prime is not None else (stream.prime or DEFAULT_PRIME)
    s = seed if seed is not None else (stream.seed or 0)
    field = Field(p)
    rng = Rng(s)
    runner = _RUNNERS[mode](stream, field, rng, copies, worst_case, lowrank)
    lines: list[str] = []
    values: list[float] = []
    for op in stream.updates:
        line, value = runner.apply(op)
        lines.append(line)
        values.append(value)
        if verify:
            runner.verify(line)
    return RunResult(lines=lines, values=values, stats=runner.stats())


def _initial_matrix(stream: UpdateStream, field: Field) -> np.ndarray:
    a = np.zeros((stream.n, stream.n), dtype=np.int64)
    for op in stream.preprocess:
        i, j, val = op.args
        a[i - 1, j - 1] = val % field.p
    return a


class _MatrixMirror:
    """Shared bookkeeping for matrix-stream runners: a plain copy of A."""

    def __init__(self, stream: UpdateStream, field: Field):
        self.field = field
        self.a = _initial_matrix(stream, field)

    def mirror(self, op: Op) -> None:
        if op.kind == "entry":
            i, j, val = op.args
            self.a[i - 1, j - 1] = val % self.field.p
        elif op.kind == "col":
            j, pairs = op.args
            for i, val in pairs:
                self.a[i - 1, j - 1] = val % self.field.p

    def _col_delta(self, j: int, pairs) -> dict[int, int]:
        return {
            i: (val - int(self.a[i - 1, j - 1])) % self.field.p for i, val in pairs
        }


class _RankRunner(_MatrixMirror):
    def __init__(self, stream, field, rng, copies, worst_case, lowrank):
        super().__init__(stream, field)
        self.state = UnboundedRankDS(
            field, self.a.copy(), rng, copies=copies, worst_case=worst_case
        )

    def apply(self, op: Op):
        if op.kind == "entry":
            i, j, val = op.args
            rank = self.state.entry_update(i, j, val)
        else:
            j, pairs = op.args
            rank = self.state.column_update(j, self._col_delta(j, pairs))
        self.mirror(op)
        return f"rank={rank}", float(rank)

    def verify(self, line: str) -> None:
        want = linalg.rank_oracle(self.field, self.a)
        if line != f"rank={want}":
            raise VerificationFailure(f"{line} but oracle rank is {want}")

    def stats(self) -> dict:
        return self.state.counters()


class _RankExactRunner(_MatrixMirror):
    def __init__(self, stream, field, rng, copies, worst_case, lowrank):
        super().__init__(stream, field)
        self.state = DynRankState(field, self.a.copy())

    def apply(self, op: Op):
        if op.kind == "entry":
            i, j, val = op.args
            rank = self.state.entry_update(i, j, val)
        else:
            j, pairs = op.args
            rank = self.state.column_update(j, self._col_delta(j, pairs))
        self.mirror(op)
        return f"rank={rank}", float(rank)

    def verify(self, line: str) -> None:
        want = linalg.rank_oracle(self.field, self.a)
        if line != f"rank={want}":
            raise VerificationFailure(f"{line} but oracle rank is {want}")

    def stats(self) -> dict:
        return {"multiplications": self.state.mults}


class _BasisRunner(_MatrixMirror):
    def __init__(self, stream, field, rng, copies, worst_case, lowrank):
        super().__init__(stream, field)
        self.state = BasisState(field, self.a.copy(), rng, lowrank=lowrank)

    def apply(self, op: Op):
        if op.kind == "entry":
            i, j, val = op.args
            idxs = self.state.set_column(j, {i: val})
        else:
            j, pairs = op.args
            idxs = self.state.set_column(j, dict(pairs))
        self.mirror(op)
        return f"basis={_fmt_ids(idxs)}", float(len(idxs))

    def verify(self, line: str) -> None:
        idxs = self.state.indices()
        rank = linalg.rank_oracle(self.field, self.a)
        ok = len(idxs) == rank
        if ok and rank:
            sub = self.a[:, [c - 1 for c in idxs]]
            ok = (
                linalg.rank_oracle(self.field, sub) == rank
                and linalg.rank_oracle(self.field, np.hstack([sub, self.a])) == rank
            )
        if not ok:
            raise VerificationFailure(f"{line} fails the basis oracle (rank {rank})")

    def stats(self) -> dict:
        return {
            "probes": self.state.probes,
            "searches": self.state.searches,
            "max_probes_per_search": self.state.max_probes_per_search,
        }


class _SubmatrixRunner(_MatrixMirror):
    def __init__(self, stream, field, rng, copies, worst_case, lowrank):
        super().__init__(stream, field)
        self.state = SubmatrixState(field, self.a.copy(), rng)

    def apply(self, op: Op):
        if op.kind != "entry":
            raise ModeMismatch("submatrix mode supports entry updates only")
        i, j, val = op.args
        rows, cols = self.state.entry_update(i, j, val)
        self.mirror(op)
        return f"rows={_fmt_ids(rows)} cols={_fmt_ids(cols)}", float(len(rows))

    def verify(self, line: str) -> None:
        rows, cols = self.state.rows(), self.state.cols()
        rank = linalg.rank_oracle(self.field, self.a)
        ok = len(rows) == len(cols) == rank
        if ok and rank:
            minor = linalg.submatrix(self.state.a, rows, cols)
            ok = linalg.det_oracle(self.field, minor) != 0
        if not ok:
            self.state.verify_and_repair()
            raise VerificationFailure(f"{line} fails the minor oracle (rank {rank})")

    def stats(self) -> dict:
        return {
            "probes": self.state.probes,
            "relinks": self.state.relinks,
            "rebuilds": self.state.rebuilds,
        }


class _GraphEdges:
    def __init__(self):
        self.edges: set[tuple[int, int]] = set()

    def toggle(self, op: Op) -> tuple[int, int, bool]:
        u, v = op.args
        present = op.kind == "add"
        key = (min(u, v), max(u, v))
        if present:
            self.edges.add(key)
        else:
            self.edges.discard(key)
        return u, v, present


class _MatchGeneralRunner(_GraphEdges):
    def __init__(self, stream, field, rng, copies, worst_case, lowrank):
        super().__init__()
        self.n = stream.n
        self.inst = TutteInstance(field, stream.n, rng, worst_case=worst_case)
        for op in stream.preprocess:
            self.inst.edge_update(*op.args, True)
            self.edges.add((min(op.args), max(op.args)))

    def apply(self, op: Op):
        u, v, present = self.toggle(op)
        size = self.inst.edge_update(u, v, present)
        return f"match={size}", float(size)

    def verify(self, line: str) -> None:
        want = graph_oracles.matching_size_general(self.n, self.edges)
        if line != f"match={want}":
            raise VerificationFailure(f"{line} but oracle says {want}")

    def stats(self) -> dict:
        return self.inst.structure.counters()


class _MatchBipartiteRunner(_GraphEdges):
    def __init__(self, stream, field, rng, copies, worst_case, lowrank):
        super().__init__()
        self.nl, self.nr = stream.nl, stream.nr
        self.inst = BipartiteInstance(
            field, stream.nl, stream.nr, rng, worst_case=worst_case
        )
        for op in stream.preprocess:
            self.inst.edge_update(*op.args, True)
            self.edges.add(op.args)

    def apply(self, op: Op):
        u, v = op.args
        present = op.kind == "add"
        if present:
            self.edges.add((u, v))
        else:
            self.edges.discard((u, v))
        size = self.inst.edge_update(u, v, present)
        return f"match={size}", float(size)

    def verify(self, line: str) -> None:
        want = graph_oracles.hopcroft_karp(self.nl, self.nr, self.edges)
        if line != f"match={want}":
            raise VerificationFailure(f"{line} but oracle says {want}")

    def stats(self) -> dict:
        return self.inst.structure.counters()


class _MatchWeightedRunner:
    def __init__(self, stream, field, rng, copies, worst_case, lowrank):
        self.inst = KLSTInstance(
            field, stream.nl, stream.nr, stream.wmax, rng, worst_case=worst_case
        )
        self.weights: dict[tuple[int, int], int] = {}
        for op in stream.preprocess:
            u, v, w = op.args
            self.inst.edge_update(u, v, w)
            self._note(u, v, w)

    def _note(self, u, v, w):
        if w:
            self.weights[(u, v)] = w
        else:
            self.weights.pop((u, v), None)

    def apply(self, op: Op):
        u, v, w = op.args
        value = self.inst.edge_update(u, v, w)
        self._note(u, v, w)
        return f"weight={value}", float(value)

    def verify(self, line: str) -> None:
        want = graph_oracles.max_matching_weight_bipartite(self.weights)
        if line != f"weight={want}":
            raise VerificationFailure(f"{line} but oracle says {want}")

    def stats(self) -> dict:
        return self.inst.structure.counters()


class _VSetRunner(_GraphEdges):
    def __init__(self, stream, field, rng, copies, worst_case, lowrank):
        super().__init__()
        self.n = stream.n
        self.inst = VertexSetInstance(field, stream.n, rng)
        for op in stream.preprocess:
            self.inst.edge_update(*op.args, True)
            self.edges.add((min(op.args), max(op.args)))

    def apply(self, op: Op):
        u, v, present = self.toggle(op)
        vs = self.inst.edge_update(u, v, present)
        return f"vset={_fmt_ids(vs)}", float(len(vs))

    def verify(self, line: str) -> None:
        vs = self.inst.vertex_set()
        want = graph_oracles.matching_size_general(self.n, self.edges)
        if len(vs) != 2 * want or not graph_oracles.has_perfect_matching(
            vs, self.edges
        ):
            raise VerificationFailure(f"{line} fails the matched-set oracle")

    def stats(self) -> dict:
        return {
            "probes": self.inst.state.probes,
            "relinks": self.inst.state.relinks,
            "rebuilds": self.inst.state.rebuilds,
        }


class _CombiRunner:
    def __init__(self, stream, field, rng, copies, worst_case, lowrank):
        self.nl, self.nr = stream.nl, stream.nr
        self.state = CombiState(stream.nl, stream.nr)
        self.edges: set[tuple[int, int]] = set()
        for op in stream.preprocess:
            u, v = op.args
            self.state.insert(u, stream.nl + v)
            self.edges.add((u, v))

    def apply(self, op: Op):
        u, v = op.args
        if op.kind == "add":
            m = self.state.insert(u, self.nl + v)
            self.edges.add((u, v))
        else:
            m = self.state.delete(u, self.nl + v)
            self.edges.discard((u, v))
        text = ",".join(f"{a}-{b}" for a, b in m)
        return f"edges={text}", float(len(m))

    def verify(self, line: str) -> None:
        want = graph_oracles.hopcroft_karp(self.nl, self.nr, self.edges)
        m = self.state.matching()
        ok = len(m) == want and all(
            (u, v - self.nl) in self.edges for u, v in m
        )
        if not ok:
            raise VerificationFailure(f"{line} but oracle size is {want}")

    def stats(self) -> dict:
        return {"steps": self.state.steps}


_RUNNERS = {
    "rank": _RankRunner,
    "rank-exact": _RankExactRunner,
    "basis": _BasisRunner,
    "submatrix": _SubmatrixRunner,
    "match-general": _MatchGeneralRunner,
    "match-bipartite": _MatchBipartiteRunner,
    "match-weighted": _MatchWeightedRunner,
    "vset": _VSetRunner,
    "combi": _CombiRunner,
}
