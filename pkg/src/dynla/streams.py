"""Update-stream parsing.

Grammar (1-based indices, ``#`` comments, blank lines ignored)::

    header      := "matrix" n | "bipartite" nL nR | "graph" n
                 | "weighted" nL nR Wmax
    directives  := ("prime" p | "seed" s)*          # before begin
    preprocess  := ("set" i j val | "+" u v [w])*   # initial state
    "begin"
    updates     := ("entry" i j val                 # absolute assignment
                  | "col" j z i1 v1 ... iz vz       # absolute assignments
                  | "+" u v [w] | "-" u v
                  | "w" u v weight)*

Every operation is bounds-checked against the header when parsed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import StreamSyntaxError


@dataclass
class Op:
    kind: str  # "entry" | "col" | "add" | "remove" | "weight"
    args: tuple


@dataclass
class UpdateStream:
    kind: str  # "matrix" | "bipartite" | "graph" | "weighted"
    n: int = 0
    nl: int = 0
    nr: int = 0
    wmax: int = 0
    prime: int | None = None
    seed: int | None = None
    preprocess: list[Op] = field(default_factory=list)
    updates: list[Op] = field(default_factory=list)


def _err(lineno: int, msg: str) -> StreamSyntaxError:
    return StreamSyntaxError(f"line {lineno}: {msg}")


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise _err(lineno, f"expected an integer, got {tok!r}") from None


def parse(text: str) -> UpdateStream:
    stream: UpdateStream | None = None
    begun = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head, rest = toks[0], toks[1:]
        if stream is None:
            nums = [_int(t, lineno) for t in rest]
            if head == "matrix" and len(nums) == 1:
                stream = UpdateStream("matrix", n=nums[0])
            elif head == "graph" and len(nums) == 1:
                stream = UpdateStream("graph", n=nums[0])
            elif head == "bipartite" and len(nums) == 2:
                stream = UpdateStream("bipartite", nl=nums[0], nr=nums[1])
            elif head == "weighted" and len(nums) == 3:
                stream = UpdateStream(
                    "weighted", nl=nums[0], nr=nums[1], wmax=nums[2]
                )
            else:
                raise _err(lineno, f"invalid header {line!r}")
            if min([stream.n] if stream.kind in ("matrix", "graph") else [stream.nl, stream.nr]) < 1:
                raise _err(lineno, "dimensions must be positive")
            if stream.kind == "weighted" and stream.wmax < 1:
                raise _err(lineno, "Wmax must be positive")
            continue
        if not begun and head == "prime":
            if len(rest) != 1:
                raise _err(lineno, "prime takes one argument")
            stream.prime = _int(rest[0], lineno)
            continue
        if not begun and head == "seed":
            if len(rest) != 1:
                raise _err(lineno, "seed takes one argument")
            stream.seed = _int(rest[0], lineno)
            continue
        if head == "begin":
            if begun:
                raise _err(lineno, "duplicate begin")
            begun = True
            continue
        op = _parse_op(stream, head, rest, lineno, preprocessing=not begun)
        (stream.updates if begun else stream.preprocess).append(op)
    if stream is None:
        raise StreamSyntaxError("empty stream: missing header")
    if not begun:
        raise StreamSyntaxError("missing begin line")
    return stream


def _parse_op(
    stream: UpdateStream, head: str, rest: list[str], lineno: int, preprocessing: bool
) -> Op:
    nums = [_int(t, lineno) for t in rest]
    matrixlike = stream.kind == "matrix"
    if head == "set" and preprocessing and matrixlike:
        head = "entry"  # preprocessing spelling of the same assignment
    if head == "entry" and matrixlike:
        if len(nums) != 3:
            raise _err(lineno, "entry takes: i j val")
        i, j, val = nums
        _check_index(stream, i, j, lineno)
        return Op("entry", (i, j, val))
    if head == "col" and matrixlike and not preprocessing:
        if len(nums) < 2 or len(nums) != 2 + 2 * nums[1]:
            raise _err(lineno, "col takes: j z i1 v1 ... iz vz")
        j, z = nums[0], nums[1]
        pairs = list(zip(nums[2::2], nums[3::2]))
        for i, _ in pairs:
            _check_index(stream, i, j, lineno)
        return Op("col", (j, tuple(pairs)))
    if head in ("+", "-", "w") and not matrixlike:
        if stream.kind == "weighted":
            if head == "-":
                if len(nums) != 2:
                    raise _err(lineno, "- takes: u v")
                nums = nums + [0]
            elif len(nums) == 2 and head == "+":
                nums = nums + [1]
            elif len(nums) != 3:
                raise _err(lineno, f"{head} takes: u v w")
            u, v, w = nums
            _check_bip(stream, u, v, lineno)
            if not 0 <= w <= stream.wmax:
                raise _err(lineno, f"weight {w} outside [0, {stream.wmax}]")
            return Op("weight", (u, v, w))
        if len(nums) != 2:
            raise _err(lineno, f"{head} takes: u v")
        u, v = nums
        if stream.kind == "bipartite":
            _check_bip(stream, u, v, lineno)
        else:
            if not (1 <= u <= stream.n and 1 <= v <= stream.n) or u == v:
                raise _err(lineno, f"invalid edge ({u}, {v})")
        if head == "w":
            raise _err(lineno, "w is only valid in weighted streams")
        return Op("add" if head == "+" else "remove", (u, v))
    raise _err(lineno, f"invalid operation {head!r} here")


def _check_index(stream: UpdateStream, i: int, j: int, lineno: int) -> None:
    if not (1 <= i <= stream.n and 1 <= j <= stream.n):
        raise _err(lineno, f"index ({i}, {j}) outside [1, {stream.n}]^2")


def _check_bip(stream: UpdateStream, u: int, v: int, lineno: int) -> None:
    if not (1 <= u <= stream.nl and 1 <= v <= stream.nr):
        raise _err(lineno, f"edge ({u}, {v}) outside {stream.nl}x{stream.nr}")
