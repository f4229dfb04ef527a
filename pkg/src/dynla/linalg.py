"""Dense GF(p) matrices and ground-truth oracles.

Matrices are ``numpy.int64`` arrays with entries in ``[0, p)``.  The
functions here are the independent reference implementations that the
dynamic structures are checked against; they recompute from scratch on
every call.  Row/column index sets at this public surface are 1-based
(matching the update-stream format); all internal storage is 0-based.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, IndexOutOfRange, NotSquare
from .gf import Field, Rng


def zeros(n: int, m: int | None = None) -> np.ndarray:
    return np.zeros((n, m if m is not None else n), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def random_matrix(field: Field, rng: Rng, n: int, m: int | None = None) -> np.ndarray:
    m = m if m is not None else n
    out = np.empty((n, m), dtype=np.int64)
    for i in range(n):
        for j in range(m):
            out[i, j] = rng.sample(field)
    return out


def random_rank_matrix(field: Field, rng: Rng, n: int, m: int, rank: int) -> np.ndarray:
    """Random n x m matrix of rank exactly min(rank, n, m) (w.h.p.)."""
    r = min(rank, n, m)
    left = random_matrix(field, rng, n, r)
    right = random_matrix(field, rng, r, m)
    return matmul(field, left, right)


def matmul(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    # Entries are < 2**31, so a direct int64 product would overflow for any
    # inner dimension >= 2.  Split b into 16-bit halves: partial products stay
    # below 2**47, leaving 2**16 accumulation headroom.
    b_hi, b_lo = b >> 16, b & 0xFFFF
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for lo in range(0, a.shape[1], 1 << 16):
        hi = min(lo + (1 << 16), a.shape[1])
        blk = a[:, lo:hi]
        part = ((blk @ b_hi[lo:hi]) % field.p << 16) + (blk @ b_lo[lo:hi]) % field.p
        out = (out + part) % field.p
    return out


def matvec(field: Field, a: np.ndarray, v: np.ndarray) -> np.ndarray:
    return matmul(field, a, v.reshape(-1, 1)).reshape(-1)


def _check_indices(idx: Sequence[int], bound: int, what: str) -> list[int]:
    out = []
    for i in idx:
        if not 1 <= i <= bound:
            raise IndexOutOfRange(f"{what} index {i} outside [1, {bound}]")
        out.append(i - 1)
    return out


def submatrix(a: np.ndarray, rows: Iterable[int], cols: Iterable[int]) -> np.ndarray:
    """Submatrix on the given 1-based row/column index sets (sorted order)."""
    r = sorted(set(_check_indices(list(rows), a.shape[0], "row")))
    c = sorted(set(_check_indices(list(cols), a.shape[1], "column")))
    return a[np.ix_(r, c)] if r and c else zeros(len(r), len(c))


def delete(a: np.ndarray, rows: Iterable[int], cols: Iterable[int]) -> np.ndarray:
    """Complementary submatrix: drop the given 1-based rows and columns."""
    dr = set(_check_indices(list(rows), a.shape[0], "row"))
    dc = set(_check_indices(list(cols), a.shape[1], "column"))
    keep_r = [i for i in range(a.shape[0]) if i not in dr]
    keep_c = [j for j in range(a.shape[1]) if j not in dc]
    return a[np.ix_(keep_r, keep_c)] if keep_r and keep_c else zeros(len(keep_r), len(keep_c))


def rank_oracle(field: Field, a: np.ndarray) -> int:
    """Rank over GF(p) by fresh Gaussian elimination."""
    if a.size == 0:
        return 0
    rank, _ = _kernels.elim_rank_det(a % field.p, field.p)
    return int(rank)


def det_oracle(field: Field, a: np.ndarray) -> int:
    """Determinant over GF(p) by fresh Gaussian elimination."""
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"determinant of non-square shape {a.shape}")
    if a.size == 0:
        return 1
    _, det = _kernels.elim_rank_det(a % field.p, field.p)
    return int(det)


def det_perm_sum(field: Field, a: np.ndarray) -> int:
    """Signed permutation-sum determinant; independent cross-check, dim <= 4."""
    n = a.shape[0]
    if n != a.shape[1]:
        raise NotSquare(f"determinant of non-square shape {a.shape}")
    if n > 4:
        raise DimensionMismatch("permutation-sum determinant limited to dim <= 4")
    if n == 0:
        return 1
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = sign
        for i in range(n):
            term = term * int(a[i, perm[i]]) % field.p
        total = (total + term) % field.p
    return total % field.p


def in_span_oracle(field: Field, basis: np.ndarray, v: np.ndarray) -> bool:
    """Whether column vector v lies in the span of the columns of ``basis``."""
    if basis.shape[0] != v.shape[0]:
        raise DimensionMismatch("vector length does not match basis rows")
    base_rank = rank_oracle(field, basis)
    stacked = np.concatenate([basis, v.reshape(-1, 1)], axis=1)
    return rank_oracle(field, stacked) == base_rank


def invert_oracle(field: Field, a: np.ndarray) -> np.ndarray | None:
    """Inverse matrix, or None when singular."""
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"inverse of non-square shape {a.shape}")
    ok, inv = _kernels.invert(a % field.p, field.p)
    return inv if ok else None


def nonsingular_minor(field: Field, a: np.ndarray) -> tuple[list[int], list[int]]:
    """1-based (rows, cols) of a maximal nonsingular submatrix of ``a``."""
    rows, cols = _kernels.nonsingular_minor(a % field.p, field.p)
    return sorted(int(r) + 1 for r in rows), sorted(int(c) + 1 for c in cols)
