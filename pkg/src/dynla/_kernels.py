"""Compiled inner loops shared by the oracle and maintenance layers.

Everything here operates on ``numpy.int64`` arrays holding values in
``[0, p)`` for a prime ``p < 2**31``, so intermediate products fit in 64
bits.  Kernels return explicit field-multiplication counts where callers
need instrumentation.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def mod_inv(a: int, p: int) -> int:
    """Inverse of a mod p (p prime, a != 0) via extended Euclid."""
    t, new_t = 0, 1
    r, new_r = p, a % p
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    if t < 0:
        t += p
    return t


@njit(cache=True)
def elim_rank_det(A: np.ndarray, p: int) -> tuple[int, int]:
    """Destructive Gaussian elimination; returns (rank, det).

    ``det`` is meaningful only for square inputs (0 when singular).
    """
    n, m = A.shape
    det = 1
    rank = 0
    for c in range(m):
        if rank == n:
            break
        piv = -1
        for r in range(rank, n):
            if A[r, c] != 0:
                piv = r
                break
        if piv < 0:
            det = 0
            continue
        if piv != rank:
            for cc in range(c, m):
                tmp = A[piv, cc]
                A[piv, cc] = A[rank, cc]
                A[rank, cc] = tmp
            det = p - det if det != 0 else 0
        pval = A[rank, c]
        det = det * pval % p
        pinv = mod_inv(pval, p)
        for r in range(rank + 1, n):
            f = A[r, c]
            if f == 0:
                continue
            f = f * pinv % p
            A[r, c] = 0
            for cc in range(c + 1, m):
                A[r, cc] = (A[r, cc] - f * A[rank, cc]) % p
        rank += 1
    if rank < n or n != m:
        det = 0
    return rank, det


@njit(cache=True)
def invert(A: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    """Gauss-Jordan inverse; returns (ok, inverse).  ok == 0 when singular."""
    n = A.shape[0]
    work = A.copy()
    inv = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        inv[i, i] = 1
    for c in range(n):
        piv = -1
        for r in range(c, n):
            if work[r, c] != 0:
                piv = r
                break
        if piv < 0:
            return 0, inv
        if piv != c:
            for cc in range(n):
                work[piv, cc], work[c, cc] = work[c, cc], work[piv, cc]
                inv[piv, cc], inv[c, cc] = inv[c, cc], inv[piv, cc]
        pinv = mod_inv(work[c, c], p)
        for cc in range(n):
            work[c, cc] = work[c, cc] * pinv % p
            inv[c, cc] = inv[c, cc] * pinv % p
        for r in range(n):
            if r == c:
                continue
            f = work[r, c]
            if f == 0:
                continue
            for cc in range(n):
                work[r, cc] = (work[r, cc] - f * work[c, cc]) % p
                inv[r, cc] = (inv[r, cc] - f * inv[c, cc]) % p
    return 1, inv


@njit(cache=True)
def nonsingular_minor(A: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Row and column indices (0-based) of a maximal nonsingular submatrix.

    Standard elimination with full pivot bookkeeping: returned rows/cols
    index an invertible rank x rank submatrix of ``A``.
    """
    n, m = A.shape
    work = A.copy()
    rows = np.empty(min(n, m), dtype=np.int64)
    cols = np.empty(min(n, m), dtype=np.int64)
    row_used = np.zeros(n, dtype=np.int64)
    rank = 0
    for c in range(m):
        piv = -1
        for r in range(n):
            if row_used[r] == 0 and work[r, c] != 0:
                piv = r
                break
        if piv < 0:
            continue
        rows[rank] = piv
        cols[rank] = c
        row_used[piv] = 1
        rank += 1
        pinv = mod_inv(work[piv, c], p)
        for r in range(n):
            if row_used[r] == 1 or work[r, c] == 0:
                continue
            f = work[r, c] * pinv % p
            for cc in range(c, m):
                work[r, cc] = (work[r, cc] - f * work[piv, cc]) % p
    return rows[:rank], cols[:rank]


@njit(cache=True)
def echelon_init(A: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, int, int]:
    """Build the echelon factorization U*A = R from scratch.

    Invariant produced (and preserved by :func:`echelon_set_column`):
      * U is invertible, R = U*A mod p,
      * rows ``rank..n-1`` of R are zero,
      * there are ``rank`` pivot columns with ``R[:, pivcol(s)] == e_s``.

    Returns (R, U, pcol_of_row, prow_of_col, rank, mults).
    """
    n, m = A.shape
    R = A % p
    U = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        U[i, i] = 1
    pcol_of_row = np.full(n, -1, dtype=np.int64)
    prow_of_col = np.full(m, -1, dtype=np.int64)
    rank = 0
    mults = 0
    for c in range(m):
        if rank == n:
            break
        piv = -1
        for r in range(rank, n):
            if R[r, c] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for cc in range(m):
                R[piv, cc], R[rank, cc] = R[rank, cc], R[piv, cc]
            for cc in range(n):
                U[piv, cc], U[rank, cc] = U[rank, cc], U[piv, cc]
        pinv = mod_inv(R[rank, c], p)
        for cc in range(m):
            R[rank, cc] = R[rank, cc] * pinv % p
        for cc in range(n):
            U[rank, cc] = U[rank, cc] * pinv % p
        mults += m + n
        for r in range(n):
            if r == rank:
                continue
            f = R[r, c]
            if f == 0:
                continue
            for cc in range(m):
                R[r, cc] = (R[r, cc] - f * R[rank, cc]) % p
            for cc in range(n):
                U[r, cc] = (U[r, cc] - f * U[rank, cc]) % p
            mults += m + n
        pcol_of_row[rank] = c
        prow_of_col[c] = rank
        rank += 1
    return R, U, pcol_of_row, prow_of_col, rank, mults


@njit(cache=True)
def echelon_set_column(
    R: np.ndarray,
    U: np.ndarray,
    pcol_of_row: np.ndarray,
    prow_of_col: np.ndarray,
    rank: int,
    c: int,
    vidx: np.ndarray,
    vval: np.ndarray,
    p: int,
) -> tuple[int, int]:
    """Apply the column update A[:, c] += v (v sparse) to U*A = R in place.

    Returns (new_rank, mults).  The rank moves by at most one.
    """
    n, m = R.shape
    mults = 0
    s0 = prow_of_col[c]
    if s0 >= 0:
        # Column c holds a pivot: hand the pivot role to another column or
        # retire the pivot row before the column is overwritten.
        d = -1
        for col in range(m):
            if col != c and prow_of_col[col] < 0 and R[s0, col] != 0:
                d = col
                break
        if d >= 0:
            pinv = mod_inv(R[s0, d], p)
            for cc in range(m):
                R[s0, cc] = R[s0, cc] * pinv % p
            for cc in range(n):
                U[s0, cc] = U[s0, cc] * pinv % p
            mults += m + n
            for t in range(rank):
                if t == s0:
                    continue
                f = R[t, d]
                if f == 0:
                    continue
                for cc in range(m):
                    R[t, cc] = (R[t, cc] - f * R[s0, cc]) % p
                for cc in range(n):
                    U[t, cc] = (U[t, cc] - f * U[s0, cc]) % p
                mults += m + n
            prow_of_col[c] = -1
            prow_of_col[d] = s0
            pcol_of_row[s0] = d
        else:
            last = rank - 1
            if s0 != last:
                for cc in range(m):
                    R[s0, cc], R[last, cc] = R[last, cc], R[s0, cc]
                for cc in range(n):
                    U[s0, cc], U[last, cc] = U[last, cc], U[s0, cc]
                dcol = pcol_of_row[last]
                pcol_of_row[s0] = dcol
                prow_of_col[dcol] = s0
            pcol_of_row[last] = -1
            prow_of_col[c] = -1
            rank = last
    # R[:, c] <- R[:, c] + U * v  (v carries the sparse column delta of A).
    z = vidx.shape[0]
    for t in range(n):
        acc = R[t, c]
        for s in range(z):
            acc += U[t, vidx[s]] * vval[s] % p
        R[t, c] = acc % p
    mults += n * z
    # Promote a new pivot if the column now reaches below the rank rows.
    h = -1
    for t in range(rank, n):
        if R[t, c] != 0:
            h = t
            break
    if h >= 0:
        if h != rank:
            for cc in range(m):
                R[h, cc], R[rank, cc] = R[rank, cc], R[h, cc]
            for cc in range(n):
                U[h, cc], U[rank, cc] = U[rank, cc], U[h, cc]
        s = rank
        pinv = mod_inv(R[s, c], p)
        R[s, c] = 1
        for cc in range(n):
            U[s, cc] = U[s, cc] * pinv % p
        mults += n
        for t in range(n):
            if t == s:
                continue
            f = R[t, c]
            if f == 0:
                continue
            R[t, c] = 0
            for cc in range(n):
                U[t, cc] = (U[t, cc] - f * U[s, cc]) % p
            mults += n
        pcol_of_row[s] = c
        prow_of_col[c] = s
        rank += 1
    return rank, mults


@njit(cache=True)
def sm_entry_update(
    H: np.ndarray, Hinv: np.ndarray, i: int, j: int, delta: int, p: int
) -> tuple[int, int]:
    """Sherman-Morrison step for H' = H + delta * e_i e_j^T.

    Returns (ok, mults).  ok == 0 means H' would be singular; nothing is
    modified in that case.  Otherwise H and Hinv are updated in place.
    """
    n = H.shape[0]
    s = (1 + delta * Hinv[j, i]) % p
    if s == 0:
        return 0, 1
    coef = delta * mod_inv(s, p) % p
    col = Hinv[:, i].copy()
    row = Hinv[j, :].copy()
    mults = 2
    for a in range(n):
        ca = col[a] * coef % p
        if ca == 0:
            continue
        for b in range(n):
            Hinv[a, b] = (Hinv[a, b] - ca * row[b]) % p
        mults += n + 1
    H[i, j] = (H[i, j] + delta) % p
    return 1, mults


@njit(cache=True)
def level_propagate(
    Q: np.ndarray,
    colsM: np.ndarray,
    valsM: np.ndarray,
    colsN: np.ndarray,
    valsN: np.ndarray,
    c: int,
    vidx: np.ndarray,
    vval: np.ndarray,
    p: int,
) -> int:
    """Column update A[:, c] += v pushed into all copies of Q = M^T A N.

    Q is (copies, r, r); colsM/valsM describe the row sketches M (one per
    copy), colsN/valsN the column sketches N.  Returns the multiplication
    count.  Row c of each N has two nonzeros, so two columns of each Q
    change by (M^T v) scaled.
    """
    C, r, _ = Q.shape
    z = vidx.shape[0]
    mults = 0
    mv = np.zeros(r, dtype=np.int64)
    for t in range(C):
        for a in range(r):
            mv[a] = 0
        for s in range(z):
            i = vidx[s]
            v = vval[s]
            c0 = colsM[t, i, 0]
            c1 = colsM[t, i, 1]
            mv[c0] = (mv[c0] + valsM[t, i, 0] * v) % p
            mv[c1] = (mv[c1] + valsM[t, i, 1] * v) % p
        mults += 2 * z
        for side in range(2):
            qc = colsN[t, c, side]
            w = valsN[t, c, side]
            for a in range(r):
                x = mv[a]
                if x != 0:
                    Q[t, a, qc] = (Q[t, a, qc] + x * w) % p
                    mults += 1
    return mults


@njit(cache=True)
def level_update_active(
    Q: np.ndarray,
    R: np.ndarray,
    U: np.ndarray,
    pcol: np.ndarray,
    prow: np.ndarray,
    ranks: np.ndarray,
    colsM: np.ndarray,
    valsM: np.ndarray,
    colsN: np.ndarray,
    valsN: np.ndarray,
    c: int,
    vidx: np.ndarray,
    vval: np.ndarray,
    p: int,
) -> tuple[int, int, int]:
    """Like :func:`level_propagate` but also feeds the deltas through the
    echelon structures of every copy.  Returns (best_rank, prop_mults,
    inner_mults)."""
    C, r, _ = Q.shape
    z = vidx.shape[0]
    prop_mults = 0
    inner_mults = 0
    best = 0
    mv = np.zeros(r, dtype=np.int64)
    nzidx = np.empty(r, dtype=np.int64)
    nzval = np.empty(r, dtype=np.int64)
    for t in range(C):
        for a in range(r):
            mv[a] = 0
        for s in range(z):
            i = vidx[s]
            v = vval[s]
            c0 = colsM[t, i, 0]
            c1 = colsM[t, i, 1]
            mv[c0] = (mv[c0] + valsM[t, i, 0] * v) % p
            mv[c1] = (mv[c1] + valsM[t, i, 1] * v) % p
        prop_mults += 2 * z
        for side in range(2):
            qc = colsN[t, c, side]
            w = valsN[t, c, side]
            cnt = 0
            for a in range(r):
                x = mv[a]
                if x != 0:
                    d = x * w % p
                    Q[t, a, qc] = (Q[t, a, qc] + d) % p
                    nzidx[cnt] = a
                    nzval[cnt] = d
                    cnt += 1
            prop_mults += cnt
            if cnt > 0:
                rk, mm = echelon_set_column(
                    R[t], U[t], pcol[t], prow[t], ranks[t], qc,
                    nzidx[:cnt], nzval[:cnt], p,
                )
                ranks[t] = rk
                inner_mults += mm
        if ranks[t] > best:
            best = ranks[t]
    return best, prop_mults, inner_mults


def warmup() -> None:
    """Force-compile all kernels on a tiny input (numba caches the result)."""
    p = 7
    a = np.array([[1, 2], [3, 4]], dtype=np.int64)
    elim_rank_det(a.copy(), p)
    invert(a, p)
    nonsingular_minor(a, p)
    R, U, pc, pr, rank, _ = echelon_init(a, p)
    echelon_set_column(
        R, U, pc, pr, rank, 0,
        np.array([0], dtype=np.int64), np.array([1], dtype=np.int64), p,
    )
    ok, inv = invert(a, p)
    if ok:
        sm_entry_update(a.copy(), inv, 0, 0, 1, p)
    cols = np.zeros((1, 2, 2), dtype=np.int64)
    cols[:, :, 1] = 1
    vals = np.ones((1, 2, 2), dtype=np.int64)
    q = np.zeros((1, 2, 2), dtype=np.int64)
    one_i = np.array([0], dtype=np.int64)
    one_v = np.array([1], dtype=np.int64)
    level_propagate(q, cols, vals, cols, vals, 0, one_i, one_v, p)
    r3 = np.zeros((1, 2, 2), dtype=np.int64)
    u3 = np.eye(2, dtype=np.int64).reshape(1, 2, 2).copy()
    pc3 = np.full((1, 2), -1, dtype=np.int64)
    pr3 = np.full((1, 2), -1, dtype=np.int64)
    ranks = np.zeros(1, dtype=np.int64)
    level_update_active(q, r3, u3, pc3, pr3, ranks, cols, vals, cols, vals, 0, one_i, one_v, p)
