"""Exact matrix routines over the table-driven fields.

A matrix is a tuple of rows, each row a tuple of element codes.  Everything
in here is exact integer work; numpy only appears in the batched
point-bitset machinery that the graph-scale scans rely on.

For q = 2 there is a parallel representation of rows as machine integers
(coordinate i sits at bit n - i, so lexicographic order on code vectors is
numeric order on the packed integers).
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .galois import FieldTable

Row = tuple[int, ...]
Matrix = tuple[Row, ...]


def rref(rows: Iterable[Sequence[int]], fld: FieldTable) -> Matrix:
    """Reduced row echelon form; zero rows dropped, pivots normalized to 1."""
    work = [list(r) for r in rows]
    if not work:
        return ()
    m = len(work[0])
    add, mul, neg, inv = fld.add, fld.mul, fld.neg, fld.inv
    out: list[list[int]] = []
    col = 0
    r = 0
    nrows = len(work)
    while r < nrows and col < m:
        piv = next((i for i in range(r, nrows) if work[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        work[r], work[piv] = work[piv], work[r]
        row = work[r]
        s = inv[row[col]]
        if s != 1:
            work[r] = row = [mul[s][x] for x in row]
        for i in range(nrows):
            if i == r or work[i][col] == 0:
                continue
            c = neg[work[i][col]]
            tgt = work[i]
            for j in range(col, m):
                if row[j]:
                    tgt[j] = add[tgt[j]][mul[c][row[j]]]
        r += 1
        col += 1
    for i in range(r):
        out.append(work[i])
    return tuple(tuple(row) for row in out)


def rank(rows: Iterable[Sequence[int]], fld: FieldTable) -> int:
    return len(rref(rows, fld))


def mat_from_combo(combo: Sequence[int], rows: Matrix, fld: FieldTable) -> Row:
    """Linear combination sum_i combo[i] * rows[i]."""
    m = len(rows[0])
    add, mul = fld.add, fld.mul
    out = [0] * m
    for c, row in zip(combo, rows):
        if c == 0:
            continue
        for j in range(m):
            if row[j]:
                out[j] = add[out[j]][mul[c][row[j]]]
    return tuple(out)


def in_rowspace(v: Sequence[int], rows: Matrix, fld: FieldTable) -> bool:
    """Membership test against an RREF matrix."""
    add, mul, neg = fld.add, fld.mul, fld.neg
    res = list(v)
    for row in rows:
        piv = next(j for j, x in enumerate(row) if x)
        c = res[piv]
        if c == 0:
            continue
        c = neg[c]
        for j in range(piv, len(res)):
            if row[j]:
                res[j] = add[res[j]][mul[c][row[j]]]
    return not any(res)


def nullspace(rows: Matrix, fld: FieldTable, m: int) -> Matrix:
    """RREF basis of the right kernel {x : rows @ x = 0} in GF(q)^m."""
    red = rref(rows, fld) if rows else ()
    pivots = [next(j for j, x in enumerate(row) if x) for row in red]
    free = [j for j in range(m) if j not in pivots]
    basis = []
    for c in free:
        vec = [0] * m
        vec[c] = 1
        for i, p in enumerate(pivots):
            vec[p] = fld.neg[red[i][c]]
        basis.append(vec)
    return rref(basis, fld)


# ---------------------------------------------------------------------------
# GF(2) rows as machine integers


def pack_bits(row: Sequence[int], n: int) -> int:
    v = 0
    for i, c in enumerate(row):
        if c:
            v |= 1 << (n - i)
    return v


def unpack_bits(v: int, n: int) -> Row:
    return tuple((v >> (n - i)) & 1 for i in range(n + 1))


def rref_bits(rows: Iterable[int]) -> tuple[int, ...]:
    """RREF over GF(2) on packed rows; result sorted by pivot column."""
    pivots: dict[int, int] = {}
    for v in rows:
        while v:
            h = v.bit_length() - 1
            if h in pivots:
                v ^= pivots[h]
            else:
                pivots[h] = v
                break
    # eliminate each pivot bit from the other rows (reduced form)
    for h in sorted(pivots, reverse=True):
        v = pivots[h]
        for g in pivots:
            if g != h and (pivots[g] >> h) & 1:
                pivots[g] ^= v
    return tuple(pivots[h] for h in sorted(pivots, reverse=True))


def rank_bits(rows: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for v in rows:
        while v:
            h = v.bit_length() - 1
            if h in pivots:
                v ^= pivots[h]
            else:
                pivots[h] = v
                break
    return len(pivots)


# ---------------------------------------------------------------------------
# Batched point bitsets (prime q only; the extension fields never reach the
# enumeration layer)


def coefficient_reps(r: int, q: int) -> np.ndarray:
    """All coefficient vectors in GF(q)^r with last nonzero entry 1.

    One representative per projective point of the row space, so a rank-r
    matrix hit with these yields each point exactly once.
    """
    reps = []
    for last in range(r):
        base = np.zeros(r, dtype=np.int64)
        base[last] = 1
        if last == 0:
            reps.append(base[None, :])
            continue
        grid = np.indices((q,) * last).reshape(last, -1).T
        block = np.zeros((grid.shape[0], r), dtype=np.int64)
        block[:, :last] = grid
        block[:, last] = 1
        reps.append(block)
    return np.concatenate(reps, axis=0)


def batch_point_bitsets(mats: np.ndarray, q: int, point_codes: np.ndarray,
                        n_points: int) -> np.ndarray:
    """Point bitsets for a batch of rank-r RREF matrices, prime q.

    mats: int array (N, r, m).  point_codes: lookup from base-q encoding of a
    normalized vector to its point index (size q^m).  Returns (N, W) uint64
    with W = ceil(n_points / 64).
    """
    if mats.ndim != 3:
        raise ValueError("expected a (N, r, m) batch")
    n, r, m = mats.shape
    coeffs = coefficient_reps(r, q)
    pts = np.einsum("pr,nrm->npm", coeffs, mats.astype(np.int64)) % q
    # scale every vector so its last nonzero coordinate is 1
    nz = pts != 0
    last = (m - 1) - np.argmax(nz[:, :, ::-1], axis=2)
    val = np.take_along_axis(pts, last[:, :, None], axis=2)[:, :, 0]
    inv_t = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv_t[a] = pow(a, q - 2, q)
    pts = (pts * inv_t[val][:, :, None]) % q
    codes = pts @ (q ** np.arange(m, dtype=np.int64))
    idx = point_codes[codes]
    nwords = (n_points + 63) // 64
    bits = np.zeros((n, nwords), dtype=np.uint64)
    rows = np.arange(n)
    for p in range(idx.shape[1]):
        col = idx[:, p]
        bits[rows, col >> 6] |= np.uint64(1) << (col & 63).astype(np.uint64)
    return bits


def words_to_int(words: np.ndarray) -> int:
    out = 0
    for i, w in enumerate(words):
        out |= int(w) << (64 * i)
    return out


def int_to_words(v: int, nwords: int) -> np.ndarray:
    out = np.zeros(nwords, dtype=np.uint64)
    for i in range(nwords):
        out[i] = (v >> (64 * i)) & 0xFFFFFFFFFFFFFFFF
    return out
