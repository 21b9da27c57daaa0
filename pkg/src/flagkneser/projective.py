"""Subspaces of PG(n,q): canonical form, lattice operations, enumeration.

A projective d-space is stored as the unique reduced row echelon basis of
its underlying (d+1)-dimensional vector subspace of GF(q)^(n+1), so equal
subspaces are equal objects.  The empty subspace has d = -1 and no rows.

Points of PG(n,q) carry a pinned order: representatives are normalized so
the last nonzero coordinate is 1, then sorted lexicographically by code
vector.  point_bitset() is an integer whose bit k is point k in this order.
"""

from __future__ import annotations

import bisect
import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import linalg
from .galois import FieldTable, build_field

MAX_INDEXED_POINTS = 6_000_000


@dataclass(frozen=True)
class Subspace:
    """A subspace of PG(n,q) in canonical (RREF) form."""

    n: int
    q: int
    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def from_vectors(cls, n: int, q: int, vectors: Iterable[Sequence[int]]) -> "Subspace":
        fld = build_field(q)
        vecs = [tuple(v) for v in vectors]
        for v in vecs:
            if len(v) != n + 1:
                raise ValueError("vector length %d does not match PG(%d,%d)" % (len(v), n, q))
            if any(not (0 <= c < q) for c in v):
                raise ValueError("coordinate outside 0..%d" % (q - 1))
        return cls(n=n, q=q, rows=linalg.rref(vecs, fld))

    @classmethod
    def empty(cls, n: int, q: int) -> "Subspace":
        return cls(n=n, q=q, rows=())

    @classmethod
    def full(cls, n: int, q: int) -> "Subspace":
        rows = tuple(tuple(1 if j == i else 0 for j in range(n + 1)) for i in range(n + 1))
        return cls(n=n, q=q, rows=rows)

    @property
    def d(self) -> int:
        """Projective dimension; -1 for the empty subspace."""
        return len(self.rows) - 1

    @property
    def field(self) -> FieldTable:
        return build_field(self.q)

    def contains_point(self, v: Sequence[int]) -> bool:
        return linalg.in_rowspace(v, self.rows, self.field)

    def contains(self, other: "Subspace") -> bool:
        self._check_ambient(other)
        return all(linalg.in_rowspace(r, self.rows, self.field) for r in other.rows)

    def _check_ambient(self, other: "Subspace") -> None:
        if (self.n, self.q) != (other.n, other.q):
            raise ValueError("ambient spaces differ: PG(%d,%d) vs PG(%d,%d)"
                             % (self.n, self.q, other.n, other.q))

    def points(self) -> list[tuple[int, ...]]:
        """Normalized point representatives of this subspace, pinned order."""
        idx = point_indexer(self.n, self.q)
        out = [idx.vectors[k] for k in bit_indices(point_bitset(self))]
        return out

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return "Subspace(PG(%d,%d), d=%d)" % (self.n, self.q, self.d)


def span(a: Subspace, b: Subspace) -> Subspace:
    a._check_ambient(b)
    fld = a.field
    return Subspace(a.n, a.q, linalg.rref(a.rows + b.rows, fld))


def meet(a: Subspace, b: Subspace) -> Subspace:
    """Intersection, computed through duals: (A^perp + B^perp)^perp."""
    a._check_ambient(b)
    return dualize(span(dualize(a), dualize(b)))


def dualize(a: Subspace) -> Subspace:
    """Orthogonal complement for the standard dot product on GF(q)^(n+1)."""
    return Subspace(a.n, a.q, linalg.nullspace(a.rows, a.field, a.n + 1))


def intersect_trivially(a: Subspace, b: Subspace) -> bool:
    """True when the two subspaces are disjoint as point sets."""
    a._check_ambient(b)
    return linalg.rank(a.rows + b.rows, a.field) == len(a.rows) + len(b.rows)


class PointIndexer:
    """Pinned enumeration of the points of PG(n,q)."""

    def __init__(self, n: int, q: int):
        self.n = n
        self.q = q
        count = sum(q ** j for j in range(n + 1))
        if count > MAX_INDEXED_POINTS:
            raise ValueError(
                "PG(%d,%d) has %d points, above the indexing cutoff %d"
                % (n, q, count, MAX_INDEXED_POINTS))
        vecs: list[tuple[int, ...]] = []
        for last in range(n + 1):
            tail = (1,) + (0,) * (n - last)
            for head in itertools.product(range(q), repeat=last):
                vecs.append(head + tail)
        vecs.sort()
        self.vectors = vecs
        self.index = {v: k for k, v in enumerate(vecs)}
        self.count = len(vecs)
        # base-q code of every normalized representative -> index, for the
        # vectorized paths (kept small: only built for prime q on demand)
        self._codes: np.ndarray | None = None

    def normalize(self, v: Sequence[int]) -> tuple[int, ...]:
        fld = build_field(self.q)
        last = max(j for j, c in enumerate(v) if c)
        s = fld.inv[v[last]]
        if s == 1:
            return tuple(v)
        return tuple(fld.mul[s][c] for c in v)

    def index_of(self, v: Sequence[int]) -> int:
        return self.index[self.normalize(v)]

    def point_codes(self) -> np.ndarray:
        """Lookup array: base-q encoding (LSB = coordinate 0) -> point index."""
        if self._codes is None:
            m = self.n + 1
            table = np.full(self.q ** m, -1, dtype=np.int64)
            powers = [self.q ** i for i in range(m)]
            for k, v in enumerate(self.vectors):
                table[sum(c * p for c, p in zip(v, powers))] = k
            self._codes = table
        return self._codes


@functools.lru_cache(maxsize=None)
def point_indexer(n: int, q: int) -> PointIndexer:
    build_field(q)  # validates q
    return PointIndexer(n, q)


def point_bitset(a: Subspace) -> int:
    """Integer bitset of the points of a, bit k = point k of PG(n,q)."""
    idx = point_indexer(a.n, a.q)
    if a.d < 0:
        return 0
    fld = a.field
    bits = 0
    for combo in _coeff_reps(a.d + 1, a.q):
        v = linalg.mat_from_combo(combo, a.rows, fld)
        bits |= 1 << idx.index_of(v)
    return bits


def bit_indices(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@functools.lru_cache(maxsize=None)
def _coeff_reps(r: int, q: int) -> tuple[tuple[int, ...], ...]:
    """Coefficient vectors with last nonzero entry 1 (one per point)."""
    out = []
    for last in range(r):
        for head in itertools.product(range(q), repeat=last):
            out.append(head + (1,) + (0,) * (r - last - 1))
    return tuple(out)


# ---------------------------------------------------------------------------
# Enumeration


def rref_patterns(m: int, r: int, q: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All RREF matrices of rank r with m columns, in pinned order.

    Order: pivot column tuples lexicographically, free entries in row-major
    lexicographic order of code vectors.  This order is the canonical
    subspace order used everywhere downstream.
    """
    if r == 0:
        yield ()
        return
    if r < 0 or r > m:
        return
    for pivots in itertools.combinations(range(m), r):
        cells = [(i, c) for i in range(r) for c in range(pivots[i] + 1, m)
                 if c not in pivots]
        base = [[0] * m for _ in range(r)]
        for i, p in enumerate(pivots):
            base[i][p] = 1
        if not cells:
            yield tuple(tuple(row) for row in base)
            continue
        for values in itertools.product(range(q), repeat=len(cells)):
            for (i, c), val in zip(cells, values):
                base[i][c] = val
            yield tuple(tuple(row) for row in base)


class PatternCodec:
    """Rank/unrank canonical RREF patterns (m columns, rank r) in the
    rref_patterns order, so subspace ordinals never need a lookup table."""

    def __init__(self, m: int, r: int, q: int):
        self.m, self.r, self.q = m, r, q
        self.combos = list(itertools.combinations(range(m), r))
        self.cells = [
            [(i, c) for i in range(r) for c in range(pv[i] + 1, m) if c not in pv]
            for pv in self.combos
        ]
        self.prefix = [0]
        for cells in self.cells:
            self.prefix.append(self.prefix[-1] + q ** len(cells))
        self.total = self.prefix[-1]
        self._combo_index = {pv: j for j, pv in enumerate(self.combos)}

    def rank(self, rows: tuple[tuple[int, ...], ...]) -> int:
        pivots = tuple(next(j for j, x in enumerate(row) if x) for row in rows)
        try:
            j = self._combo_index[pivots]
        except KeyError:
            raise ValueError("rows are not a rank-%d RREF pattern" % self.r) from None
        val = 0
        for i, c in self.cells[j]:
            val = val * self.q + rows[i][c]
        return self.prefix[j] + val

    def unrank(self, t: int) -> tuple[tuple[int, ...], ...]:
        if not (0 <= t < self.total):
            raise IndexError("pattern ordinal %d out of range" % t)
        j = bisect.bisect_right(self.prefix, t) - 1
        val = t - self.prefix[j]
        cells = self.cells[j]
        rows = [[0] * self.m for _ in range(self.r)]
        for i, p in enumerate(self.combos[j]):
            rows[i][p] = 1
        for i, c in reversed(cells):
            rows[i][c] = val % self.q
            val //= self.q
        return tuple(tuple(row) for row in rows)


def _local_coords(v: Sequence[int], w: Subspace) -> tuple[int, ...]:
    """Coordinates of v in the RREF basis of w (v must lie in w)."""
    pivots = [next(j for j, x in enumerate(row) if x) for row in w.rows]
    return tuple(v[p] for p in pivots)


def _superspace_patterns(m: int, base: tuple[tuple[int, ...], ...], r: int, q: int,
                         fld: FieldTable) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Rank-r RREF matrices over GF(q)^m whose row space contains base.

    Subspaces containing the base correspond bijectively to subspaces of a
    fixed complement; the complement spanned by the unit vectors on the
    non-pivot columns of the base is used.
    """
    k = len(base)
    if r < k:
        return
    if k == 0:
        yield from rref_patterns(m, r, q)
        return
    pivots = [next(j for j, x in enumerate(row) if x) for row in base]
    free_cols = [j for j in range(m) if j not in pivots]
    for pat in rref_patterns(len(free_cols), r - k, q):
        rows = list(base)
        for prow in pat:
            amb = [0] * m
            for j, val in zip(free_cols, prow):
                amb[j] = val
            rows.append(tuple(amb))
        yield linalg.rref(rows, fld)


def enumerate_subspaces(n: int, q: int, d: int, *,
                        contains: Subspace | None = None,
                        within: Subspace | None = None,
                        skew_to: Subspace | None = None) -> Iterator[Subspace]:
    """Stream the d-subspaces of PG(n,q) meeting the given constraints.

    Constraints: contains (a fixed subspace to include), within (a fixed
    subspace to stay inside), skew_to (a fixed subspace to avoid entirely).
    Contradictory constraints yield an empty stream, not an error.  The
    stream follows the canonical order induced by rref_patterns, mapped
    through the basis of `within` when that constraint is present.
    """
    if not (-1 <= d <= n):
        raise ValueError("d=%d outside -1..%d" % (d, n))
    fld = build_field(q)
    w = within if within is not None else Subspace.full(n, q)
    k = contains if contains is not None else Subspace.empty(n, q)
    for s in (w, k):
        if (s.n, s.q) != (n, q):
            raise ValueError("constraint lives in PG(%d,%d), not PG(%d,%d)"
                             % (s.n, s.q, n, q))
    if skew_to is not None and (skew_to.n, skew_to.q) != (n, q):
        raise ValueError("skew_to lives in the wrong ambient space")
    if not w.contains(k):
        return
    if d < k.d or d > w.d:
        return
    if skew_to is not None and k.d >= 0 and not intersect_trivially(k, skew_to):
        return

    m = w.d + 1
    k_local = linalg.rref([_local_coords(row, w) for row in k.rows], fld)
    full_ambient = w.d == n
    for pat in _superspace_patterns(m, k_local, d + 1, q, fld):
        if full_ambient:
            rows = pat
        else:
            rows = linalg.rref(
                [linalg.mat_from_combo(prow, w.rows, fld) for prow in pat], fld)
        sub = Subspace(n, q, rows)
        if skew_to is not None and not intersect_trivially(sub, skew_to):
            continue
        yield sub


# ---------------------------------------------------------------------------
# Text form: "d;row1;row2;..." with comma-separated codes per row


def subspace_to_text(a: Subspace) -> str:
    parts = [str(a.d)]
    parts.extend(",".join(str(c) for c in row) for row in a.rows)
    return ";".join(parts)


def subspace_from_text(text: str, n: int, q: int) -> Subspace:
    parts = text.strip().split(";")
    try:
        d = int(parts[0])
    except ValueError as exc:
        raise ValueError("malformed subspace text %r: bad dimension" % text) from exc
    rows = []
    for chunk in parts[1:]:
        if not chunk:
            continue
        try:
            rows.append(tuple(int(c) for c in chunk.split(",")))
        except ValueError as exc:
            raise ValueError("malformed subspace text %r: bad row %r" % (text, chunk)) from exc
    sub = Subspace.from_vectors(n, q, rows)
    if sub.d != d:
        raise ValueError("subspace text %r declares d=%d but rows span d=%d"
                         % (text, d, sub.d))
    return sub
