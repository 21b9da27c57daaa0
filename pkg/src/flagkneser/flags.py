"""Plane-solid flags of PG(6,q) and their Kneser adjacency.

A flag is an incident pair (plane, solid).  Two flags are adjacent when
they are in general position: every pair of subspaces, one from each flag,
is either disjoint or spans the whole space.  For this flag type that is
equivalent to the two disjointness conditions

    plane(f) `meets` solid(g) == empty  and  plane(g) `meets` solid(f) == empty,

which is what the vectorized scans use; general_position() itself follows
the four-pair definition.

Flag ordinals run through solids in canonical order and, inside each solid,
through its planes in canonical local order.  At q = 2 the universe carries
per-flag point bitsets as numpy arrays (points 0..63 in the low word,
64..126 in the high word), which is what makes whole-graph scans cheap.
Full materialization is limited to q in {2, 3}; at q = 3 per-flag data is
produced on demand instead of being held in memory.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from . import linalg
from .counting import universe_size_formula
from .galois import build_field
from .projective import (PatternCodec, Subspace, dualize, point_bitset,
                         point_indexer, subspace_from_text, subspace_to_text)

N_AMBIENT = 6
MATERIALIZABLE_Q = (2, 3)


@dataclass(frozen=True)
class Flag:
    """An incident plane-solid pair of PG(6,q)."""

    plane: Subspace
    solid: Subspace

    def __post_init__(self):
        if (self.plane.n, self.plane.q) != (self.solid.n, self.solid.q):
            raise ValueError("plane and solid live in different ambient spaces")
        if self.plane.n != N_AMBIENT:
            raise ValueError("flags live in PG(6,q)")
        if self.plane.d != 2 or self.solid.d != 3:
            raise ValueError("expected a plane-solid pair, got dims (%d, %d)"
                             % (self.plane.d, self.solid.d))
        if not self.solid.contains(self.plane):
            raise ValueError("plane is not contained in the solid")

    @property
    def q(self) -> int:
        return self.plane.q


def dualize_flag(f: Flag) -> Flag:
    """Orthogonal-complement duality; an involution on flags."""
    return Flag(plane=dualize(f.solid), solid=dualize(f.plane))


def general_position(f: Flag, g: Flag) -> bool:
    """Kneser adjacency: each of the four cross pairs of subspaces is
    disjoint or spans PG(6,q)."""
    if f.q != g.q:
        raise ValueError("flags over different fields")
    fld = build_field(f.q)
    for a in (f.plane, f.solid):
        for b in (g.plane, g.solid):
            rk = linalg.rank(a.rows + b.rows, fld)
            if rk != len(a.rows) + len(b.rows) and rk != N_AMBIENT + 1:
                return False
    return True


def adjacent(f: Flag, g: Flag) -> bool:
    """The two-disjointness shortcut; agrees with general_position."""
    return (point_bitset(f.plane) & point_bitset(g.solid) == 0
            and point_bitset(g.plane) & point_bitset(f.solid) == 0)


class FlagUniverse:
    """All plane-solid flags of PG(6,q) in canonical order."""

    def __init__(self, q: int):
        if q not in MATERIALIZABLE_Q:
            raise ValueError(
                "full flag enumeration is limited to q in %s; q=%d has %d flags "
                "and the per-flag bitset arrays would not fit in memory"
                % (list(MATERIALIZABLE_Q), q, universe_size_formula(q)))
        self.q = q
        self.n = N_AMBIENT
        self.field = build_field(q)
        self.solid_codec = PatternCodec(self.n + 1, 4, q)
        self.local_plane_codec = PatternCodec(4, 3, q)
        self.n_solids = self.solid_codec.total
        self.planes_per_solid = self.local_plane_codec.total
        self.flag_count = self.n_solids * self.planes_per_solid
        self._local_patterns = [self.local_plane_codec.unrank(i)
                                for i in range(self.planes_per_solid)]
        self.has_masks = q == 2
        if self.has_masks:
            self._build_q2_arrays()

    # -- generic single-flag interface ------------------------------------

    def flag(self, ordinal: int) -> Flag:
        if not (0 <= ordinal < self.flag_count):
            raise IndexError("flag ordinal %d out of range 0..%d"
                             % (ordinal, self.flag_count - 1))
        s_ord, loc = divmod(ordinal, self.planes_per_solid)
        solid_rows = self.solid_codec.unrank(s_ord)
        solid = Subspace(self.n, self.q, solid_rows)
        plane = self._local_plane(solid_rows, loc)
        return Flag(plane=plane, solid=solid)

    def _local_plane(self, solid_rows, loc: int) -> Subspace:
        pat = self._local_patterns[loc]
        rows = [linalg.mat_from_combo(prow, solid_rows, self.field) for prow in pat]
        return Subspace(self.n, self.q, linalg.rref(rows, self.field))

    def ordinal_of(self, f: Flag) -> int:
        if f.q != self.q:
            raise ValueError("flag belongs to PG(6,%d), universe is PG(6,%d)"
                             % (f.q, self.q))
        s_ord = self.solid_codec.rank(f.solid.rows)
        solid_rows = f.solid.rows
        for loc in range(self.planes_per_solid):
            if self._local_plane(solid_rows, loc).rows == f.plane.rows:
                return s_ord * self.planes_per_solid + loc
        raise ValueError("flag not found under its solid")  # unreachable for valid flags

    def iter_flags(self) -> Iterator[Flag]:
        for ordinal in range(self.flag_count):
            yield self.flag(ordinal)

    def dual_ordinal(self, ordinal: int) -> int:
        return self.ordinal_of(dualize_flag(self.flag(ordinal)))

    # -- q = 2 materialized arrays -----------------------------------------

    def _build_q2_arrays(self) -> None:
        n = self.n
        idx = point_indexer(n, 2)
        pt_of_packed = [0] * (1 << (n + 1))
        for k, v in enumerate(idx.vectors):
            pt_of_packed[linalg.pack_bits(v, n)] = k
        self.n_points = idx.count

        local_bits = []
        for pat in self._local_patterns:
            local_bits.append(tuple(sum(1 << j for j, c in enumerate(prow) if c)
                                    for prow in pat))

        pps = self.planes_per_solid
        count = self.flag_count
        plane_gid = np.empty(count, dtype=np.int32)
        solids_plane_gid = np.empty((self.n_solids, pps), dtype=np.int32)
        plane_key_gid: dict[tuple[int, ...], int] = {}
        plane_bits_list: list[int] = []
        plane_rows_list: list[tuple[int, ...]] = []
        solid_bits_list: list[int] = []

        def points_int(rows_bits: tuple[int, ...]) -> int:
            vs = [0]
            for rb in rows_bits:
                vs += [v ^ rb for v in vs]
            out = 0
            for v in vs[1:]:
                out |= 1 << pt_of_packed[v]
            return out

        ordinal = 0
        for s_ord in range(self.n_solids):
            srows = self.solid_codec.unrank(s_ord)
            sbits = tuple(linalg.pack_bits(r, n) for r in srows)
            solid_bits_list.append(points_int(sbits))
            for loc in range(pps):
                amb = []
                for mask in local_bits[loc]:
                    v = 0
                    for j in range(4):
                        if (mask >> j) & 1:
                            v ^= sbits[j]
                    amb.append(v)
                key = linalg.rref_bits(amb)
                gid = plane_key_gid.get(key)
                if gid is None:
                    gid = len(plane_bits_list)
                    plane_key_gid[key] = gid
                    plane_bits_list.append(points_int(key))
                    plane_rows_list.append(key)
                plane_gid[ordinal] = gid
                solids_plane_gid[s_ord, loc] = gid
                ordinal += 1

        self.plane_points_by_gid = plane_bits_list
        self.solid_points_by_solid = solid_bits_list
        self._plane_key_gid = plane_key_gid
        self._plane_rows_by_gid = plane_rows_list
        self.plane_gid = plane_gid
        self.solids_plane_gid = solids_plane_gid
        self.n_planes = len(plane_bits_list)

        mask64 = (1 << 64) - 1
        self.plane_lo = np.fromiter(
            ((plane_bits_list[g] & mask64) for g in plane_gid),
            dtype=np.uint64, count=count)
        self.plane_hi = np.fromiter(
            ((plane_bits_list[g] >> 64) for g in plane_gid),
            dtype=np.uint64, count=count)
        solid_lo = np.fromiter(((b & mask64) for b in solid_bits_list),
                               dtype=np.uint64, count=self.n_solids)
        solid_hi = np.fromiter(((b >> 64) for b in solid_bits_list),
                               dtype=np.uint64, count=self.n_solids)
        self.solid_lo = np.repeat(solid_lo, pps)
        self.solid_hi = np.repeat(solid_hi, pps)

    def _need_masks(self) -> None:
        if not self.has_masks:
            raise ValueError(
                "graph-scale scans need the materialized q=2 arrays; "
                "q=%d keeps per-flag data on demand" % self.q)

    def flag_bits(self, ordinal: int) -> tuple[int, int]:
        """(plane point bitset, solid point bitset) as Python integers."""
        if self.has_masks:
            s_ord, _ = divmod(ordinal, self.planes_per_solid)
            g = int(self.plane_gid[ordinal])
            return (self.plane_points_by_gid[g], self.solid_points_by_solid[s_ord])
        f = self.flag(ordinal)
        return (point_bitset(f.plane), point_bitset(f.solid))

    def adjacent_mask(self, ordinal: int) -> np.ndarray:
        """Boolean mask over all flags: adjacency to the given flag."""
        self._need_masks()
        pb, sb = self.flag_bits(ordinal)
        mask64 = (1 << 64) - 1
        pl = np.uint64(pb & mask64)
        ph = np.uint64(pb >> 64)
        sl = np.uint64(sb & mask64)
        sh = np.uint64(sb >> 64)
        zero = np.uint64(0)
        return ((self.plane_lo & sl) == zero) & ((self.plane_hi & sh) == zero) \
            & ((self.solid_lo & pl) == zero) & ((self.solid_hi & ph) == zero)

    def degree(self, ordinal: int) -> int:
        return int(np.count_nonzero(self.adjacent_mask(ordinal)))


@functools.lru_cache(maxsize=None)
def build_universe(q: int) -> FlagUniverse:
    """Build (and cache per process) the flag universe for q in {2, 3}."""
    return FlagUniverse(q)


# ---------------------------------------------------------------------------
# Flag sets


@dataclass
class FlagSet:
    """A set of flags of one universe, stored as a boolean membership mask."""

    universe: FlagUniverse
    mask: np.ndarray
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_ordinals(cls, universe: FlagUniverse, ordinals: Iterable[int],
                      meta: dict | None = None) -> "FlagSet":
        mask = np.zeros(universe.flag_count, dtype=bool)
        for o in ordinals:
            if not (0 <= o < universe.flag_count):
                raise ValueError("flag ordinal %d out of range" % o)
            mask[o] = True
        return cls(universe=universe, mask=mask, meta=dict(meta or {}))

    @property
    def cardinality(self) -> int:
        return int(np.count_nonzero(self.mask))

    def ordinals(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __contains__(self, ordinal: int) -> bool:
        return bool(self.mask[ordinal])

    def flags(self) -> Iterator[Flag]:
        for o in self.ordinals():
            yield self.universe.flag(int(o))

    def union(self, other: "FlagSet") -> "FlagSet":
        if other.universe is not self.universe:
            raise ValueError("flag sets over different universes")
        return FlagSet(self.universe, self.mask | other.mask,
                       {"kind": "union"})


def adjacency_scan(fset: FlagSet, f: Flag | int) -> tuple[int, int | None]:
    """How many members of fset are adjacent to f; also the least witness.

    Returns (count, least adjacent member ordinal or None).
    """
    uni = fset.universe
    uni._need_masks()
    ordinal = f if isinstance(f, int) else uni.ordinal_of(f)
    hits = uni.adjacent_mask(ordinal) & fset.mask
    count = int(np.count_nonzero(hits))
    witness = int(np.argmax(hits)) if count else None
    return count, witness


# ---------------------------------------------------------------------------
# FlagSet files: header lines, then one sorted ordinal per line


def save_flagset(fset: FlagSet, path: str) -> None:
    with open(path, "w") as fh:
        fh.write("# flagkneser flag set\n")
        fh.write("q %d\n" % fset.universe.q)
        for key, val in sorted(fset.meta.items()):
            if key == "kind":
                fh.write("kind %s\n" % val)
            elif isinstance(val, Subspace):
                fh.write("anchor %s %s\n" % (key, subspace_to_text(val)))
            else:
                fh.write("meta %s %s\n" % (key, val))
        ords = fset.ordinals()
        fh.write("count %d\n" % len(ords))
        for o in ords:
            fh.write("%d\n" % o)


def load_flagset(path: str, universe: FlagUniverse | None = None) -> FlagSet:
    q = None
    meta: dict = {}
    count = None
    ordinals: list[int] = []
    with open(path) as fh:
        lines = fh.readlines()
    body_at = None
    for ln, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if count is None:
            tag, _, rest = text.partition(" ")
            if tag == "q":
                q = int(rest)
            elif tag == "kind":
                meta["kind"] = rest
            elif tag == "anchor":
                name, _, sub = rest.partition(" ")
                if q is None:
                    raise ValueError("%s:%d: anchor before q declaration" % (path, ln))
                meta[name] = subspace_from_text(sub, N_AMBIENT, q)
            elif tag == "meta":
                name, _, val = rest.partition(" ")
                meta[name] = val
            elif tag == "count":
                count = int(rest)
                body_at = ln
            else:
                raise ValueError("%s:%d: unknown header line %r" % (path, ln, text))
            continue
        try:
            ordinals.append(int(text))
        except ValueError:
            raise ValueError("%s:%d: expected a flag ordinal, got %r"
                             % (path, ln, text)) from None
    if q is None or count is None:
        raise ValueError("%s: missing q or count header" % path)
    if len(ordinals) != count:
        raise ValueError("%s: header declares %d ordinals, found %d (body starts at line %d)"
                         % (path, count, len(ordinals), (body_at or 0) + 1))
    if any(b <= a for a, b in zip(ordinals, ordinals[1:])):
        raise ValueError("%s: ordinals must be strictly increasing" % path)
    if universe is None:
        universe = build_universe(q)
    elif universe.q != q:
        raise ValueError("%s declares q=%d but universe has q=%d" % (path, q, universe.q))
    return FlagSet.from_ordinals(universe, ordinals, meta)


# ---------------------------------------------------------------------------
# DIMACS export


def export_dimacs(universe: FlagUniverse, path: str, *,
                  max_vertices: int | None = None,
                  degree_samples: int = 64) -> dict:
    """Write the Kneser graph (or the subgraph induced by the first
    max_vertices flags) in DIMACS edge format.

    Vertices are 1-based flag ordinals shifted by one; edges are emitted
    with i < j, sorted by (i, j).  For the full graph the edge count in the
    header comes from the degree of evenly spaced sample vertices (checked
    to be constant) times |V| / 2; the streamed edge count is verified
    against it afterwards.  Returns a small summary dict.
    """
    universe._need_masks()
    n_all = universe.flag_count
    nv = n_all if max_vertices is None else min(max_vertices, n_all)
    if nv < 1:
        raise ValueError("need at least one vertex")

    mask64 = (1 << 64) - 1
    plo, phi = universe.plane_lo[:nv], universe.plane_hi[:nv]
    slo, shi = universe.solid_lo[:nv], universe.solid_hi[:nv]
    zero = np.uint64(0)

    def row_after(i: int) -> np.ndarray:
        pb, sb = universe.flag_bits(i)
        pl, ph = np.uint64(pb & mask64), np.uint64(pb >> 64)
        sl, sh = np.uint64(sb & mask64), np.uint64(sb >> 64)
        return ((plo[i + 1:] & sl) == zero) & ((phi[i + 1:] & sh) == zero) \
            & ((slo[i + 1:] & pl) == zero) & ((shi[i + 1:] & ph) == zero)

    induced = nv < n_all
    if induced:
        n_edges = 0
        for i in range(nv):
            n_edges += int(np.count_nonzero(row_after(i)))
        degree = None
    else:
        samples = sorted({(k * (n_all - 1)) // max(degree_samples - 1, 1)
                          for k in range(degree_samples)})
        degs = {universe.degree(s) for s in samples}
        if len(degs) != 1:
            raise AssertionError("sampled degrees differ: %s" % sorted(degs))
        degree = degs.pop()
        if (n_all * degree) % 2:
            raise AssertionError("odd degree sum")
        n_edges = n_all * degree // 2

    written = 0
    with open(path, "w") as fh:
        fh.write("c plane-solid flag Kneser graph of PG(6,%d)\n" % universe.q)
        fh.write("c vertex v corresponds to flag ordinal v-1 in canonical order\n")
        if induced:
            fh.write("c induced subgraph on the first %d of %d flags\n" % (nv, n_all))
        fh.write("p edge %d %d\n" % (nv, n_edges))
        for i in range(nv):
            js = np.flatnonzero(row_after(i))
            if js.size:
                base = i + 2  # 1-based, and js counts from i+1
                fh.write("".join("e %d %d\n" % (i + 1, int(j) + base) for j in js))
                written += int(js.size)
    if written != n_edges:
        raise AssertionError("streamed %d edges but header says %d" % (written, n_edges))
    return {"vertices": nv, "edges": n_edges, "degree": degree, "path": path}
