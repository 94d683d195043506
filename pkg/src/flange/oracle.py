"""Brute-force ground truth for rank invariants.

A finitely presented module is materialized on a finite grid: one vector
space per grid point (given by its dimension and a coordinate basis) and one
matrix per unit edge.  Ranks of structure maps are then read off composites of
edge matrices, independently of any presentation-level formula.
"""

from __future__ import annotations

import io
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .core import NEG_INF, POS_INF
from .errors import DimensionError, QueryError, RangeError
from .gmatrix import GradedMatrix, graded_transpose, is_anti_valid, is_valid
from .scc_io import FreeResolution


@dataclass(frozen=True)
class RankQuery:
    z: tuple
    z2: tuple

    def __post_init__(self):
        z, z2 = tuple(int(x) for x in self.z), tuple(int(x) for x in self.z2)
        if len(z) != len(z2):
            raise QueryError("query grades have different lengths")
        if any(x in (NEG_INF, POS_INF) for x in z + z2):
            raise QueryError("query grades must be finite")
        if not all(a <= b for a, b in zip(z, z2)):
            raise QueryError(f"query needs z <= z', got {z} and {z2}")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "z2", z2)


def _query(z, z2, n: int) -> RankQuery:
    q = z if isinstance(z, RankQuery) else RankQuery(tuple(z), tuple(z2))
    if len(q.z) != n:
        raise QueryError(f"query grades have length {len(q.z)}, expected {n}")
    return q


def _leq(grades: np.ndarray, z) -> np.ndarray:
    return np.all(grades <= np.asarray(z, dtype=np.int64), axis=1)


def _geq(grades: np.ndarray, z) -> np.ndarray:
    return np.all(grades >= np.asarray(z, dtype=np.int64), axis=1)


def rank_free(D1: GradedMatrix, z, z2=None) -> int:
    """``rank M_{z'z}`` from a free presentation (rows = generators, cols = relations)."""
    q = _query(z, z2, D1.n)
    rows2 = _leq(D1.row_grades, q.z2)
    cols2 = np.flatnonzero(_leq(D1.col_grades, q.z2))
    rows = np.flatnonzero(rows2)
    U = D1.entries[np.ix_(rows, cols2)]
    live = _leq(D1.row_grades[rows], q.z)
    # rank [E_{<=z} | U'] = #live + rank of U' on the remaining rows
    return int(live.sum()) + linalg.rank(U[~live], D1.p) - linalg.rank(U, D1.p)


def rank_fip(Phi, z, z2=None) -> int:
    """``rank M_{z'z}`` from a flat-injective presentation: one submatrix rank."""
    U = getattr(Phi, "matrix", Phi)
    q = _query(z, z2, U.n)
    rows = np.flatnonzero(_geq(U.row_grades, q.z2))
    cols = np.flatnonzero(_leq(U.col_grades, q.z))
    return linalg.rank(U.entries[np.ix_(rows, cols)], U.p)


def rank_injective(W: GradedMatrix, z, z2=None) -> int:
    """``rank M_{z'z}`` from an injective copresentation ``I^0 -> I^1`` (``M = ker``).

    The graded transpose is a free presentation of the Matlis dual, whose
    structure map ``-z' -> -z`` is the transpose of ``M_{z'z}``.
    """
    q = _query(z, z2, W.n)
    return rank_free(graded_transpose(W), tuple(-x for x in q.z2), tuple(-x for x in q.z))


def default_box(*matrices: GradedMatrix) -> tuple[tuple, tuple]:
    """``[min grade - 1, max grade + 1]`` over every finite grade coordinate."""
    n = matrices[0].n
    lo, hi = [], []
    for t in range(n):
        vals = np.concatenate(
            [m.row_grades[:, t] for m in matrices] + [m.col_grades[:, t] for m in matrices]
        )
        vals = vals[(vals != NEG_INF) & (vals != POS_INF)]
        if vals.size == 0:
            lo.append(0)
            hi.append(0)
        else:
            lo.append(int(vals.min()) - 1)
            hi.append(int(vals.max()) + 1)
    return tuple(lo), tuple(hi)


def grid(lo: Sequence[int], hi: Sequence[int]) -> Iterable[tuple]:
    return itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))


@dataclass
class PointwiseModule:
    """A module restricted to the grid box ``[lo, hi]``.

    ``maps[(z, t)]`` is the matrix of the structure map ``z -> z + e_t``.
    """

    n: int
    p: int
    lo: tuple
    hi: tuple
    dims: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)

    def points(self):
        return grid(self.lo, self.hi)

    def contains(self, z) -> bool:
        return len(z) == self.n and all(a <= x <= b for a, x, b in zip(self.lo, z, self.hi))

    def path_map(self, z, z2, order: Sequence[int] | None = None) -> np.ndarray:
        """Composite of edge maps from ``z`` to ``z2``, walking the axes in ``order``."""
        z, z2 = tuple(z), tuple(z2)
        if not (self.contains(z) and self.contains(z2)):
            raise RangeError(f"query {z} -> {z2} leaves the box [{self.lo}, {self.hi}]")
        if not all(a <= b for a, b in zip(z, z2)):
            raise QueryError(f"query needs z <= z', got {z} and {z2}")
        order = range(self.n) if order is None else order
        acc = np.eye(self.dims[z], dtype=np.int64)
        cur = list(z)
        for t in order:
            while cur[t] < z2[t]:
                acc = linalg.matmul(self.maps[(tuple(cur), t)], acc, self.p)
                cur[t] += 1
        return acc

    def commutes(self) -> bool:
        for z in self.points():
            for s, t in itertools.combinations(range(self.n), 2):
                if z[s] >= self.hi[s] or z[t] >= self.hi[t]:
                    continue
                zs = list(z)
                zs[s] += 1
                zt = list(z)
                zt[t] += 1
                a = linalg.matmul(self.maps[(tuple(zs), t)], self.maps[(z, s)], self.p)
                b = linalg.matmul(self.maps[(tuple(zt), s)], self.maps[(z, t)], self.p)
                if not np.array_equal(a, b):
                    return False
        return True


def rank_oracle(pm: PointwiseModule, z, z2=None, check_paths: bool = True) -> int:
    """Rank of the composite along a monotone path; optionally asserts path independence."""
    q = _query(z, z2, pm.n)
    r = linalg.rank(pm.path_map(q.z, q.z2), pm.p)
    if check_paths and pm.n > 1:
        r2 = linalg.rank(pm.path_map(q.z, q.z2, order=range(pm.n - 1, -1, -1)), pm.p)
        if r != r2:
            raise AssertionError(f"path dependence at {q.z} -> {q.z2}: {r} vs {r2}")
    return r


def rank_table_oracle(pm: PointwiseModule) -> dict:
    """All ranks ``(z, z') -> rank M_{z'z}`` over the box, via incremental composites."""
    out = {}
    for z in pm.points():
        comp = {z: np.eye(pm.dims[z], dtype=np.int64)}
        for z2 in grid(z, pm.hi):
            if z2 != z:
                t = max(s for s in range(pm.n) if z2[s] > z[s])
                prev = list(z2)
                prev[t] -= 1
                prev = tuple(prev)
                comp[z2] = linalg.matmul(pm.maps[(prev, t)], comp[prev], pm.p)
            out[(z, z2)] = linalg.rank(comp[z2], pm.p)
    return out


def _pairs(lo, hi):
    for z in grid(lo, hi):
        for z2 in grid(z, hi):
            yield z, z2


def _masks(grades: np.ndarray, lo, hi, geq: bool = False) -> dict:
    test = _geq if geq else _leq
    out = {}
    for z in grid(lo, hi):
        m = test(grades, z)
        out[z] = (m, m.tobytes())
    return out


def rank_table_free(D1: GradedMatrix, box=None) -> dict:
    """:func:`rank_free` at every comparable pair in the box.

    Ranks depend on ``z`` and ``z'`` only through the grade masks they induce,
    so each distinct mask combination is eliminated once.
    """
    lo, hi = _box_or_default(box, D1)
    p = D1.p
    rmask = _masks(D1.row_grades, lo, hi)
    cmask = _masks(D1.col_grades, lo, hi)
    base: dict = {}
    full: dict = {}
    out = {}
    for z, z2 in _pairs(lo, hi):
        (rows2, kr), (cols2, kc), (live, kl) = rmask[z2], cmask[z2], rmask[z]
        k2 = kr + kc
        k = k2 + kl
        if k not in full:
            if k2 not in base:
                base[k2] = linalg.rank(D1.entries[np.ix_(rows2, cols2)], p)
            dead = rows2 & ~live
            full[k] = int(live.sum()) + linalg.rank(D1.entries[np.ix_(dead, cols2)], p) - base[k2]
        out[(z, z2)] = full[k]
    return out


def rank_table_fip(Phi, box=None) -> dict:
    """:func:`rank_fip` at every comparable pair in the box, memoized on grade masks."""
    U = getattr(Phi, "matrix", Phi)
    lo, hi = _box_or_default(box, U)
    rmask = _masks(U.row_grades, lo, hi, geq=True)
    cmask = _masks(U.col_grades, lo, hi)
    memo: dict = {}
    out = {}
    for z, z2 in _pairs(lo, hi):
        (rows, kr), (cols, kc) = rmask[z2], cmask[z]
        k = kr + kc
        if k not in memo:
            memo[k] = linalg.rank(U.entries[np.ix_(rows, cols)], U.p)
        out[(z, z2)] = memo[k]
    return out


def _box_or_default(box, *mats):
    if box is None:
        return default_box(*mats)
    lo, hi = (tuple(int(x) for x in b) for b in box)
    if len(lo) != mats[0].n or len(hi) != mats[0].n:
        raise DimensionError("box corners must have length n")
    if not all(a <= b for a, b in zip(lo, hi)):
        raise RangeError(f"box needs lo <= hi, got {lo} and {hi}")
    return lo, hi


def expand_free(D1: GradedMatrix, box=None) -> PointwiseModule:
    """Materialize ``coker D1`` on a grid; bases come from reduced column echelon forms."""
    if not is_valid(D1):
        raise DimensionError("free presentation matrix must be valid")
    lo, hi = _box_or_default(box, D1)
    p = D1.p
    pm = PointwiseModule(D1.n, p, lo, hi)
    info = {}
    for z in pm.points():
        rows = np.flatnonzero(_leq(D1.row_grades, z))
        cols = np.flatnonzero(_leq(D1.col_grades, z))
        B, piv = linalg.column_basis(D1.entries[np.ix_(rows, cols)], p)
        nonpiv = np.setdiff1d(np.arange(rows.size), piv)
        info[z] = (rows, B, np.array(piv, dtype=np.int64), nonpiv)
        pm.dims[z] = int(nonpiv.size)
    for z in pm.points():
        rows, _, _, nonpiv = info[z]
        for t in range(pm.n):
            if z[t] >= hi[t]:
                continue
            z2 = list(z)
            z2[t] += 1
            z2 = tuple(z2)
            rows2, B2, piv2, nonpiv2 = info[z2]
            pos = np.searchsorted(rows2, rows[nonpiv])
            W = np.zeros((rows2.size, nonpiv.size), dtype=np.int64)
            W[pos, np.arange(nonpiv.size)] = 1
            if piv2.size:
                W = (W - linalg.matmul(B2, W[piv2], p)) % p
            pm.maps[(z, t)] = W[nonpiv2]
    return pm


def expand_fip(Phi, box=None) -> PointwiseModule:
    """Materialize ``im Phi`` on a grid; ``M_z`` is spanned by columns of grade <= z
    restricted to rows of grade >= z."""
    U = getattr(Phi, "matrix", Phi)
    if not is_anti_valid(U):
        raise DimensionError("flat-injective matrix must be anti-valid")
    lo, hi = _box_or_default(box, U)
    p = U.p
    pm = PointwiseModule(U.n, p, lo, hi)
    info = {}
    for z in pm.points():
        rows = np.flatnonzero(_geq(U.row_grades, z))
        cols = np.flatnonzero(_leq(U.col_grades, z))
        B, piv = linalg.column_basis(U.entries[np.ix_(rows, cols)], p)
        info[z] = (rows, B, np.array(piv, dtype=np.int64))
        pm.dims[z] = len(piv)
    for z in pm.points():
        rows, B, _ = info[z]
        for t in range(pm.n):
            if z[t] >= hi[t]:
                continue
            z2 = list(z)
            z2[t] += 1
            z2 = tuple(z2)
            rows2, _, piv2 = info[z2]
            # rows2 is a subset of rows; project, then read coordinates at pivots
            pos = np.searchsorted(rows, rows2)
            V = B[pos] if rows2.size else np.zeros((0, B.shape[1]), dtype=np.int64)
            pm.maps[(z, t)] = V[piv2] if piv2.size else np.zeros((0, B.shape[1]), dtype=np.int64)
    return pm


def box_resolution(boxes: Sequence[tuple], p: int = 2) -> FreeResolution:
    """Direct sum of two-parameter interval modules ``k[a, b]``.

    Summand ``i`` contributes ``F(a)``, ``F(a_1, b_2+1) + F(b_1+1, a_2)`` and
    ``F(b + 1)`` with ``D_1 = (1 1)`` and ``D_2 = (1, -1)^T``.
    """
    m = len(boxes)
    f0, f1, f2 = [], [], []
    for a, b in boxes:
        if len(a) != 2 or len(b) != 2 or not (a[0] <= b[0] and a[1] <= b[1]):
            raise DimensionError(f"bad box {a}, {b}")
        f0.append(tuple(a))
        f1 += [(a[0], b[1] + 1), (b[0] + 1, a[1])]
        f2.append((b[0] + 1, b[1] + 1))
    D1 = np.zeros((m, 2 * m), dtype=np.int64)
    D2 = np.zeros((2 * m, m), dtype=np.int64)
    for i in range(m):
        D1[i, 2 * i] = D1[i, 2 * i + 1] = 1
        D2[2 * i, i] = 1
        D2[2 * i + 1, i] = -1
    gm = lambda e, r, c: GradedMatrix(e, np.array(r, dtype=np.int64).reshape(-1, 2), np.array(c, dtype=np.int64).reshape(-1, 2), 2, p)  # noqa: E731
    return FreeResolution.from_matrices([gm(D1, f0, f1), gm(D2, f1, f2)])


def random_boxes(seed: int, count: int, coord_range=(0, 8), n: int = 2) -> list[tuple]:
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    lo, hi = coord_range
    out = []
    for _ in range(count):
        x = rng.integers(lo, hi + 1, size=(2, n))
        a, b = np.minimum(x[0], x[1]), np.maximum(x[0], x[1])
        out.append((tuple(int(v) for v in a), tuple(int(v) for v in b)))
    return out


def random_box_sum(seed: int, n: int = 2, count: int = 5, coord_range=(0, 8), p: int = 2) -> FreeResolution:
    """Resolution of a sum of ``count`` random boxes; see :func:`random_boxes`."""
    if n != 2:
        raise DimensionError("random box sums are two-parameter only; use koszul_box_resolution")
    return box_resolution(random_boxes(seed, count, coord_range, n), p)


def koszul_box_resolution(a: Sequence[int], b: Sequence[int], p: int = 2) -> FreeResolution:
    """Koszul resolution of ``k[a, b]`` in any number of parameters.

    ``F_d`` has one generator per ``S`` with ``|S| = d``, of grade ``a`` with
    coordinates in ``S`` raised to ``b + 1``.
    """
    n = len(a)
    if len(b) != n or not all(x <= y for x, y in zip(a, b)):
        raise DimensionError(f"bad box {a}, {b}")
    layers = [list(itertools.combinations(range(n), d)) for d in range(n + 1)]

    def grade(S):
        return tuple(b[i] + 1 if i in S else a[i] for i in range(n))

    gens = [np.array([grade(S) for S in layer], dtype=np.int64).reshape(-1, n) for layer in layers]
    mats = []
    for d in range(1, n + 1):
        pos = {S: r for r, S in enumerate(layers[d - 1])}
        e = np.zeros((len(layers[d - 1]), len(layers[d])), dtype=np.int64)
        for c, S in enumerate(layers[d]):
            for k, s in enumerate(S):
                e[pos[S[:k] + S[k + 1 :]], c] = (-1) ** k
        mats.append(GradedMatrix(e, gens[d - 1], gens[d], n, p))
    return FreeResolution(n, p, tuple(gens), tuple(mats))


def box_count_rank(boxes: Sequence[tuple], z, z2) -> int:
    """Closed form ``#{i : a_i <= z, z' <= b_i}`` for a sum of interval boxes."""
    return sum(
        1 for a, b in boxes if all(x <= y for x, y in zip(a, z)) and all(x <= y for x, y in zip(z2, b))
    )


def box_count_table(boxes: Sequence[tuple], box) -> dict:
    """:func:`box_count_rank` at every comparable pair in ``box``."""
    lo, hi = (tuple(int(x) for x in b) for b in box)
    A = np.array([a for a, _ in boxes], dtype=np.int64)
    B = np.array([b for _, b in boxes], dtype=np.int64)
    born = {z: _leq(A, z) for z in grid(lo, hi)}
    alive = {z: _geq(B, z) for z in grid(lo, hi)}
    return {(z, z2): int(np.count_nonzero(born[z] & alive[z2])) for z, z2 in _pairs(lo, hi)}


def direct_sum(resolutions: Sequence[FreeResolution]) -> FreeResolution:
    """Blockwise direct sum of resolutions with equal n, p and length."""
    from .gmatrix import block_diag

    first = resolutions[0]
    L = max(r.length for r in resolutions)
    rs = [r.padded(L) for r in resolutions]
    gens = [np.vstack([r.grades(d) for r in rs]) for d in range(L + 1)]
    mats = [block_diag([r.matrices[d] for r in rs], n=first.n, p=first.p) for d in range(L)]
    return FreeResolution(first.n, first.p, tuple(gens), tuple(mats))


def _axis_names(n: int) -> list[str]:
    return ["x", "y", "z"][:n] if n <= 3 else [f"x{i}" for i in range(1, n + 1)]


def hilbert_csv(values: dict, n: int) -> str:
    """CSV with header ``x,y,...,value`` and one row per grid point."""
    out = io.StringIO()
    out.write(",".join(_axis_names(n) + ["value"]) + "\n")
    for z in sorted(values):
        out.write(",".join(str(c) for c in z) + f",{values[z]}\n")
    return out.getvalue()


def rank_table_csv(values: dict, n: int) -> str:
    """CSV of rank-invariant values, one row per query ``(z, z')``."""
    names = _axis_names(n)
    out = io.StringIO()
    out.write(",".join([f"from_{a}" for a in names] + [f"to_{a}" for a in names] + ["value"]) + "\n")
    for z, z2 in sorted(values):
        out.write(",".join(str(c) for c in z + z2) + f",{values[(z, z2)]}\n")
    return out.getvalue()


def hilbert_function(source, box=None, kind: str | None = None) -> dict:
    """``z -> dim M_z`` over a box, for a free resolution/matrix, a fip, or an injective matrix."""
    from .scc_io import FlatInjectivePresentation

    if isinstance(source, FreeResolution):
        source, kind = source.boundary(1), "free"
    elif isinstance(source, FlatInjectivePresentation):
        source, kind = source.matrix, "fip"
    kind = kind or "free"
    fn = {"free": rank_free, "fip": rank_fip, "inj": rank_injective}[kind]
    lo, hi = _box_or_default(box, source)
    return {z: fn(source, z, z) for z in grid(lo, hi)}
