"""Graded matrices over Z/p.

Rows index the generalized basis of the codomain, columns that of the domain.
A matrix with row grades ``rg`` and column grades ``cg`` is *valid* when every
nonzero entry ``(i, j)`` has ``rg[i] <= cg[j]``; this is the shape of a morphism
between flat (or between injective) modules.  *Anti-valid* matrices
(``rg[i] >= cg[j]``) represent morphisms from a flat to an injective module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .core import NEG_INF, POS_INF, check_field, format_grade, is_finite
from .errors import CompositionError, DimensionError, GradeArithmeticError, GradeIndexError


def _grade_array(grades, n: int | None) -> np.ndarray:
    if isinstance(grades, np.ndarray):
        arr = np.asarray(grades, dtype=np.int64)
    else:
        grades = [tuple(g) for g in grades]
        if n is None:
            if not grades:
                raise DimensionError("cannot infer parameter count from an empty grade list")
            n = len(grades[0])
        for g in grades:
            if len(g) != n:
                raise DimensionError(f"grade {g} does not have length {n}")
        arr = np.array(grades, dtype=np.int64).reshape(len(grades), n)
    if arr.ndim != 2:
        raise DimensionError("grade array must be two-dimensional")
    if n is not None and arr.shape[1] != n:
        raise DimensionError(f"grades have length {arr.shape[1]}, expected {n}")
    return arr


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.int64, copy=True)
    a.setflags(write=False)
    return a


def leq_table(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Boolean table ``T[i, j] = a[i] <= b[j]`` in the product order."""
    if a.shape[1] == 0:
        return np.ones((a.shape[0], b.shape[0]), dtype=bool)
    return np.all(a[:, None, :] <= b[None, :, :], axis=2)


def neg_grades(a: np.ndarray) -> np.ndarray:
    out = -np.where(np.isin(a, (NEG_INF, POS_INF)), 0, a)
    out[a == NEG_INF] = POS_INF
    out[a == POS_INF] = NEG_INF
    return out


def add_grades(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise grade sum (broadcasting); ``-inf`` absorbs, ``+inf - inf`` fails."""
    a, b = np.broadcast_arrays(a, b)
    a_neg, b_neg = a == NEG_INF, b == NEG_INF
    a_pos, b_pos = a == POS_INF, b == POS_INF
    if np.any((a_neg & b_pos) | (a_pos & b_neg)):
        raise GradeArithmeticError("grade sum mixes +inf and -inf")
    fin = ~(a_neg | b_neg | a_pos | b_pos)
    big = 2**62
    if np.any(fin & ((np.abs(a) >= big) | (np.abs(b) >= big))):
        raise GradeArithmeticError("finite grade coordinates too large to add")
    out = np.where(fin, a + np.where(fin, b, 0), 0)
    out = np.where(a_pos | b_pos, POS_INF, out)
    return np.where(a_neg | b_neg, NEG_INF, out)


@dataclass(frozen=True, eq=False)
class GradedMatrix:
    entries: np.ndarray
    row_grades: np.ndarray
    col_grades: np.ndarray
    n: int
    p: int = 2

    def __post_init__(self):
        check_field(self.p)
        rg = _grade_array(self.row_grades, self.n)
        cg = _grade_array(self.col_grades, self.n)
        e = np.asarray(self.entries, dtype=np.int64)
        if e.size == 0:
            e = e.reshape(rg.shape[0], cg.shape[0])
        if e.shape != (rg.shape[0], cg.shape[0]):
            raise DimensionError(
                f"entries have shape {e.shape} but grades give {(rg.shape[0], cg.shape[0])}"
            )
        object.__setattr__(self, "entries", _freeze(np.mod(e, self.p)))
        object.__setattr__(self, "row_grades", _freeze(rg))
        object.__setattr__(self, "col_grades", _freeze(cg))

    @classmethod
    def build(cls, entries, row_grades, col_grades, p: int = 2, n: int | None = None):
        """Convenience constructor accepting nested lists and grade tuples."""
        if n is None:
            for gs in (row_grades, col_grades):
                if len(gs):
                    n = len(gs[0])
                    break
            else:
                raise DimensionError("pass n explicitly for a matrix without grades")
        e = np.array(entries, dtype=np.int64)
        if e.size == 0:
            e = np.zeros((len(row_grades), len(col_grades)), dtype=np.int64)
        return cls(e, _grade_array(row_grades, n), _grade_array(col_grades, n), n, p)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def row_grade(self, i: int) -> tuple:
        return tuple(int(x) for x in self.row_grades[i])

    def col_grade(self, j: int) -> tuple:
        return tuple(int(x) for x in self.col_grades[j])

    def row_grade_list(self) -> list[tuple]:
        return [self.row_grade(i) for i in range(self.shape[0])]

    def col_grade_list(self) -> list[tuple]:
        return [self.col_grade(j) for j in range(self.shape[1])]

    def signed_entries(self) -> np.ndarray:
        """Entries in the symmetric residue range, so ``p - 1`` prints as ``-1``."""
        e = self.entries.copy()
        e[e > self.p // 2] -= self.p
        return e

    def with_grades(self, row_grades=None, col_grades=None) -> "GradedMatrix":
        return GradedMatrix(
            self.entries,
            self.row_grades if row_grades is None else row_grades,
            self.col_grades if col_grades is None else col_grades,
            self.n,
            self.p,
        )

    def __eq__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return (
            self.n == other.n
            and self.p == other.p
            and np.array_equal(self.entries, other.entries)
            and np.array_equal(self.row_grades, other.row_grades)
            and np.array_equal(self.col_grades, other.col_grades)
        )

    __hash__ = None

    def __repr__(self):
        rows = ", ".join(format_grade(g) for g in self.row_grade_list())
        cols = ", ".join(format_grade(g) for g in self.col_grade_list())
        return (
            f"GradedMatrix({self.signed_entries().tolist()}, rows=[{rows}], "
            f"cols=[{cols}], n={self.n}, p={self.p})"
        )


def identity(grades, p: int = 2, n: int | None = None) -> GradedMatrix:
    g = _grade_array(grades, n)
    return GradedMatrix(np.eye(g.shape[0], dtype=np.int64), g, g, g.shape[1], p)


def zeros(row_grades, col_grades, n: int, p: int = 2) -> GradedMatrix:
    rg, cg = _grade_array(row_grades, n), _grade_array(col_grades, n)
    return GradedMatrix(np.zeros((rg.shape[0], cg.shape[0]), dtype=np.int64), rg, cg, n, p)


def _support(U: GradedMatrix) -> tuple[np.ndarray, np.ndarray]:
    return np.nonzero(U.entries)


def invalid_entries(U: GradedMatrix) -> list[tuple[int, int]]:
    """Nonzero positions violating ``rg <= cg``."""
    i, j = _support(U)
    if i.size == 0:
        return []
    ok = np.all(U.row_grades[i] <= U.col_grades[j], axis=1)
    return [(int(a), int(b)) for a, b in zip(i[~ok], j[~ok])]


def is_valid(U: GradedMatrix) -> bool:
    return not invalid_entries(U)


def is_anti_valid(U: GradedMatrix) -> bool:
    i, j = _support(U)
    return bool(np.all(U.row_grades[i] >= U.col_grades[j]))


def is_minimal(U: GradedMatrix) -> bool:
    i, j = _support(U)
    rg, cg = U.row_grades[i], U.col_grades[j]
    return bool(np.all(np.all(rg <= cg, axis=1) & np.any(rg < cg, axis=1)))


def graded_transpose(U: GradedMatrix) -> GradedMatrix:
    return GradedMatrix(U.entries.T, neg_grades(U.col_grades), neg_grades(U.row_grades), U.n, U.p)


def _shift_array(a: np.ndarray, z: np.ndarray) -> np.ndarray:
    inf = (a == NEG_INF) | (a == POS_INF)
    out = np.where(inf, a, a - z)
    if np.any(~inf & ((out <= NEG_INF) | (out >= POS_INF))):
        raise GradeArithmeticError("grade shift overflows")
    return out


def shift_matrix(U: GradedMatrix, z: Sequence[int]) -> GradedMatrix:
    if len(z) != U.n:
        raise DimensionError(f"shift has length {len(z)}, expected {U.n}")
    if not all(is_finite(c) for c in z):
        raise GradeArithmeticError("shift vector must be finite")
    zz = np.array(z, dtype=np.int64)
    return U.with_grades(_shift_array(U.row_grades, zz), _shift_array(U.col_grades, zz))


def multiply(U: GradedMatrix, V: GradedMatrix) -> GradedMatrix:
    if U.p != V.p or U.n != V.n:
        raise CompositionError("factors live over different fields or parameter counts")
    if U.shape[1] != V.shape[0]:
        raise CompositionError(f"inner dimensions differ: {U.shape[1]} vs {V.shape[0]}")
    if not np.array_equal(U.col_grades, V.row_grades):
        bad = np.flatnonzero(np.any(U.col_grades != V.row_grades, axis=1))
        raise CompositionError(f"inner grade lists differ at positions {bad[:10].tolist()}")
    return GradedMatrix(linalg.matmul(U.entries, V.entries, U.p), U.row_grades, V.col_grades, U.n, U.p)


def kronecker(U: GradedMatrix, V: GradedMatrix) -> GradedMatrix:
    """Graded Kronecker product, blocks ordered row-major over ``(U index, V index)``."""
    if U.n != V.n:
        raise DimensionError("Kronecker factors have different parameter counts")
    if U.p != V.p:
        raise CompositionError("Kronecker factors live over different fields")
    n = U.n
    rg = add_grades(U.row_grades[:, None, :], V.row_grades[None, :, :]).reshape(-1, n)
    cg = add_grades(U.col_grades[:, None, :], V.col_grades[None, :, :]).reshape(-1, n)
    e = np.kron(U.entries, V.entries) % U.p
    return GradedMatrix(e, rg, cg, n, U.p)


def block_diag(blocks: Sequence[GradedMatrix], n: int | None = None, p: int | None = None) -> GradedMatrix:
    blocks = list(blocks)
    if not blocks:
        if n is None:
            raise DimensionError("block_diag of no blocks needs an explicit n")
        return zeros([], [], n, p or 2)
    n = blocks[0].n if n is None else n
    p = blocks[0].p if p is None else p
    if any(b.n != n or b.p != p for b in blocks):
        raise DimensionError("blocks disagree on parameter count or field")
    r = sum(b.shape[0] for b in blocks)
    c = sum(b.shape[1] for b in blocks)
    e = np.zeros((r, c), dtype=np.int64)
    i = j = 0
    for b in blocks:
        e[i : i + b.shape[0], j : j + b.shape[1]] = b.entries
        i += b.shape[0]
        j += b.shape[1]
    rg = np.vstack([b.row_grades for b in blocks])
    cg = np.vstack([b.col_grades for b in blocks])
    return GradedMatrix(e, rg, cg, n, p)


def _mask(grades: np.ndarray, pred) -> np.ndarray:
    if pred is None:
        return np.ones(grades.shape[0], dtype=bool)
    rel, z = pred
    z = np.array(z, dtype=np.int64)
    if z.shape != (grades.shape[1],):
        raise DimensionError(f"predicate grade has length {z.size}, expected {grades.shape[1]}")
    if rel in ("<=", "≤", "le"):
        return np.all(grades <= z, axis=1)
    if rel in (">=", "≥", "ge"):
        return np.all(grades >= z, axis=1)
    raise ValueError(f"unknown relation {rel!r}")


def submatrix_by_grade(U: GradedMatrix, row_pred=None, col_pred=None):
    """Keep rows/columns whose grade satisfies ``(relation, grade)``.

    ``None`` keeps everything on that axis.  Returns ``(sub, rows, cols)`` with
    the kept original indices in their original order.
    """
    rows = np.flatnonzero(_mask(U.row_grades, row_pred))
    cols = np.flatnonzero(_mask(U.col_grades, col_pred))
    sub = GradedMatrix(
        U.entries[np.ix_(rows, cols)], U.row_grades[rows], U.col_grades[cols], U.n, U.p
    )
    return sub, rows, cols


def rank(U: GradedMatrix) -> int:
    return linalg.rank(U.entries, U.p)


def _keep_coords(Q: Iterable[int], n: int) -> tuple[frozenset, list[int]]:
    Q = frozenset(Q)
    for q in Q:
        if not 1 <= q <= n:
            raise GradeIndexError(f"coordinate index {q} not in 1..{n}")
    return Q, [i for i in range(n) if i + 1 not in Q]


def project_grade_array(a: np.ndarray, Q: Iterable[int]) -> np.ndarray:
    _, keep = _keep_coords(Q, a.shape[1])
    return a[:, keep]


def embed_grade_array(a: np.ndarray, Q: Iterable[int], n: int) -> np.ndarray:
    Q, keep = _keep_coords(Q, n)
    if a.shape[1] + len(Q) != n:
        raise DimensionError(f"grades of length {a.shape[1]} plus |Q|={len(Q)} != {n}")
    out = np.full((a.shape[0], n), NEG_INF, dtype=np.int64)
    out[:, keep] = a
    return out


def project_matrix_grades(U: GradedMatrix, Q: Iterable[int]) -> GradedMatrix:
    Q = frozenset(Q)
    rg = project_grade_array(U.row_grades, Q)
    cg = project_grade_array(U.col_grades, Q)
    return GradedMatrix(U.entries, rg, cg, U.n - len(Q), U.p)


def embed_matrix_grades(U: GradedMatrix, Q: Iterable[int], n: int) -> GradedMatrix:
    Q = frozenset(Q)
    return GradedMatrix(
        U.entries, embed_grade_array(U.row_grades, Q, n), embed_grade_array(U.col_grades, Q, n), n, U.p
    )
