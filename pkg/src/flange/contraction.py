"""Chain contractions of the projected complexes ``colim_{k} F``.

Forgetting coordinate ``k`` of every grade turns a free resolution of a finite
dimensional module into an acyclic complex of free modules in one parameter
less.  Acyclic bounded-below complexes of free modules are contractible, and a
contraction can be built degree by degree by choosing graded preimages.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from . import linalg
from .core import lex_order
from .errors import AcyclicityError, AssemblyError, DimensionError
from .gmatrix import GradedMatrix, block_diag, embed_grade_array, is_valid, leq_table, project_matrix_grades
from .scc_io import FreeResolution


def projected_complex(res: FreeResolution, k: int) -> list[GradedMatrix]:
    """``[p_k(D_1), ..., p_k(D_L)]``."""
    if not 1 <= k <= res.n:
        raise DimensionError(f"coordinate {k} not in 1..{res.n}")
    return [project_matrix_grades(D, {k}) for D in res.matrices]


def _sorted_columns(grades: np.ndarray, mask: np.ndarray) -> np.ndarray:
    idx = np.flatnonzero(mask)
    order = lex_order([tuple(grades[i]) for i in idx])
    return idx[order]


def restricted_solve(A: np.ndarray, a_grades: np.ndarray, B: np.ndarray, b_grades: np.ndarray, p: int) -> np.ndarray:
    """Solve ``A X = B`` with column ``j`` of ``X`` supported on grades ``<= b_grades[j]``.

    ``A`` columns are graded by ``a_grades``.  Pivot columns are taken left to
    right in lex order of their grades and free variables are zero, so the
    result is deterministic.  Raises :class:`AcyclicityError` when some column
    of ``B`` is not a graded boundary.
    """
    X = np.zeros((A.shape[1], B.shape[1]), dtype=np.int64)
    if B.shape[1] == 0:
        return X
    if A.shape[1] == 0:
        if np.any(B):
            raise AcyclicityError("target is not a boundary: the next block is empty")
        return X
    allowed = leq_table(a_grades, b_grades)  # (cols of A) x (cols of B)
    # Columns of B with the same allowed set share one elimination.
    keys, inverse = np.unique(allowed.T, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    for g in range(keys.shape[0]):
        targets = np.flatnonzero(inverse == g)
        cols = _sorted_columns(a_grades, keys[g])
        rhs = B[:, targets]
        if cols.size == 0:
            if np.any(rhs):
                raise AcyclicityError("target is not a boundary: no generators of low enough grade")
            continue
        x, ok = linalg.solve(A[:, cols], rhs, p)
        if not np.all(ok):
            bad = targets[np.flatnonzero(~ok)[0]]
            raise AcyclicityError(
                f"column {int(bad)} has no graded preimage; the module is not finite dimensional"
            )
        X[np.ix_(cols, targets)] = x
    return X


def _targets(Dbar: list[GradedMatrix], S_prev: GradedMatrix | None, j: int, size: int, p: int) -> np.ndarray:
    # v_i = e_i - S_{j-1} D_j e_i
    V = np.eye(size, dtype=np.int64)
    if S_prev is not None and j >= 1:
        V = (V - linalg.matmul(S_prev.entries, Dbar[j - 1].entries, p)) % p
    return V


def _finish(res: FreeResolution, Dbar: list[GradedMatrix], S: list[GradedMatrix], k: int) -> list[GradedMatrix]:
    L = res.length
    p = res.p
    # Top degree: S_{L-1} D_L must be the identity, i.e. D_L is injective in every grade.
    top = res.ranks()[L]
    if top:
        lhs = linalg.matmul(S[L - 1].entries, Dbar[L - 1].entries, p) if L else np.zeros((top, top), np.int64)
        if not np.array_equal(lhs, np.eye(top, dtype=np.int64)):
            raise AcyclicityError(
                f"colim_{{{k}}} of the complex has homology in degree {L}; "
                "the module is not finite dimensional"
            )
    return S


def compute_contraction(res: FreeResolution, k: int) -> list[GradedMatrix]:
    """Contraction ``[S_0, ..., S_{L-1}]`` of ``colim_{k} F`` by graded preimage solves."""
    Dbar = projected_complex(res, k)
    p = res.p
    S: list[GradedMatrix] = []
    for j in range(res.length):
        D = Dbar[j]  # D_{j+1}: F_{j+1} -> F_j
        V = _targets(Dbar, S[-1] if S else None, j, D.shape[0], p)
        X = restricted_solve(D.entries, D.col_grades, V, D.row_grades, p)
        S.append(GradedMatrix(X, D.col_grades, D.row_grades, D.n, p))
    return _finish(res, Dbar, S, k)


def _is_chain(*grade_arrays: np.ndarray) -> bool:
    g = np.vstack(grade_arrays)
    if g.shape[0] < 2 or g.shape[1] == 0:
        return True
    order = lex_order([tuple(x) for x in g])
    s = g[order]
    return bool(np.all(s[:-1] <= s[1:]))


def fast_path_applies(res: FreeResolution, k: int) -> bool:
    Dbar = projected_complex(res, k)
    return all(_is_chain(D.row_grades, D.col_grades) for D in Dbar)


def _reduce(R: np.ndarray, T: np.ndarray, p: int) -> dict[int, int]:
    """Column-reduce ``R`` in place (left to right), mirroring operations on ``T``.

    Afterwards nonzero columns have pairwise distinct pivots (lowest nonzero
    row), pivot entries are 1, and ``R = D T`` with ``T`` upper triangular.
    Returns ``{pivot row: column}``.
    """
    pivot_of: dict[int, int] = {}
    for c in range(R.shape[1]):
        col, tcol = R[:, c].copy(), T[:, c].copy()
        while True:
            nz = np.flatnonzero(col)
            if nz.size == 0:
                break
            piv = int(nz[-1])
            other = pivot_of.get(piv)
            if other is None:
                inv = pow(int(col[piv]), -1, p)
                col = (col * inv) % p
                tcol = (tcol * inv) % p
                pivot_of[piv] = c
                break
            f = int(col[piv])
            col = (col - f * R[:, other]) % p
            tcol = (tcol - f * T[:, other]) % p
        R[:, c], T[:, c] = col, tcol
    return pivot_of


def compute_contraction_fast(res: FreeResolution, k: int) -> list[GradedMatrix]:
    """Contraction via sorted column reduction; needs chain-ordered projected grades.

    Falls back to :func:`compute_contraction` when some block of projected
    grades is not totally ordered (possible only for three or more parameters).
    """
    if not fast_path_applies(res, k):
        return compute_contraction(res, k)
    Dbar = projected_complex(res, k)
    p = res.p
    S: list[GradedMatrix] = []
    for j in range(res.length):
        D = Dbar[j]
        rows = np.array(lex_order([tuple(g) for g in D.row_grades]), dtype=np.int64)
        cols = np.array(lex_order([tuple(g) for g in D.col_grades]), dtype=np.int64)
        R = D.entries[np.ix_(rows, cols)].copy()
        T = np.eye(len(cols), dtype=np.int64)
        pivot_of = _reduce(R, T, p)
        V = _targets(Dbar, S[-1] if S else None, j, D.shape[0], p)[rows]
        X = np.zeros((len(cols), D.shape[0]), dtype=np.int64)
        for t in range(V.shape[1]):
            v = V[:, t].copy()
            x = np.zeros(len(cols), dtype=np.int64)
            while True:
                nz = np.flatnonzero(v)
                if nz.size == 0:
                    break
                other = pivot_of.get(int(nz[-1]))
                if other is None:
                    raise AcyclicityError(
                        f"degree-{j} element has no preimage in colim_{{{k}}}; "
                        "the module is not finite dimensional"
                    )
                f = int(v[nz[-1]])
                v = (v - f * R[:, other]) % p
                x = (x + f * T[:, other]) % p
            X[:, t] = x
        out = np.zeros_like(X)
        out[cols] = X
        Sj = GradedMatrix(out, D.col_grades, D.row_grades, D.n, p)
        # with chain-ordered grades the reduction finds a graded preimage whenever one exists
        if not is_valid(Sj):
            raise AcyclicityError(
                f"degree-{j} element has no graded preimage in colim_{{{k}}}; "
                "the module is not finite dimensional"
            )
        S.append(Sj)
    return _finish(res, Dbar, S, k)


def contraction_identity_holds(res: FreeResolution, k: int, S: Sequence[GradedMatrix]) -> bool:
    """Check ``D_{j+1} S_j + S_{j-1} D_j = I`` in every degree ``0..L``."""
    Dbar = projected_complex(res, k)
    p = res.p
    L = res.length
    for j in range(L + 1):
        size = res.ranks()[j]
        acc = np.zeros((size, size), dtype=np.int64)
        if j < L:
            acc = (acc + linalg.matmul(Dbar[j].entries, S[j].entries, p)) % p
        if j >= 1:
            acc = (acc + linalg.matmul(S[j - 1].entries, Dbar[j - 1].entries, p)) % p
        if not np.array_equal(acc, np.eye(size, dtype=np.int64)):
            return False
    return True


@dataclass
class ContractionSet:
    """Contractions ``S^{k}_0..S^{k}_{L-1}`` for each coordinate ``k``."""

    n: int
    length: int
    by_index: dict = field(default_factory=dict)

    def __getitem__(self, k: int) -> list[GradedMatrix]:
        return self.by_index[k]

    def __contains__(self, k: int) -> bool:
        return k in self.by_index


def compute_contractions(res: FreeResolution, method: str = "auto", indices=None) -> ContractionSet:
    """All contractions needed downstream; ``method`` is auto, fast, or preimage."""
    fn = {"auto": compute_contraction_fast, "fast": compute_contraction_fast, "preimage": compute_contraction}[method]
    ks = range(1, res.n + 1) if indices is None else indices
    return ContractionSet(res.n, res.length, {k: fn(res, k) for k in ks})


def subsets(n: int, size: int) -> list[tuple[int, ...]]:
    """Subsets of ``{1..n}`` of the given size in lex order of their sorted elements."""
    return list(combinations(range(1, n + 1), size))


def mask_grades(grades: np.ndarray, Q: Sequence[int]) -> np.ndarray:
    """Set the coordinates indexed by ``Q`` (1-based) to -inf."""
    keep = [i for i in range(grades.shape[1]) if i + 1 not in set(Q)]
    return embed_grade_array(grades[:, keep], Q, grades.shape[1])


def assemble_S(
    res: FreeResolution,
    contractions: ContractionSet,
    i: int,
    j: int,
    representative: Callable[[Sequence[int]], int] = min,
) -> GradedMatrix:
    """Block matrix of ``s_{ij}: Omega_i F_j -> Omega_i F_{j+1}``.

    One block per ``Q`` with ``|Q| = n - i``; the block reuses the entries of the
    contraction for ``representative(Q)`` and regrades them with ``Q`` at -inf.
    """
    n = res.n
    if not 0 <= i <= n - 1:
        raise AssemblyError(f"Cech degree {i} not in 0..{n - 1}")
    if not 0 <= j <= res.length - 1:
        raise AssemblyError(f"homological degree {j} not in 0..{res.length - 1}")
    blocks = []
    for Q in subsets(n, n - i):
        k = representative(Q)
        if k not in Q:
            raise AssemblyError(f"representative {k} is not an element of {Q}")
        if k not in contractions or len(contractions[k]) <= j:
            raise AssemblyError(f"missing contraction for coordinate {k} in degree {j}")
        Sbar = contractions[k][j]
        blocks.append(
            GradedMatrix(Sbar.entries, mask_grades(res.grades(j + 1), Q), mask_grades(res.grades(j), Q), n, res.p)
        )
    return block_diag(blocks, n=n, p=res.p)
