"""Čech complex matrices and the flat-injective presentation product.

``Omega_i`` is the sum of flat modules ``F(e_Q)`` over subsets ``Q`` of
``{1..n}`` with ``|Q| = n - i``, where ``e_Q`` is ``-inf`` on ``Q`` and ``0``
elsewhere.  Subsets are listed in lex order of their sorted elements, and the
same order is used for the blocks of ``Omega_i F_j`` everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import NEG_INF
from .contraction import (
    ContractionSet,
    assemble_S,
    compute_contractions,
    mask_grades,
    restricted_solve,
    subsets,
)
from .errors import AssemblyError, DimensionError, FlangeError, GradeIndexError
from .gmatrix import GradedMatrix, identity, is_anti_valid, kronecker, multiply
from .scc_io import FlatInjectivePresentation, FreeResolution


def e_Q(Q: Sequence[int], n: int) -> tuple:
    return tuple(NEG_INF if i in Q else 0 for i in range(1, n + 1))


@dataclass(frozen=True)
class CechLayout:
    """Subsets and grades ``e_Q`` of every layer ``Omega_0 .. Omega_n``."""

    n: int

    def subsets(self, i: int) -> list[tuple[int, ...]]:
        if not 0 <= i <= self.n:
            raise GradeIndexError(f"Cech degree {i} not in 0..{self.n}")
        return subsets(self.n, self.n - i)

    def grades(self, i: int) -> list[tuple]:
        return [e_Q(Q, self.n) for Q in self.subsets(i)]

    def tensor_grades(self, i: int, basis: np.ndarray) -> np.ndarray:
        """Grades of ``Omega_i F`` for a free module with generator grades ``basis``."""
        blocks = [mask_grades(basis, Q) for Q in self.subsets(i)]
        if not blocks:
            return np.zeros((0, self.n), dtype=np.int64)
        return np.vstack(blocks)


def _sign(Q: Sequence[int], q: int) -> int:
    # Anchored to the two-parameter picture: Omega_1 = F(-inf,0) + F(0,-inf)
    # maps to Omega_0 by (1 -1); equivalently (-1 1) in the order F(0,-inf), F(-inf,0).
    return -1 if sum(1 for x in Q if x > q) % 2 else 1


def cech_boundary(n: int, i: int, p: int = 2) -> GradedMatrix:
    """Matrix ``K_i`` of ``kappa_i: Omega_i -> Omega_{i-1}``."""
    if n < 1:
        raise DimensionError("parameter count must be positive")
    if not 1 <= i <= n:
        raise GradeIndexError(f"Cech boundary index {i} not in 1..{n}")
    layout = CechLayout(n)
    cols = layout.subsets(i)
    rows = layout.subsets(i - 1)
    row_pos = {Q: r for r, Q in enumerate(rows)}
    e = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for c, Q in enumerate(cols):
        for q in range(1, n + 1):
            if q in Q:
                continue
            e[row_pos[tuple(sorted(Q + (q,)))], c] = _sign(Q, q)
    return GradedMatrix(e, layout.grades(i - 1), layout.grades(i), n, p)


def cech_tensor(K: GradedMatrix, basis_grades) -> GradedMatrix:
    """``K_{ij} = K_i (x) E`` with ``E`` the graded identity on ``basis_grades``."""
    return kronecker(K, identity(basis_grades, K.p, K.n))


def _prepare(res: FreeResolution) -> FreeResolution:
    n = res.n
    if res.length > n:
        raise AssemblyError(f"resolution has length {res.length} > n = {n}")
    return res.padded(n) if res.length < n else res


def _finalize(res: FreeResolution, prod: GradedMatrix) -> FlatInjectivePresentation:
    """Regrade rows to ``rk F_n - 1`` and columns to ``rk F_0``."""
    n = res.n
    top = res.grades(n)
    rows = top - 1
    Phi = GradedMatrix(prod.entries, rows, res.grades(0), n, res.p)
    if not is_anti_valid(Phi):
        raise FlangeError("internal error: flat-injective matrix is not anti-valid")
    return FlatInjectivePresentation(Phi)


def flange_product(
    res: FreeResolution,
    contractions: ContractionSet | None = None,
    representative: Callable[[Sequence[int]], int] = min,
    method: str = "auto",
) -> GradedMatrix:
    """``S_{0,n-1} K_{1,n-1} ... S_{n-1,0} K_{n,0}`` evaluated left to right.

    Rows carry the grades of ``Omega_0 F_n`` (all ``-inf``) and columns those
    of ``F_0``; :func:`flange_presentation` regrades the result.
    """
    res = _prepare(res)
    n, p = res.n, res.p
    if contractions is None:
        contractions = compute_contractions(res, method=method)
    acc = None
    for i in range(n):
        j = n - 1 - i
        S = assemble_S(res, contractions, i, j, representative)
        acc = S if acc is None else multiply(acc, S)
        K = cech_tensor(cech_boundary(n, i + 1, p), res.grades(j))
        acc = multiply(acc, K)
    return acc


def flange_presentation(
    res: FreeResolution,
    strategy: str = "contraction",
    contractions: ContractionSet | None = None,
    representative: Callable[[Sequence[int]], int] = min,
    method: str = "auto",
) -> FlatInjectivePresentation:
    """Flat-injective presentation matrix of the module resolved by ``res``.

    ``strategy`` is ``"contraction"`` (materialize every ``S_ij``) or
    ``"preimage"`` (iterated graded preimages, see
    :func:`flange_presentation_preimage`).  ``contractions`` and
    ``representative`` let callers inject specific contraction choices.
    """
    if strategy == "preimage":
        return flange_presentation_preimage(res)
    if strategy != "contraction":
        raise ValueError(f"unknown strategy {strategy!r}")
    res = _prepare(res)
    return _finalize(res, flange_product(res, contractions, representative, method))


def omega_boundary(res: FreeResolution, i: int, j: int) -> GradedMatrix:
    """``partial_{ij} = Omega_i D_j``: block diagonal copies of ``D_j`` regraded per ``Q``."""
    D = res.boundary(j)
    blocks_e = []
    rows, cols = [], []
    for Q in subsets(res.n, res.n - i):
        blocks_e.append(D.entries)
        rows.append(mask_grades(D.row_grades, Q))
        cols.append(mask_grades(D.col_grades, Q))
    r = sum(b.shape[0] for b in blocks_e)
    c = sum(b.shape[1] for b in blocks_e)
    e = np.zeros((r, c), dtype=np.int64)
    a = b = 0
    for blk in blocks_e:
        e[a : a + blk.shape[0], b : b + blk.shape[1]] = blk
        a += blk.shape[0]
        b += blk.shape[1]
    return GradedMatrix(e, np.vstack(rows), np.vstack(cols), res.n, res.p)


def flange_presentation_preimage(res: FreeResolution) -> FlatInjectivePresentation:
    """Same presentation, computed by iterated graded preimages.

    Keeps ``u_k: F_0 -> Omega_{n-k} F_k`` and at each stage solves
    ``partial x = kappa u_{k-1}`` column by column, each column restricted to
    generators of grade at most that of its ``F_0`` generator.  No full
    contraction matrix is formed.
    """
    res = _prepare(res)
    n, p = res.n, res.p
    f0 = res.grades(0)
    u = identity(f0, p, n)
    for k in range(1, n + 1):
        i = n - k
        K = cech_tensor(cech_boundary(n, i + 1, p), res.grades(k - 1))
        w = multiply(K, u)
        d = omega_boundary(res, i, k)
        X = np.zeros((d.shape[1], w.shape[1]), dtype=np.int64)
        r0 = c0 = 0
        for Q in subsets(n, n - i):
            nr, nc = res.ranks()[k - 1], res.ranks()[k]
            keep = [t for t in range(n) if t + 1 not in Q]
            X[c0 : c0 + nc] = restricted_solve(
                d.entries[r0 : r0 + nr, c0 : c0 + nc],
                d.col_grades[c0 : c0 + nc][:, keep],
                w.entries[r0 : r0 + nr],
                f0[:, keep],
                p,
            )
            r0 += nr
            c0 += nc
        u = GradedMatrix(X, d.col_grades, f0, n, p)
    return _finalize(res, u)
