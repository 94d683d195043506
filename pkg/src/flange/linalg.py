"""Dense exact linear algebra over Z/p on int64 numpy arrays.

Entries are kept reduced to ``[0, p)``.  With ``p < 2**31`` a single product of
two residues fits in int64, so elimination steps never overflow; matrix
products are chunked along the inner dimension so partial sums stay below
``2**63``.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_INT64_MAX = 2**63 - 1


def as_mod(a, p: int) -> np.ndarray:
    return np.mod(np.asarray(a, dtype=np.int64), p)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    m, k = a.shape
    k2, n = b.shape
    if k != k2:
        raise ValueError(f"inner dimensions differ: {k} vs {k2}")
    if m == 0 or n == 0 or k == 0:
        return np.zeros((m, n), dtype=np.int64)
    step = max(1, _INT64_MAX // ((p - 1) ** 2 + p))
    if step >= k:
        return (a @ b) % p
    out = np.zeros((m, n), dtype=np.int64)
    for s in range(0, k, step):
        out = (out + a[:, s : s + step] @ b[s : s + step]) % p
    return out


def _eliminate(A: np.ndarray, p: int, limit: int, full: bool) -> list[int]:
    """Row-reduce ``A`` in place; pivots searched in columns ``< limit``.

    With ``full`` the result is the reduced row echelon form, otherwise only
    entries below each pivot are cleared.  Returns the pivot columns.
    """
    m = A.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = pow(int(A[r, c]), -1, p)
        if inv != 1:
            A[r] = (A[r] * inv) % p
        if full:
            col = A[:, c].copy()
            col[r] = 0
            rows = np.flatnonzero(col)
        else:
            rows = r + 1 + np.flatnonzero(A[r + 1 :, c])
        if rows.size:
            A[rows] = (A[rows] - np.outer(A[rows, c], A[r])) % p
        pivots.append(c)
        r += 1
    return pivots


@njit(cache=True)
def _rank_kernel(A, p):
    m, n = A.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        k = r
        while k < m and A[k, c] == 0:
            k += 1
        if k == m:
            continue
        if k != r:
            for t in range(c, n):
                A[r, t], A[k, t] = A[k, t], A[r, t]
        # inverse by Fermat: p is prime
        inv, base, e = 1, A[r, c], p - 2
        while e:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        for t in range(c, n):
            A[r, t] = A[r, t] * inv % p
        for i in range(r + 1, m):
            f = A[i, c]
            if f:
                for t in range(c, n):
                    A[i, t] = (A[i, t] - f * A[r, t]) % p
        r += 1
    return r


def rank(a, p: int) -> int:
    A = np.array(a, dtype=np.int64, copy=True)
    if A.size == 0:
        return 0
    if A.shape[0] > A.shape[1]:
        A = A.T
    return int(_rank_kernel(np.ascontiguousarray(A % p), p))


def rref(a, p: int, limit: int | None = None) -> tuple[np.ndarray, list[int]]:
    A = np.array(a, dtype=np.int64, copy=True) % p
    lim = A.shape[1] if limit is None else limit
    piv = _eliminate(A, p, lim, full=True)
    return A, piv


def solve(a, b, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Solve ``a @ x = b`` column by column.

    Pivot variables are chosen left to right, free variables are zero.
    Returns ``(x, ok)`` where ``ok[j]`` tells whether column ``j`` of ``b`` is
    in the column space of ``a`` (``x[:, j]`` is zero when it is not).
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    m, n = a.shape
    k = b.shape[1]
    x = np.zeros((n, k), dtype=np.int64)
    if k == 0:
        return x, np.ones(0, dtype=bool)
    if m == 0:
        return x, np.ones(k, dtype=bool)
    R, piv = rref(np.hstack([a, b]), p, limit=n)
    r = len(piv)
    ok = ~np.any(R[r:, n:] != 0, axis=0)
    if r:
        x[piv, :] = R[:r, n:]
    x[:, ~ok] = 0
    return x, ok


def column_basis(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Basis ``B`` of the column space with ``B[pivots] = I``.

    Coordinates of any ``v`` in the column space w.r.t. ``B`` are ``v[pivots]``.
    """
    a = np.asarray(a, dtype=np.int64)
    m = a.shape[0]
    if a.shape[1] == 0 or m == 0:
        return np.zeros((m, 0), dtype=np.int64), []
    R, piv = rref(a.T, p)
    B = np.ascontiguousarray(R[: len(piv)].T)
    return B, piv


def is_zero(a) -> bool:
    return not np.any(np.asarray(a))
