from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import BIG_P, D1, D2, F0, F1, F2
from flange.core import NEG_INF
from flange.errors import CompositionError, GradeArithmeticError
from flange.gmatrix import (
    GradedMatrix,
    block_diag,
    embed_matrix_grades,
    graded_transpose,
    identity,
    is_anti_valid,
    is_minimal,
    is_valid,
    kronecker,
    multiply,
    project_matrix_grades,
    rank,
    shift_matrix,
    submatrix_by_grade,
    zeros,
)

I = NEG_INF
coord = st.one_of(st.integers(-4, 4), st.just(NEG_INF))


@st.composite
def graded(draw, n=2, p=3, rows=None, cols=None, max_side=4):
    r = draw(st.integers(0, max_side)) if rows is None else rows
    c = draw(st.integers(0, max_side)) if cols is None else cols
    e = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r))
    rg = draw(st.lists(st.tuples(*[coord] * n), min_size=r, max_size=r))
    cg = draw(st.lists(st.tuples(*[coord] * n), min_size=c, max_size=c))
    return GradedMatrix(np.array(e, dtype=np.int64).reshape(r, c), np.array(rg, dtype=np.int64).reshape(r, n), np.array(cg, dtype=np.int64).reshape(c, n), n, p)


def d1(p=BIG_P):
    return GradedMatrix.build(D1, F0, F1, p)


def d2(p=BIG_P):
    return GradedMatrix.build(D2, F1, F2, p)


def test_entries_reduced_and_frozen():
    U = GradedMatrix.build([[-1, 5]], [(0, 0)], [(1, 1), (2, 2)], p=3)
    assert U.entries.tolist() == [[2, 2]]
    assert U.signed_entries().tolist() == [[-1, -1]]
    with pytest.raises(ValueError):
        U.entries[0, 0] = 1


@pytest.mark.parametrize(
    "U, expected",
    [
        (d1(), True),
        (zeros([(5, 5)], [(0, 0)], 2), True),
        (GradedMatrix.build([[1]], [(1, 0)], [(0, 1)]), False),
    ],
)
def test_is_valid(U, expected):
    assert is_valid(U) is expected


@pytest.mark.parametrize(
    "U, expected",
    [
        (GradedMatrix.build([[-1, 0], [-1, -1]], [(1, 1), (2, 2)], [(0, 1), (1, 0)], BIG_P), True),
        (identity([(3, 1), (0, 0)]), True),
        (GradedMatrix.build([[1]], [(0, 0)], [(1, 1)]), False),
    ],
)
def test_is_anti_valid(U, expected):
    assert is_anti_valid(U) is expected


@pytest.mark.parametrize(
    "U, expected",
    [(d2(), True), (d1(), True), (identity([(1, 2)]), False), (zeros([(0, 0)], [(0, 0)], 2), True)],
)
def test_is_minimal(U, expected):
    assert is_minimal(U) is expected


def test_transpose_of_example(phi):
    T = graded_transpose(phi)
    assert T.signed_entries().tolist() == [[-1, -1], [0, -1]]
    assert T.row_grade_list() == [(0, -1), (-1, 0)]
    assert T.col_grade_list() == [(-1, -1), (-2, -2)]
    assert graded_transpose(T) == phi


def test_transpose_empty_and_infinite():
    E = zeros([], [], 2)
    assert graded_transpose(E).shape == (0, 0)
    U = GradedMatrix.build([[1]], [(I, 0)], [(0, 0)])
    assert graded_transpose(U).col_grade_list() == [(2**63 - 1, 0)]


@given(graded())
def test_transpose_involution_and_validity(U):
    T = graded_transpose(U)
    assert graded_transpose(T) == U
    assert is_valid(T) == is_valid(U)
    assert is_anti_valid(T) == is_anti_valid(U)
    assert rank(T) == rank(U)


def test_shift():
    S = shift_matrix(d2(), (1, 1))
    assert S.col_grade_list() == [(1, 1), (2, 2)]
    assert S.row_grade_list()[0] == (-1, 2)
    assert shift_matrix(d1(), (0, 0)) == d1()
    with pytest.raises(GradeArithmeticError):
        shift_matrix(d1(), (I, 0))


@given(graded(), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_shift_preserves_validity(U, z):
    assert is_valid(shift_matrix(U, z)) == is_valid(U)


def test_multiply_identity_and_mismatch():
    U = d1()
    assert multiply(U, identity(F1, BIG_P)) == U
    assert multiply(identity(F0, BIG_P), U) == U
    assert not multiply(d1(), d2()).entries.any()
    with pytest.raises(CompositionError):
        multiply(d1(), identity(F1[::-1], BIG_P))
    with pytest.raises(CompositionError):
        multiply(d1(), d1())


@given(st.data())
def test_valid_products_are_valid(data):
    U = data.draw(graded(rows=3, cols=3))
    V = data.draw(graded(rows=3, cols=2))
    V = V.with_grades(row_grades=U.col_grades)
    if is_valid(U) and is_valid(V):
        assert is_valid(multiply(U, V))


def test_kronecker_cech_example():
    K1 = GradedMatrix.build([[-1, 1]], [(I, I)], [(0, I), (I, 0)], BIG_P)
    E2 = identity(F0, BIG_P)
    KE = kronecker(K1, E2)
    assert KE.signed_entries().tolist() == [[-1, 0, 1, 0], [0, -1, 0, 1]]
    assert KE.col_grade_list() == [(0, I), (1, I), (I, 1), (I, 0)]
    assert KE.row_grade_list() == [(I, I), (I, I)]


def test_kronecker_identities():
    a, b = [(0, 1), (2, 2)], [(1, 0)]
    assert kronecker(identity(a), identity(b)) == identity([(1, 1), (3, 2)])


@given(st.data())
def test_kronecker_mixed_product_and_rank(data):
    U = data.draw(graded(rows=2, cols=3))
    U2 = data.draw(graded(rows=3, cols=2)).with_grades(row_grades=U.col_grades)
    V = data.draw(graded(rows=2, cols=2))
    V2 = data.draw(graded(rows=2, cols=1)).with_grades(row_grades=V.col_grades)
    lhs = multiply(kronecker(U, V), kronecker(U2, V2))
    rhs = kronecker(multiply(U, U2), multiply(V, V2))
    assert lhs == rhs
    assert rank(kronecker(U, V)) == rank(U) * rank(V)


def test_kronecker_rejects_opposite_infinities():
    A = GradedMatrix.build([[1]], [(2**63 - 1, 0)], [(0, 0)])
    B = GradedMatrix.build([[1]], [(I, 0)], [(0, 0)])
    with pytest.raises(GradeArithmeticError):
        kronecker(A, B)


def test_block_diag():
    U, V = d1(), d2()
    B = block_diag([U, V])
    assert B.shape == (6, 6)
    assert np.array_equal(B.entries[:2, :4], U.entries)
    assert np.array_equal(B.entries[2:, 4:], V.entries)
    assert not B.entries[:2, 4:].any() and not B.entries[2:, :4].any()
    assert B.row_grade_list() == F0 + F1
    assert block_diag([U]) == U
    assert block_diag([], n=2).shape == (0, 0)


def test_submatrix_by_grade(phi):
    sub, rows, cols = submatrix_by_grade(phi, (">=", (2, 2)), ("<=", (1, 1)))
    assert sub.signed_entries().tolist() == [[-1, -1]]
    assert rows.tolist() == [1] and cols.tolist() == [0, 1]
    assert rank(sub) == 1
    none, _, _ = submatrix_by_grade(phi, (">=", (9, 9)), ("<=", (-9, -9)))
    assert none.shape == (0, 0)
    assert submatrix_by_grade(phi)[0] == phi


def test_rank_examples():
    assert rank(GradedMatrix.build([[1, 1], [-1, -1]], [(0,), (0,)], [(0,), (0,)], BIG_P)) == 1
    assert rank(identity([(i, i) for i in range(4)])) == 4


def test_project_and_embed():
    P = project_matrix_grades(d2(), {2})
    assert P.row_grade_list() == [(0,), (1,), (2,), (3,)]
    assert P.col_grade_list() == [(2,), (3,)]
    R = embed_matrix_grades(P, {2}, 2)
    assert all(g[1] == I for g in R.row_grade_list() + R.col_grade_list())
    assert project_matrix_grades(d2(), set()) == d2()
