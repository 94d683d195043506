from __future__ import annotations

from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import BIG_P, PHI, PHI_COLS, PHI_ROWS, hand_contractions
from flange.cech import CechLayout, cech_boundary, cech_tensor, flange_presentation, flange_product
from flange.core import NEG_INF
from flange.errors import AssemblyError, GradeIndexError
from flange.gmatrix import GradedMatrix, is_anti_valid, multiply
from flange.oracle import box_resolution, default_box, koszul_box_resolution, rank_table_fip
from flange.scc_io import FreeResolution

I = NEG_INF


def test_two_parameter_boundaries():
    K1 = cech_boundary(2, 1, BIG_P)
    assert K1.col_grade_list() == [(I, 0), (0, I)]
    assert K1.row_grade_list() == [(I, I)]
    assert K1.signed_entries().tolist() == [[1, -1]]
    # listed as F(0,-inf), F(-inf,0) the same map reads (-1 1)
    assert K1.signed_entries()[:, [1, 0]].tolist() == [[-1, 1]]
    K2 = cech_boundary(2, 2, BIG_P)
    assert K2.signed_entries().tolist() == [[1], [1]]
    assert K2.col_grade_list() == [(0, 0)]
    assert K2.row_grade_list() == [(I, 0), (0, I)]


def test_one_parameter_boundary():
    K = cech_boundary(1, 1)
    assert K.entries.tolist() == [[1]]
    assert K.row_grade_list() == [(I,)] and K.col_grade_list() == [(0,)]


@pytest.mark.parametrize("n", range(1, 7))
def test_boundary_squares_to_zero(n):
    for i in range(2, n + 1):
        prod = multiply(cech_boundary(n, i - 1, BIG_P), cech_boundary(n, i, BIG_P))
        assert not prod.entries.any()


def test_boundary_index_errors():
    with pytest.raises(GradeIndexError):
        cech_boundary(2, 0)
    with pytest.raises(GradeIndexError):
        cech_boundary(2, 3)


@pytest.mark.parametrize("n", range(1, 6))
def test_layout(n):
    L = CechLayout(n)
    assert L.subsets(n) == [()] and L.grades(n) == [(0,) * n]
    assert L.grades(0) == [(I,) * n]
    for i in range(n + 1):
        assert len(L.subsets(i)) == comb(n, n - i)


def test_tensor_examples():
    F0 = np.array([(0, 1), (1, 0)])
    K20 = cech_tensor(cech_boundary(2, 2, BIG_P), F0)
    assert K20.entries.tolist() == [[1, 0], [0, 1], [1, 0], [0, 1]]
    assert K20.col_grade_list() == [(0, 1), (1, 0)]
    assert K20.row_grade_list() == [(I, 1), (I, 0), (0, I), (1, I)]
    K = cech_tensor(cech_boundary(2, 1, BIG_P), np.array([(0, 0)]))
    assert K.signed_entries()[:, [1, 0]].tolist() == [[-1, 1]]
    assert K.col_grade_list()[::-1] == [(0, I), (I, 0)]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_tensor_squares_to_zero(n):
    basis = np.array([(1,) * n, tuple(range(n))])
    for i in range(2, n + 1):
        prod = multiply(cech_tensor(cech_boundary(n, i - 1, 5), basis), cech_tensor(cech_boundary(n, i, 5), basis))
        assert not prod.entries.any()


def test_hand_choice_reproduces_displayed_product(example):
    P = flange_presentation(example, contractions=hand_contractions(example), representative=max).matrix
    assert P.signed_entries().tolist() == PHI
    assert P.row_grade_list() == PHI_ROWS and P.col_grade_list() == PHI_COLS


@pytest.mark.parametrize("strategy", ["contraction", "preimage"])
def test_example_normative(example, strategy):
    P = flange_presentation(example, strategy=strategy).matrix
    assert P.shape == (2, 2) and is_anti_valid(P)
    assert P.row_grade_list() == PHI_ROWS and P.col_grade_list() == PHI_COLS


def test_unregraded_product_shape(example):
    prod = flange_product(example)
    assert prod.row_grade_list() == [(I, I)] * 2
    assert prod.col_grade_list() == PHI_COLS


def test_zero_module():
    res = FreeResolution.from_matrices([], p=2, n=2, f0=[])
    for strategy in ("contraction", "preimage"):
        assert flange_presentation(res, strategy=strategy).matrix.shape == (0, 0)


def test_too_long_resolution_rejected():
    res = koszul_box_resolution((0, 0, 0), (1, 1, 1), 3)
    squeezed = FreeResolution(2, 3, tuple(g[:, :2] for g in res.generators), tuple(
        GradedMatrix(D.entries, D.row_grades[:, :2], D.col_grades[:, :2], 2, 3) for D in res.matrices
    ))
    with pytest.raises(AssemblyError):
        flange_presentation(squeezed)


def test_unknown_strategy(example):
    with pytest.raises(ValueError):
        flange_presentation(example, strategy="magic")


@pytest.mark.parametrize("strategy", ["contraction", "preimage"])
@pytest.mark.parametrize(
    "a, b",
    [((0, 0, 0), (1, 2, 3)), ((2, -1, 0), (2, -1, 0)), ((0,), (4,)), ((1, 1), (3, 2))],
)
def test_koszul_box(strategy, a, b):
    res = koszul_box_resolution(a, b, BIG_P)
    P = flange_presentation(res, strategy=strategy).matrix
    assert P.shape == (1, 1) and P.entries[0, 0] != 0
    assert P.row_grade_list() == [tuple(b)] and P.col_grade_list() == [tuple(a)]


boxes = st.lists(
    st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6), st.integers(0, 6)).map(
        lambda t: ((min(t[0], t[2]), min(t[1], t[3])), (max(t[0], t[2]), max(t[1], t[3])))
    ),
    min_size=1,
    max_size=8,
)


@pytest.mark.parametrize("p", [2, BIG_P])
@settings(max_examples=30)
@given(boxes)
def test_strategies_agree_on_rank_invariant(p, bs):
    res = box_resolution(bs, p)
    A = flange_presentation(res).matrix
    B = flange_presentation(res, strategy="preimage").matrix
    C = flange_presentation(res, method="preimage").matrix
    for P in (A, B, C):
        assert P.shape == (len(bs), len(bs)) and is_anti_valid(P)
        assert np.array_equal(P.row_grades, res.grades(2) - 1)
        assert np.array_equal(P.col_grades, res.grades(0))
    box = default_box(A)
    assert rank_table_fip(A, box) == rank_table_fip(B, box) == rank_table_fip(C, box)
