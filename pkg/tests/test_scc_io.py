from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import BIG_P, F0, F1, F2, PHI_COLS, PHI_ROWS, build_example
from flange.core import NEG_INF
from flange.errors import ChainComplexError, GradeArithmeticError, FormatError, GradeIndexError, ValidityError
from flange.gmatrix import GradedMatrix, identity
from flange.oracle import box_resolution, koszul_box_resolution, random_box_sum
from flange.scc_io import (
    FlatInjectivePresentation,
    FreeResolution,
    load,
    parse_fip,
    parse_scc2020,
    save,
    validate_resolution,
    write_fip,
    write_scc2020,
)

EXAMPLE_TEXT = """scc2020
# comment before the parameter line
2
2 4 2
2 2 ; 1 2:-1
3 3 ; 0 1:-1 3:-1
0 3 ; 0
1 2 ; 0 1:-1
2 1 ; 0 1:-1
3 0 ; 1
0 1 ;
1 0 ;
"""


def test_parse_example():
    res = parse_scc2020(EXAMPLE_TEXT, p=BIG_P)
    assert res.n == 2 and res.length == 2
    assert [res.grades(d).tolist() for d in range(3)] == [[list(g) for g in F] for F in (F0, F1, F2)]
    assert res.boundary(1).signed_entries().tolist() == [[1, 1, 1, 0], [0, -1, -1, 1]]
    assert res.boundary(2).signed_entries().tolist() == [[0, 1], [1, -1], [-1, 0], [0, -1]]
    assert res == build_example()


def test_parse_mod_two_and_crlf():
    res = parse_scc2020(EXAMPLE_TEXT.replace("\n", "\r\n"), p=2)
    assert res.boundary(1).entries.tolist() == [[1, 1, 1, 0], [0, 1, 1, 1]]
    assert validate_resolution(res).ok


def test_packaged_example_matches(example):
    assert example == build_example()


def test_length_zero_file():
    res = parse_scc2020("scc2020\n2\n1\n0 0 ;\n")
    assert res.length == 0 and res.ranks() == [1]


def test_trailing_zero_and_one_based():
    text = EXAMPLE_TEXT.replace("2 4 2\n", "2 4 2 0\n")
    assert parse_scc2020(text, p=BIG_P) == build_example()
    shifted = "scc2020\n1\n1 1\n1 ; 1\n0 ;\n"
    res = parse_scc2020(shifted, one_based=True)
    assert res.boundary(1).entries.tolist() == [[1]]
    with pytest.raises(GradeIndexError):
        parse_scc2020(shifted)


@pytest.mark.parametrize(
    "text, err",
    [
        ("scc2021\n1\n1\n0 ;\n", FormatError),
        ("scc2020\n2\n1\n0 ;\n", FormatError),
        ("scc2020\n1\n1 1\n1 ; 3\n0 ;\n", GradeIndexError),
        ("scc2020\n1\n1 1\n1 ; 0 0:2\n0 ;\n", FormatError),
        ("scc2020\n1\n1 1\n1 ; 0\n# late comment\n0 ;\n", FormatError),
        ("scc2020\n1\n1\n0 ; 0\n", FormatError),
        ("scc2020\n1\n1\n0 ;\n0 ;\n", FormatError),
        ("scc2020\n1\n1 1\n0 ; 0\n1 ;\n", ValidityError),
        ("scc2020\n1\n1 1 1\n2 ; 0\n1 ; 0\n0 ;\n", ChainComplexError),
        ("scc2020\n1\n1\nx ;\n", FormatError),
    ],
)
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_scc2020(text)


def test_validity_error_names_entry():
    with pytest.raises(ValidityError, match=r"entry \(0, 0\)"):
        parse_scc2020("scc2020\n2\n1 1\n0 1 ; 0\n1 0 ;\n")


def test_corrupt_example_is_chain_complex_error():
    bad = EXAMPLE_TEXT.replace("3 3 ; 0 1:-1 3:-1", "3 3 ; 0 1:-1")
    with pytest.raises(ChainComplexError):
        parse_scc2020(bad, p=BIG_P)
    res = parse_scc2020(bad, p=BIG_P, check=False)
    assert not validate_resolution(res).all_compositions_zero


def test_write_example_roundtrip():
    res = build_example()
    text = write_scc2020(res)
    assert "2:-1" in text
    assert parse_scc2020(text, p=BIG_P) == res


def test_empty_resolution_roundtrip():
    res = FreeResolution.from_matrices([], p=2, n=2, f0=[])
    assert parse_scc2020(write_scc2020(res)) == res
    tail = FreeResolution.from_matrices([GradedMatrix.build(np.zeros((0, 1), dtype=np.int64), [], [(0, 0)], n=2)])
    assert write_scc2020(tail).splitlines()[2] == "1 0 0"
    assert parse_scc2020(write_scc2020(tail)) == tail


boxes = st.lists(
    st.tuples(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8), st.integers(0, 8)).map(
        lambda t: ((min(t[0], t[2]), min(t[1], t[3])), (max(t[0], t[2]), max(t[1], t[3])))
    ),
    min_size=1,
    max_size=12,
)


@pytest.mark.parametrize("p", [2, BIG_P])
@given(boxes)
def test_box_sum_roundtrip(p, bs):
    res = box_resolution(bs, p)
    assert parse_scc2020(write_scc2020(res), p=p) == res


@pytest.mark.parametrize("seed", range(0, 100, 7))
def test_seeded_corpus_roundtrip(seed):
    res = random_box_sum(seed, count=1 + seed % 20, p=BIG_P)
    assert parse_scc2020(write_scc2020(res), p=BIG_P) == res


def test_koszul_roundtrip():
    res = koszul_box_resolution((0, 1, 2), (3, 3, 3), p=BIG_P)
    assert parse_scc2020(write_scc2020(res), p=BIG_P) == res


def test_fip_roundtrip(phi):
    pres = FlatInjectivePresentation(phi)
    text = write_fip(pres)
    assert text.startswith("fip 1\nfield 32003\nparameters 2\nrows 2\n")
    back = parse_fip(text)
    assert back == pres
    assert back.matrix.row_grade_list() == PHI_ROWS and back.matrix.col_grade_list() == PHI_COLS


def test_fip_edge_cases():
    empty = FlatInjectivePresentation(GradedMatrix.build(np.zeros((0, 0), dtype=np.int64), [], [], n=3))
    assert parse_fip(write_fip(empty)) == empty
    U = GradedMatrix.build([[3]], [(5, 2**63 - 1)], [(NEG_INF, 0)], p=5)
    text = write_fip(FlatInjectivePresentation(U))
    assert "-inf 0" in text and "5 inf" in text
    assert parse_fip(text).matrix == U


@pytest.mark.parametrize(
    "text, err",
    [
        ("fip 2\n", FormatError),
        ("fip 1\nfield 4\nparameters 1\nrows 0\ncols 0\nentries 0\n", GradeArithmeticError),
        ("fip 1\nfield 2\nparameters 1\nrows 1\n0\ncols 1\n1\nentries 1\n0 0 1\n", ValidityError),
        ("fip 1\nfield 2\nparameters 1\nrows 1\n1\ncols 1\n0\nentries 1\n0 3 1\n", GradeIndexError),
        ("fip 1\nfield 3\nparameters 1\nrows 1\n1\ncols 1\n0\nentries 1\n0 0 3\n", FormatError),
    ],
)
def test_fip_errors(text, err):
    with pytest.raises(err):
        parse_fip(text)


def test_validate_report(example):
    report = validate_resolution(example)
    assert report.all_valid and report.all_minimal and report.all_compositions_zero
    assert report.format().splitlines()[-1] == "valid: yes, minimal: yes, d∘d=0: yes"


def test_validate_nonminimal_and_shuffled(example):
    trivial = FreeResolution.from_matrices([identity([(1, 1)], p=BIG_P)])
    assert not validate_resolution(trivial).all_minimal
    assert validate_resolution(trivial).all_valid
    D = example.boundary(1)
    order = [3, 1, 0, 2]
    shuffled = GradedMatrix(D.entries[:, order], D.row_grades, D.col_grades[order], 2, BIG_P)
    assert validate_resolution(FreeResolution.from_matrices([shuffled])).all_valid


def test_load_and_save(tmp_path, phi, example):
    a, b = tmp_path / "a.scc2020", tmp_path / "b.fip"
    save(example, a)
    save(FlatInjectivePresentation(phi), b)
    assert load(a, p=BIG_P) == example
    assert load(b).matrix == phi
    (tmp_path / "c.txt").write_text("hello\n")
    with pytest.raises(FormatError):
        load(tmp_path / "c.txt")
