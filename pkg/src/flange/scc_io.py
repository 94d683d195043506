"""Free resolutions in scc2020 text form and flat-injective presentations in fip form.

scc2020 layout accepted here::

    scc2020
    # comments, only before the parameter line
    <n>
    <s_L> ... <s_1> <s_0> [0]
    <g_1> ... <g_n> ; <b> <b> ...      (s_L lines for degree L, then degree L-1, ...)

A boundary token ``b`` is a 0-based index into the next lower block, either bare
(coefficient 1) or ``index:coefficient``; the writer uses signed coefficients.  Degree-0 lines have nothing after
``;``.  One trailing ``0`` on the size line is dropped when the line has at
least two entries; the writer emits it exactly when ``s_0 = 0`` and ``L >= 1``
so that round trips stay exact.

fip layout::

    fip 1
    field <p>
    parameters <n>
    rows <r>
    <grade>            (r lines, tokens may be -inf / inf)
    cols <c>
    <grade>            (c lines)
    entries <k>
    <i> <j> <v>        (k lines, 0-based, 1 <= v < p)
"""

from __future__ import annotations

import io
import os
from importlib import resources
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .core import PrimeField, check_field, format_coord, parse_coord, is_finite
from .errors import ChainComplexError, DimensionError, FormatError, GradeIndexError, ValidityError
from .gmatrix import GradedMatrix, _grade_array, invalid_entries, is_anti_valid, is_minimal


@dataclass(frozen=True, eq=False)
class FreeResolution:
    """Chain complex ``F_L -> ... -> F_1 -> F_0`` of free modules.

    ``generators[d]`` holds the grades of ``F_d`` (an ``(s_d, n)`` int64 array);
    ``matrices[d - 1]`` is ``D_d`` with rows indexed by ``F_{d-1}`` and columns
    by ``F_d``.  Structural checks live in :meth:`check` so that malformed
    complexes can still be inspected by :func:`validate_resolution`.
    """

    n: int
    p: int
    generators: tuple
    matrices: tuple

    def __post_init__(self):
        check_field(self.p)
        gens = tuple(_grade_array(g, self.n) for g in self.generators)
        if not gens:
            raise DimensionError("a resolution needs at least the degree-0 block")
        mats = tuple(self.matrices)
        if len(mats) != len(gens) - 1:
            raise DimensionError(f"{len(gens)} generator blocks need {len(gens) - 1} matrices")
        for d, D in enumerate(mats, start=1):
            if D.n != self.n or D.p != self.p:
                raise DimensionError(f"D_{d} has wrong parameter count or field")
            if not np.array_equal(D.row_grades, gens[d - 1]) or not np.array_equal(D.col_grades, gens[d]):
                raise DimensionError(f"D_{d} grades do not match the generator blocks")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "matrices", mats)

    @classmethod
    def from_matrices(cls, matrices, p: int | None = None, n: int | None = None, f0=None):
        matrices = list(matrices)
        if matrices:
            n = matrices[0].n if n is None else n
            p = matrices[0].p if p is None else p
            gens = [matrices[0].row_grades] + [D.col_grades for D in matrices]
        else:
            if f0 is None or n is None:
                raise DimensionError("a length-0 resolution needs n and the F_0 grades")
            gens = [_grade_array(f0, n)]
        return cls(n, 2 if p is None else p, tuple(gens), tuple(matrices))

    @property
    def length(self) -> int:
        return len(self.matrices)

    def ranks(self) -> list[int]:
        return [g.shape[0] for g in self.generators]

    def grades(self, d: int) -> np.ndarray:
        if 0 <= d <= self.length:
            return self.generators[d]
        return np.zeros((0, self.n), dtype=np.int64)

    def boundary(self, d: int) -> GradedMatrix:
        """``D_d`` for any ``d >= 1``; zero matrices outside the stored range."""
        if 1 <= d <= self.length:
            return self.matrices[d - 1]
        rows, cols = self.grades(d - 1), self.grades(d)
        return GradedMatrix(np.zeros((rows.shape[0], cols.shape[0]), dtype=np.int64), rows, cols, self.n, self.p)

    def padded(self, length: int) -> "FreeResolution":
        """Same complex with zero-rank blocks appended up to ``length``."""
        if length < self.length:
            raise DimensionError(f"resolution of length {self.length} cannot be cut to {length}")
        gens = list(self.generators)
        mats = list(self.matrices)
        while len(mats) < length:
            gens.append(np.zeros((0, self.n), dtype=np.int64))
            e = np.zeros((gens[-2].shape[0], 0), dtype=np.int64)
            mats.append(GradedMatrix(e, gens[-2], gens[-1], self.n, self.p))
        return FreeResolution(self.n, self.p, tuple(gens), tuple(mats))

    def check(self) -> None:
        for d, D in enumerate(self.matrices, start=1):
            bad = invalid_entries(D)
            if bad:
                i, j = bad[0]
                raise ValidityError(
                    f"D_{d} entry ({i}, {j}) is nonzero but row grade {D.row_grade(i)} "
                    f"is not <= column grade {D.col_grade(j)}"
                )
        for d in range(1, self.length):
            prod = linalg.matmul(self.matrices[d - 1].entries, self.matrices[d].entries, self.p)
            if np.any(prod):
                raise ChainComplexError(f"D_{d} * D_{d + 1} is nonzero")

    def __eq__(self, other):
        if not isinstance(other, FreeResolution):
            return NotImplemented
        return (
            self.n == other.n
            and self.p == other.p
            and len(self.generators) == len(other.generators)
            and all(np.array_equal(a, b) for a, b in zip(self.generators, other.generators))
            and all(a == b for a, b in zip(self.matrices, other.matrices))
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class FlatInjectivePresentation:
    """An anti-valid matrix: rows are injective cogenerators, columns flat generators."""

    matrix: GradedMatrix

    def __post_init__(self):
        if not is_anti_valid(self.matrix):
            raise ValidityError("flat-injective presentation matrix must be anti-valid")

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def p(self) -> int:
        return self.matrix.p

    def __eq__(self, other):
        if not isinstance(other, FlatInjectivePresentation):
            return NotImplemented
        return self.matrix == other.matrix

    __hash__ = None


def _read_text(src) -> str:
    if isinstance(src, str):
        return src
    if isinstance(src, bytes):
        return src.decode("utf-8")
    data = src.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _lines(text: str) -> list[tuple[int, str]]:
    text = text.lstrip("﻿")
    return [(k, ln.strip()) for k, ln in enumerate(text.splitlines(), start=1)]


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"line {lineno}: expected integer {what}, got {tok!r}") from None


def parse_scc2020(src, p: int = 2, one_based: bool = False, check: bool = True) -> FreeResolution:
    """Read a free resolution; ``check=False`` skips validity and d*d=0 checks."""
    check_field(p)
    lines = [(k, ln) for k, ln in _lines(_read_text(src)) if ln]
    if not lines or lines[0][1] != "scc2020":
        raise FormatError("first line must be 'scc2020'")
    pos = 1
    while pos < len(lines) and lines[pos][1].startswith("#"):
        pos += 1
    if pos >= len(lines):
        raise FormatError("missing parameter count")
    k, ln = lines[pos]
    toks = ln.split()
    if len(toks) != 1:
        raise FormatError(f"line {k}: parameter line must hold a single integer")
    n = _int(toks[0], k, "parameter count")
    if n < 1:
        raise FormatError(f"line {k}: parameter count must be positive")
    pos += 1
    if pos >= len(lines):
        raise FormatError("missing block-size line")
    k, ln = lines[pos]
    sizes = [_int(t, k, "block size") for t in ln.split()]
    if not sizes:
        raise FormatError(f"line {k}: empty block-size line")
    if len(sizes) >= 2 and sizes[-1] == 0:
        sizes = sizes[:-1]
    if any(s < 0 for s in sizes):
        raise FormatError(f"line {k}: negative block size")
    pos += 1
    L = len(sizes) - 1
    block_size = {L - t: s for t, s in enumerate(sizes)}  # degree -> size

    grades: dict[int, list] = {}
    bounds: dict[int, list] = {}
    offset = 1 if one_based else 0
    for d in range(L, -1, -1):
        gs, bs = [], []
        for _ in range(block_size[d]):
            if pos >= len(lines):
                raise FormatError(f"unexpected end of file in degree-{d} block")
            k, ln = lines[pos]
            pos += 1
            if ln.startswith("#"):
                raise FormatError(f"line {k}: comments are not allowed inside data blocks")
            if ln.count(";") != 1:
                raise FormatError(f"line {k}: generator line needs exactly one ';'")
            left, right = ln.split(";")
            gtoks = left.split()
            if len(gtoks) != n:
                raise FormatError(f"line {k}: grade has {len(gtoks)} coordinates, expected {n}")
            g = tuple(_int(t, k, "grade coordinate") for t in gtoks)
            if not all(is_finite(x) for x in g):
                raise FormatError(f"line {k}: grade coordinate out of range")
            entries = {}
            btoks = right.split()
            if d == 0 and btoks:
                raise FormatError(f"line {k}: degree-0 generators have no boundary")
            for t in btoks:
                if ":" in t:
                    a, c = t.split(":", 1)
                    idx, coef = _int(a, k, "boundary index"), _int(c, k, "coefficient")
                else:
                    idx, coef = _int(t, k, "boundary index"), 1
                idx -= offset
                if not 0 <= idx < block_size[d - 1]:
                    raise GradeIndexError(
                        f"line {k}: boundary index {idx + offset} outside degree-{d - 1} block "
                        f"of size {block_size[d - 1]}"
                    )
                if idx in entries:
                    raise FormatError(f"line {k}: duplicate boundary index {idx + offset}")
                entries[idx] = coef
            gs.append(g)
            bs.append(entries)
        grades[d], bounds[d] = gs, bs
    if pos != len(lines):
        k, ln = lines[pos]
        raise FormatError(f"line {k}: trailing content after the last block")

    gens = [_grade_array(grades[d], n) for d in range(L + 1)]
    mats = []
    for d in range(1, L + 1):
        e = np.zeros((block_size[d - 1], block_size[d]), dtype=np.int64)
        for j, col in enumerate(bounds[d]):
            for i, c in col.items():
                e[i, j] = c % p
        mats.append(GradedMatrix(e, gens[d - 1], gens[d], n, p))
    res = FreeResolution(n, p, tuple(gens), tuple(mats))
    if check:
        res.check()
    return res


def write_scc2020(res: FreeResolution) -> str:
    # signed representatives keep files readable over other fields (-1 stays -1)
    field = PrimeField(res.p)
    out = io.StringIO()
    out.write("scc2020\n")
    out.write(f"{res.n}\n")
    sizes = res.ranks()[::-1]
    if res.length >= 1 and sizes[-1] == 0:
        sizes.append(0)
    out.write(" ".join(str(s) for s in sizes) + "\n")
    for d in range(res.length, -1, -1):
        G = res.generators[d]
        E = res.matrices[d - 1].entries if d >= 1 else None
        for j in range(G.shape[0]):
            line = " ".join(str(int(x)) for x in G[j]) + " ;"
            if E is not None:
                toks = []
                for i in np.flatnonzero(E[:, j]):
                    c = field.signed(int(E[i, j]))
                    toks.append(str(i) if c == 1 else f"{i}:{c}")
                if toks:
                    line += " " + " ".join(toks)
            out.write(line + "\n")
    return out.getvalue()


def _expect(lines, pos: int, keyword: str) -> tuple[int, str]:
    if pos >= len(lines):
        raise FormatError(f"missing '{keyword}' line")
    k, ln = lines[pos]
    toks = ln.split()
    if len(toks) != 2 or toks[0] != keyword:
        raise FormatError(f"line {k}: expected '{keyword} <value>', got {ln!r}")
    return k, toks[1]


def _fip_grades(lines, pos: int, count: int, n: int) -> list[tuple]:
    out = []
    for t in range(count):
        if pos + t >= len(lines):
            raise FormatError("unexpected end of file in grade list")
        k, ln = lines[pos + t]
        toks = ln.split()
        if len(toks) != n:
            raise FormatError(f"line {k}: grade has {len(toks)} coordinates, expected {n}")
        try:
            out.append(tuple(parse_coord(x) for x in toks))
        except ValueError:
            raise FormatError(f"line {k}: malformed grade {ln!r}") from None
    return out


def parse_fip(src) -> FlatInjectivePresentation:
    raw = _lines(_read_text(src))
    while raw and not raw[-1][1]:
        raw.pop()
    lines = raw
    if not lines or lines[0][1].split() != ["fip", "1"]:
        raise FormatError("first line must be 'fip 1'")
    k, v = _expect(lines, 1, "field")
    p = _int(v, k, "field characteristic")
    try:
        check_field(p)
    except ValueError as exc:
        raise FormatError(f"line {k}: {exc}") from None
    k, v = _expect(lines, 2, "parameters")
    n = _int(v, k, "parameter count")
    if n < 1:
        raise FormatError(f"line {k}: parameter count must be positive")
    k, v = _expect(lines, 3, "rows")
    r = _int(v, k, "row count")
    rows = _fip_grades(lines, 4, r, n)
    pos = 4 + r
    k, v = _expect(lines, pos, "cols")
    c = _int(v, k, "column count")
    cols = _fip_grades(lines, pos + 1, c, n)
    pos += 1 + c
    k, v = _expect(lines, pos, "entries")
    m = _int(v, k, "entry count")
    pos += 1
    e = np.zeros((r, c), dtype=np.int64)
    seen = set()
    for t in range(m):
        if pos + t >= len(lines):
            raise FormatError("unexpected end of file in entry list")
        k, ln = lines[pos + t]
        toks = ln.split()
        if len(toks) != 3:
            raise FormatError(f"line {k}: entry line must be 'i j v'")
        i, j, val = (_int(x, k, "entry field") for x in toks)
        if not (0 <= i < r and 0 <= j < c):
            raise GradeIndexError(f"line {k}: entry position ({i}, {j}) outside {r}x{c}")
        if not 1 <= val < p:
            raise FormatError(f"line {k}: entry value {val} not in [1, {p})")
        if (i, j) in seen:
            raise FormatError(f"line {k}: duplicate entry ({i}, {j})")
        seen.add((i, j))
        e[i, j] = val
    if pos + m != len(lines):
        raise FormatError(f"line {lines[pos + m][0]}: trailing content after entries")
    U = GradedMatrix(e, _grade_array(rows, n), _grade_array(cols, n), n, p)
    return FlatInjectivePresentation(U)


def write_fip(pres: FlatInjectivePresentation) -> str:
    U = pres.matrix
    out = io.StringIO()
    out.write("fip 1\n")
    out.write(f"field {U.p}\n")
    out.write(f"parameters {U.n}\n")
    out.write(f"rows {U.shape[0]}\n")
    for g in U.row_grades:
        out.write(" ".join(format_coord(int(x)) for x in g) + "\n")
    out.write(f"cols {U.shape[1]}\n")
    for g in U.col_grades:
        out.write(" ".join(format_coord(int(x)) for x in g) + "\n")
    ii, jj = np.nonzero(U.entries)
    out.write(f"entries {ii.size}\n")
    for i, j in zip(ii, jj):
        out.write(f"{i} {j} {U.entries[i, j]}\n")
    return out.getvalue()


def load(path: str | os.PathLike, **kw):
    """Read either format, dispatching on the first line."""
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    first = text.lstrip("﻿").split("\n", 1)[0].strip()
    if first == "scc2020":
        return parse_scc2020(text, **kw)
    if first.split() == ["fip", "1"]:
        return parse_fip(text)
    raise FormatError(f"{path}: unrecognised header {first!r}")


def example_resolution(p: int = 32003) -> FreeResolution:
    """The bundled two-parameter example (two generators, four relations, two syzygies)."""
    text = resources.files(__package__).joinpath("data/example.scc2020").read_text(encoding="utf-8")
    return parse_scc2020(text, p=p)


def save(obj, path: str | os.PathLike) -> None:
    text = write_scc2020(obj) if isinstance(obj, FreeResolution) else write_fip(obj)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


@dataclass
class MatrixReport:
    degree: int
    rows: int
    cols: int
    valid: bool
    minimal: bool
    composes_to_zero: bool | None  # with D_{degree+1}; None for the last matrix
    invalid_entries: list = field(default_factory=list)


@dataclass
class ResolutionReport:
    n: int
    p: int
    ranks: list
    matrices: list

    @property
    def all_valid(self) -> bool:
        return all(m.valid for m in self.matrices)

    @property
    def all_minimal(self) -> bool:
        return all(m.minimal for m in self.matrices)

    @property
    def all_compositions_zero(self) -> bool:
        return all(m.composes_to_zero is not False for m in self.matrices)

    @property
    def ok(self) -> bool:
        return self.all_valid and self.all_compositions_zero

    def format(self) -> str:
        yn = lambda b: "yes" if b else "no"  # noqa: E731
        out = [f"parameters: {self.n}", f"field: {self.p}", "ranks (F_0..F_L): " + " ".join(map(str, self.ranks))]
        for m in self.matrices:
            line = f"D_{m.degree}: {m.rows}x{m.cols} valid={yn(m.valid)} minimal={yn(m.minimal)}"
            if m.composes_to_zero is not None:
                line += f" D_{m.degree}*D_{m.degree + 1}=0: {yn(m.composes_to_zero)}"
            if m.invalid_entries:
                line += f" offending={m.invalid_entries[:5]}"
            out.append(line)
        out.append(
            f"valid: {yn(self.all_valid)}, minimal: {yn(self.all_minimal)}, "
            f"d∘d=0: {yn(self.all_compositions_zero)}"
        )
        return "\n".join(out)


def validate_resolution(res: FreeResolution) -> ResolutionReport:
    reports = []
    for d, D in enumerate(res.matrices, start=1):
        bad = invalid_entries(D)
        zero = None
        if d < res.length:
            zero = not np.any(linalg.matmul(D.entries, res.matrices[d].entries, res.p))
        reports.append(MatrixReport(d, D.shape[0], D.shape[1], not bad, is_minimal(D), zero, bad))
    return ResolutionReport(res.n, res.p, res.ranks(), reports)
