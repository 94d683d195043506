"""Extended-integer grades and prime-field scalars.

A grade is a plain tuple of Python ints.  The two values ``NEG_INF`` and
``POS_INF`` are reserved 64-bit sentinels; every other coordinate must lie
strictly between them.  Keeping grades as tuples makes them hashable and lets
numpy arrays of grades (dtype int64) compare with the same semantics, since
the sentinels are the extreme int64 values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionError, GradeArithmeticError, GradeIndexError

NEG_INF = -(2**63)
POS_INF = 2**63 - 1

ExtGrade = tuple  # tuple[int, ...]


def is_finite(x: int) -> bool:
    return NEG_INF < x < POS_INF


def make_grade(coords: Iterable[int]) -> ExtGrade:
    g = tuple(int(c) for c in coords)
    for c in g:
        if c < NEG_INF or c > POS_INF:
            raise GradeArithmeticError(f"grade coordinate {c} outside int64 range")
    return g


def _same_length(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise DimensionError(f"grade lengths differ: {len(a)} vs {len(b)}")


def grade_leq(a: Sequence[int], b: Sequence[int]) -> bool:
    _same_length(a, b)
    return all(x <= y for x, y in zip(a, b))


def grade_lt(a: Sequence[int], b: Sequence[int]) -> bool:
    """Strict product order: ``a <= b`` and ``a != b``."""
    return grade_leq(a, b) and tuple(a) != tuple(b)


def grade_shift(a: Sequence[int], z: Sequence[int]) -> ExtGrade:
    """``a - z`` on finite coordinates; infinite coordinates stay put."""
    _same_length(a, z)
    out = []
    for x, s in zip(a, z):
        if not is_finite(s):
            raise GradeArithmeticError("shift vector must be finite")
        if is_finite(x):
            y = x - s
            if not is_finite(y):
                raise GradeArithmeticError(f"shift of {x} by {s} overflows")
            out.append(y)
        else:
            out.append(x)
    return tuple(out)


def grade_neg(a: Sequence[int]) -> ExtGrade:
    out = []
    for x in a:
        if x == NEG_INF:
            out.append(POS_INF)
        elif x == POS_INF:
            out.append(NEG_INF)
        else:
            out.append(-x)
    return tuple(out)


def grade_add(a: Sequence[int], b: Sequence[int]) -> ExtGrade:
    """Coordinatewise sum where -inf absorbs finite values.

    ``+inf + finite`` is ``+inf``; mixing ``+inf`` and ``-inf`` is an error.
    """
    _same_length(a, b)
    out = []
    for x, y in zip(a, b):
        fx, fy = is_finite(x), is_finite(y)
        if fx and fy:
            s = x + y
            if not is_finite(s):
                raise GradeArithmeticError(f"grade sum {x} + {y} overflows")
            out.append(s)
        elif {x, y} == {NEG_INF, POS_INF}:
            raise GradeArithmeticError("cannot add +inf and -inf")
        else:
            out.append(x if not fx else y)
    return tuple(out)


def _check_index_set(Q: Iterable[int], n: int) -> frozenset:
    Q = frozenset(Q)
    for q in Q:
        if not 1 <= q <= n:
            raise GradeIndexError(f"coordinate index {q} not in 1..{n}")
    return Q


def project_grade(a: Sequence[int], Q: Iterable[int]) -> ExtGrade:
    """Forget the coordinates indexed by ``Q`` (1-based)."""
    Q = _check_index_set(Q, len(a))
    return tuple(x for i, x in enumerate(a, start=1) if i not in Q)


def embed_grade(a: Sequence[int], Q: Iterable[int], n: int) -> ExtGrade:
    """Insert ``-inf`` at the coordinates indexed by ``Q``; inverse of projection."""
    Q = _check_index_set(Q, n)
    if len(a) + len(Q) != n:
        raise DimensionError(f"grade of length {len(a)} plus |Q|={len(Q)} != {n}")
    it = iter(a)
    return tuple(NEG_INF if i in Q else next(it) for i in range(1, n + 1))


def format_coord(x: int) -> str:
    if x == NEG_INF:
        return "-inf"
    if x == POS_INF:
        return "inf"
    return str(x)


def parse_coord(tok: str) -> int:
    t = tok.strip().lower()
    if t in ("-inf", "−inf"):
        return NEG_INF
    if t in ("inf", "+inf"):
        return POS_INF
    v = int(t)
    if not is_finite(v):
        raise GradeArithmeticError(f"grade coordinate {v} collides with an infinity sentinel")
    return v


def format_grade(a: Sequence[int]) -> str:
    return "(" + ",".join(format_coord(x) for x in a) + ")"


def lex_key(a: Sequence[int]) -> tuple:
    # NEG_INF is the smallest int64, so plain tuple order already puts it first.
    return tuple(a)


def lex_order(grades: Sequence[Sequence[int]]) -> list[int]:
    """Indices sorted lexicographically by grade, ties by original index."""
    return sorted(range(len(grades)), key=lambda i: (lex_key(grades[i]), i))


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """Arithmetic in Z/p for a prime ``2 <= p < 2**31``."""

    p: int

    def __post_init__(self):
        if not (2 <= self.p < 2**31) or not is_prime(self.p):
            raise GradeArithmeticError(f"field characteristic must be a prime below 2**31, got {self.p}")

    def __call__(self, x: int) -> int:
        return x % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.p)

    def signed(self, a: int) -> int:
        """Representative in (-p/2, p/2], handy for printing -1 as -1."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a


def check_field(p: int) -> int:
    PrimeField(p)
    return p
