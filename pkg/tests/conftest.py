from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings

from flange.contraction import ContractionSet
from flange.gmatrix import GradedMatrix
from flange.scc_io import FreeResolution, example_resolution

# first calls pay for JIT compilation, so wall-clock deadlines are meaningless
settings.register_profile("flange", deadline=None)
settings.load_profile("flange")

BIG_P = 32003

F0 = [(0, 1), (1, 0)]
F1 = [(0, 3), (1, 2), (2, 1), (3, 0)]
F2 = [(2, 2), (3, 3)]
D1 = [[1, 1, 1, 0], [0, -1, -1, 1]]
D2 = [[0, 1], [1, -1], [-1, 0], [0, -1]]
PHI = [[-1, 0], [-1, -1]]
PHI_ROWS = [(1, 1), (2, 2)]
PHI_COLS = [(0, 1), (1, 0)]

# hand-picked contractions of the two projected complexes of the example
HAND_S = {
    1: ([[0, 0], [0, 0], [1, 0], [1, 1]], [[1, 1, 0, 0], [1, 0, 0, 0]]),
    2: ([[1, 1], [0, -1], [0, 0], [0, 0]], [[0, 0, -1, 0], [0, 0, 0, -1]]),
}


def build_example(p: int = BIG_P) -> FreeResolution:
    d1 = GradedMatrix.build(D1, F0, F1, p)
    d2 = GradedMatrix.build(D2, F1, F2, p)
    return FreeResolution.from_matrices([d1, d2])


def hand_contractions(res: FreeResolution) -> ContractionSet:
    by_k = {}
    for k, (s0, s1) in HAND_S.items():
        keep = [t for t in range(2) if t + 1 != k]
        g = [res.grades(d)[:, keep] for d in range(3)]
        by_k[k] = [
            GradedMatrix(np.array(s0) % res.p, g[1], g[0], 1, res.p),
            GradedMatrix(np.array(s1) % res.p, g[2], g[1], 1, res.p),
        ]
    return ContractionSet(2, 2, by_k)


@pytest.fixture
def example() -> FreeResolution:
    return example_resolution(BIG_P)


@pytest.fixture
def example_p2() -> FreeResolution:
    return example_resolution(2)


@pytest.fixture
def phi() -> GradedMatrix:
    return GradedMatrix.build(PHI, PHI_ROWS, PHI_COLS, BIG_P)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(RESULTS):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}: {detail}")
