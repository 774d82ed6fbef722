import numpy as np
import pytest

from isowrist.isoset import PointSet
from isowrist.solver import enumerate_closed_form

R2, R6 = np.sqrt(2.0), np.sqrt(6.0)

# fundamental tetrahedron, written out by hand
EQ2A = np.array([
    [1.0, 0.0, 0.0],
    [-1 / 3, -2 * R2 / 3, 0.0],
    [-1 / 3, R2 / 3, R6 / 3],
    [-1 / 3, R2 / 3, -R6 / 3],
])

ACCEPTANCE_RESULTS = []


@pytest.fixture(scope="session")
def solutions():
    return enumerate_closed_form()


@pytest.fixture
def eq2a():
    return PointSet(EQ2A, "eq2a")


def random_rotation(rng):
    Q, R = np.linalg.qr(rng.standard_normal((3, 3)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def random_unit_vectors(rng, n):
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
