import numpy as np
import pytest

from monosig.paths import MonotonePath, discretize, normalize
from monosig.signature import path_signature

ACCEPTANCE_RESULTS = []


def t_t2_components():
    return [lambda t: t, lambda t: t * t]


@pytest.fixture(scope="session")
def t_t2():
    """gamma(t) = (t, t^2) on a 0.01 mesh, normalised to unit l1 length."""
    return normalize(discretize(t_t2_components(), 0.01))


@pytest.fixture(scope="session")
def t_t2_sig16(t_t2):
    return path_signature(t_t2, 16)


@pytest.fixture
def L_path():
    return MonotonePath([[0.5, 0.0], [0.0, 0.5]])


@pytest.fixture
def diagonal():
    return MonotonePath([[0.5, 0.5]])


@pytest.fixture
def straight():
    return MonotonePath([[1.0, 0.0]])


def random_path(rng, dim, max_segments, zeros=True):
    m = int(rng.integers(1, max_segments + 1))
    seg = rng.random((m, dim))
    if zeros:
        seg[rng.random((m, dim)) < 0.2] = 0.0
    if not np.any(seg > 0):
        seg[0, 0] = 1.0
    return MonotonePath(seg)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {name}: {detail}")
