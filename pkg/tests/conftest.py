import numpy as np
import pytest

from cmvar import kernels


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request):
    return kernels.backends()[request.param]


def random_configuration(rng, n, d, scale=1.0):
    from cmvar.distances import Configuration

    return Configuration(d, scale * rng.normal(size=(n, d)))


def random_low_rank_points(rng, n, d, r):
    """n points in R^d spanning an affine subspace of dimension r."""
    basis = rng.normal(size=(r, d))
    return rng.normal(size=(n, r)) @ basis


ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}"
    if detail:
        line += f" ({detail})"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
