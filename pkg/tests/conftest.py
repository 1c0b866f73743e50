import numpy as np
import pytest

from hitmetric import catalog

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def swap2():
    return catalog.swap2()


@pytest.fixture
def flip2():
    return catalog.flip2()


@pytest.fixture
def lazy2():
    return catalog.lazy2()


@pytest.fixture
def cycle3():
    return catalog.cycle3()


@pytest.fixture
def uni3():
    return catalog.uni3()


@pytest.fixture
def ring4():
    return catalog.ring4()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def small_corpus(count: int = 30, seed: int = 7):
    """Named chains plus seeded random chains, all with n <= 4."""
    chains = [f() for f in catalog.NAMED.values()]
    r = np.random.default_rng(seed)
    chains += [catalog.random_chain(r, int(r.integers(2, 5)), low=0.05) for _ in range(count)]
    return chains


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
