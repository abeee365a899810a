import numpy as np
import pytest
from scipy.stats import unitary_group

from quantumness.states import DensityMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


def random_density(rng, d, rank=None):
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_unitary(rng, d):
    return unitary_group.rvs(d, random_state=rng)


def random_ket(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


@pytest.fixture(scope="session")
def desk_sweeps():
    """Tensor-power and correlated sweeps over n = 1..10, computed once."""
    from quantumness.criticality import sweep
    return {family: sweep(family, 10) for family in ("tensor-power", "correlated")}


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
