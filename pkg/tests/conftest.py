import numpy as np
import pytest

from hrpot.simulate import BrSampleConfig, br_sample, hr_sample_bivariate
from hrpot.variogram import LocationSet, VariogramSpec


@pytest.fixture(scope="session")
def hr_half():
    """Bivariate HR sample, lambda^2 = 0.5, n = 1e5."""
    return hr_sample_bivariate(0.5, 100_000, 11)


@pytest.fixture(scope="session")
def hr_quarter():
    """Bivariate HR sample, lambda^2 = 0.25, n = 1e5."""
    return hr_sample_bivariate(0.25, 100_000, 12)


@pytest.fixture(scope="session")
def br_line5():
    """Brown-Resnick with gamma(h) = |h| at five equispaced sites on [0, 3]; n = 1e5."""
    locs = LocationSet(np.linspace(0.0, 3.0, 5))
    return locs, br_sample(BrSampleConfig(locs, VariogramSpec(1.0, 1.0), 100_000, 13))


def rejection_sample_parameter_matrix(k_plus_1, rng, high=2.0, batch=512):
    """Uniform off-diagonal entries, kept only when the matrix is a valid HR parameter."""
    from hrpot.hr_model import is_valid_parameter_matrix

    iu = np.triu_indices(k_plus_1, 1)
    while True:
        lam = np.zeros((batch, k_plus_1, k_plus_1))
        lam[:, iu[0], iu[1]] = rng.uniform(0.0, high, (batch, len(iu[0])))
        lam = lam + lam.transpose(0, 2, 1)
        g = lam[:, 1:, :1]
        psi = 2.0 * (g + g.transpose(0, 2, 1) - lam[:, 1:, 1:])
        # cheap screen, then the library's own certificate
        for cand in lam[np.linalg.eigvalsh(psi)[:, 0] > 0]:
            if is_valid_parameter_matrix(cand):
                return cand


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
