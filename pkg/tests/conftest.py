import numpy as np
import pytest

from inclusion_forge import ConformalMap, InterfaceFunction, MaterialParams, data_path, load_shape
from inclusion_forge.faber import faber_table

EXAMPLE1 = [0, 0.25, 0.125, 0.1]
KITE = [0, 0.1, 0.25, -0.05, 0.05, -0.04, 0.02]


def disk_mode_oracle(sigma_c, sigma_m, gamma, p0, n):
    """Separation of variables for one Fourier mode on a disk.

    ``u+ = (r^n + s r^-n) cos n theta`` and ``u- = b r^n cos n theta`` with
    ``sm u+_r = sc u-_r`` and ``(p0 / gamma)(u+ - u-) = sm u+_r`` at ``r = gamma``
    (``h = gamma`` on the circle).  Returns ``s``.
    """
    g = gamma
    A = np.array([
        [-sigma_m * n * g ** (-n - 1), -sigma_c * n * g ** (n - 1)],
        [p0 / g * g ** (-n) + sigma_m * n * g ** (-n - 1), -p0 / g * g ** n],
    ])
    rhs = np.array([-sigma_m * n * g ** (n - 1), sigma_m * n * g ** (n - 1) - p0 / g * g ** n])
    s, _ = np.linalg.solve(A, rhs)
    return s


@pytest.fixture(scope="session")
def example1():
    return ConformalMap(1.0, EXAMPLE1)


@pytest.fixture(scope="session")
def kite():
    return ConformalMap(1.0, KITE)


@pytest.fixture(scope="session")
def ellipse():
    return ConformalMap(1.0, [0, 0.5])


@pytest.fixture(scope="session")
def example1_faber(example1):
    return faber_table(example1, 100)


@pytest.fixture(scope="session")
def kite_faber(kite):
    return faber_table(kite, 100)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
