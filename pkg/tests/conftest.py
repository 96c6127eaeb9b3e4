import numpy as np
import pytest

from modfactor.cstar import build_algebra
from modfactor.hilbmod import build_module


def matrix_unit(i, j, n=3):
    m = np.zeros((n, n), dtype=np.complex128)
    m[i - 1, j - 1] = 1.0
    return m


@pytest.fixture(scope="session")
def block_algebra():
    """C (+) M2 embedded in M3."""
    return build_algebra([(1, 1), (2, 1)])


@pytest.fixture(scope="session")
def golden_module(block_algebra):
    """The standard full module without a unit vector over C (+) M2."""
    gens = [matrix_unit(2, 1), matrix_unit(3, 1), matrix_unit(1, 2), matrix_unit(1, 3)]
    return build_module(block_algebra, gens)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
