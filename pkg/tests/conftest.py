import numpy as np
import pytest

from morreylab import euclidean_group, heisenberg_group
from morreylab.quadrature import QuadratureSpec


@pytest.fixture(scope="session")
def g1():
    return euclidean_group(1)


@pytest.fixture(scope="session")
def g2():
    return euclidean_group(2)


@pytest.fixture(scope="session")
def g3():
    return euclidean_group(3)


@pytest.fixture(scope="session")
def h1():
    return heisenberg_group()


@pytest.fixture(scope="session")
def all_groups(g1, g2, g3, h1):
    return [g1, g2, g3, h1]


@pytest.fixture(scope="session")
def spec1():
    # N=1 workhorse: fine lattice, wide truncation
    return QuadratureSpec(R_max=12.0, lattice_h=0.04)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
