import numpy as np
import pytest

from boxqft.lattice import LatticeSpec, build_lattice


@pytest.fixture(scope="session")
def lattice64():
    return build_lattice(LatticeSpec())


@pytest.fixture(scope="session")
def lattice16():
    return build_lattice(LatticeSpec(n_space=16))


@pytest.fixture(scope="session")
def lattice16x16():
    return build_lattice(LatticeSpec(n_space=16, n_time=16))


@pytest.fixture()
def rng():
    return np.random.default_rng(42)
