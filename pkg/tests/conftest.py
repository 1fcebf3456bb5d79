import os

import numpy as np
import pytest

from nilmonoid import GroupPresentation

DATA_DIR = os.path.join(os.path.dirname(__file__), 'data')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: full-scale exhaustive and randomized checks, deselect with -m "not slow"')


def data_file(name:str) -> str:
    return os.path.join(DATA_DIR, name)


@pytest.fixture
def h3():
    """The integral Heisenberg group, `[x, y] = z`."""
    return GroupPresentation([None, None], [None], {(0, 1): (1,)})


@pytest.fixture
def h3_mod_2():
    return GroupPresentation([None, None], [2], {(0, 1): (1,)})


@pytest.fixture
def torsion_e2():
    """`[G,G] = Z x Z/2`, so h = 1 and |G_0| = 2."""
    return GroupPresentation([None, None, None], [None, 2],
                             {(0, 1): (1, 0), (0, 2): (0, 1)})


@pytest.fixture
def h3xh3():
    return GroupPresentation([None] * 4, [None, None],
                             {(0, 1): (1, 0), (2, 3): (0, 1)})


@pytest.fixture
def z_z2():
    """The abelian group `Z x Z/2`."""
    return GroupPresentation([None, 2], [], {})


@pytest.fixture
def cyclic_main():
    """`a1^3 = z`, `z^3 = 1`, `[a1, a2] = z`."""
    return GroupPresentation([3, None], [3], {(0, 1): (1,)}, [(1,), (0,)])


@pytest.fixture
def inconsistent():
    """`a1^2 = z` is not central because `[a1^2, a2] = z^2` and z has order 3."""
    return GroupPresentation([2, None], [3], {(0, 1): (1,)}, [(1,), (0,)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_element(P, rng, radius:int=2):
    e = [int(v) for v in rng.integers(-radius, radius + 1, size=P.r)]
    f = [int(v) for v in rng.integers(-radius, radius + 1, size=P.s)]
    return P.normalize(e, f)
