import numpy as np
import pytest

import nyqmodes as nq


@pytest.fixture(scope="session")
def default_cfg():
    return nq.ExperimentConfig().validate()


@pytest.fixture(scope="session")
def default_grid(default_cfg):
    return default_cfg.build_grid()


@pytest.fixture(scope="session")
def default_pot(default_cfg):
    return default_cfg.build_potential()


@pytest.fixture(scope="session")
def default_op(default_pot, default_grid):
    return nq.assemble(nq.Scheme.CENTRAL, default_pot, default_grid)


@pytest.fixture(scope="session")
def default_full(default_op):
    return nq.eigen_full(default_op)


@pytest.fixture(scope="session")
def default_analyses(default_full, default_grid):
    return [nq.demodulate(p, default_grid) for p in default_full.pairs[:6]]


@pytest.fixture(scope="session")
def solve_cache():
    """Lazy shared solves, so the first test that needs one pays for it
    inside its own timing budget and later tests reuse the result."""
    cache = {}

    def get(key, builder):
        if key not in cache:
            cache[key] = builder()
        return cache[key]

    return get


def assert_descending(values):
    arr = np.asarray(values)
    assert (np.diff(arr) <= 1e-12 * np.abs(arr[:-1]).max()).all()
