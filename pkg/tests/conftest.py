import functools

import pytest

from batescva.cva import build_pricer
from batescva.model import NumericsConfig, published_base_case


@pytest.fixture(scope="session")
def base_case():
    return published_base_case()


@pytest.fixture(scope="session")
def base_params(base_case):
    """Base-case parameters keyed by S0."""
    return {p.s0: p for p in base_case[0]}


@pytest.fixture(scope="session")
def european_put(base_case):
    return base_case[1][0]


@pytest.fixture(scope="session")
def american_put(base_case):
    return base_case[1][1]


@pytest.fixture(scope="session")
def default_model(base_case):
    return base_case[2]


CONFIG_D = NumericsConfig(n_time=125, n_y=351, n_paths=6000, seed=1)
CONFIG_A = NumericsConfig(n_time=50, n_y=101, n_paths=1500, seed=1)


@functools.lru_cache(maxsize=None)
def pricer(params, spec, cfg):
    """Cached (tree, grid, quad, surface); all inputs are frozen dataclasses."""
    return build_pricer(params, spec, cfg)
