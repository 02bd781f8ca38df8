"""Shared fixtures.

The disc radius 200 searches are the expensive part of the suite, so they are
session-scoped and shared between the unit tests and the acceptance module.
"""

import numpy as np
import pytest

from pointres import (SamplerConfig, build_counting_report, find_resonances,
                      new_configuration, sample_uniform_ball, to_configuration)

RADII_20 = [float(r) for r in np.linspace(10.0, 200.0, 20)]
H_GRID = np.arange(0.0, 4.0, 0.01)


@pytest.fixture(scope="session")
def two_point():
    return new_configuration([(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)], alpha=1.0)


@pytest.fixture(scope="session")
def single_point():
    return new_configuration([(0.0, 0.0, 0.0)], alpha=1.0)


@pytest.fixture(scope="session")
def two_point_rs200(two_point):
    return find_resonances(two_point, 200.0)


@pytest.fixture(scope="session")
def two_point_report(two_point_rs200):
    return build_counting_report(two_point_rs200, RADII_20, H_GRID)


def ball_config(seed, m=3, alpha=1.0, r=1.0, stream_id=0):
    s = sample_uniform_ball(SamplerConfig(kind="uniform_ball", m=m, r=r,
                                          seed=seed, stream_id=stream_id))
    return to_configuration(s, alpha=alpha)


@pytest.fixture(scope="session")
def seed11_config():
    return ball_config(11)


@pytest.fixture(scope="session")
def seed11_rs200(seed11_config):
    return find_resonances(seed11_config, 200.0)


@pytest.fixture(scope="session")
def seed11_report(seed11_rs200):
    return build_counting_report(seed11_rs200, RADII_20, H_GRID)
