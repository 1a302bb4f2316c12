import os

import hypothesis
import numpy as np
import pytest

from diskcover.models.geometry import Point

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=200, deadline=None, derandomize=True)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def unit_square():
    return [Point(x=0.0, y=0.0), Point(x=1.0, y=0.0), Point(x=1.0, y=1.0), Point(x=0.0, y=1.0)]


@pytest.fixture
def radicals_above():
    return [(3.0, 4.0), (-3.0, -2.0), (102.0, 2.0), (98.0, -2.0), (200.0, 2.0)]


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: timing smoke tests and acceptance-size suites")
