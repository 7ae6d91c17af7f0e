"""Shared fixtures."""

import numpy as np
import pytest

from .helpers import build_standard_fixture, small_model


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def model():
    """Small tied model: d=4, p=2, q=2, M=3, J=3, two sub-states per state."""
    return small_model()


@pytest.fixture(scope="session")
def standard_fixture():
    return build_standard_fixture()
