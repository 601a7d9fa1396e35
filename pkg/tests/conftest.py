import numpy as np
import pytest

from slicekit.quat import ImaginaryUnit


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


@pytest.fixture
def unit_i():
    return ImaginaryUnit(1.0, 0.0, 0.0)


@pytest.fixture
def unit_j():
    return ImaginaryUnit(0.0, 1.0, 0.0)


@pytest.fixture
def unit_k():
    return ImaginaryUnit(0.0, 0.0, 1.0)
