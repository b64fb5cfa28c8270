import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from mkdvlab.spectral import GridSpec, SpectralField


@pytest.fixture
def grid8():
    return GridSpec(8)


@pytest.fixture
def grid16():
    return GridSpec(16)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def cosine_field(grid8):
    return SpectralField.from_modes(grid8, {1: 0.5, -1: 0.5})
