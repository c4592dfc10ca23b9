import cmath
import math
import sys
from os.path import dirname, realpath

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, dirname(dirname(realpath(__file__))))


@st.composite
def disc_points(draw, max_radius: float = 0.9):
    r = draw(st.floats(min_value=0.0, max_value=max_radius))
    theta = draw(st.floats(min_value=0.0, max_value=2.0 * math.pi))
    return r * cmath.exp(1j * theta)


@st.composite
def distinct_disc_pairs(draw, max_radius: float = 0.85, min_gap: float = 1e-3):
    x = draw(disc_points(max_radius))
    y = draw(disc_points(max_radius).filter(lambda w: abs(w - x) > min_gap))
    return x, y


@st.composite
def unit_tangents(draw, max_radius: float = 0.9):
    z = draw(disc_points(max_radius))
    theta = draw(st.floats(min_value=0.0, max_value=2.0 * math.pi))
    # hyperbolic norm 2 |dir| / (1 - |z|^2) = 1
    return z, cmath.exp(1j * theta) * (1.0 - abs(z) ** 2) / 2.0


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
