import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import trapezoid

from horobm.geometry import (
    DiscPoint, Mobius, OutsideDiscError, TangentVec, area_density, area_density_array, disc_area,
    geodesic_point, geodesic_point_array, hyp_dist, hyp_dist_array, hyp_norm, mobius_apply,
    mobius_compose, mobius_from, mobius_inverse, mobius_push)

from conftest import disc_points, distinct_disc_pairs


def test_disc_point_rejects_boundary_and_outside():
    with pytest.raises(OutsideDiscError):
        DiscPoint(1.0)
    with pytest.raises(OutsideDiscError):
        DiscPoint(0.8 + 0.8j)
    assert DiscPoint.from_xy(0.3, -0.2).z == 0.3 - 0.2j
    assert DiscPoint.from_json(DiscPoint(0.1j).to_json()).z == 0.1j


def test_hyp_dist_examples():
    assert hyp_dist(0, 0) == 0.0
    assert hyp_dist(0, 0.5) == pytest.approx(1.0986122886681098, abs=1e-12)


def test_hyp_dist_matches_radial_quadrature():
    # integrate 2 / (1 - r^2) along [0, 0.5]
    r = np.linspace(0.0, 0.5, 200_001)
    assert trapezoid(2.0 / (1.0 - r ** 2), r) == pytest.approx(hyp_dist(0, 0.5), abs=1e-9)


@given(distinct_disc_pairs())
def test_hyp_dist_symmetric(pair):
    z, w = pair
    assert hyp_dist(z, w) == pytest.approx(hyp_dist(w, z), rel=1e-12, abs=1e-12)


def test_hyp_dist_array_matches_scalar(rng):
    z = 0.6 * rng.uniform(-1, 1, 50) + 0.6j * rng.uniform(-1, 1, 50)
    w = 0.6 * rng.uniform(-1, 1, 50) + 0.6j * rng.uniform(-1, 1, 50)
    expected = [hyp_dist(a, b) for a, b in zip(z, w)]
    assert np.allclose(hyp_dist_array(z, w), expected, atol=1e-12)


def test_hyp_norm_examples():
    assert hyp_norm(TangentVec(0, 0.5)) == pytest.approx(1.0)
    assert hyp_norm(TangentVec(0.5, 1.0)) == pytest.approx(2.0 / 0.75)
    assert hyp_norm(TangentVec(0.2j, 3.0 * (0.1 - 0.4j))) == pytest.approx(
        3.0 * hyp_norm(TangentVec(0.2j, 0.1 - 0.4j)))


def test_area_density_examples():
    assert area_density(0) == 4.0
    assert area_density(0.5) == pytest.approx(4.0 / 0.75 ** 2)
    z = 0.3 + 0.4j
    assert area_density(z) == pytest.approx(area_density(cmath.exp(1.1j) * z))
    assert area_density_array(np.array([0.0, 0.5])) == pytest.approx([4.0, 4.0 / 0.5625])


def test_disc_area_examples():
    assert disc_area(0.0) == 0.0
    assert disc_area(1.0) == pytest.approx(3.41231, abs=1e-5)
    assert disc_area(2.0) == pytest.approx(17.3546, abs=1e-4)
    with pytest.raises(ValueError):
        disc_area(-1.0)


def test_disc_area_matches_polar_quadrature():
    # area of the disc of Euclidean radius tanh(1/2) under the density 4 / (1 - r^2)^2
    rho = np.linspace(0.0, math.tanh(0.5), 200_001)
    quadrature = 2.0 * math.pi * trapezoid(4.0 * rho / (1.0 - rho ** 2) ** 2, rho)
    assert quadrature == pytest.approx(disc_area(1.0), rel=1e-8)


def test_mobius_examples():
    identity = Mobius.identity()
    assert identity(0.3 - 0.1j) == 0.3 - 0.1j
    assert mobius_apply(mobius_from(0.3, 0.0), 0).z == pytest.approx(0.3)
    with pytest.raises(ValueError):
        Mobius(2.0, 0.0)


@settings(max_examples=50)
@given(disc_points(0.8), st.floats(min_value=0.0, max_value=2 * math.pi), distinct_disc_pairs(0.8))
def test_mobius_is_isometry(p, theta, pair):
    t = mobius_from(p, theta)
    z, w = pair
    assert hyp_dist(t(z), t(w)) == pytest.approx(hyp_dist(z, w), rel=1e-7, abs=1e-9)


@settings(max_examples=50)
@given(disc_points(0.8), st.floats(min_value=0.0, max_value=2 * math.pi), disc_points(0.8))
def test_mobius_inverse_and_compose(p, theta, z):
    t = mobius_from(p, theta)
    assert mobius_inverse(t)(t(z)) == pytest.approx(z, abs=1e-9)
    s = mobius_from(0.2 - 0.3j, 0.7)
    assert mobius_compose(s, t)(z) == pytest.approx(s(t(z)), abs=1e-9)


@settings(max_examples=50)
@given(disc_points(0.8), disc_points(0.8))
def test_mobius_push_preserves_norm(p, z):
    t = mobius_from(p, 0.4)
    v = TangentVec(z, 0.1 - 0.05j)
    assert hyp_norm(mobius_push(t, v)) == pytest.approx(hyp_norm(v), rel=1e-9)


@settings(max_examples=50)
@given(distinct_disc_pairs(0.8), st.floats(min_value=0.05, max_value=0.95))
def test_geodesic_point_splits_distance(pair, lam):
    x, y = pair
    m = geodesic_point(x, y, lam).z
    d = hyp_dist(x, y)
    assert hyp_dist(x, m) == pytest.approx(lam * d, rel=1e-6, abs=1e-9)
    assert hyp_dist(m, y) == pytest.approx((1.0 - lam) * d, rel=1e-6, abs=1e-9)


def test_geodesic_point_array_degenerate_pair():
    x = np.array([0.3j, 0.1])
    assert np.allclose(geodesic_point_array(x, x, 0.4), x)
