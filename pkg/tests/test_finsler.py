import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings

from horobm.geometry import (
    FinslerEval, Horocycle, TangentVec, check_deta, check_minimality, curve_length_phi, dist_phi,
    dist_phi_array, eta, horo_arc, horo_between, hyp_norm, phi, signed_geodesic_curvature)

from conftest import distinct_disc_pairs


def test_phi_examples():
    assert phi(0, 1.0) == pytest.approx(2.0)
    assert phi(0.5j, 1.0) != pytest.approx(phi(0.5j, -1.0))
    assert FinslerEval(0.5j, 1.0).value == pytest.approx(phi(0.5j, 1.0))


@pytest.mark.parametrize('r', [0.1, 0.5, 0.9])
@pytest.mark.parametrize('t', [0.5, math.pi, 4.0])
def test_phi_is_one_along_boundary_tangent_circles(r, t):
    # counterclockwise unit-angle velocity on the circle of centre 1 - r and radius r
    point = complex(1 - r + r * math.cos(t), r * math.sin(t))
    vector = complex(-r * math.sin(t), r * math.cos(t))
    assert phi(point, vector) == pytest.approx(1.0, rel=1e-12)


def test_phi_is_randers_decomposition():
    z, w = 0.3 - 0.4j, 0.2 + 0.7j
    assert phi(z, w) == pytest.approx(hyp_norm(TangentVec(z, w)) - eta(z, w))


def test_curve_length_phi_examples():
    assert curve_length_phi([0.2j, 0.2j, 0.2j]) == 0.0
    with pytest.raises(ValueError):
        curve_length_phi([0.1])
    for r in (0.3, 0.7):
        t = np.linspace(0.1, 2.0 * math.pi - 0.1, 10_001)
        circle = (1 - r) + r * np.exp(1j * t)
        assert curve_length_phi(circle) == pytest.approx(2.0 * math.pi - 0.2, abs=1e-3)


def test_curve_length_phi_is_not_reversible():
    arc = horo_arc(0.1, -0.2 + 0.4j, segments=2000)
    assert abs(curve_length_phi(arc) - curve_length_phi(arc[::-1])) > 1e-2


def test_dist_phi_examples():
    assert dist_phi(0, (1 - 1j) / 2) == pytest.approx(math.pi / 2)
    assert dist_phi(0.3 + 0.1j, 0.3 + 0.1j) == 0.0
    arc = horo_arc(0, (1 - 1j) / 2, segments=10_000)
    assert curve_length_phi(arc) == pytest.approx(math.pi / 2, abs=1e-6)


@settings(max_examples=30, deadline=None)
@given(distinct_disc_pairs(0.8, min_gap=1e-2))
def test_dist_phi_matches_quadrature(pair):
    x, y = pair
    assert dist_phi(x, y) == pytest.approx(curve_length_phi(horo_arc(x, y, 10_000)), abs=1e-6)


@settings(max_examples=50)
@given(distinct_disc_pairs(0.8))
def test_dist_phi_bounded_by_full_turn(pair):
    x, y = pair
    assert 0.0 < dist_phi(x, y) < 2.0 * math.pi


def test_dist_phi_array_matches_scalar(rng):
    x = 0.6 * np.exp(2j * math.pi * rng.uniform(size=30)) * rng.uniform(size=30)
    y = 0.6 * np.exp(2j * math.pi * rng.uniform(size=30)) * rng.uniform(size=30)
    expected = [dist_phi(a, b) for a, b in zip(x, y)]
    assert np.allclose(dist_phi_array(x, y), expected, atol=1e-12)
    assert np.all(dist_phi_array(x, x) == 0.0)


def test_dist_phi_triangle_inequality(rng):
    pts = 0.7 * np.sqrt(rng.uniform(size=12)) * np.exp(2j * math.pi * rng.uniform(size=12))
    d = dist_phi_array(pts[:, None], pts[None, :])
    # d(i, k) <= d(i, j) + d(j, k)
    assert np.all(d[:, None, :] <= d[:, :, None] + d[None, :, :] + 1e-9)


def test_check_minimality_examples():
    report = check_minimality(0, 0.5, trials=0)
    # the unperturbed arc and the straight chord
    assert len(report.competitor_lengths) == 2
    assert report.competitor_lengths[0] == pytest.approx(report.reference, abs=1e-6)
    assert report.competitor_lengths[1] >= report.reference
    assert report.passed


def test_check_minimality_sweep(rng):
    for idx in range(10):
        x, y = 0.7 * (rng.uniform(-0.7, 0.7) + 1j * rng.uniform(-0.7, 0.7)), rng.uniform(-0.5, 0.5)
        report = check_minimality(x, y, trials=10, seed=idx)
        assert report.violations == 0
        assert report.to_json()['violations'] == 0


def test_check_deta_examples():
    assert check_deta(0, 1e-4) < 1e-6
    assert check_deta(0.5, 1e-4) < 1e-5
    with pytest.raises(ValueError):
        check_deta(0.99, 0.01)


def test_check_deta_second_order():
    assert check_deta(0.5, 0.02) / check_deta(0.5, 0.01) == pytest.approx(4.0, rel=0.1)


def test_geodesic_curvature_of_horocycles():
    for lam, t0, angle in [(1.0, 0.0, 0.0), (0.3, 1.0, 2.0), (4.0, -0.5, 4.0)]:
        h = Horocycle(lam, t0, cmath.exp(1j * angle))
        for t in (-0.7, 0.0, 1.3):
            assert signed_geodesic_curvature(h.evaluate, t) == pytest.approx(1.0, abs=1e-4)


def test_geodesic_curvature_of_geodesic_and_circle():
    diameter = lambda t: np.tanh(t / 2.0) * cmath.exp(0.3j)
    assert signed_geodesic_curvature(diameter, 0.4) == pytest.approx(0.0, abs=1e-6)
    # hyperbolic circle of radius 1 about 0: curvature coth(1)
    rho = math.tanh(0.5)
    circle = lambda t: rho * np.exp(1j * t)
    assert signed_geodesic_curvature(circle, 0.2) == pytest.approx(1.0 / math.tanh(1.0), rel=1e-5)


def test_phi_geodesics_have_unit_curvature():
    h, tx, ty = horo_between(0.2 - 0.3j, -0.4 + 0.1j)
    assert signed_geodesic_curvature(h.evaluate, 0.5 * (tx + ty)) == pytest.approx(1.0, abs=1e-4)
