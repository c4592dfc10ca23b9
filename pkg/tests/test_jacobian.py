import numpy as np
import pytest

from horobm.needles import (
    family_jacobian, jacobian_affine_check, polar_horocycle, ray_family_check, sign_constancy_check)

T_GRID = np.linspace(0.1, 2.0, 20)

POLAR = (lambda y: 1.0, lambda y: 0.0, lambda y: y)


def test_horocyclic_polar_coordinates():
    report = jacobian_affine_check(*POLAR, 0.0, T_GRID)
    assert report.passed, report.to_json()
    assert report.slope == pytest.approx(1.0, abs=1e-3)
    assert report.intercept == pytest.approx(0.0, abs=1e-3)
    assert np.allclose(report.det, T_GRID, atol=1e-4)


def test_growing_lambda_gives_a_constant():
    report = jacobian_affine_check(lambda y: 1.0 + y, lambda y: 0.0, lambda y: 0.0, 0.0, T_GRID)
    assert report.passed
    assert np.allclose(report.det, -1.0, atol=1e-4)
    assert sign_constancy_check(report) == (True, None)


def test_shifted_family():
    report = jacobian_affine_check(lambda y: 2.0, lambda y: y, lambda y: 2.0 * y, 0.0, T_GRID)
    assert report.passed
    assert report.expected_slope == pytest.approx(1.0)
    assert report.expected_intercept == pytest.approx(0.0, abs=1e-9)


def test_jacobian_is_affine_away_from_the_base_point():
    lam_fn, t0_fn, phi_fn = (lambda y: 1.5 + np.sin(y)), (lambda y: 0.5 * y), (lambda y: y ** 2 + y)
    report = jacobian_affine_check(lam_fn, t0_fn, phi_fn, 0.4, np.linspace(-1.5, 1.5, 25))
    assert report.passed, report.to_json()


def test_sign_constancy():
    constant, root = sign_constancy_check(jacobian_affine_check(*POLAR, 0.0, T_GRID))
    assert constant and root is None
    constant, root = sign_constancy_check(jacobian_affine_check(*POLAR, 0.0, np.linspace(-1.0, 1.0, 21)))
    assert not constant
    assert root == pytest.approx(0.0, abs=1e-3)


def test_sign_constancy_matches_a_sign_scan(rng):
    t_grid = np.linspace(-2.0, 2.0, 41)
    for _ in range(20):
        a, b, c, d = rng.uniform(0.5, 2.0), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)
        report = jacobian_affine_check(lambda y: a + b * y, lambda y: c * y, lambda y: d * y, 0.0, t_grid)
        constant, _ = sign_constancy_check(report)
        scanned = not (np.any(report.det > 0) and np.any(report.det < 0))
        assert constant == scanned


def test_family_jacobian_matches_the_closed_form():
    det = family_jacobian(lambda y: 1.0 + 0.5 * y, lambda y: 0.3 + y, lambda y: 2.0 * y, 0.0, T_GRID)
    # ((t - t0) phi' - lam') / lam with lam = 1, t0 = 0.3, phi' = 2, lam' = 0.5
    assert np.allclose(det, (T_GRID - 0.3) * 2.0 - 0.5, atol=1e-4)


def test_ray_family_check_on_exact_horocycles():
    horocycles = [polar_horocycle(0j, theta) for theta in (0.3, 1.0, 2.0)]
    report = ray_family_check(horocycles, T_GRID)
    assert report.passed, report.to_json()


def test_errors():
    with pytest.raises(ValueError):
        jacobian_affine_check(*POLAR, 0.0, [0.1, 0.2])
    with pytest.raises(ValueError):
        ray_family_check([polar_horocycle(0j, 0.3)], T_GRID)
