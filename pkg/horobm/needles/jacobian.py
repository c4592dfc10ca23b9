"""
- Jacobian of a one-parameter family of oriented horocycles, F(y, t) = alpha_{lam(y), t0(y), e^{i phi(y)}}(t),
  against the hyperbolic area form. For fixed y it is affine in t:
      det dF(y, t) = ((t - t0) phi' - lam') / lam
- jacobian_affine_check samples det dF by finite differences in y (the t-derivative is the horocycle's own
  velocity), fits a line and compares it with the closed form; sign_constancy_check locates the root of
  the fitted line; ray_family_check runs the same check on parameters interpolated across fitted rays.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from horobm.geometry.hypdisc import area_density_array
from horobm.geometry.horocycle import Horocycle

# step of the central differences in y
DEFAULT_DIFF_STEP = 1e-5

# affine-fit residual relative to the scale of det dF
AFFINE_RESIDUAL_TOL = 1e-4

# agreement of fitted and closed-form coefficients
COEFFICIENT_TOL = 1e-3

ParamFn = Callable[[float], float]


def _family_point(lam_fn: ParamFn, t0_fn: ParamFn, phi_fn: ParamFn, y: float, t: np.ndarray):
    return Horocycle(lam_fn(y), t0_fn(y), complex(math.cos(phi_fn(y)), math.sin(phi_fn(y)))).evaluate(t)


def family_jacobian(lam_fn: ParamFn, t0_fn: ParamFn, phi_fn: ParamFn, y: float, t_grid: np.ndarray,
                    h: float = DEFAULT_DIFF_STEP) -> np.ndarray:
    """
    det dF(y, t) at every t of t_grid, in the hyperbolic area form: Im(conj(dF/dt) dF/dy) times the
    area density at F(y, t).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    omega = complex(math.cos(phi_fn(y)), math.sin(phi_fn(y)))
    curve = Horocycle(lam_fn(y), t0_fn(y), omega)
    d_t = curve.velocity(t_grid)
    d_y = (_family_point(lam_fn, t0_fn, phi_fn, y + h, t_grid)
           - _family_point(lam_fn, t0_fn, phi_fn, y - h, t_grid)) / (2.0 * h)
    return (np.conj(d_t) * d_y).imag * area_density_array(curve.evaluate(t_grid))


def _derivative(fn: ParamFn, y: float, h: float) -> float:
    return (fn(y + h) - fn(y - h)) / (2.0 * h)


@dataclass
class JacobianReport:
    y0: float
    t_grid: np.ndarray
    det: np.ndarray
    slope: float
    intercept: float
    expected_slope: float
    expected_intercept: float
    residual: float
    residual_tol: float = AFFINE_RESIDUAL_TOL
    coefficient_tol: float = COEFFICIENT_TOL

    @property
    def slope_error(self) -> float:
        return abs(self.slope - self.expected_slope)

    @property
    def intercept_error(self) -> float:
        return abs(self.intercept - self.expected_intercept)

    @property
    def passed(self) -> bool:
        return (self.residual < self.residual_tol and self.slope_error <= self.coefficient_tol
                and self.intercept_error <= self.coefficient_tol)

    def fitted(self, t) -> np.ndarray:
        return self.slope * np.asarray(t) + self.intercept

    def to_json(self):
        return {'y0': self.y0, 't_min': float(self.t_grid[0]), 't_max': float(self.t_grid[-1]),
                'num_t': len(self.t_grid), 'slope': self.slope, 'intercept': self.intercept,
                'expected_slope': self.expected_slope, 'expected_intercept': self.expected_intercept,
                'residual': self.residual, 'residual_tol': self.residual_tol,
                'coefficient_tol': self.coefficient_tol, 'passed': self.passed}


def jacobian_affine_check(lam_fn: ParamFn, t0_fn: ParamFn, phi_fn: ParamFn, y0: float,
                          t_grid: Sequence[float], h: float = DEFAULT_DIFF_STEP,
                          residual_tol: float = AFFINE_RESIDUAL_TOL,
                          coefficient_tol: float = COEFFICIENT_TOL) -> JacobianReport:
    t_grid = np.sort(np.asarray(t_grid, dtype=float))
    if len(t_grid) < 3:
        raise ValueError('an affine fit check needs at least 3 values of t')
    det = family_jacobian(lam_fn, t0_fn, phi_fn, y0, t_grid, h)
    slope, intercept = np.polyfit(t_grid, det, 1)
    scale = max(float(np.ptp(det)), float(np.max(np.abs(det))), 1e-12)
    residual = float(np.max(np.abs(det - (slope * t_grid + intercept)))) / scale

    lam, t0 = lam_fn(y0), t0_fn(y0)
    d_lam, d_phi = _derivative(lam_fn, y0, h), _derivative(phi_fn, y0, h)
    return JacobianReport(y0=y0, t_grid=t_grid, det=det, slope=float(slope), intercept=float(intercept),
                          expected_slope=d_phi / lam, expected_intercept=-(t0 * d_phi + d_lam) / lam,
                          residual=residual, residual_tol=residual_tol,
                          coefficient_tol=coefficient_tol)


def sign_constancy_check(report: JacobianReport) -> Tuple[bool, Optional[float]]:
    """
    Whether the fitted affine det dF keeps its sign strictly inside the t range of the report.

    :return: (True, None) if it does, else (False, root of the fitted line)
    """
    lo, hi = float(report.t_grid[0]), float(report.t_grid[-1])
    if report.slope == 0.0:
        return True, None
    root = -report.intercept / report.slope
    if lo < root < hi:
        return False, root
    return True, None


def ray_family_check(horocycles: Sequence[Horocycle], t_grid: Sequence[float], y0: float = 0.5,
                     **kwargs) -> JacobianReport:
    """
    jacobian_affine_check on lam, t0 and the unwrapped tangency angle interpolated linearly across a
    sequence of horocycles indexed y = 0, 1, 2, ...; y0 should avoid the nodes.
    """
    if len(horocycles) < 2:
        raise ValueError('a ray family needs at least 2 horocycles')
    ys = np.arange(len(horocycles), dtype=float)
    lams = np.array([h.lam for h in horocycles])
    t0s = np.array([h.t0 for h in horocycles])
    phis = np.unwrap([h.omega_angle for h in horocycles])
    return jacobian_affine_check(lambda y: float(np.interp(y, ys, lams)),
                                 lambda y: float(np.interp(y, ys, t0s)),
                                 lambda y: float(np.interp(y, ys, phis)),
                                 y0, t_grid, **kwargs)
