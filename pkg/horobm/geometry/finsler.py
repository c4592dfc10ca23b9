"""
- The Randers metric Phi = sqrt(g) - eta on the Poincaré disc, with g the hyperbolic metric and
  eta = 2 (x dy - y dx) / (1 - x^2 - y^2). Its geodesics are the oriented horocycles.
- Curve length by composite midpoint quadrature, the closed-form distance (the angle swept around the
  Euclidean centre of the oriented horocycle), and numerical checks of minimality, d(eta) = area form and
  unit geodesic curvature.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Union

import numpy as np

from horobm.geometry.hypdisc import (
    DiscPoint, PointLike, area_density, as_complex, as_point, denormalize_array, normalize_array)
from horobm.geometry.horocycle import horo_arc

TWO_PI = 2.0 * math.pi

# default number of segments in curve_length_phi quadrature
DEFAULT_SEGMENTS = 4096

# quadrature tolerance used by check_minimality
MINIMALITY_TOL = 1e-4


@dataclass(frozen=True)
class FinslerEval:
    point: DiscPoint
    # model components (u, v) as u + iv
    vector: complex

    @property
    def value(self) -> float:
        return phi(self.point, self.vector)


def phi_array(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    z, w = np.asarray(z, dtype=complex), np.asarray(w, dtype=complex)
    # u y - x v = -Im(conj(z) w)
    return 2.0 * (np.abs(w) - (np.conj(z) * w).imag) / (1.0 - np.abs(z) ** 2)


def phi(p: PointLike, w: complex) -> float:
    return float(phi_array(as_complex(p), complex(w)))


def eta(p: PointLike, w: complex) -> float:
    z, w = as_complex(p), complex(w)
    return 2.0 * (z.conjugate() * w).imag / (1.0 - abs(z) ** 2)


def _as_polyline(polyline: Union[np.ndarray, Sequence[PointLike]]) -> np.ndarray:
    if isinstance(polyline, np.ndarray):
        return polyline.astype(complex)
    return np.array([as_complex(p) for p in polyline], dtype=complex)


def curve_length_phi(polyline: Union[np.ndarray, Sequence[PointLike]]) -> float:
    points = _as_polyline(polyline)
    if len(points) < 2:
        raise ValueError(f'a polyline needs at least 2 points, got {len(points)}')
    # Phi is 1-homogeneous, so Phi(mid, delta) is the segment's length at the midpoint
    midpoints = 0.5 * (points[1:] + points[:-1])
    return float(np.sum(phi_array(midpoints, np.diff(points))))


def dist_phi_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Vectorized Phi-distance. The tangency point of the oriented horocycle from x to y is the pullback
    of its normalized tangency point; the circle through x tangent there has centre rho * omega with
    rho = (1 - |x|^2) / (2 (1 - Re(x conj(omega)))). The distance is the counterclockwise angle from x
    to y around that centre.
    """
    x, y = np.broadcast_arrays(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex))
    w = normalize_array(x, y)
    r = np.abs(w)
    distinct = r > 0
    with np.errstate(invalid='ignore', divide='ignore'):
        s = 2.0 * r / np.sqrt(1.0 - r ** 2)
        omega_n = np.where(distinct, w * (s + 2j) / s, 1.0)
    omega = denormalize_array(x, omega_n)
    omega = omega / np.abs(omega)
    rho = (1.0 - np.abs(x) ** 2) / (2.0 * (1.0 - (x * np.conj(omega)).real))
    center = rho * omega
    swept = np.angle(y - center) - np.angle(x - center)
    return np.where(distinct, np.mod(swept, TWO_PI), 0.0)


def dist_phi(x: PointLike, y: PointLike) -> float:
    return float(dist_phi_array(as_complex(x), as_complex(y)))


@dataclass
class MinimalityReport:
    reference: float
    trials: int
    # Phi-lengths of all competitors, the unperturbed arc and the straight chord included
    competitor_lengths: List[float] = field(default_factory=list)
    tol: float = MINIMALITY_TOL

    @property
    def min_competitor(self) -> float:
        return min(self.competitor_lengths)

    @property
    def margin(self) -> float:
        return self.min_competitor - self.reference

    @property
    def violations(self) -> int:
        return sum(1 for length in self.competitor_lengths if length < self.reference - self.tol)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_json(self):
        return {'reference': self.reference, 'trials': self.trials,
                'min_competitor': self.min_competitor, 'margin': self.margin,
                'violations': self.violations, 'tol': self.tol}


def _bump(tau: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    # smooth perturbation vanishing at both ends, sum_k c_k sin(k pi tau)
    modes = np.arange(1, len(coeffs) + 1)
    return np.sin(np.pi * np.outer(tau, modes)) @ coeffs


def check_minimality(x: PointLike, y: PointLike, trials: int, amplitude: float = 0.1,
                     segments: int = DEFAULT_SEGMENTS, seed: int = 0,
                     tol: float = MINIMALITY_TOL) -> MinimalityReport:
    x, y = as_point(x), as_point(y)
    reference = dist_phi(x, y)
    arc = horo_arc(x, y, segments)
    tau = np.linspace(0.0, 1.0, segments + 1)

    report = MinimalityReport(reference=reference, trials=trials, tol=tol)
    report.competitor_lengths.append(curve_length_phi(arc))
    report.competitor_lengths.append(curve_length_phi(x.z + tau * (y.z - x.z)))

    rng = np.random.default_rng(seed)
    for _ in range(trials):
        coeffs = rng.normal(size=3) + 1j * rng.normal(size=3)
        bump = _bump(tau, coeffs)
        bump *= amplitude / max(np.max(np.abs(bump)), 1e-12)
        competitor = arc + bump
        # keep the competitor inside the disc
        while np.max(np.abs(competitor)) >= 1.0 - 1e-6:
            bump *= 0.5
            competitor = arc + bump
        report.competitor_lengths.append(curve_length_phi(competitor))

    if not report.passed:
        logging.warning(f'{report.violations} competitors shorter than d_Phi = {reference} '
                        f'between {x.z} and {y.z}')
    return report


def _eta_components(z: complex):
    # eta = eta_x dx + eta_y dy
    denom = 1.0 - abs(z) ** 2
    return -2.0 * z.imag / denom, 2.0 * z.real / denom


def check_deta(p: PointLike, h: float) -> float:
    z = as_complex(p)
    if abs(z) + math.sqrt(2.0) * h >= 1.0:
        raise ValueError(f'{z} is within {h} of the boundary circle')
    d_eta_y_dx = (_eta_components(z + h)[1] - _eta_components(z - h)[1]) / (2.0 * h)
    d_eta_x_dy = (_eta_components(z + 1j * h)[0] - _eta_components(z - 1j * h)[0]) / (2.0 * h)
    return abs(d_eta_y_dx - d_eta_x_dy - area_density(z))


def signed_geodesic_curvature(curve: Callable[[np.ndarray], np.ndarray], t: float,
                              h: float = 1e-3) -> float:
    """
    Signed geodesic curvature of a curve in the hyperbolic metric, from central differences.

    With the conformal factor e^sigma = 2 / (1 - |z|^2), k_g = e^-sigma (k_e - <grad sigma, n>), where
    k_e is the signed Euclidean curvature and n the left unit normal.

    :param curve: maps an array of times to complex points
    :param t: time at which to evaluate
    :param h: finite-difference step
    """
    z_minus, z0, z_plus = curve(np.array([t - h, t, t + h]))
    d1 = (z_plus - z_minus) / (2.0 * h)
    d2 = (z_plus - 2.0 * z0 + z_minus) / h ** 2
    speed = abs(d1)
    kappa_e = (d1.conjugate() * d2).imag / speed ** 3
    normal = 1j * d1 / speed
    grad_sigma = 2.0 * z0 / (1.0 - abs(z0) ** 2)
    return 0.5 * (1.0 - abs(z0) ** 2) * (kappa_e - (grad_sigma.conjugate() * normal).real)
