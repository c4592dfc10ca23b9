"""
- Oriented unit-speed horocycles in the Poincaré disc, traversed counterclockwise:
      alpha(t) = omega * (t - t0 + (1 - lam) i) / (t - t0 + (1 + lam) i)
  The trace is the Euclidean circle of centre omega / (1 + lam) and radius lam / (1 + lam).
- Construction from a unit tangent vector, the unique oriented horocycle between two points, the
  lambda-point map [x:y]_lam, chord lengths, horocyclic polar coordinates and dilations.

All two-point operations share one reduction: move x to 0 by the isometry z -> (z - x) / (1 - conj(x) z).
The oriented horocycles through 0 at time 0 are exactly omega * t / (t + 2i) with |omega| = 1, and
the image w of y sits on the one with omega = w (s + 2i) / s at time s = 2|w| / sqrt(1 - |w|^2),
which is also the chord length 2 sinh(d(x, y) / 2).
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from horobm.geometry.hypdisc import (
    DiscPoint, PointLike, TangentVec, as_complex, as_point, denormalize_array, hyp_norm,
    mobius_from, mobius_push, normalize_array)

# a "unit" tangent must have hyperbolic norm within this of 1
UNIT_TANGENT_TOL = 1e-9

# tolerance on |omega| = 1
OMEGA_TOL = 1e-9


class NonUnitTangentError(ValueError):
    pass


class DegeneratePairError(ValueError):
    pass


@dataclass(frozen=True)
class Horocycle:
    lam: float
    # time shift
    t0: float
    # point of tangency with the boundary circle
    omega: complex

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f'horocycle parameter lam must be positive, got {self.lam}')
        omega = complex(self.omega)
        if abs(abs(omega) - 1.0) > OMEGA_TOL:
            raise ValueError(f'tangency point {omega} is not on the unit circle')
        object.__setattr__(self, 'lam', float(self.lam))
        object.__setattr__(self, 't0', float(self.t0))
        object.__setattr__(self, 'omega', omega / abs(omega))

    def evaluate(self, t):
        tau = np.asarray(t, dtype=float) - self.t0
        return self.omega * (tau + (1.0 - self.lam) * 1j) / (tau + (1.0 + self.lam) * 1j)

    def velocity(self, t):
        tau = np.asarray(t, dtype=float) - self.t0
        return self.omega * 2j * self.lam / (tau + (1.0 + self.lam) * 1j) ** 2

    @property
    def omega_angle(self) -> float:
        return math.atan2(self.omega.imag, self.omega.real)

    def same_trace(self, other: 'Horocycle', tol: float = 1e-9) -> bool:
        # t0 is only a time shift, so two horocycles are the same set iff (lam, omega) agree
        return abs(self.lam - other.lam) <= tol and abs(self.omega - other.omega) <= tol

    def to_json(self):
        return {'lam': self.lam, 't0': self.t0, 'omega': [self.omega.real, self.omega.imag]}

    @classmethod
    def from_json(cls, json_obj) -> 'Horocycle':
        return cls(lam=json_obj['lam'], t0=json_obj['t0'],
                   omega=complex(json_obj['omega'][0], json_obj['omega'][1]))


def horo_eval(h: Horocycle, t: float) -> DiscPoint:
    return DiscPoint(complex(h.evaluate(t)))


def horo_velocity(h: Horocycle, t: float) -> complex:
    return complex(h.velocity(t))


def euclid_center(h: Horocycle) -> Tuple[complex, float]:
    return h.omega / (1.0 + h.lam), h.lam / (1.0 + h.lam)


def horo_from_tangent(v: TangentVec, t: float = 0.0) -> Horocycle:
    norm = hyp_norm(v)
    if abs(norm - 1.0) > UNIT_TANGENT_TOL:
        raise NonUnitTangentError(f'tangent vector has hyperbolic norm {norm}, expected 1')

    z = v.base.z
    v_hat = 2.0 * v.dir / (1.0 - abs(z) ** 2)
    denom = abs(v_hat - 1j * z) ** 2
    lam = (1.0 - abs(z) ** 2) / denom
    t0 = t - 2.0 * (v_hat * z.conjugate()).real / denom
    omega = (z + 1j * v_hat) / (1.0 + 1j * z.conjugate() * v_hat)
    return Horocycle(lam=lam, t0=t0, omega=omega)


def chord_length_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    r = np.abs(normalize_array(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)))
    return 2.0 * r / np.sqrt(1.0 - r ** 2)


def chord_length(x: PointLike, y: PointLike) -> float:
    return float(chord_length_array(as_complex(x), as_complex(y)))


def _normalized_omega(w: complex) -> Tuple[complex, float]:
    # tangency point and arrival time of the horocycle from 0 through w (w != 0)
    r = abs(w)
    s = 2.0 * r / math.sqrt(1.0 - r ** 2)
    return w * (s + 2j) / s, s


def horo_between(x: PointLike, y: PointLike) -> Tuple[Horocycle, float, float]:
    """
    The oriented horocycle from x to y, with x reached at time tx = 0 and y at ty = chord_length(x, y).

    :raises DegeneratePairError: if x == y
    """
    x, y = as_point(x), as_point(y)
    if x.z == y.z:
        raise DegeneratePairError(f'no oriented horocycle joins {x.z} to itself')

    w = complex(normalize_array(x.z, y.z))
    omega, s = _normalized_omega(w)

    # the normalized horocycle omega * t / (t + 2i) leaves 0 with velocity -i omega / 2
    to_x = mobius_from(x, 0.0)
    start = mobius_push(to_x, TangentVec(DiscPoint(0j), -0.5j * omega))
    return horo_from_tangent(start, 0.0), 0.0, s


def horo_point_array(x: np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    """
    Vectorized [x:y]_lam. With w the normalized image of y and s its chord length, the lam-point in
    the normalized frame is w * lam (s + 2i) / (lam s + 2i); this is 0 when w = 0, so x == y maps to x.
    """
    x, y = np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)
    w = normalize_array(x, y)
    r = np.abs(w)
    s = 2.0 * r / np.sqrt(1.0 - r ** 2)
    m = w * lam * (s + 2j) / (lam * s + 2j)
    return denormalize_array(x, m)


def horo_point(x: PointLike, y: PointLike, lam: float) -> DiscPoint:
    return DiscPoint(complex(horo_point_array(as_complex(x), as_complex(y), lam)))


def horo_point_mirror_array(x: np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    # lam-point along the clockwise horocycle from x to y
    return np.conj(horo_point_array(np.conj(x), np.conj(y), lam))


def horo_point_mirror(x: PointLike, y: PointLike, lam: float) -> DiscPoint:
    return DiscPoint(complex(horo_point_mirror_array(as_complex(x), as_complex(y), lam)))


def horo_dilate_array(origin: complex, p: np.ndarray, t: float) -> np.ndarray:
    # same closed form as horo_point_array, with the fraction allowed to exceed 1
    if not t > 0:
        raise ValueError(f'dilation factor must be positive, got {t}')
    return horo_point_array(origin, p, t)


def horo_dilate(origin: PointLike, p: PointLike, t: float) -> DiscPoint:
    return DiscPoint(complex(horo_dilate_array(as_complex(origin), as_complex(p), t)))


def horo_polar(origin: PointLike, r: float, theta: float) -> DiscPoint:
    """
    Horocyclic polar coordinates centred at origin: the point at chord length r along the oriented
    horocycle from origin whose tangency point, after moving origin to 0, is e^{i theta}.
    """
    if r < 0:
        raise ValueError(f'polar radius must be nonnegative, got {r}')
    m = complex(math.cos(theta), math.sin(theta)) * r / (r + 2j)
    return DiscPoint(complex(denormalize_array(as_complex(origin), m)))


def horo_polar_coords(origin: PointLike, p: PointLike) -> Tuple[float, float]:
    o, z = as_complex(origin), as_complex(p)
    if o == z:
        return 0.0, 0.0
    omega, s = _normalized_omega(complex(normalize_array(o, z)))
    return s, math.atan2(omega.imag, omega.real)


def horo_arc(x: PointLike, y: PointLike, segments: int = 4096) -> np.ndarray:
    # segments + 1 samples of the oriented horocycle arc from x to y
    h, tx, ty = horo_between(x, y)
    return h.evaluate(np.linspace(tx, ty, segments + 1))
