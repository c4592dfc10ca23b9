"""
- Poincaré disc primitives: points, tangent vectors, hyperbolic distance and norm, area density,
  disc areas, and orientation-preserving isometries (Möbius maps).
- The metric is 4|dz|^2 / (1 - |z|^2)^2. Points are complex model coordinates.
- Every scalar operation has an array twin working on numpy complex arrays; the region and needle
  code only uses the array forms.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

# points closer than this to the boundary circle are rejected
BOUNDARY_MARGIN = 1e-9

# tolerance on |a|^2 - |b|^2 = 1 for Möbius coefficients
MOBIUS_TOL = 1e-9


class OutsideDiscError(ValueError):
    pass


@dataclass(frozen=True)
class DiscPoint:
    # complex coordinate in the open unit disc
    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not abs(z) < 1.0 - BOUNDARY_MARGIN:
            raise OutsideDiscError(f'{z} is not strictly inside the Poincaré disc')
        object.__setattr__(self, 'z', z)

    @classmethod
    def from_xy(cls, x: float, y: float) -> 'DiscPoint':
        return cls(complex(x, y))

    @property
    def x(self) -> float:
        return self.z.real

    @property
    def y(self) -> float:
        return self.z.imag

    def to_json(self):
        return [self.z.real, self.z.imag]

    @classmethod
    def from_json(cls, json_obj) -> 'DiscPoint':
        return cls.from_xy(json_obj[0], json_obj[1])


PointLike = Union[DiscPoint, complex, float]


def as_complex(p: PointLike) -> complex:
    if isinstance(p, DiscPoint):
        return p.z
    return complex(p)


def as_point(p: PointLike) -> DiscPoint:
    if isinstance(p, DiscPoint):
        return p
    return DiscPoint(complex(p))


@dataclass(frozen=True)
class TangentVec:
    base: DiscPoint
    # model-coordinate components (u, v) as u + iv
    dir: complex

    def __post_init__(self):
        object.__setattr__(self, 'base', as_point(self.base))
        object.__setattr__(self, 'dir', complex(self.dir))


def hyp_dist(p: PointLike, q: PointLike) -> float:
    z, w = as_complex(p), as_complex(q)
    if z == w:
        return 0.0
    return 2.0 * math.atanh(abs((z - w) / (1.0 - z.conjugate() * w)))


def hyp_dist_array(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    z, w = np.asarray(z, dtype=complex), np.asarray(w, dtype=complex)
    ratio = np.abs((z - w) / (1.0 - np.conj(z) * w))
    return 2.0 * np.arctanh(ratio)


def hyp_norm(v: TangentVec) -> float:
    z = v.base.z
    return 2.0 * abs(v.dir) / (1.0 - abs(z) ** 2)


def area_density(p: PointLike) -> float:
    z = as_complex(p)
    return 4.0 / (1.0 - abs(z) ** 2) ** 2


def area_density_array(z: np.ndarray) -> np.ndarray:
    return 4.0 / (1.0 - np.abs(z) ** 2) ** 2


def disc_area(r: float) -> float:
    if r < 0:
        raise ValueError(f'hyperbolic radius must be nonnegative, got {r}')
    return 4.0 * math.pi * math.sinh(r / 2.0) ** 2


def euclid_radius(r: float) -> float:
    # Euclidean radius of the hyperbolic disc of radius r centred at 0
    return math.tanh(r / 2.0)


@dataclass(frozen=True)
class Mobius:
    """
    The map z -> (a z + b) / (conj(b) z + conj(a)) with |a|^2 - |b|^2 = 1.
    """
    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        det = abs(a) ** 2 - abs(b) ** 2
        if abs(det - 1.0) > MOBIUS_TOL:
            raise ValueError(f'Möbius coefficients are not normalized: |a|^2 - |b|^2 = {det}')
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)

    @classmethod
    def identity(cls) -> 'Mobius':
        return cls(1.0, 0.0)

    def __call__(self, z):
        return (self.a * z + self.b) / (self.b.conjugate() * z + self.a.conjugate())

    def derivative(self, z):
        return 1.0 / (self.b.conjugate() * z + self.a.conjugate()) ** 2

    def inverse(self) -> 'Mobius':
        return Mobius(self.a.conjugate(), -self.b)

    def compose(self, other: 'Mobius') -> 'Mobius':
        # self after other
        a = self.a * other.a + self.b * other.b.conjugate()
        b = self.a * other.b + self.b * other.a.conjugate()
        return Mobius(a, b)


def mobius_from(p: PointLike, theta: float = 0.0) -> Mobius:
    """
    The isometry z -> (e^{i theta} z + p) / (conj(p) e^{i theta} z + 1), which sends 0 to p and
    rotates the tangent plane at 0 by theta.
    """
    z = as_point(p).z
    scale = 1.0 / math.sqrt(1.0 - abs(z) ** 2)
    half = cmath.exp(0.5j * theta)
    return Mobius(half * scale, z / half * scale)


def mobius_apply(t: Mobius, p: PointLike) -> DiscPoint:
    return DiscPoint(t(as_complex(p)))


def mobius_push(t: Mobius, v: TangentVec) -> TangentVec:
    z = v.base.z
    return TangentVec(DiscPoint(t(z)), v.dir * t.derivative(z))


def mobius_inverse(t: Mobius) -> Mobius:
    return t.inverse()


def mobius_compose(s: Mobius, t: Mobius) -> Mobius:
    return s.compose(t)


def normalize_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # image of y under the isometry that sends x to 0 without rotation
    return (y - x) / (1.0 - np.conj(x) * y)


def denormalize_array(x: np.ndarray, m: np.ndarray) -> np.ndarray:
    # inverse of normalize_array: sends 0 back to x
    return (m + x) / (np.conj(x) * m + 1.0)


def geodesic_point_array(x: np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    """
    Point at fraction lam of the hyperbolic geodesic from x to y. After moving x to 0 the geodesic
    is radial, and the point at distance lam * d from 0 has Euclidean radius tanh(lam * artanh|w|).
    """
    x, y = np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)
    w = normalize_array(x, y)
    r = np.abs(w)
    with np.errstate(invalid='ignore', divide='ignore'):
        m = np.where(r > 0, w / r * np.tanh(lam * np.arctanh(r)), 0.0)
    return denormalize_array(x, m)


def geodesic_point(x: PointLike, y: PointLike, lam: float) -> DiscPoint:
    return DiscPoint(complex(geodesic_point_array(as_complex(x), as_complex(y), lam)))
