"""
- Finite transport instances on the disc: points with source weights rho1 and target weights rho2 of
  equal total mass.
- Synthetic instances with known transport rays (mass spread along horocycle arcs, families of
  horocycles leaving a common point), and instances built from two rasterized regions.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Sequence

import numpy as np

from horobm.geometry.hypdisc import BOUNDARY_MARGIN, OutsideDiscError, PointLike, as_complex
from horobm.geometry.horocycle import Horocycle, horo_between, horo_polar
from horobm.regions.region import EmptyRegionError, Region

# relative tolerance on sum(rho1) = sum(rho2)
BALANCE_TOL = 1e-9

# largest instance accepted by the Kantorovich solver
DEFAULT_MAX_POINTS = 2000


class UnbalancedInstanceError(ValueError):
    pass


@dataclass
class MassInstance:
    points: np.ndarray
    rho1: np.ndarray
    rho2: np.ndarray

    def __post_init__(self):
        self.points = np.array([as_complex(p) for p in self.points], dtype=complex)
        self.rho1 = np.asarray(self.rho1, dtype=float)
        self.rho2 = np.asarray(self.rho2, dtype=float)
        n = len(self.points)
        assert self.rho1.shape == (n,) and self.rho2.shape == (n,), \
            f'expected {n} weights per side, got {self.rho1.shape} and {self.rho2.shape}'
        for rho in (self.rho1, self.rho2):
            if not np.all(np.isfinite(rho)) or np.any(rho < 0):
                raise ValueError('weights must be finite and nonnegative')
        if np.any(np.abs(self.points) >= 1.0 - BOUNDARY_MARGIN):
            raise OutsideDiscError('instance points must lie strictly inside the disc')
        if len(np.unique(self.points)) != n:
            raise ValueError('instance points must be distinct')

        total1, total2 = self.rho1.sum(), self.rho2.sum()
        if abs(total1 - total2) > BALANCE_TOL * max(1.0, total1, total2):
            raise UnbalancedInstanceError(f'source mass {total1} differs from target mass {total2}')

    def __len__(self):
        return len(self.points)

    @property
    def total_mass(self) -> float:
        return float(self.rho1.sum())

    @property
    def net(self) -> np.ndarray:
        # rho2 - rho1; positive at sinks, negative at sources
        return self.rho2 - self.rho1

    @property
    def sources(self) -> np.ndarray:
        return np.flatnonzero(self.rho1 > self.rho2)

    @property
    def sinks(self) -> np.ndarray:
        return np.flatnonzero(self.rho2 > self.rho1)

    @property
    def is_trivial(self) -> bool:
        return len(self.sources) == 0

    def to_json(self) -> Dict:
        return {'points': [[p.real, p.imag] for p in self.points],
                'rho1': self.rho1.tolist(), 'rho2': self.rho2.tolist()}

    @classmethod
    def from_json(cls, json_obj: Dict) -> 'MassInstance':
        return cls(np.array([complex(x, y) for x, y in json_obj['points']]),
                   json_obj['rho1'], json_obj['rho2'])


def arc_instance(h: Horocycle, t_start: float, t_end: float, n: int, mass: float = 1.0) -> MassInstance:
    """
    n points evenly spaced in time on h between t_start and t_end; the first n // 2 carry the source mass
    and the last n // 2 the target mass. For odd n the middle point carries neither.
    """
    if n < 2:
        raise ValueError(f'an arc instance needs at least 2 points, got {n}')
    if not t_end > t_start:
        raise ValueError(f'empty time range [{t_start}, {t_end}]')
    half = n // 2
    rho1, rho2 = np.zeros(n), np.zeros(n)
    rho1[:half] = mass / half
    rho2[n - half:] = mass / half
    return MassInstance(h.evaluate(np.linspace(t_start, t_end, n)), rho1, rho2)


def concat_instances(instances: Sequence[MassInstance]) -> MassInstance:
    if not instances:
        raise ValueError('nothing to concatenate')
    return MassInstance(np.concatenate([inst.points for inst in instances]),
                        np.concatenate([inst.rho1 for inst in instances]),
                        np.concatenate([inst.rho2 for inst in instances]))


def polar_horocycle(origin: PointLike, theta: float) -> Horocycle:
    # the horocycle of horocyclic polar angle theta about origin, passing origin at time 0
    h, _, _ = horo_between(origin, horo_polar(origin, 1.0, theta))
    return h


def polar_family_instance(origin: PointLike, thetas: Sequence[float], t_start: float, t_end: float,
                          n: int) -> MassInstance:
    """
    One arc instance on each horocycle leaving origin at the given polar angles. Moving mass outward
    along these horocycles is optimal, so each arc is one transport ray.
    """
    if not t_start > 0:
        raise ValueError(f'arcs must start after the common origin, got t_start = {t_start}')
    return concat_instances([arc_instance(polar_horocycle(origin, theta), t_start, t_end, n)
                             for theta in thetas])


def annulus_instance(origin: PointLike, radii: Sequence[float], num_angles: int, num_radii: int,
                     theta0: float = 0.3) -> MassInstance:
    """
    Uniform mass on the horocyclic polar annulus radii[0] <= r < radii[1] about origin sent to uniform
    mass on radii[1] <= r < radii[2], sampled on num_angles polar horocycles with num_radii cell
    centres per band. Cells are weighted by the area element r dr, so every polar horocycle carries
    equal source and target mass and is one transport ray.
    """
    r0, r1, r2 = (float(r) for r in radii)
    if not 0 < r0 < r1 < r2:
        raise ValueError(f'annulus radii must satisfy 0 < r0 < r1 < r2, got {tuple(radii)}')
    if num_angles < 1 or num_radii < 1:
        raise ValueError(f'need at least one angle and one radius, got {num_angles} and {num_radii}')
    inner = r0 + (np.arange(num_radii) + 0.5) * (r1 - r0) / num_radii
    outer = r1 + (np.arange(num_radii) + 0.5) * (r2 - r1) / num_radii
    w_inner = inner * (r1 - r0) / num_radii
    w_outer = outer * (r2 - r1) / num_radii
    rho1_ray = np.concatenate([w_inner / w_inner.sum(), np.zeros(num_radii)]) / num_angles
    rho2_ray = np.concatenate([np.zeros(num_radii), w_outer / w_outer.sum()]) / num_angles
    thetas = theta0 + 2.0 * np.pi * np.arange(num_angles) / num_angles
    radii_ray = np.concatenate([inner, outer])
    points = [horo_polar(origin, r, theta).z for theta in thetas for r in radii_ray]
    return MassInstance(points, np.tile(rho1_ray, num_angles), np.tile(rho2_ray, num_angles))


def region_instance(a: Region, b: Region) -> MassInstance:
    """
    rho1 = indicator(A) / area(A) and rho2 = indicator(B) / area(B) as point masses at the samples, in
    hyperbolic area units. Samples shared by A and B carry both.
    """
    if len(a) == 0 or len(b) == 0:
        raise EmptyRegionError('region instance of an empty region')
    points, inverse = np.unique(np.concatenate([a.samples, b.samples]), return_inverse=True)
    inverse = np.ravel(inverse)
    rho1, rho2 = np.zeros(len(points)), np.zeros(len(points))
    np.add.at(rho1, inverse[:len(a)], a.weights / a.weights.sum())
    np.add.at(rho2, inverse[len(a):], b.weights / b.weights.sum())
    logging.info(f'Region instance with {len(points)} points')
    return MassInstance(points, rho1, rho2)


def trivial_instance(points: Sequence[PointLike], weights: Sequence[float] = None) -> MassInstance:
    # rho1 = rho2, nothing to transport
    points = np.array([as_complex(p) for p in points])
    weights = np.ones(len(points)) if weights is None else np.asarray(weights, dtype=float)
    return MassInstance(points, weights, weights.copy())


def random_instance(rng: np.random.Generator, n: int, radius: float = 0.7) -> MassInstance:
    """
    n uniform points in the Euclidean disc of the given radius with independent random source and
    target weights, rescaled to unit mass each.
    """
    angles = rng.uniform(0.0, 2.0 * np.pi, n)
    radii = radius * np.sqrt(rng.uniform(0.0, 1.0, n))
    rho1, rho2 = rng.uniform(0.0, 1.0, n), rng.uniform(0.0, 1.0, n)
    return MassInstance(radii * np.exp(1j * angles), rho1 / rho1.sum(), rho2 / rho2.sum())
