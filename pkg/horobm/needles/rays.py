"""
- Strain pairs of a potential (ordered pairs where the Lipschitz bound is tight up to eps), discrete
  strain and loose points, and their grouping into transport rays on oriented horocycles.
- Ray extraction: every strain pair determines the oriented horocycle through its two points; pairs
  whose horocycles agree to fit_tol are connected components of a parameter-space neighbour graph.
  Components are turned into rays from the largest down, each point joining at most one ray, and every
  ray then takes in the free points strain-linked to it that sit on its horocycle.
- Mass balance per ray and per positive end, and the coverage of unbalanced mass by rays and loose points.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from horobm.geometry.hypdisc import denormalize_array, normalize_array
from horobm.geometry.horocycle import Horocycle, chord_length_array, euclid_center, horo_between
from horobm.needles.instance import MassInstance
from horobm.needles.kantorovich import SOLVER_TOL, Potential, distance_matrix

DEFAULT_FIT_TOL = 1e-3

# per-ray balance residual, relative to the ray's mass
BALANCE_REL_TOL = 0.02

# share of unbalanced mass allowed outside rays and loose points
COVERAGE_TOL = 0.05

# model-coordinate distance allowed between a ray's end points and its horocycle at their recorded times
RAY_TIME_TOL = 1e-8


class RayFitError(ValueError):
    pass


def default_strain_tol(dist: np.ndarray) -> float:
    # 10 x solver tolerance + half the largest nearest-neighbour spacing
    if len(dist) < 2:
        return 10.0 * SOLVER_TOL
    symmetric = np.minimum(dist, dist.T)
    np.fill_diagonal(symmetric, np.inf)
    return 10.0 * SOLVER_TOL + 0.5 * float(np.max(np.min(symmetric, axis=1)))


@dataclass
class StrainGraph:
    n: int
    # ordered (i, j) index pairs with d(x_i, x_j) - (u_j - u_i) <= eps
    pairs: np.ndarray
    eps: float

    @property
    def heads(self) -> np.ndarray:
        # points that some strain pair leaves from
        mask = np.zeros(self.n, dtype=bool)
        mask[self.pairs[:, 0]] = True
        return mask

    @property
    def tails(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[self.pairs[:, 1]] = True
        return mask

    @property
    def strain_points(self) -> np.ndarray:
        # reached by one strain pair and left by another
        return np.flatnonzero(self.heads & self.tails)

    @property
    def loose_points(self) -> np.ndarray:
        return np.flatnonzero(~(self.heads | self.tails))

    def contains(self, i: int, j: int) -> bool:
        return bool(np.any((self.pairs[:, 0] == i) & (self.pairs[:, 1] == j)))

    def to_json(self):
        return {'n': self.n, 'eps': self.eps, 'pairs': self.pairs.tolist()}


def strain_pairs(inst: MassInstance, u: Potential, eps: float = None,
                 dist: np.ndarray = None) -> StrainGraph:
    if dist is None:
        dist = distance_matrix(inst)
    if eps is None:
        eps = default_strain_tol(dist)
    tight = u.slack(dist) <= eps
    np.fill_diagonal(tight, False)
    pairs = np.argwhere(tight)
    logging.debug(f'{len(pairs)} strain pairs at eps = {eps:.3g}')
    return StrainGraph(len(inst), pairs.astype(np.int64), eps)


def horocycle_params_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    (lam, Re omega, Im omega) of the oriented horocycle from x to y, one row per pair. The tangency point
    is the pullback of the normalized one; the Euclidean centre rho omega of the circle through x
    tangent at omega gives lam = 1 / rho - 1.
    """
    x, y = np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)
    w = normalize_array(x, y)
    r = np.abs(w)
    s = 2.0 * r / np.sqrt(1.0 - r ** 2)
    omega = denormalize_array(x, w * (s + 2j) / s)
    omega = omega / np.abs(omega)
    rho = (1.0 - np.abs(x) ** 2) / (2.0 * (1.0 - (x * np.conj(omega)).real))
    return np.column_stack([1.0 / rho - 1.0, omega.real, omega.imag])


def distance_to_trace(h: Horocycle, z: np.ndarray) -> np.ndarray:
    # Euclidean distance from points to the circle traced by h
    center, radius = euclid_center(h)
    return np.abs(np.abs(np.asarray(z) - center) - radius)


@dataclass
class DiscreteRay:
    # point indices, ordered by increasing potential
    indices: np.ndarray
    horocycle: Horocycle
    # time of each point on the horocycle, the first point at 0
    times: np.ndarray
    # positions of the indexed points
    points: np.ndarray

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.times = np.asarray(self.times, dtype=float)
        self.points = np.asarray(self.points, dtype=complex)
        n = len(self.indices)
        if n < 2:
            raise RayFitError(f'a ray needs at least 2 points, got {n}')
        if self.times.shape != (n,) or self.points.shape != (n,):
            raise RayFitError(f'expected {n} times and points, got {self.times.shape} and '
                              f'{self.points.shape}')
        if self.times[0] != 0.0 or not np.all(np.diff(self.times) > 0):
            raise RayFitError('ray times must start at 0 and increase strictly')
        # unit speed: the horocycle passes the end points at times 0 and times[-1]
        ends = self.horocycle.evaluate(np.array([0.0, self.times[-1]]))
        gap = float(np.max(np.abs(ends - self.points[[0, -1]])))
        if gap > RAY_TIME_TOL:
            raise RayFitError(f'ray times are not unit-rate on the fitted horocycle, end points off by '
                              f'{gap:.3g}')

    def __len__(self):
        return len(self.indices)

    @property
    def params(self) -> np.ndarray:
        h = self.horocycle
        return np.array([h.lam, h.omega.real, h.omega.imag])

    def strain_defect(self, u: Potential, dist: np.ndarray) -> float:
        # largest |d(x_k, x_k+1) - (u_k+1 - u_k)| along the chain
        idx = self.indices
        steps = dist[idx[:-1], idx[1:]] - np.diff(u.values[idx])
        return float(np.max(np.abs(steps))) if len(steps) else 0.0

    def to_json(self):
        return {'indices': self.indices.tolist(), 'horocycle': self.horocycle.to_json(),
                'times': self.times.tolist()}


def _fit_ray(inst: MassInstance, indices: np.ndarray, u: Potential, fit_tol: float):
    """
    Order the points by potential, fit the horocycle through the extremes and drop points off its trace
    or behind an earlier point in time; refit until nothing is dropped.
    """
    order = np.lexsort((indices, u.values[indices]))
    indices = indices[order]
    while len(indices) >= 2:
        points = inst.points[indices]
        h, _, _ = horo_between(points[0], points[-1])
        times = chord_length_array(points[0], points)
        on_trace = distance_to_trace(h, points) <= fit_tol
        ahead = times > np.concatenate([[-np.inf], np.maximum.accumulate(times)[:-1]])
        keep = on_trace & ahead
        if keep.all():
            return DiscreteRay(indices, h, times, points)
        logging.warning(f'{int((~keep).sum())} of {len(indices)} points dropped from a ray: '
                        f'{int((~on_trace).sum())} farther than {fit_tol} from the fitted horocycle, '
                        f'{int((on_trace & ~ahead).sum())} out of order')
        indices = indices[keep]
    return None


def _extend_ray(inst: MassInstance, ray: DiscreteRay, strain: StrainGraph, assigned: np.ndarray,
                u: Potential, fit_tol: float) -> DiscreteRay:
    # grow the chain by free points strain-linked to it that lie on its horocycle
    while True:
        on_ray = np.zeros(len(inst), dtype=bool)
        on_ray[ray.indices] = True
        touching = strain.pairs[on_ray[strain.pairs[:, 0]] != on_ray[strain.pairs[:, 1]]].ravel()
        free = np.unique(touching[~on_ray[touching] & ~assigned[touching]])
        free = free[distance_to_trace(ray.horocycle, inst.points[free]) <= fit_tol]
        if len(free) == 0:
            return ray
        grown = _fit_ray(inst, np.concatenate([ray.indices, free]), u, fit_tol)
        if grown is None or len(grown) <= len(ray) or not np.all(np.isin(ray.indices, grown.indices)):
            return ray
        assigned[grown.indices] = True
        ray = grown


def extract_rays(inst: MassInstance, strain: StrainGraph, u: Potential,
                 fit_tol: float = DEFAULT_FIT_TOL) -> List[DiscreteRay]:
    """
    :param inst: the transport instance
    :param strain: strain pairs of u
    :param u: the potential that orders points along each ray
    :param fit_tol: model-coordinate tolerance, both for grouping horocycle parameters and for the
        distance of ray points to the fitted horocycle
    :return: pairwise disjoint rays, longest first
    """
    if inst.is_trivial or len(strain.pairs) == 0:
        # rho1 = rho2 transports nothing, so there are no rays
        return []
    pairs = strain.pairs
    params = horocycle_params_array(inst.points[pairs[:, 0]], inst.points[pairs[:, 1]])
    # pairs on one horocycle share their parameters, so group them on a fine grid before the tree query
    bin_width = 0.25 * fit_tol
    bins, inverse = np.unique(np.floor(params / bin_width).astype(np.int64), axis=0, return_inverse=True)
    close = np.array(sorted(cKDTree((bins + 0.5) * bin_width).query_pairs(r=fit_tol)),
                     dtype=np.int64).reshape(-1, 2)
    graph = coo_matrix((np.ones(len(close)), (close[:, 0], close[:, 1])), shape=(len(bins), len(bins)))
    num_groups, bin_labels = connected_components(graph, directed=False)
    labels = bin_labels[np.ravel(inverse)]

    groups = []
    for label in range(num_groups):
        members = pairs[labels == label]
        points = np.unique(members.ravel())
        groups.append((-len(points), int(points[0]), points))
    groups.sort(key=lambda g: (g[0], g[1]))

    assigned = np.zeros(len(inst), dtype=bool)
    rays: List[DiscreteRay] = []
    for _, _, points in groups:
        free = points[~assigned[points]]
        if len(free) < 2:
            continue
        ray = _fit_ray(inst, free, u, fit_tol)
        if ray is None:
            continue
        match = next((k for k, other in enumerate(rays)
                      if np.max(np.abs(other.params - ray.params)) <= fit_tol), None)
        if match is not None:
            merged = _fit_ray(inst, np.concatenate([rays[match].indices, ray.indices]), u, fit_tol)
            if merged is not None:
                assigned[merged.indices] = True
                rays[match] = _extend_ray(inst, merged, strain, assigned, u, fit_tol)
                continue
        assigned[ray.indices] = True
        rays.append(_extend_ray(inst, ray, strain, assigned, u, fit_tol))

    rays.sort(key=lambda r: (-len(r), int(r.indices[0])))
    logging.info(f'{len(rays)} transport rays from {len(pairs)} strain pairs in {num_groups} groups')
    return rays


@dataclass
class RayBalance:
    mass1: float
    mass2: float
    # largest excess of source over target mass on a suffix of the ray
    suffix_excess: float

    @property
    def residual(self) -> float:
        return abs(self.mass1 - self.mass2)

    @property
    def relative_residual(self) -> float:
        mass = max(self.mass1, self.mass2)
        return self.residual / mass if mass > 0 else 0.0

    def to_json(self):
        return {'mass1': self.mass1, 'mass2': self.mass2, 'residual': self.residual,
                'relative_residual': self.relative_residual, 'suffix_excess': self.suffix_excess}


@dataclass
class MassBalanceReport:
    rays: List[RayBalance] = field(default_factory=list)
    tol: float = BALANCE_REL_TOL

    @property
    def balance_violations(self) -> List[int]:
        return [k for k, r in enumerate(self.rays) if r.relative_residual > self.tol]

    @property
    def suffix_violations(self) -> List[int]:
        return [k for k, r in enumerate(self.rays)
                if r.suffix_excess > self.tol * max(r.mass1, r.mass2)]

    @property
    def max_relative_residual(self) -> float:
        return max((r.relative_residual for r in self.rays), default=0.0)

    @property
    def passed(self) -> bool:
        return not self.balance_violations and not self.suffix_violations

    def to_json(self) -> Dict:
        return {'rays': [r.to_json() for r in self.rays], 'tol': self.tol,
                'balance_violations': self.balance_violations,
                'suffix_violations': self.suffix_violations, 'passed': self.passed}


def mass_balance(inst: MassInstance, rays: Sequence[DiscreteRay],
                 tol: float = BALANCE_REL_TOL) -> MassBalanceReport:
    """
    Per ray, source and target masses agree; on every positive end (a suffix of the ray in the
    direction of increasing potential) the source mass does not exceed the target mass.
    """
    report = MassBalanceReport(tol=tol)
    for ray in rays:
        rho1, rho2 = inst.rho1[ray.indices], inst.rho2[ray.indices]
        suffix_excess = np.cumsum((rho1 - rho2)[::-1])
        report.rays.append(RayBalance(float(rho1.sum()), float(rho2.sum()),
                                      float(max(0.0, np.max(suffix_excess)))))
    return report


def disintegration_coverage(inst: MassInstance, rays: Sequence[DiscreteRay],
                            strain: StrainGraph) -> float:
    """
    Share of the unbalanced mass |rho1 - rho2| sitting on points that are neither on a ray nor loose.
    """
    unbalanced = np.abs(inst.net)
    total = unbalanced.sum()
    if total == 0:
        return 0.0
    covered = np.zeros(len(inst), dtype=bool)
    for ray in rays:
        covered[ray.indices] = True
    covered[strain.loose_points] = True
    return float(unbalanced[~covered].sum() / total)
