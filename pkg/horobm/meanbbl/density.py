"""
- One-dimensional densities as piecewise-linear tables on uniform grids, with exact trapezoid
  integrals, exact piecewise-quadratic CDFs, the quantile (monotone transport) map, and the upper-tail
  dominance test.
- Interval-union arithmetic for the directed sum {(1 - lam) t + lam s : t in A, s in B, t <= s}.
"""

from dataclasses import dataclass
from typing import Callable, Iterable, List, Sequence, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

DEFAULT_STEP = 1e-3

# slack used by check_dominance
DOMINANCE_SLACK = 1e-9

Intervals = List[Tuple[float, float]]


class ZeroMassError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Density1D:
    """
    A nonnegative function on [a, b] given by its values on a uniform grid and linear in between;
    zero outside [a, b].
    """
    a: float
    b: float
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if not self.b > self.a:
            raise ValueError(f'empty interval [{self.a}, {self.b}]')
        if values.ndim != 1 or len(values) < 2:
            raise ValueError('a density needs at least two grid values')
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError('density values must be finite and nonnegative')
        values.setflags(write=False)
        object.__setattr__(self, 'a', float(self.a))
        object.__setattr__(self, 'b', float(self.b))
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, '_cdf', cumulative_trapezoid(values, self.grid, initial=0.0))

    @staticmethod
    def make_grid(a: float, b: float, step: float = DEFAULT_STEP) -> np.ndarray:
        return np.linspace(a, b, max(1, int(round((b - a) / step))) + 1)

    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                      step: float = DEFAULT_STEP) -> 'Density1D':
        return cls(a, b, fn(cls.make_grid(a, b, step)))

    @classmethod
    def uniform(cls, a: float, b: float, height: float = 1.0, step: float = DEFAULT_STEP) -> 'Density1D':
        return cls.from_function(lambda t: np.full_like(t, height), a, b, step)

    @classmethod
    def indicator(cls, intervals: Intervals, a: float, b: float,
                  step: float = DEFAULT_STEP) -> 'Density1D':
        def fn(t):
            inside = np.zeros_like(t, dtype=bool)
            for lo, hi in intervals:
                inside |= (t >= lo) & (t <= hi)
            return inside.astype(float)
        return cls.from_function(fn, a, b, step)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.a, self.b, len(self.values))

    @property
    def step(self) -> float:
        return (self.b - self.a) / (len(self.values) - 1)

    @property
    def mass(self) -> float:
        return float(trapezoid(self.values, self.grid))

    @property
    def cdf_nodes(self) -> np.ndarray:
        return self._cdf

    def __call__(self, t):
        return np.interp(t, self.grid, self.values, left=0.0, right=0.0)

    def cdf(self, t) -> np.ndarray:
        """
        Integral of the density over (-inf, t], exact for the piecewise-linear interpolant.
        """
        t = np.clip(np.asarray(t, dtype=float), self.a, self.b)
        k = np.clip(np.floor((t - self.a) / self.step).astype(np.int64), 0, len(self.values) - 2)
        x = t - (self.a + k * self.step)
        f0, f1 = self.values[k], self.values[k + 1]
        return self._cdf[k] + f0 * x + (f1 - f0) * x * x / (2.0 * self.step)

    def tail(self, t) -> np.ndarray:
        # integral over [t, +inf)
        return self.mass - self.cdf(t)

    def check_mass(self) -> float:
        mass = self.mass
        if not mass > 0:
            raise ZeroMassError('density has zero mass')
        return mass

    def to_json(self):
        return {'a': self.a, 'b': self.b, 'values': self.values.tolist()}

    @classmethod
    def from_json(cls, json_obj) -> 'Density1D':
        return cls(json_obj['a'], json_obj['b'], np.array(json_obj['values']))


def quantile_map(f: Density1D, xi) -> np.ndarray:
    """
    The minimal t with F((-inf, t]) >= xi * mass, by exact inversion of the piecewise-quadratic CDF.
    Flat stretches resolve to their left end.

    :param f: the density
    :param xi: scalar or array of levels in [0, 1]
    """
    mass = f.check_mass()
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0) or np.any(xi > 1):
        raise ValueError('quantile levels must lie in [0, 1]')
    target = xi * mass
    cdf = f.cdf_nodes
    j = np.clip(np.searchsorted(cdf, target, side='left'), 0, len(cdf) - 1)
    k = np.maximum(j - 1, 0)
    f0, f1 = f.values[k], f.values[k + 1]
    remaining = np.maximum(target - cdf[k], 0.0)
    curvature = (f1 - f0) / (2.0 * f.step)
    with np.errstate(divide='ignore', invalid='ignore'):
        # root of f0 x + curvature x^2 = remaining, written to stay stable when curvature -> 0
        x = 2.0 * remaining / (f0 + np.sqrt(np.maximum(f0 * f0 + 4.0 * curvature * remaining, 0.0)))
    x = np.where(remaining > 0, np.nan_to_num(x, nan=f.step, posinf=f.step), 0.0)
    t = f.a + k * f.step + np.clip(x, 0.0, f.step)
    return np.where(j == 0, f.a, t)


def dominance_gap(f: Density1D, g: Density1D) -> float:
    """
    Largest excess of F's normalized upper tail over G's, over the union of both grids.
    """
    mass_f, mass_g = f.check_mass(), g.check_mass()
    nodes = np.union1d(f.grid, g.grid)
    return float(np.max(f.tail(nodes) / mass_f - g.tail(nodes) / mass_g))


def check_dominance(f: Density1D, g: Density1D, slack: float = DOMINANCE_SLACK) -> bool:
    return dominance_gap(f, g) <= slack


def normalize_intervals(intervals: Iterable[Tuple[float, float]]) -> Intervals:
    # sorted, merged closed intervals
    merged: Intervals = []
    for lo, hi in sorted((float(lo), float(hi)) for lo, hi in intervals):
        if hi < lo:
            raise ValueError(f'invalid interval [{lo}, {hi}]')
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def intervals_length(intervals: Sequence[Tuple[float, float]]) -> float:
    return sum(hi - lo for lo, hi in normalize_intervals(intervals))


def intervals_contain(intervals: Sequence[Tuple[float, float]], x: float) -> bool:
    return any(lo <= x <= hi for lo, hi in intervals)


def _check_nonempty(intervals, name):
    if not intervals:
        raise ValueError(f'{name} must be a nonempty union of intervals')


def directed_sum_1d(a_set: Sequence[Tuple[float, float]], b_set: Sequence[Tuple[float, float]],
                    lam: float) -> Intervals:
    """
    {(1 - lam) t + lam s : t in a_set, s in b_set, t <= s}, exactly. For one pair of intervals the
    admissible (t, s) form a convex polygon, so the image is an interval: its left end takes the smallest
    t with the smallest admissible s, its right end the largest admissible t with the largest s.
    """
    _check_nonempty(a_set, 'first set')
    _check_nonempty(b_set, 'second set')
    pieces = []
    for a_lo, a_hi in normalize_intervals(a_set):
        for b_lo, b_hi in normalize_intervals(b_set):
            if a_lo > b_hi:
                continue
            lo = (1.0 - lam) * a_lo + lam * max(b_lo, a_lo)
            hi = (1.0 - lam) * min(a_hi, b_hi) + lam * b_hi
            pieces.append((lo, hi))
    return normalize_intervals(pieces)


def minkowski_sum_1d(a_set: Sequence[Tuple[float, float]], b_set: Sequence[Tuple[float, float]],
                     lam: float) -> Intervals:
    _check_nonempty(a_set, 'first set')
    _check_nonempty(b_set, 'second set')
    return normalize_intervals(
        ((1.0 - lam) * a_lo + lam * b_lo, (1.0 - lam) * a_hi + lam * b_hi)
        for a_lo, a_hi in normalize_intervals(a_set) for b_lo, b_hi in normalize_intervals(b_set))
