"""
- Needles with affine density on an interval, and the needle-wise Brunn-Minkowski step:
  m([A:B]_lam)^(1/2) >= (1 - lam) m(A)^(1/2) + lam m(B)^(1/2) with [A:B]_lam the directed sum.
- A needle of zero length is a Dirac mass; its measure of a set is decided by membership alone.
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

from horobm.meanbbl.density import (
    Intervals, ZeroMassError, directed_sum_1d, intervals_contain, normalize_intervals)

NEEDLE_BM_TOL = 1e-6


@dataclass(frozen=True)
class AffineNeedle:
    # support [a, b] and density c0 + c1 t; atom is the mass of the Dirac form a == b
    a: float
    b: float
    c0: float = 1.0
    c1: float = 0.0
    atom: float = 1.0

    def __post_init__(self):
        if self.b < self.a:
            raise ValueError(f'needle support [{self.a}, {self.b}] is empty')
        if self.is_dirac:
            if not self.atom > 0:
                raise ValueError(f'a Dirac needle needs a positive atom, got {self.atom}')
        elif min(self.density(self.a), self.density(self.b)) < 0:
            raise ValueError(f'needle density {self.c0} + {self.c1} t is negative on '
                             f'[{self.a}, {self.b}]')

    @classmethod
    def dirac(cls, x: float, atom: float = 1.0) -> 'AffineNeedle':
        return cls(x, x, atom=atom)

    @property
    def is_dirac(self) -> bool:
        return self.a == self.b

    def density(self, t: float) -> float:
        return self.c0 + self.c1 * t

    def clip(self, intervals: Sequence[Tuple[float, float]]) -> Intervals:
        # the part of a union of intervals inside the needle's support
        clipped = [(max(lo, self.a), min(hi, self.b)) for lo, hi in normalize_intervals(intervals)]
        return [(lo, hi) for lo, hi in clipped if lo <= hi]

    def mass(self, intervals: Sequence[Tuple[float, float]]) -> float:
        if self.is_dirac:
            return self.atom if intervals_contain(intervals, self.a) else 0.0
        return sum(self.c0 * (hi - lo) + 0.5 * self.c1 * (hi * hi - lo * lo)
                   for lo, hi in self.clip(intervals))

    @property
    def total_mass(self) -> float:
        return self.atom if self.is_dirac else self.mass([(self.a, self.b)])

    def to_json(self):
        return {'a': self.a, 'b': self.b, 'c0': self.c0, 'c1': self.c1, 'atom': self.atom}

    @classmethod
    def from_json(cls, json_obj) -> 'AffineNeedle':
        return cls(json_obj['a'], json_obj['b'], json_obj.get('c0', 1.0), json_obj.get('c1', 0.0),
                   json_obj.get('atom', 1.0))


@dataclass
class NeedleBMReport:
    lam: float
    dirac: bool
    mass_a: float
    mass_b: float
    mass_sum: float
    directed_sum: Intervals
    tol: float = NEEDLE_BM_TOL

    @property
    def lhs(self) -> float:
        return math.sqrt(self.mass_sum)

    @property
    def rhs(self) -> float:
        return (1.0 - self.lam) * math.sqrt(self.mass_a) + self.lam * math.sqrt(self.mass_b)

    @property
    def passed(self) -> bool:
        return self.lhs >= self.rhs - self.tol

    def to_json(self):
        return {'lam': self.lam, 'dirac': self.dirac, 'mass_a': self.mass_a, 'mass_b': self.mass_b,
                'mass_sum': self.mass_sum, 'directed_sum': [list(i) for i in self.directed_sum],
                'lhs': self.lhs, 'rhs': self.rhs, 'rhs_squared': self.rhs ** 2,
                'passed': self.passed, 'tol': self.tol}


def _dirac_bm(needle: AffineNeedle, a_set, b_set, lam: float, tol: float) -> NeedleBMReport:
    x = needle.a
    in_a, in_b = intervals_contain(a_set, x), intervals_contain(b_set, x)
    if in_a != in_b:
        # mass balance puts a Dirac needle either in both sets or in neither
        raise ValueError(f'Dirac needle at {x} lies in only one of the two sets')
    if not in_a:
        return NeedleBMReport(lam, True, 0.0, 0.0, 0.0, [], tol)
    return NeedleBMReport(lam, True, needle.atom, needle.atom, needle.atom, [(x, x)], tol)


def needle_bm(needle: AffineNeedle, a_set: Sequence[Tuple[float, float]],
              b_set: Sequence[Tuple[float, float]], lam: float,
              tol: float = NEEDLE_BM_TOL) -> NeedleBMReport:
    """
    Needle measure of the directed sum against the square-root mean of the needle measures of A and B.
    A Dirac needle is settled by membership: a point of both sets lies in the directed sum, and a point
    of neither makes both sides vanish.

    :raises ZeroMassError: if the needle gives A no mass, or B misses the needle entirely
    """
    if not 0.0 < lam < 1.0:
        raise ValueError(f'lambda must lie in (0, 1), got {lam}')
    if needle.is_dirac:
        return _dirac_bm(needle, a_set, b_set, lam, tol)

    a_part, b_part = needle.clip(a_set), needle.clip(b_set)
    mass_a = needle.mass(a_part)
    if not mass_a > 0:
        raise ZeroMassError('the needle gives the first set no mass')
    if not b_part:
        raise ZeroMassError('the second set does not meet the needle')

    directed = directed_sum_1d(a_part, b_part, lam)
    mass_b = needle.mass(b_part)
    mass_sum = needle.mass(directed) if directed else 0.0
    return NeedleBMReport(lam, False, mass_a, mass_b, mass_sum, directed, tol)
