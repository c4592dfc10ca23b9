"""
- Weighted p-means M_p(a, b; lam) for p in [-inf, +inf], and the exponents derived from p:
  q = p / (1 + 2p) for the horocyclic BBL conclusion, p~ = p / (p + 1) for the one-dimensional step.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

INF = math.inf

# smallest exponent covered by the horocyclic BBL inequality
MIN_THEOREM_P = -0.5


@dataclass(frozen=True)
class PMeanParam:
    p: float

    def __post_init__(self):
        if math.isnan(self.p):
            raise ValueError('p-mean exponent cannot be NaN')
        object.__setattr__(self, 'p', float(self.p))

    @classmethod
    def parse(cls, value: Union[str, float, int, 'PMeanParam']) -> 'PMeanParam':
        if isinstance(value, PMeanParam):
            return value
        if isinstance(value, str):
            value = value.strip().lower()
            if value in ('inf', '+inf', 'infinity', '+infinity'):
                return cls(INF)
            if value in ('-inf', '-infinity'):
                return cls(-INF)
        return cls(float(value))

    def is_finite(self) -> bool:
        return math.isfinite(self.p)

    def check_theorem_range(self):
        if self.p < MIN_THEOREM_P:
            raise ValueError(f'p = {self.p} is below {MIN_THEOREM_P}, outside the range of the '
                             f'horocyclic Borell-Brascamp-Lieb inequality')

    def conclusion_exponent(self) -> 'PMeanParam':
        # q = p / (1 + 2p), continuous at p = -1/2 and p = +inf
        self.check_theorem_range()
        if self.p == INF:
            return PMeanParam(0.5)
        if self.p == MIN_THEOREM_P:
            return PMeanParam(-INF)
        return PMeanParam(self.p / (1.0 + 2.0 * self.p))

    def needle_exponent(self) -> 'PMeanParam':
        # p~ = p / (p + 1), continuous at p = +inf
        if self.p == INF:
            return PMeanParam(1.0)
        if self.p == -1.0:
            return PMeanParam(-INF)
        if self.p < -1.0:
            raise ValueError(f'p / (p + 1) is not used for p = {self.p} < -1')
        return PMeanParam(self.p / (self.p + 1.0))

    def to_json(self):
        if self.p == INF:
            return 'inf'
        if self.p == -INF:
            return '-inf'
        return self.p

    def __str__(self):
        return str(self.to_json())


def _as_param(p) -> PMeanParam:
    return p if isinstance(p, PMeanParam) else PMeanParam.parse(p)


def p_mean_array(a: np.ndarray, b: np.ndarray, lam: float, p) -> np.ndarray:
    p = _as_param(p).p
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    if np.any(a < 0) or np.any(b < 0):
        raise ValueError('p-means are defined for nonnegative arguments only')
    if p == INF:
        return np.maximum(a, b)
    if p == -INF:
        return np.minimum(a, b)
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        if p == 0:
            return a ** (1.0 - lam) * b ** lam
        if p < 0:
            positive = (a > 0) & (b > 0)
            a_safe, b_safe = np.where(positive, a, 1.0), np.where(positive, b, 1.0)
            mean = ((1.0 - lam) * a_safe ** p + lam * b_safe ** p) ** (1.0 / p)
            return np.where(positive, mean, 0.0)
        return ((1.0 - lam) * a ** p + lam * b ** p) ** (1.0 / p)


def p_mean(a: float, b: float, lam: float, p) -> float:
    return float(p_mean_array(a, b, lam, p))


def conclusion_exponent(p) -> PMeanParam:
    return _as_param(p).conclusion_exponent()


def needle_exponent(p) -> PMeanParam:
    return _as_param(p).needle_exponent()


def holder_gap(a1, b1, a2, b2, lam: float, p) -> np.ndarray:
    """
    M_p(a1, b1) * M_1(a2, b2) - M_{p / (p + 1)}(a1 a2, b1 b2), which is nonnegative for p >= -1/2.
    """
    p = _as_param(p)
    left = p_mean_array(a1, b1, lam, p) * p_mean_array(a2, b2, lam, 1.0)
    right = p_mean_array(np.multiply(a1, a2), np.multiply(b1, b2), lam, p.needle_exponent())
    return left - right
