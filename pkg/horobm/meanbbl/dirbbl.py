"""
- The directed one-dimensional Borell-Brascamp-Lieb inequality: if F's upper tails are dominated by
  G's and H((1 - lam) t + lam s) >= M_p(F(t), G(s); lam) whenever t <= s, then
  int H >= M_{p / (p + 1)}(int F, int G; lam).
- Grid sup-convolution building the smallest admissible H, the verifier, the monotone
  change-of-variables integral, and seeded random instances.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from horobm.meanbbl.density import (
    DEFAULT_STEP, Density1D, ZeroMassError, check_dominance, dominance_gap, quantile_map)
from horobm.meanbbl.pmean import PMeanParam, p_mean, p_mean_array

# slack on the conclusion int H >= M_{p~}(int F, int G)
CONCLUSION_TOL = 1e-6

# slack on the pointwise hypothesis at grid pairs
HYPOTHESIS_TOL = 1e-9

# number of F grid nodes handled per block of pairs
_BLOCK_ROWS = 256


def scatter_max(target: np.ndarray, index: np.ndarray, values: np.ndarray):
    # target[index] = max(target[index], values), with repeated indices reduced by max
    order = np.argsort(index, kind='stable')
    index, values = index[order], values[order]
    starts = np.flatnonzero(np.r_[True, index[1:] != index[:-1]])
    cells = index[starts]
    target[cells] = np.maximum(target[cells], np.maximum.reduceat(values, starts))


def _positive_nodes(f: Density1D) -> Tuple[np.ndarray, np.ndarray]:
    keep = f.values > 0
    return f.grid[keep], f.values[keep]


def _pair_blocks(f: Density1D, g: Density1D, lam: float, p: PMeanParam):
    # (r, M_p(F(t), G(s))) over grid pairs t <= s with F(t) G(s) > 0
    t_nodes, f_vals = _positive_nodes(f)
    s_nodes, g_vals = _positive_nodes(g)
    for start in range(0, len(t_nodes), _BLOCK_ROWS):
        t = t_nodes[start:start + _BLOCK_ROWS, None]
        admissible = t <= s_nodes[None, :]
        if not admissible.any():
            continue
        rows, cols = np.nonzero(admissible)
        r = (1.0 - lam) * t[rows, 0] + lam * s_nodes[cols]
        values = p_mean_array(f_vals[start + rows], g_vals[cols], lam, p)
        yield r, values


def sup_convolution_1d(f: Density1D, g: Density1D, lam: float, p, step: float = None) -> Density1D:
    """
    Smallest grid function H with H(r) >= M_p(F(t), G(s); lam) at every admissible grid pair, where
    r = (1 - lam) t + lam s. Each pair value is written to both grid nodes around r, so the linear
    interpolant of H also satisfies the bound at r.
    """
    p = PMeanParam.parse(p)
    step = step or min(f.step, g.step)
    a, b = min(f.a, g.a), max(f.b, g.b)
    grid = Density1D.make_grid(a, b, step)
    out_step = (b - a) / (len(grid) - 1)
    values = np.zeros(len(grid))
    for r, pair_values in _pair_blocks(f, g, lam, p):
        u = (r - a) / out_step
        lo = np.clip(np.floor(u).astype(np.int64), 0, len(grid) - 1)
        hi = np.clip(np.ceil(u).astype(np.int64), 0, len(grid) - 1)
        scatter_max(values, lo, pair_values)
        scatter_max(values, hi, pair_values)
    return Density1D(a, b, values)


@dataclass
class DirBBLReport:
    lam: float
    p: PMeanParam
    mass_f: float
    mass_g: float
    # int H and M_{p / (p + 1)}(int F, int G)
    lhs: float
    rhs: float
    dominance: bool
    dominance_gap: float
    hypothesis_ok: bool
    max_hypothesis_violation: float
    tol: float = CONCLUSION_TOL

    @property
    def applicable(self) -> bool:
        return self.dominance and self.hypothesis_ok

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs - self.tol

    @property
    def counterexample(self) -> bool:
        # the hypothesis on H holds, the conclusion fails
        return self.hypothesis_ok and not self.holds

    def to_json(self):
        return {'lam': self.lam, 'p': self.p.to_json(), 'mass_f': self.mass_f, 'mass_g': self.mass_g,
                'lhs': self.lhs, 'rhs': self.rhs, 'dominance': self.dominance,
                'dominance_gap': self.dominance_gap, 'hypothesis_ok': self.hypothesis_ok,
                'max_hypothesis_violation': self.max_hypothesis_violation, 'holds': self.holds,
                'tol': self.tol}


def verify_dirbbl(f: Density1D, g: Density1D, h: Density1D, lam: float, p,
                  tol: float = CONCLUSION_TOL) -> DirBBLReport:
    p = PMeanParam.parse(p)
    p.check_theorem_range()
    try:
        mass_f, mass_g = f.check_mass(), g.check_mass()
    except ZeroMassError:
        raise ZeroMassError('directed BBL needs F and G with positive mass')

    worst = 0.0
    for r, pair_values in _pair_blocks(f, g, lam, p):
        worst = max(worst, float(np.max(pair_values - h(r))))

    return DirBBLReport(lam=lam, p=p, mass_f=mass_f, mass_g=mass_g, lhs=h.mass,
                        rhs=p_mean(mass_f, mass_g, lam, p.needle_exponent()),
                        dominance=check_dominance(f, g), dominance_gap=dominance_gap(f, g),
                        hypothesis_ok=worst <= HYPOTHESIS_TOL, max_hypothesis_violation=worst,
                        tol=tol)


def change_of_variables_integral(f: Density1D, g: Density1D, h: Density1D, lam: float,
                                 n: int = 100_000) -> float:
    """
    int_0^1 H(r(xi)) r'(xi) dxi with r = (1 - lam) t(xi) + lam s(xi) and t, s the quantile maps of F and
    G; r' by finite differences and H at the midpoint of each step. Bounded by int H since r is
    nondecreasing.
    """
    xi = np.linspace(0.0, 1.0, n + 1)
    r = (1.0 - lam) * quantile_map(f, xi) + lam * quantile_map(g, xi)
    return float(np.sum(h(0.5 * (r[1:] + r[:-1])) * np.diff(r)))


def random_piecewise_linear(rng: np.random.Generator, a: float, b: float, knots: int = 4,
                            value_range=(0.2, 1.5), step: float = DEFAULT_STEP) -> Density1D:
    knot_t = np.linspace(a, b, knots)
    knot_v = rng.uniform(*value_range, size=knots)
    return Density1D.from_function(lambda t: np.interp(t, knot_t, knot_v), a, b, step)


def random_dominated_pair(rng: np.random.Generator,
                          step: float = DEFAULT_STEP) -> Tuple[Density1D, Density1D]:
    """
    F random piecewise-linear on [0, 1]; G a right shift of F, rescaled and tilted by an increasing
    factor. Shifting right and tilting upward both preserve upper-tail dominance.
    """
    f = random_piecewise_linear(rng, 0.0, 1.0, step=step)
    shift = rng.uniform(0.05, 0.5)
    scale = rng.uniform(0.5, 2.0)
    tilt = rng.uniform(0.0, 2.0)

    def shifted(s):
        return scale * f(np.clip(s - shift, 0.0, 1.0)) * (1.0 + tilt * (s - shift))

    g = Density1D.from_function(shifted, shift, 1.0 + shift, step)
    return f, g


def negative_control_pair(step: float = DEFAULT_STEP) -> Tuple[Density1D, Density1D]:
    # F to the right of G, so the ordered pairs t <= s barely exist
    return Density1D.uniform(1.0, 2.0, step=step), Density1D.uniform(0.0, 1.0, step=step)
