"""
- The Kantorovich dual under the asymmetric Phi-distance: maximize sum u (rho2 - rho1) over potentials
  with u_j - u_i <= d_Phi(x_i, x_j) for every ordered pair.
- The LP is solved on the bipartite constraints from sources to sinks only; its solution is extended to
  every point by u(x) = min over sources i of (u_i + d_Phi(x_i, x)). The triangle inequality makes the
  extension feasible for all n^2 constraints, and it only raises the objective, so it is optimal.
- transport_cost_lp solves the primal (transport plan) LP independently, for duality checks.
"""

import logging
import time
from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy.sparse import csc_matrix

from horobm.geometry.finsler import dist_phi_array
from horobm.needles.instance import DEFAULT_MAX_POINTS, MassInstance

# HiGHS primal/dual feasibility tolerance
SOLVER_TOL = 1e-7

# potentials may exceed the Lipschitz bound by this much
FEASIBILITY_TOL = 1e-9

# the dense primal LP has |sources| * |sinks| variables
PRIMAL_MAX_POINTS = 64


class KantorovichSolverError(RuntimeError):
    pass


def distance_matrix(inst: MassInstance) -> np.ndarray:
    # D[i, j] = d_Phi(x_i, x_j)
    return dist_phi_array(inst.points[:, None], inst.points[None, :])


@dataclass
class Potential:
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    def __len__(self):
        return len(self.values)

    def slack(self, dist: np.ndarray) -> np.ndarray:
        # d(x_i, x_j) - (u_j - u_i); zero on tight pairs, negative on violated ones
        return dist - (self.values[None, :] - self.values[:, None])

    def max_violation(self, dist: np.ndarray) -> float:
        return float(max(0.0, -np.min(self.slack(dist))))

    def is_feasible(self, dist: np.ndarray, tol: float = FEASIBILITY_TOL) -> bool:
        return self.max_violation(dist) <= tol

    def objective(self, inst: MassInstance) -> float:
        return float(np.dot(self.values, inst.net))

    def to_json(self):
        return {'values': self.values.tolist()}


def _bipartite_dual(dist: np.ndarray, mu: np.ndarray, nu: np.ndarray):
    n_s, n_t = dist.shape
    rows = np.arange(n_s * n_t)
    s_idx, t_idx = np.divmod(rows, n_t)
    # variables [u_S, u_T]; constraint u_T[j] - u_S[i] <= D[i, j]
    data = np.concatenate([-np.ones(n_s * n_t), np.ones(n_s * n_t)])
    a_ub = csc_matrix((data, (np.concatenate([rows, rows]), np.concatenate([s_idx, n_s + t_idx]))),
                      shape=(n_s * n_t, n_s + n_t))
    c = np.concatenate([mu, -nu])
    bounds = [(0.0, 0.0)] + [(None, None)] * (n_s + n_t - 1)
    res = optimize.linprog(c, A_ub=a_ub, b_ub=dist.ravel(), bounds=bounds, method='highs',
                           options={'primal_feasibility_tolerance': SOLVER_TOL,
                                    'dual_feasibility_tolerance': SOLVER_TOL})
    if res.status != 0:
        raise KantorovichSolverError(f'dual LP failed: {res.message}')
    return res.x[:n_s], res.x[n_s:]


def solve_kantorovich(inst: MassInstance, dist: np.ndarray = None,
                      max_points: int = DEFAULT_MAX_POINTS):
    """
    :param inst: a balanced instance
    :param dist: precomputed distance_matrix(inst)
    :param max_points: largest accepted instance
    :return: (Potential, W1)
    """
    if len(inst) > max_points:
        raise ValueError(f'instance has {len(inst)} points, above the cap of {max_points}')
    if dist is None:
        dist = distance_matrix(inst)
    if inst.is_trivial:
        return Potential(np.zeros(len(inst))), 0.0

    start = time.time()
    sources, sinks = inst.sources, inst.sinks
    net = inst.net
    u_s, _ = _bipartite_dual(dist[np.ix_(sources, sinks)], -net[sources], net[sinks])
    potential = Potential(np.min(u_s[:, None] + dist[sources, :], axis=0))
    w1 = potential.objective(inst)
    logging.info(f'Kantorovich dual on {len(sources)} sources x {len(sinks)} sinks: W1 = {w1:.9f} '
                 f'({time.time() - start:.2f}s)')
    return potential, w1


def transport_cost_lp(inst: MassInstance, dist: np.ndarray = None,
                      max_points: int = PRIMAL_MAX_POINTS) -> float:
    """
    Minimal cost of a plan moving the source excess onto the sink excess, as a dense plan LP.
    """
    if len(inst) > max_points:
        raise ValueError(f'the primal LP is limited to {max_points} points, got {len(inst)}')
    if dist is None:
        dist = distance_matrix(inst)
    if inst.is_trivial:
        return 0.0
    sources, sinks = inst.sources, inst.sinks
    n_s, n_t = len(sources), len(sinks)
    cols = np.arange(n_s * n_t)
    s_idx, t_idx = np.divmod(cols, n_t)
    a_eq = csc_matrix((np.ones(2 * n_s * n_t), (np.concatenate([s_idx, n_s + t_idx]),
                                                np.concatenate([cols, cols]))),
                      shape=(n_s + n_t, n_s * n_t))
    b_eq = np.concatenate([-inst.net[sources], inst.net[sinks]])
    # the two marginals carry the same mass only up to rounding
    b_eq[n_s:] *= b_eq[:n_s].sum() / b_eq[n_s:].sum()
    res = optimize.linprog(dist[np.ix_(sources, sinks)].ravel(), A_eq=a_eq, b_eq=b_eq,
                           bounds=(0.0, None), method='highs')
    if res.status != 0:
        raise KantorovichSolverError(f'primal LP failed: {res.message}')
    return float(res.fun)
