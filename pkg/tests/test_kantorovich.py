import numpy as np
import pytest

from horobm.geometry import OutsideDiscError, dist_phi
from horobm.needles import (
    MassInstance, Potential, UnbalancedInstanceError, distance_matrix, random_instance,
    solve_kantorovich, transport_cost_lp, trivial_instance)


def test_two_points():
    x1, x2 = 0.1 + 0.2j, -0.3 + 0.1j
    inst = MassInstance(np.array([x1, x2]), [1.0, 0.0], [0.0, 1.0])
    u, w1 = solve_kantorovich(inst)
    assert w1 == pytest.approx(dist_phi(x1, x2), abs=1e-6)
    assert u.values[1] - u.values[0] == pytest.approx(w1, abs=1e-9)
    assert transport_cost_lp(inst) == pytest.approx(dist_phi(x1, x2), abs=1e-9)


def test_trivial_instance(rng):
    inst = trivial_instance(rng.uniform(-0.5, 0.5, 6) + 1j * rng.uniform(-0.5, 0.5, 6))
    u, w1 = solve_kantorovich(inst)
    assert w1 == 0.0
    assert np.all(u.values == u.values[0])
    assert transport_cost_lp(inst) == 0.0


@pytest.mark.parametrize('seed', range(4))
def test_duality_on_random_instances(seed):
    inst = random_instance(np.random.default_rng(seed), 16)
    dist = distance_matrix(inst)
    u, w1 = solve_kantorovich(inst, dist)
    assert u.is_feasible(dist, 1e-9)
    assert abs(w1 - transport_cost_lp(inst, dist)) < 1e-6


def test_distance_matrix_is_asymmetric(rng):
    inst = random_instance(rng, 5)
    dist = distance_matrix(inst)
    assert np.all(np.diag(dist) == 0.0)
    assert not np.allclose(dist, dist.T)
    assert dist[0, 1] == pytest.approx(dist_phi(inst.points[0], inst.points[1]))


def test_potential_helpers():
    dist = np.array([[0.0, 1.0], [2.0, 0.0]])
    u = Potential([0.0, 1.5])
    assert u.max_violation(dist) == pytest.approx(0.5)
    assert not u.is_feasible(dist)
    assert Potential([0.0, 1.0]).is_feasible(dist)


def test_instance_validation():
    with pytest.raises(UnbalancedInstanceError):
        MassInstance(np.array([0.1, 0.2]), [1.0, 0.0], [0.0, 2.0])
    with pytest.raises(OutsideDiscError):
        MassInstance(np.array([0.1, 1.0]), [1.0, 0.0], [0.0, 1.0])
    with pytest.raises(ValueError):
        MassInstance(np.array([0.1, 0.1]), [1.0, 0.0], [0.0, 1.0])
    with pytest.raises(ValueError):
        MassInstance(np.array([0.1, 0.2]), [-1.0, 2.0], [0.0, 1.0])


def test_instance_json_round_trip(rng):
    inst = random_instance(rng, 7)
    other = MassInstance.from_json(inst.to_json())
    assert np.array_equal(inst.points, other.points)
    assert np.array_equal(inst.rho1, other.rho1)
    assert np.array_equal(inst.net, other.net)


def test_size_caps(rng):
    inst = random_instance(rng, 70)
    with pytest.raises(ValueError):
        solve_kantorovich(inst, max_points=50)
    with pytest.raises(ValueError):
        transport_cost_lp(inst)
