import numpy as np
import pytest

from horobm.meanbbl import (
    INF, Density1D, ZeroMassError, change_of_variables_integral, directed_sum_1d, intervals_length,
    negative_control_pair, random_dominated_pair, sup_convolution_1d, verify_dirbbl)

STEP = 2e-3


def test_uniform_pair_is_tight():
    f = Density1D.uniform(0.0, 1.0, step=STEP)
    h = sup_convolution_1d(f, f, 0.5, 1)
    report = verify_dirbbl(f, f, h, 0.5, 1)
    assert report.applicable
    assert report.holds
    assert report.lhs == pytest.approx(1.0, abs=1e-6)
    assert report.rhs == pytest.approx(1.0)


def test_indicators_at_p_inf_give_the_directed_sum():
    f = Density1D.uniform(0.0, 1.0, step=STEP)
    g = Density1D.uniform(2.0, 3.0, step=STEP)
    h = sup_convolution_1d(f, g, 0.5, INF)
    assert h.mass == pytest.approx(intervals_length(directed_sum_1d([(0, 1)], [(2, 3)], 0.5)),
                                   abs=5e-3)
    assert h(1.5) == 1.0
    assert h(0.5) == 0.0


def test_sup_convolution_meets_the_hypothesis():
    rng = np.random.default_rng(7)
    f, g = random_dominated_pair(rng, STEP)
    h = sup_convolution_1d(f, g, 0.4, 0.5)
    report = verify_dirbbl(f, g, h, 0.4, 0.5)
    assert report.hypothesis_ok
    assert report.max_hypothesis_violation <= 1e-12


@pytest.mark.parametrize('seed', range(5))
@pytest.mark.parametrize('p', [-0.5, 0, 1, 2, INF])
def test_seeded_random_pairs_satisfy_the_conclusion(seed, p):
    rng = np.random.default_rng(seed)
    f, g = random_dominated_pair(rng, STEP)
    lam = float(rng.uniform(0.1, 0.9))
    h = sup_convolution_1d(f, g, lam, p)
    report = verify_dirbbl(f, g, h, lam, p)
    assert report.dominance
    assert report.applicable
    assert report.holds, report.to_json()


def test_negative_control_is_a_counterexample():
    f, g = negative_control_pair(STEP)
    h = sup_convolution_1d(f, g, 0.5, 1)
    report = verify_dirbbl(f, g, h, 0.5, 1)
    assert not report.dominance
    assert report.counterexample
    assert report.lhs < 0.01 < report.rhs


@pytest.mark.parametrize('seed', range(3))
def test_change_of_variables_is_bounded_by_the_integral(seed):
    rng = np.random.default_rng(seed)
    f, g = random_dominated_pair(rng, STEP)
    h = sup_convolution_1d(f, g, 0.5, 1)
    cov = change_of_variables_integral(f, g, h, 0.5, n=20_000)
    assert 0.0 < cov <= h.mass + 1e-6


def test_change_of_variables_on_the_uniform_pair():
    f = Density1D.uniform(0.0, 1.0, step=STEP)
    h = sup_convolution_1d(f, f, 0.5, 1)
    assert change_of_variables_integral(f, f, h, 0.5, n=10_000) == pytest.approx(1.0, abs=1e-3)


def test_verify_errors():
    f = Density1D.uniform(0.0, 1.0, step=STEP)
    h = sup_convolution_1d(f, f, 0.5, 1)
    with pytest.raises(ValueError):
        verify_dirbbl(f, f, h, 0.5, -0.75)
    with pytest.raises(ZeroMassError):
        verify_dirbbl(Density1D(0.0, 1.0, [0.0, 0.0]), f, h, 0.5, 1)
