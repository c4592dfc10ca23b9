import numpy as np
import pytest
from hypothesis import given, strategies as st

from horobm.meanbbl import (
    Density1D, ZeroMassError, check_dominance, directed_sum_1d, dominance_gap, intervals_length,
    minkowski_sum_1d, normalize_intervals, quantile_map)


def test_density_validation():
    with pytest.raises(ValueError):
        Density1D(1.0, 1.0, [1.0, 1.0])
    with pytest.raises(ValueError):
        Density1D(0.0, 1.0, [1.0])
    with pytest.raises(ValueError):
        Density1D(0.0, 1.0, [1.0, -0.1])
    with pytest.raises(ZeroMassError):
        Density1D(0.0, 1.0, [0.0, 0.0]).check_mass()


def test_mass_and_cdf_are_exact_for_linear_pieces():
    f = Density1D(0.0, 2.0, [0.0, 1.0, 0.0])
    assert f.mass == pytest.approx(1.0)
    assert f.cdf(0.5) == pytest.approx(0.125)
    assert f.cdf(1.0) == pytest.approx(0.5)
    assert f.cdf(5.0) == pytest.approx(1.0)
    assert f.tail(-1.0) == pytest.approx(1.0)
    assert f(0.5) == pytest.approx(0.5)
    assert f(3.0) == 0.0


def test_json_round_trip():
    f = Density1D.from_function(lambda t: 1.0 + t, 0.0, 1.0, 0.25)
    g = Density1D.from_json(f.to_json())
    assert np.array_equal(f.values, g.values)
    assert (g.a, g.b) == (f.a, f.b)


def test_quantile_examples():
    uniform = Density1D.uniform(0.0, 1.0)
    assert float(quantile_map(uniform, 0.25)) == pytest.approx(0.25, abs=1e-9)
    assert float(quantile_map(uniform, 0.0)) == 0.0
    assert float(quantile_map(uniform, 1.0)) == pytest.approx(1.0)
    two_pieces = Density1D.indicator([(0.0, 1.0), (2.0, 3.0)], 0.0, 3.0)
    assert float(quantile_map(two_pieces, 0.5)) == pytest.approx(1.0, abs=2e-3)
    with pytest.raises(ValueError):
        quantile_map(uniform, 1.5)


@given(st.floats(min_value=0.0, max_value=1.0))
def test_quantile_inverts_the_cdf(xi):
    f = Density1D.from_function(lambda t: 0.5 + t ** 2, -1.0, 2.0, 0.01)
    t = float(quantile_map(f, xi))
    assert f.cdf(t) == pytest.approx(xi * f.mass, abs=1e-9)


def test_quantile_map_is_nondecreasing():
    f = Density1D.from_function(lambda t: np.abs(np.sin(5 * t)), 0.0, 2.0)
    t = quantile_map(f, np.linspace(0.0, 1.0, 1001))
    assert np.all(np.diff(t) >= 0)


def test_dominance_examples():
    f = Density1D.uniform(0.0, 1.0)
    assert check_dominance(f, Density1D.uniform(0.5, 1.5))
    assert check_dominance(f, f)
    assert dominance_gap(f, f) == pytest.approx(0.0, abs=1e-12)
    assert not check_dominance(Density1D.uniform(1.0, 2.0), Density1D.uniform(0.0, 1.0))
    # an increasing density on the same support dominates the uniform one
    assert check_dominance(f, Density1D.from_function(lambda t: 1.0 + t, 0.0, 1.0))


def test_directed_sum_examples():
    assert directed_sum_1d([(0, 1)], [(2, 3)], 0.5) == [(1.0, 2.0)]
    assert directed_sum_1d([(2, 3)], [(0, 1)], 0.5) == []
    assert directed_sum_1d([(0, 1)], [(0, 1)], 0.5) == [(0.0, 1.0)]
    with pytest.raises(ValueError):
        directed_sum_1d([], [(0, 1)], 0.5)


def test_directed_sum_is_inside_the_minkowski_sum():
    a, b = [(0.0, 1.0), (3.0, 4.0)], [(0.5, 2.0)]
    directed = directed_sum_1d(a, b, 0.3)
    full = minkowski_sum_1d(a, b, 0.3)
    assert intervals_length(directed) <= intervals_length(full)
    for lo, hi in directed:
        assert any(f_lo <= lo and hi <= f_hi for f_lo, f_hi in full)


def test_normalize_intervals():
    assert normalize_intervals([(2, 3), (0, 1), (0.5, 2.5)]) == [(0.0, 3.0)]
    assert normalize_intervals([(0, 1), (2, 3)]) == [(0.0, 1.0), (2.0, 3.0)]
    with pytest.raises(ValueError):
        normalize_intervals([(1, 0)])
