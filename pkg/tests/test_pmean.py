import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from horobm.meanbbl import (
    INF, PMeanParam, conclusion_exponent, holder_gap, needle_exponent, p_mean, p_mean_array)

EXPONENTS = [-0.5, -0.25, 0.0, 0.5, 1.0, 3.0, INF]

values = st.floats(min_value=0.0, max_value=10.0, allow_nan=False)
lambdas = st.floats(min_value=0.01, max_value=0.99)


def test_p_mean_examples():
    assert p_mean(2.0, 4.0, 0.5, 1) == pytest.approx(3.0)
    assert p_mean(4.0, 9.0, 0.5, 0) == pytest.approx(6.0)
    assert p_mean(3.0, 0.0, 0.5, -1) == 0.0
    assert p_mean(2.0, 5.0, 0.3, 'inf') == 5.0
    assert p_mean(2.0, 5.0, 0.3, '-inf') == 2.0
    assert p_mean(1.0, 4.0, 0.5, 0.5) == pytest.approx(2.25)


def test_p_mean_rejects_negative_arguments():
    with pytest.raises(ValueError):
        p_mean(-1.0, 2.0, 0.5, 1)


def test_p_mean_array_broadcasts():
    a = np.array([1.0, 4.0, 0.0])
    out = p_mean_array(a[:, None], np.array([[1.0, 9.0]]), 0.5, 0)
    assert out.shape == (3, 2)
    assert out[1, 1] == pytest.approx(6.0)
    assert np.all(out[2] == 0.0)


def test_param_parsing():
    assert PMeanParam.parse('inf').p == INF
    assert PMeanParam.parse(' -Infinity ').p == -INF
    assert PMeanParam.parse(2).p == 2.0
    assert PMeanParam.parse(PMeanParam(0.5)) == PMeanParam(0.5)
    assert str(PMeanParam(INF)) == 'inf'
    for p in ('inf', '-inf', -0.5, 3.0):
        param = PMeanParam.parse(p)
        assert PMeanParam.parse(param.to_json()) == param
    with pytest.raises(ValueError):
        PMeanParam(math.nan)


def test_exponents():
    assert conclusion_exponent(INF).p == 0.5
    assert conclusion_exponent(-0.5).p == -INF
    assert conclusion_exponent(0).p == 0.0
    assert conclusion_exponent(1).p == pytest.approx(1.0 / 3.0)
    assert needle_exponent(1).p == 0.5
    assert needle_exponent(INF).p == 1.0
    assert needle_exponent(-1).p == -INF
    with pytest.raises(ValueError):
        needle_exponent(-2)
    with pytest.raises(ValueError):
        conclusion_exponent(-0.6)
    with pytest.raises(ValueError):
        PMeanParam(-0.75).check_theorem_range()


@given(values, values, lambdas, st.sampled_from(EXPONENTS))
def test_p_mean_lies_between_min_and_max(a, b, lam, p):
    m = p_mean(a, b, lam, p)
    assert min(a, b) * (1 - 1e-9) - 1e-12 <= m <= max(a, b) * (1 + 1e-9) + 1e-12


@given(values, values, lambdas, st.sampled_from(EXPONENTS), st.sampled_from(EXPONENTS))
def test_p_mean_is_monotone_in_p(a, b, lam, p, q):
    if p > q:
        p, q = q, p
    assert p_mean(a, b, lam, p) <= p_mean(a, b, lam, q) * (1 + 1e-9) + 1e-12


@given(values, values, values, values, lambdas, st.sampled_from(EXPONENTS))
def test_holder_gap_is_nonnegative(a1, b1, a2, b2, lam, p):
    gap = float(holder_gap(a1, b1, a2, b2, lam, p))
    scale = max(a1, b1) * max(a2, b2)
    assert gap >= -1e-9 * max(1.0, scale)
