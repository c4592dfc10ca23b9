import math

import pytest

from horobm.meanbbl import AffineNeedle, ZeroMassError, needle_bm


def test_constant_density_gives_equality():
    report = needle_bm(AffineNeedle(0.0, 10.0), [(0.0, 1.0)], [(4.0, 5.0)], 0.5)
    assert report.directed_sum == [(2.0, 3.0)]
    assert report.mass_sum == pytest.approx(1.0)
    assert report.lhs == pytest.approx(report.rhs)
    assert report.passed


def test_linear_density():
    report = needle_bm(AffineNeedle(0.0, 10.0, c0=0.0, c1=1.0), [(0.0, 1.0)], [(4.0, 5.0)], 0.5)
    assert report.mass_a == pytest.approx(0.5)
    assert report.mass_b == pytest.approx(4.5)
    assert report.mass_sum == pytest.approx(2.5)
    assert report.to_json()['rhs_squared'] == pytest.approx(2.0)
    assert report.passed


def test_sets_are_clipped_to_the_support():
    needle = AffineNeedle(0.0, 2.0)
    report = needle_bm(needle, [(-5.0, 1.0)], [(1.5, 9.0)], 0.5)
    assert report.mass_a == pytest.approx(1.0)
    assert report.mass_b == pytest.approx(0.5)


def test_directed_sum_is_empty_when_a_lies_right_of_b():
    report = needle_bm(AffineNeedle(0.0, 10.0), [(4.0, 5.0)], [(0.0, 1.0)], 0.5)
    assert report.directed_sum == []
    assert not report.passed


def test_dirac_needles():
    needle = AffineNeedle.dirac(2.0, atom=3.0)
    both = needle_bm(needle, [(1.0, 3.0)], [(2.0, 4.0)], 0.5)
    assert both.dirac and both.passed
    assert both.lhs == pytest.approx(math.sqrt(3.0))
    assert both.rhs == pytest.approx(math.sqrt(3.0))
    neither = needle_bm(needle, [(5.0, 6.0)], [(7.0, 8.0)], 0.5)
    assert neither.passed and neither.mass_sum == 0.0
    with pytest.raises(ValueError):
        needle_bm(needle, [(1.0, 3.0)], [(5.0, 6.0)], 0.5)


def test_errors():
    with pytest.raises(ValueError):
        AffineNeedle(1.0, 0.0)
    with pytest.raises(ValueError):
        AffineNeedle(0.0, 1.0, c0=-1.0)
    with pytest.raises(ValueError):
        AffineNeedle.dirac(0.0, atom=0.0)
    needle = AffineNeedle(5.0, 10.0)
    with pytest.raises(ZeroMassError):
        needle_bm(needle, [(0.0, 1.0)], [(6.0, 7.0)], 0.5)
    with pytest.raises(ZeroMassError):
        needle_bm(needle, [(6.0, 7.0)], [(0.0, 1.0)], 0.5)
    with pytest.raises(ValueError):
        needle_bm(needle, [(6.0, 7.0)], [(8.0, 9.0)], 1.0)


def test_json_round_trip():
    needle = AffineNeedle(0.5, 2.0, c0=1.0, c1=0.25)
    assert AffineNeedle.from_json(needle.to_json()) == needle
    assert needle.total_mass == pytest.approx(1.5 + 0.125 * (4.0 - 0.25))
