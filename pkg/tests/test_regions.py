import math

import numpy as np
import pytest

from horobm.geometry import disc_area, mobius_from
from horobm.regions import (
    RasterizationError, Region, RegionSpec, SampledFunction, grid_size, lattice, rasterize,
    region_from_json, region_to_json, render_regions_svg)
from horobm.regions.region import DiscPrimitive, decode_mask, encode_mask


def test_lattice_window():
    centers, areas = lattice(0.1)
    n = grid_size(0.1)
    assert centers.shape == areas.shape == (n, n)
    assert np.all(np.abs(centers[areas > 0]) < 1.0)
    assert np.all(areas[np.abs(centers) > 0.95] == 0)


@pytest.mark.parametrize('radius', [1.0, 2.0])
def test_rasterized_disc_area(radius):
    region = rasterize(RegionSpec.disc(0j, radius), 0.005)
    assert region.area == pytest.approx(disc_area(radius), rel=0.01)


def test_rasterization_refines():
    exact = disc_area(1.0)
    coarse = rasterize(RegionSpec.disc(0.1j, 1.0), 0.04)
    fine = rasterize(RegionSpec.disc(0.1j, 1.0), 0.005)
    assert abs(fine.area - exact) < abs(coarse.area - exact)


def test_rasterize_outside_window_raises():
    with pytest.raises(RasterizationError):
        rasterize(RegionSpec.point(0.9995), 0.01)
    with pytest.raises(RasterizationError):
        rasterize(RegionSpec(discs=[DiscPrimitive(0.99, 1e-4)]), 0.05)
    with pytest.raises(ValueError):
        rasterize(RegionSpec.disc(0j, 1.0))


def test_area_monotone_and_subadditive():
    a = rasterize(RegionSpec.disc(0.1, 0.5), 0.01)
    b = rasterize(RegionSpec.disc(0.1, 0.8), 0.01)
    c = rasterize(RegionSpec.disc(-0.3j, 0.6), 0.01)
    assert a.area <= b.area
    assert b.union(c).area <= b.area + c.area
    assert b.symmetric_difference_area(b) == 0.0


def test_supersampling_keeps_area():
    spec = RegionSpec.disc(0.2 - 0.1j, 0.7)
    plain, dense = rasterize(spec, 0.02), rasterize(spec, 0.02, supersample=3)
    assert dense.area == pytest.approx(plain.area)
    assert len(dense) == 9 * len(plain)
    assert dense.weights.sum() == pytest.approx(dense.area)


def test_point_spec_keeps_exact_sample():
    region = rasterize(RegionSpec.point(0.123 + 0.045j), 0.01)
    assert region.num_cells == 1
    assert region.samples[0] == 0.123 + 0.045j
    assert region.weights.sum() == pytest.approx(region.area)


def test_region_json_round_trip():
    region = rasterize(RegionSpec(discs=[DiscPrimitive(0.3, 0.5), DiscPrimitive(-0.2j, 0.4)]), 0.02)
    json_obj = region_to_json(region)
    assert json_obj['area'] == pytest.approx(region.area)
    restored = region_from_json(json_obj)
    assert np.array_equal(restored.mask, region.mask)
    assert decode_mask(encode_mask(region.mask), grid_size(0.02)).tolist() == region.mask.tolist()


def test_spec_json_round_trip_and_mask_spec():
    spec = RegionSpec(discs=[DiscPrimitive(0.3, 0.5)], points=[0.1j], grid_h=0.05, supersample=2)
    assert RegionSpec.from_json(spec.to_json()) == spec
    with pytest.raises(ValueError):
        RegionSpec.from_json({'model': 'upper-half-plane', 'discs': [{'cx': 0, 'cy': 0, 'r': 1}]})

    region = rasterize(RegionSpec.disc(0j, 0.5), 0.05)
    from_mask = rasterize(RegionSpec(mask_runs=encode_mask(region.mask), grid_h=0.05))
    assert np.array_equal(from_mask.mask, region.mask)
    with pytest.raises(ValueError):
        RegionSpec()


def test_transformed_spec_keeps_area():
    spec = RegionSpec.disc(0j, 1.0)
    moved = spec.transformed(mobius_from(0.4 - 0.2j, 0.3))
    assert moved.discs[0].center == pytest.approx(0.4 - 0.2j)
    assert rasterize(moved, 0.005).area == pytest.approx(disc_area(1.0), rel=0.02)


def test_contains_array():
    region = rasterize(RegionSpec.disc(0j, 1.0), 0.02)
    assert region.contains_array(np.array([0.0, 0.3j, 0.9, 1.5])).tolist() == [True, True, False, False]


def test_sampled_function():
    region = rasterize(RegionSpec.disc(0j, 0.8), 0.02)
    indicator = SampledFunction.indicator(region)
    assert indicator.integral == pytest.approx(region.area)
    halves = SampledFunction.from_callable(region, lambda z: 0.5 * np.ones(len(z)))
    assert halves.integral == pytest.approx(0.5 * region.area)
    assert halves.support.all()
    with pytest.raises(ValueError):
        SampledFunction(region, -np.ones(len(region)))


def test_region_rejects_unusable_cells():
    n = grid_size(0.1)
    mask = np.zeros((n, n), dtype=bool)
    mask[0, 0] = True
    with pytest.raises(AssertionError):
        Region(mask, 0.1)


def test_render_is_deterministic(tmp_path):
    a = rasterize(RegionSpec.disc(0.2, 0.5), 0.02)
    b = rasterize(RegionSpec.disc(-0.3j, 0.7), 0.02)
    first = render_regions_svg(tmp_path / 'first.svg', [(a, None, 'A'), (b, '#000000', 'B')], title='two')
    second = render_regions_svg(tmp_path / 'second.svg', [(a, None, 'A'), (b, '#000000', 'B')], title='two')
    assert first.read_bytes() == second.read_bytes()
    assert b'<svg' in first.read_bytes()


def test_outer_ring():
    region = rasterize(RegionSpec.disc(0.2j, 0.8), 0.02)
    ring = region.outer_ring_mask()
    assert not np.any(ring & region.mask)
    rows, cols = np.nonzero(ring)
    # every ring cell touches the region, diagonals included
    for r, c in zip(rows, cols):
        assert region.mask[max(r - 1, 0):r + 2, max(c - 1, 0):c + 2].any()
    assert 0 < region.outer_ring_area < region.area
