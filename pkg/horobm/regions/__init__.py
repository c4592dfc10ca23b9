from .region import (
    DiscPrimitive, EmptyRegionError, RasterizationError, Region, RegionSpec, RegionWindowError,
    SampledFunction, WINDOW, area, cell_flat_index, grid_size, lattice, rasterize, region_from_json,
    region_to_json)
from .minkowski import (
    DEFAULT_PAIR_CAP, PairSampler, concentric_radius, dilate_region, map_pair_blocks,
    minkowski_geodesic, minkowski_horo, minkowski_horo_unoriented, random_region_spec, succinct_sum)
from .render import render_regions_svg
