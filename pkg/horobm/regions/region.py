"""
- Regions of the hyperbolic plane as occupancy masks on a fixed square lattice of the Poincaré disc,
  window [-0.999, 0.999]^2, each occupied cell weighted by its hyperbolic area (area density at the
  cell centre times h^2).
- RegionSpec is the JSON input format (unions of hyperbolic discs, explicit points, or an explicit
  run-length-encoded mask); rasterize turns a spec into a Region.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import ndimage

from horobm.geometry.hypdisc import DiscPoint, Mobius, area_density_array, hyp_dist_array

MODEL_NAME = 'poincare-disc'

# half-width of the square lattice window in model coordinates
WINDOW = 0.999

# cells must lie entirely this far inside the unit circle to be usable
INSIDE_LIMIT = 1.0 - 1e-9


class EmptyRegionError(ValueError):
    pass


class RasterizationError(ValueError):
    pass


class RegionWindowError(ValueError):
    pass


def grid_size(h: float) -> int:
    if not h > 0:
        raise ValueError(f'grid spacing must be positive, got {h}')
    return int(math.ceil(2.0 * WINDOW / h - 1e-9))


@lru_cache(maxsize=16)
def lattice(h: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cell centres (complex, shape n x n, rows indexed by y) and hyperbolic cell areas of the lattice with
    spacing h. Cells not entirely inside the disc get area 0 and are never occupied.
    """
    n = grid_size(h)
    axis = -WINDOW + (np.arange(n) + 0.5) * h
    centers = axis[None, :] + 1j * axis[:, None]
    usable = np.abs(centers) + h / math.sqrt(2.0) < INSIDE_LIMIT
    areas = np.zeros((n, n))
    areas[usable] = area_density_array(centers[usable]) * h * h
    centers.setflags(write=False)
    areas.setflags(write=False)
    return centers, areas


def cell_index_array(z: np.ndarray, h: float) -> Tuple[np.ndarray, np.ndarray]:
    # flat lattice index of the cell containing each point, and whether that cell is usable
    z = np.asarray(z, dtype=complex)
    n = grid_size(h)
    ix = np.floor((z.real + WINDOW) / h).astype(np.int64)
    iy = np.floor((z.imag + WINDOW) / h).astype(np.int64)
    valid = (ix >= 0) & (ix < n) & (iy >= 0) & (iy < n)
    flat = np.where(valid, iy * n + ix, 0)
    _, areas = lattice(h)
    valid &= areas.ravel()[flat] > 0
    return flat, valid


def cell_flat_index(z: np.ndarray, h: float) -> np.ndarray:
    # like cell_index_array, but a point outside the usable window is an error
    flat, valid = cell_index_array(z, h)
    if not np.all(valid):
        escaped = np.asarray(z).ravel()[~valid.ravel()][0]
        raise RegionWindowError(f'point {escaped} falls outside the lattice window at h = {h}')
    return flat


def encode_mask(mask: np.ndarray) -> List[List[int]]:
    # run-length encoding as [row, start, length] triples
    runs = []
    for row in np.flatnonzero(mask.any(axis=1)):
        padded = np.concatenate([[False], mask[row], [False]]).astype(np.int8)
        edges = np.flatnonzero(np.diff(padded))
        for start, stop in zip(edges[::2], edges[1::2]):
            runs.append([int(row), int(start), int(stop - start)])
    return runs


def decode_mask(runs: List[List[int]], n: int) -> np.ndarray:
    mask = np.zeros((n, n), dtype=bool)
    for row, start, length in runs:
        mask[row, start:start + length] = True
    return mask


@dataclass(frozen=True)
class DiscPrimitive:
    center: complex
    # hyperbolic radius
    radius: float

    def __post_init__(self):
        object.__setattr__(self, 'center', DiscPoint(self.center).z)
        if not self.radius > 0:
            raise ValueError(f'disc radius must be positive, got {self.radius}')

    def to_json(self):
        return {'cx': self.center.real, 'cy': self.center.imag, 'r': self.radius}

    @classmethod
    def from_json(cls, json_obj) -> 'DiscPrimitive':
        return cls(complex(json_obj['cx'], json_obj['cy']), json_obj['r'])


@dataclass
class RegionSpec:
    discs: List[DiscPrimitive] = field(default_factory=list)
    # isolated points, kept as exact samples
    points: List[complex] = field(default_factory=list)
    # explicit mask as run-length triples on the lattice of spacing grid_h
    mask_runs: Optional[List[List[int]]] = None
    grid_h: Optional[float] = None
    supersample: int = 1

    def __post_init__(self):
        self.points = [DiscPoint(p).z for p in self.points]
        if not self.discs and not self.points and not self.mask_runs:
            raise ValueError('a region spec needs at least one disc, point or mask run')
        if self.mask_runs and self.grid_h is None:
            raise ValueError('an explicit mask needs grid_h')
        assert self.supersample >= 1, f'invalid supersample factor {self.supersample}'

    @classmethod
    def disc(cls, center: complex, radius: float, **kwargs) -> 'RegionSpec':
        return cls(discs=[DiscPrimitive(center, radius)], **kwargs)

    @classmethod
    def point(cls, z: complex, **kwargs) -> 'RegionSpec':
        return cls(points=[z], **kwargs)

    def contains_array(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        inside = np.zeros(z.shape, dtype=bool)
        for disc in self.discs:
            inside |= hyp_dist_array(z, disc.center) <= disc.radius
        return inside

    def transformed(self, t: Mobius) -> 'RegionSpec':
        if self.mask_runs:
            raise ValueError('only disc and point specs can be moved by an isometry')
        return RegionSpec(discs=[DiscPrimitive(t(d.center), d.radius) for d in self.discs],
                          points=[t(p) for p in self.points], grid_h=self.grid_h,
                          supersample=self.supersample)

    def to_json(self) -> Dict:
        json_obj = {'model': MODEL_NAME, 'discs': [d.to_json() for d in self.discs]}
        if self.points:
            json_obj['points'] = [[p.real, p.imag] for p in self.points]
        if self.mask_runs:
            json_obj['mask'] = self.mask_runs
        if self.grid_h is not None:
            json_obj['grid_h'] = self.grid_h
        if self.supersample != 1:
            json_obj['supersample'] = self.supersample
        return json_obj

    @classmethod
    def from_json(cls, json_obj: Dict) -> 'RegionSpec':
        model = json_obj.get('model', MODEL_NAME)
        if model != MODEL_NAME:
            raise ValueError(f'unsupported model {model}, expected {MODEL_NAME}')
        return cls(discs=[DiscPrimitive.from_json(d) for d in json_obj.get('discs', [])],
                   points=[complex(x, y) for x, y in json_obj.get('points', [])],
                   mask_runs=json_obj.get('mask'),
                   grid_h=json_obj.get('grid_h'),
                   supersample=json_obj.get('supersample', 1))


class Region:
    """
    An occupancy mask on the lattice of spacing h together with weighted sample points. Unless given
    explicitly, the samples are the occupied cell centres weighted by their hyperbolic cell areas.
    The arrays are read-only once the region is built.
    """

    def __init__(self, mask: np.ndarray, h: float, samples: np.ndarray = None,
                 weights: np.ndarray = None, sample_cells: np.ndarray = None):
        n = grid_size(h)
        assert mask.shape == (n, n), f'mask shape {mask.shape} does not match lattice size {n}'
        centers, areas = lattice(h)
        assert not np.any(mask & (areas == 0)), 'mask occupies cells outside the usable window'

        self.h = h
        self.mask = mask.astype(bool)
        if samples is None:
            sample_cells = np.flatnonzero(self.mask)
            samples = centers.ravel()[sample_cells]
            weights = areas.ravel()[sample_cells]
        assert weights is not None and sample_cells is not None
        self.samples = np.asarray(samples, dtype=complex)
        self.weights = np.asarray(weights, dtype=float)
        self.sample_cells = np.asarray(sample_cells, dtype=np.int64)

        for array in (self.mask, self.samples, self.weights, self.sample_cells):
            array.setflags(write=False)

    def __len__(self):
        return len(self.samples)

    @property
    def num_cells(self) -> int:
        return int(self.mask.sum())

    @property
    def area(self) -> float:
        _, areas = lattice(self.h)
        return float(areas[self.mask].sum())

    @property
    def bounding_radius(self) -> float:
        # hyperbolic radius about 0 of a disc containing every occupied cell
        if self.num_cells == 0:
            return 0.0
        centers, _ = lattice(self.h)
        farthest = np.max(np.abs(centers[self.mask])) + self.h / math.sqrt(2.0)
        return float(2.0 * np.arctanh(min(farthest, INSIDE_LIMIT)))

    def contains_array(self, z: np.ndarray) -> np.ndarray:
        flat, valid = cell_index_array(z, self.h)
        return valid & self.mask.ravel()[flat]

    def boundary_mask(self, cell_mask: np.ndarray = None) -> np.ndarray:
        # occupied cells with a 4-neighbour outside the mask
        cell_mask = self.mask if cell_mask is None else cell_mask
        return cell_mask & ~ndimage.binary_erosion(cell_mask, border_value=0)

    def outer_ring_mask(self) -> np.ndarray:
        # free usable cells with an 8-neighbour in the mask
        _, areas = lattice(self.h)
        grown = ndimage.binary_dilation(self.mask, structure=np.ones((3, 3), dtype=bool))
        return grown & ~self.mask & (areas > 0)

    @property
    def outer_ring_area(self) -> float:
        _, areas = lattice(self.h)
        return float(areas[self.outer_ring_mask()].sum())

    def boundary_samples(self, keep: np.ndarray = None) -> np.ndarray:
        """
        Per-sample flag: does the sample sit in a boundary cell of the region, or of the cells holding
        the kept samples when keep is given.
        """
        if keep is None:
            return self.boundary_mask().ravel()[self.sample_cells]
        cell_mask = np.zeros(self.mask.size, dtype=bool)
        cell_mask[self.sample_cells[keep]] = True
        boundary = self.boundary_mask(cell_mask.reshape(self.mask.shape))
        return boundary.ravel()[self.sample_cells] & keep

    def union(self, other: 'Region') -> 'Region':
        assert self.h == other.h, f'cannot merge lattices {self.h} and {other.h}'
        return Region(self.mask | other.mask, self.h)

    def symmetric_difference_area(self, other: 'Region') -> float:
        assert self.h == other.h, f'cannot compare lattices {self.h} and {other.h}'
        _, areas = lattice(self.h)
        return float(areas[self.mask ^ other.mask].sum())

    def to_json(self) -> Dict:
        return {'model': MODEL_NAME, 'grid_h': self.h, 'window': WINDOW,
                'shape': list(self.mask.shape), 'runs': encode_mask(self.mask),
                'area': self.area}

    @classmethod
    def from_json(cls, json_obj: Dict) -> 'Region':
        h = json_obj['grid_h']
        return cls(decode_mask(json_obj['runs'], grid_size(h)), h)


def area(region: Region) -> float:
    return region.area


def region_to_json(region: Region) -> Dict:
    return region.to_json()


def region_from_json(json_obj: Dict) -> Region:
    return Region.from_json(json_obj)


def _supersample_offsets(k: int, h: float) -> np.ndarray:
    steps = ((np.arange(k) + 0.5) / k - 0.5) * h
    return (steps[None, :] + 1j * steps[:, None]).ravel()


def rasterize(spec: RegionSpec, h: float = None, supersample: int = None) -> Region:
    """
    Occupy every usable cell whose centre lies in one of the spec's discs or in the explicit mask,
    plus the cells holding the spec's points.

    :param spec: the region description
    :param h: lattice spacing, defaults to spec.grid_h
    :param supersample: number of sub-cell samples per axis in each disc or mask cell
    :raises RasterizationError: if nothing is occupied at this resolution
    """
    h = h if h is not None else spec.grid_h
    if h is None:
        raise ValueError('no lattice spacing given and the spec has no grid_h')
    k = supersample if supersample is not None else spec.supersample
    n = grid_size(h)
    centers, areas = lattice(h)
    usable = areas > 0

    mask = np.zeros((n, n), dtype=bool)
    if spec.discs:
        mask[usable] = spec.contains_array(centers[usable])
    if spec.mask_runs:
        if abs(spec.grid_h - h) > 1e-15:
            raise ValueError(f'explicit mask is on lattice {spec.grid_h}, requested {h}')
        explicit = decode_mask(spec.mask_runs, n)
        if np.any(explicit & ~usable):
            raise RegionWindowError('explicit mask occupies cells outside the usable window')
        mask |= explicit

    cells = np.flatnonzero(mask)
    offsets = _supersample_offsets(k, h)
    samples = [(centers.ravel()[cells][:, None] + offsets[None, :]).ravel()]
    weights = [np.repeat(areas.ravel()[cells] / (k * k), k * k)]
    sample_cells = [np.repeat(cells, k * k)]

    if spec.points:
        points = np.array(spec.points, dtype=complex)
        flat, valid = cell_index_array(points, h)
        if not np.all(valid):
            raise RasterizationError(f'points outside the lattice window at h = {h}')
        # points in cells already covered by discs add nothing; the rest share their cell's area
        fresh = ~mask.ravel()[flat]
        unique_cells, counts = np.unique(flat[fresh], return_counts=True)
        share = dict(zip(unique_cells.tolist(), counts.tolist()))
        samples.append(points[fresh])
        weights.append(np.array([areas.ravel()[c] / share[c] for c in flat[fresh]]))
        sample_cells.append(flat[fresh])
        mask.ravel()[flat] = True

    if not mask.any():
        raise RasterizationError(f'region spec occupies no cell at h = {h}; the resolution is too coarse '
                                 f'or the region lies outside the window')

    region = Region(mask, h, samples=np.concatenate(samples), weights=np.concatenate(weights),
                    sample_cells=np.concatenate(sample_cells))
    logging.debug(f'Rasterized region with {region.num_cells} cells and {len(region)} samples '
                  f'at h = {h}, area = {region.area:.6f}')
    return region


@dataclass
class SampledFunction:
    """
    A nonnegative function known at the samples of a region; integral = sum of value * weight.
    """
    region: Region
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        assert self.values.shape == self.region.samples.shape, 'one value per sample is required'
        if np.any(self.values < 0):
            raise ValueError('sampled functions must be nonnegative')

    @classmethod
    def from_callable(cls, region: Region, fn: Callable[[np.ndarray], np.ndarray]) -> 'SampledFunction':
        return cls(region, fn(region.samples))

    @classmethod
    def indicator(cls, region: Region) -> 'SampledFunction':
        return cls(region, np.ones(len(region)))

    @property
    def support(self) -> np.ndarray:
        return self.values > 0

    @property
    def integral(self) -> float:
        return float(np.sum(self.values * self.region.weights))
