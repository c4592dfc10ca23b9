"""
- Horocyclic and geodesic Minkowski combinations of rasterized regions, horocyclic dilations, and the
  concentric-disc closed form.
- Sums are inner approximations: every retained sample pair (a, b) is mapped forward and the lattice
  cells that receive an image are occupied.
- When |A| * |B| exceeds the pair cap, interior samples are subsampled by a seeded permutation prefix;
  boundary samples are always kept. A larger cap therefore only adds pairs.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator, Optional

import numpy as np
from tqdm import tqdm

from horobm import util
from horobm.geometry.hypdisc import PointLike, as_complex, geodesic_point_array
from horobm.geometry.horocycle import horo_dilate_array, horo_point_array, horo_point_mirror_array
from horobm.regions.region import (
    DiscPrimitive, EmptyRegionError, RasterizationError, Region, RegionSpec, cell_flat_index,
    grid_size, lattice)

DEFAULT_PAIR_CAP = 40_000_000

# number of pairs mapped per work item
CHUNK_PAIRS = 1_000_000

PairMap = Callable[[np.ndarray, np.ndarray, float], np.ndarray]


class PairSampler:
    """
    Chooses the retained samples of A and B and hands out blocks of A-indices; each block is paired with
    every retained B sample.
    """

    def __init__(self, a: Region, b: Region, cap: int = DEFAULT_PAIR_CAP, seed: int = 0,
                 a_keep: np.ndarray = None, b_keep: np.ndarray = None):
        a_keep = np.ones(len(a), dtype=bool) if a_keep is None else np.asarray(a_keep, dtype=bool)
        b_keep = np.ones(len(b), dtype=bool) if b_keep is None else np.asarray(b_keep, dtype=bool)
        if not a_keep.any() or not b_keep.any():
            raise EmptyRegionError('cannot combine an empty set of samples')

        a_boundary = a.boundary_samples(a_keep)
        b_boundary = b.boundary_samples(b_keep)
        a_interior = a_keep & ~a_boundary
        b_interior = b_keep & ~b_boundary

        total = int(a_keep.sum()) * int(b_keep.sum())
        self.cap = cap
        self.subsampled = total > cap
        if not self.subsampled:
            self.a_index = np.flatnonzero(a_keep)
            self.b_index = np.flatnonzero(b_keep)
        else:
            fraction = self._interior_fraction(int(a_boundary.sum()), int(a_interior.sum()),
                                               int(b_boundary.sum()), int(b_interior.sum()), cap)
            rng_a = np.random.default_rng([seed, 0])
            rng_b = np.random.default_rng([seed, 1])
            self.a_index = self._retain(a_boundary, a_interior, fraction, rng_a)
            self.b_index = self._retain(b_boundary, b_interior, fraction, rng_b)
            logging.warning(f'{total} sample pairs exceed the cap of {cap}; keeping '
                            f'{len(self.a_index)} x {len(self.b_index)} samples')

    @staticmethod
    def _interior_fraction(na_bd: int, na_in: int, nb_bd: int, nb_in: int, cap: int) -> float:
        # largest f in [0, 1] with (na_bd + f na_in) (nb_bd + f nb_in) <= cap
        qa = na_in * nb_in
        qb = na_bd * nb_in + nb_bd * na_in
        qc = na_bd * nb_bd - cap
        if qc >= 0:
            logging.warning(f'boundary samples alone give {na_bd * nb_bd} pairs, above the cap of {cap}')
            return 0.0
        if qa == 0:
            return min(1.0, -qc / qb) if qb > 0 else 1.0
        return min(1.0, (-qb + math.sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa))

    @staticmethod
    def _retain(boundary: np.ndarray, interior: np.ndarray, fraction: float,
                rng: np.random.Generator) -> np.ndarray:
        interior_index = np.flatnonzero(interior)
        order = rng.permutation(len(interior_index))
        chosen = interior_index[order[:int(math.floor(fraction * len(interior_index)))]]
        return np.sort(np.concatenate([np.flatnonzero(boundary), chosen]))

    @property
    def num_pairs(self) -> int:
        return len(self.a_index) * len(self.b_index)

    def blocks(self) -> Iterator[np.ndarray]:
        rows = max(1, CHUNK_PAIRS // max(1, len(self.b_index)))
        for start in range(0, len(self.a_index), rows):
            yield self.a_index[start:start + rows]


def map_pair_blocks(sampler: PairSampler, work: Callable[[np.ndarray], object],
                    threads: int = None, desc: str = 'pairs') -> Iterator:
    """
    Run work on every block of A-indices; results come back in block order whatever the worker count.
    """
    blocks = list(sampler.blocks())
    num_threads = util.get_num_threads(threads)
    with ThreadPoolExecutor(max_workers=num_threads) as executor:
        for result in tqdm(executor.map(work, blocks), total=len(blocks), desc=desc,
                           disable=len(blocks) < 2):
            yield result


def _check_fraction(lam: float, closed: bool = False):
    ok = 0.0 <= lam <= 1.0 if closed else 0.0 < lam < 1.0
    if not ok:
        raise ValueError(f'lambda must lie in {"[0, 1]" if closed else "(0, 1)"}, got {lam}')


def _pair_sum(a: Region, b: Region, lam: float, out_h: float, pair_map: PairMap,
              cap: int, seed: int, threads: Optional[int], desc: str) -> Region:
    if len(a) == 0 or len(b) == 0:
        raise EmptyRegionError('Minkowski combination of an empty region')
    sampler = PairSampler(a, b, cap=cap, seed=seed)
    b_samples = b.samples[sampler.b_index]
    n = grid_size(out_h)
    hits = np.zeros(n * n, dtype=bool)

    def work(block: np.ndarray) -> np.ndarray:
        images = pair_map(a.samples[block][:, None], b_samples[None, :], lam)
        return np.unique(cell_flat_index(images.ravel(), out_h))

    for flat in map_pair_blocks(sampler, work, threads, desc):
        hits[flat] = True

    result = Region(hits.reshape(n, n), out_h)
    logging.info(f'{desc}: {sampler.num_pairs} pairs -> {result.num_cells} cells, '
                 f'area = {result.area:.6f}')
    return result


def _both_orientations(x: np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    return np.concatenate([horo_point_array(x, y, lam).ravel(),
                           horo_point_mirror_array(x, y, lam).ravel()])


def minkowski_horo(a: Region, b: Region, lam: float, out_h: float, cap: int = DEFAULT_PAIR_CAP,
                   seed: int = 0, threads: int = None) -> Region:
    _check_fraction(lam)
    return _pair_sum(a, b, lam, out_h, horo_point_array, cap, seed, threads, 'horocyclic sum')


def minkowski_horo_unoriented(a: Region, b: Region, lam: float, out_h: float,
                              cap: int = DEFAULT_PAIR_CAP, seed: int = 0,
                              threads: int = None) -> Region:
    _check_fraction(lam)
    return _pair_sum(a, b, lam, out_h, _both_orientations, cap, seed, threads,
                     'unoriented horocyclic sum')


def minkowski_geodesic(a: Region, b: Region, lam: float, out_h: float, cap: int = DEFAULT_PAIR_CAP,
                       seed: int = 0, threads: int = None) -> Region:
    _check_fraction(lam, closed=True)
    return _pair_sum(a, b, lam, out_h, geodesic_point_array, cap, seed, threads, 'geodesic sum')


def dilate_region(origin: PointLike, b: Region, t: float, out_h: float) -> Region:
    """
    Horocyclic dilation t x B about origin, rasterized on the lattice of spacing out_h.

    Dilation by t and by 1/t about the same origin are inverse to each other, so a cell of the output is
    occupied iff its centre pulls back into an occupied cell of B. Forward images of B's samples are
    only used to detect a result that leaves the window.
    """
    if not t > 0:
        raise ValueError(f'dilation factor must be positive, got {t}')
    if len(b) == 0:
        raise EmptyRegionError('dilation of an empty region')
    o = as_complex(origin)
    cell_flat_index(horo_dilate_array(o, b.samples, t), out_h)

    centers, areas = lattice(out_h)
    usable = areas > 0
    mask = np.zeros(centers.shape, dtype=bool)
    mask[usable] = b.contains_array(horo_dilate_array(o, centers[usable], 1.0 / t))
    if not mask.any():
        raise RasterizationError(f'dilation by {t} is smaller than one cell at h = {out_h}')
    return Region(mask, out_h)


def succinct_sum(origin: PointLike, a: Region, b: Region, out_h: float,
                 cap: int = DEFAULT_PAIR_CAP, seed: int = 0, threads: int = None) -> Region:
    # [A:B] = 2 x [A:B]_{1/2}, whose area is at least (sqrt(area A) + sqrt(area B))^2
    midpoints = minkowski_horo(a, b, 0.5, out_h, cap=cap, seed=seed, threads=threads)
    return dilate_region(origin, midpoints, 2.0, out_h)


def concentric_radius(r0: float, r1: float, lam: float) -> float:
    if r0 < 0 or r1 < 0:
        raise ValueError(f'radii must be nonnegative, got {r0} and {r1}')
    return 2.0 * math.asinh((1.0 - lam) * math.sinh(r0 / 2.0) + lam * math.sinh(r1 / 2.0))


def random_region_spec(rng: np.random.Generator, max_discs: int = 4, max_center_dist: float = 2.0,
                       radius_range=(0.2, 1.2), grid_h: float = None,
                       supersample: int = 1) -> RegionSpec:
    """
    A union of 1 to max_discs hyperbolic discs with centres within max_center_dist of 0 and radii drawn
    uniformly from radius_range.
    """
    discs = []
    for _ in range(int(rng.integers(1, max_discs + 1))):
        dist = rng.uniform(0.0, max_center_dist)
        angle = rng.uniform(0.0, 2.0 * math.pi)
        center = math.tanh(dist / 2.0) * complex(math.cos(angle), math.sin(angle))
        discs.append(DiscPrimitive(center, float(rng.uniform(*radius_range))))
    return RegionSpec(discs=discs, grid_h=grid_h, supersample=supersample)
