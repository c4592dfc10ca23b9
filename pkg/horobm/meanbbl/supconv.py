"""
- Sup-convolution on the disc: the smallest lattice function h with
  h([x:y]_lam) >= M_p(f(x), g(y); lam) for every retained sample pair with f(x) g(y) > 0.
- Pairs are mapped block by block on the worker pool; block maxima are merged by np.maximum, so the
  result does not depend on the worker count.
"""

import logging

import numpy as np

from horobm.geometry.horocycle import horo_point_array
from horobm.meanbbl.dirbbl import scatter_max
from horobm.meanbbl.pmean import PMeanParam, p_mean_array
from horobm.regions.minkowski import DEFAULT_PAIR_CAP, PairSampler, map_pair_blocks
from horobm.regions.region import (
    EmptyRegionError, Region, SampledFunction, cell_flat_index, grid_size)


def sup_convolution(f: SampledFunction, g: SampledFunction, lam: float, p, out_h: float,
                    cap: int = DEFAULT_PAIR_CAP, seed: int = 0, threads: int = None) -> SampledFunction:
    """
    :param f: values at the samples of the first region
    :param g: values at the samples of the second region
    :param lam: fraction along the oriented horocycle, in (0, 1)
    :param p: p-mean exponent, at least -1/2
    :param out_h: lattice spacing of the result
    :return: h on the occupied cells of the output lattice, zero elsewhere
    """
    p = PMeanParam.parse(p)
    p.check_theorem_range()
    if not 0.0 < lam < 1.0:
        raise ValueError(f'lambda must lie in (0, 1), got {lam}')
    f_support, g_support = f.support, g.support
    if not f_support.any() or not g_support.any():
        raise EmptyRegionError('sup-convolution needs functions with nonempty positive support')

    sampler = PairSampler(f.region, g.region, cap=cap, seed=seed, a_keep=f_support, b_keep=g_support)
    b_samples = g.region.samples[sampler.b_index]
    b_values = g.values[sampler.b_index]
    n = grid_size(out_h)

    def work(block: np.ndarray):
        images = horo_point_array(f.region.samples[block][:, None], b_samples[None, :], lam)
        values = p_mean_array(f.values[block][:, None], b_values[None, :], lam, p)
        flat = cell_flat_index(images.ravel(), out_h)
        block_max = np.zeros(n * n)
        scatter_max(block_max, flat, values.ravel())
        return block_max

    table = np.zeros(n * n)
    for block_max in map_pair_blocks(sampler, work, threads, 'sup-convolution'):
        np.maximum(table, block_max, out=table)

    region = Region((table > 0).reshape(n, n), out_h)
    h = SampledFunction(region, table[region.sample_cells])
    logging.info(f'sup-convolution at p = {p}: {sampler.num_pairs} pairs -> {region.num_cells} cells, '
                 f'integral = {h.integral:.6f}')
    return h
