"""
- The experiments behind the command line. Each cmd_* function takes an ExperimentConfig and returns a
  Report; tolerances come from the config, randomness from numpy generators seeded by config.seed.
- Area inequalities on rasterized regions are judged with a slack calibrated per run: the relative
  area error of a reference disc rasterized at the configured spacing, scaled and clipped as configured.
"""

import logging
import math
from typing import Callable, Dict, List, Tuple

import numpy as np
from tqdm import tqdm

from horobm.geometry.finsler import (
    check_deta, check_minimality, curve_length_phi, dist_phi, signed_geodesic_curvature)
from horobm.geometry.horocycle import Horocycle, horo_arc, horo_from_tangent
from horobm.geometry.hypdisc import TangentVec, disc_area, hyp_dist_array
from horobm.harness.config import ExperimentConfig
from horobm.harness.report import Report
from horobm.meanbbl.density import check_dominance, quantile_map
from horobm.meanbbl.dirbbl import (
    change_of_variables_integral, negative_control_pair, random_dominated_pair, random_piecewise_linear,
    sup_convolution_1d, verify_dirbbl)
from horobm.meanbbl.needle import AffineNeedle, needle_bm
from horobm.meanbbl.pmean import INF, PMeanParam, holder_gap, p_mean, p_mean_array
from horobm.meanbbl.supconv import sup_convolution
from horobm.needles.instance import (
    MassInstance, annulus_instance, arc_instance, polar_family_instance, polar_horocycle, random_instance,
    region_instance, trivial_instance)
from horobm.needles.jacobian import jacobian_affine_check, ray_family_check, sign_constancy_check
from horobm.needles.kantorovich import distance_matrix, solve_kantorovich, transport_cost_lp
from horobm.needles.rays import disintegration_coverage, extract_rays, mass_balance, strain_pairs
from horobm.regions.minkowski import (
    concentric_radius, dilate_region, minkowski_geodesic, minkowski_horo, random_region_spec,
    succinct_sum)
from horobm.regions.region import Region, RegionSpec, SampledFunction, lattice, rasterize, region_to_json
from horobm.regions.render import render_regions_svg


def _rasterize(config: ExperimentConfig, spec: RegionSpec) -> Region:
    h = spec.grid_h if spec.grid_h is not None else config.grid_h
    supersample = spec.supersample if spec.supersample != 1 else config.supersample
    return rasterize(spec, h, supersample)


def _region(config: ExperimentConfig, name: str, default: RegionSpec) -> Region:
    return _rasterize(config, config.regions.get(name, default))


def _horo_sum(config: ExperimentConfig, a: Region, b: Region, lam: float) -> Region:
    return minkowski_horo(a, b, lam, config.out_h, cap=config.pair_cap, seed=config.seed,
                          threads=config.threads)


def calibrate_slack(config: ExperimentConfig, h: float = None) -> Tuple[float, float]:
    """
    :param h: lattice spacing to calibrate, default = config.grid_h
    :return: (slack, relative area error of the reference disc)
    """
    radius = config.param('calibration_radius', 1.0)
    measured = _rasterize(config, RegionSpec.disc(0j, radius, grid_h=h)).area
    exact = disc_area(radius)
    error = abs(measured - exact) / exact
    slack = float(np.clip(config.tol('slack_factor') * error, config.tol('slack_min'),
                          config.tol('slack_max')))
    logging.info(f'Rasterization slack {slack:.4f} from a relative disc-area error of {error:.2e}')
    return slack, error


def _bm_row(a: Region, b: Region, s: Region, lam: float) -> Dict:
    lhs = math.sqrt(s.area)
    rhs = (1.0 - lam) * math.sqrt(a.area) + lam * math.sqrt(b.area)
    return {'lam': lam, 'area_a': a.area, 'area_b': b.area, 'area_sum': s.area, 'lhs': lhs, 'rhs': rhs,
            'ratio': lhs / rhs}


def _figure(report: Report, config: ExperimentConfig, name: str, layers, title: str):
    if not config.svg:
        return
    render_regions_svg(config.out_dir / name, layers, title=title)
    report.figures.append(name)


def cmd_verify_bm(config: ExperimentConfig) -> Report:
    report = Report('verify-bm', config.to_json())
    slack, error = calibrate_slack(config)
    report.measure(kind='calibration', rel_area_error=error, slack=slack)

    # concentric discs: [A:B]_lam is the disc of radius 2 asinh((1 - lam) sinh(r0/2) + lam sinh(r1/2))
    r0, r1 = config.param('concentric_radii', [1.0, 2.0])
    lam = config.param('concentric_lam', 0.5)
    a = _rasterize(config, RegionSpec.disc(0j, r0))
    b = _rasterize(config, RegionSpec.disc(0j, r1))
    s = _horo_sum(config, a, b, lam)
    row = _bm_row(a, b, s, lam)
    r_lam = concentric_radius(r0, r1, lam)
    report.measure(kind='concentric', radius=r_lam, exact_area=disc_area(r_lam), **row)
    report.check('concentric_equality', abs(row['ratio'] - 1.0) <= config.tol('concentric_rel'),
                 abs(row['ratio'] - 1.0), config.tol('concentric_rel'), f'r0 = {r0}, r1 = {r1}, lam = {lam}')
    report.attachments['concentric_sum.json'] = region_to_json(s)
    _figure(report, config, 'concentric.svg',
            [(b, None, 'B'), (s, None, '[A:B]'), (a, None, 'A')], 'Concentric discs')

    # a singleton A makes [A:B]_lam the dilation of B by lam, of area lam^2 area(B)
    r_single = config.param('singleton_radius', 2.0)
    point = _rasterize(config, RegionSpec.point(0j))
    b = _rasterize(config, RegionSpec.disc(0j, r_single))
    s = _horo_sum(config, point, b, lam)
    ratio = math.sqrt(s.area) / (lam * math.sqrt(b.area))
    report.measure(kind='singleton', lam=lam, area_b=b.area, area_sum=s.area, ratio=ratio)
    report.check('singleton_equality', abs(ratio - 1.0) <= config.tol('singleton_rel'),
                 abs(ratio - 1.0), config.tol('singleton_rel'), f'B = disc(0, {r_single})')

    # configured pairs
    for name_a, name_b in config.param('pairs', [['A', 'B']] if {'A', 'B'} <= set(config.regions) else []):
        a, b = _rasterize(config, config.region(name_a)), _rasterize(config, config.region(name_b))
        for lam in config.lams:
            s = _horo_sum(config, a, b, lam)
            row = _bm_row(a, b, s, lam)
            report.measure(kind='pair', a=name_a, b=name_b, **row)
            report.check(f'bm_{name_a}_{name_b}_{lam}', row['lhs'] >= (1.0 - slack) * row['rhs'],
                         row['ratio'], slack)
            geodesic = minkowski_geodesic(a, b, lam, config.out_h, cap=config.pair_cap, seed=config.seed,
                                          threads=config.threads)
            _figure(report, config, f'{name_a}_{name_b}_{lam}.svg',
                    [(a, None, name_a), (b, None, name_b), (geodesic, None, 'geodesic'),
                     (s, None, 'horocyclic')],
                    f'Horocyclic vs. geodesic Minkowski combination, lambda = {lam}')

    # seeded random disc unions
    rng = np.random.default_rng(config.seed)
    num_random = config.param('num_random_pairs', 100)
    random_h = config.param('random_grid_h', config.grid_h)
    random_slack, _ = calibrate_slack(config, random_h)
    violations, worst = 0, math.inf
    for idx in tqdm(range(num_random), desc='random pairs', disable=num_random == 0):
        spec_a = random_region_spec(rng, grid_h=random_h, supersample=config.supersample)
        spec_b = random_region_spec(rng, grid_h=random_h, supersample=config.supersample)
        lam = config.lams[idx % len(config.lams)]
        a, b = rasterize(spec_a), rasterize(spec_b)
        s = minkowski_horo(a, b, lam, max(config.out_h, random_h), cap=config.pair_cap, seed=config.seed,
                           threads=config.threads)
        row = _bm_row(a, b, s, lam)
        report.measure(kind='random', trial=idx, **row)
        worst = min(worst, row['ratio'])
        violations += row['lhs'] < (1.0 - random_slack) * row['rhs']
    if num_random:
        report.check('random_sweep_violations', violations == 0, violations, random_slack,
                     f'{num_random} pairs, worst lhs / rhs = {worst:.4f}')
    return report


def gaussian_on_disc(center: complex, sigma: float) -> Callable[[np.ndarray], np.ndarray]:
    # exp(-d(x, center)^2 / (2 sigma^2)) in the hyperbolic distance
    return lambda z: np.exp(-hyp_dist_array(z, center) ** 2 / (2.0 * sigma ** 2))


def _sampled(region: Region, fn_json: Dict) -> SampledFunction:
    if fn_json.get('kind', 'indicator') == 'indicator':
        return SampledFunction.indicator(region)
    if fn_json['kind'] == 'gaussian':
        center = complex(*fn_json.get('center', [0.0, 0.0]))
        return SampledFunction.from_callable(region, gaussian_on_disc(center, fn_json.get('sigma', 0.5)))
    raise ValueError(f'unknown function kind {fn_json["kind"]}')


def _bbl_row(f: SampledFunction, g: SampledFunction, h: SampledFunction, lam: float,
             p: PMeanParam) -> Dict:
    q = p.conclusion_exponent()
    rhs = p_mean(f.integral, g.integral, lam, q)
    return {'lam': lam, 'p': str(p), 'q': str(q), 'int_f': f.integral, 'int_g': g.integral,
            'int_h': h.integral, 'rhs': rhs, 'ratio': h.integral / rhs if rhs > 0 else math.inf}


def cmd_verify_bbl(config: ExperimentConfig) -> Report:
    report = Report('verify-bbl', config.to_json())
    slack, error = calibrate_slack(config)
    report.measure(kind='calibration', rel_area_error=error, slack=slack)
    for p in config.ps:
        p.check_theorem_range()

    a = _region(config, 'A', RegionSpec.disc(0j, 1.0))
    b = _region(config, 'B', RegionSpec.disc(0j, 1.5))
    functions = config.param('functions', {'f': {'kind': 'gaussian', 'sigma': 0.5},
                                           'g': {'kind': 'gaussian', 'sigma': 0.8}})
    f, g = _sampled(a, functions['f']), _sampled(b, functions['g'])
    for p in config.ps:
        for lam in config.lams:
            h = sup_convolution(f, g, lam, p, config.out_h, cap=config.pair_cap, seed=config.seed,
                                threads=config.threads)
            row = _bbl_row(f, g, h, lam, p)
            report.measure(kind='configured', **row)
            report.check(f'bbl_p{p}_lam{lam}', row['int_h'] >= (1.0 - slack) * row['rhs'], row['ratio'],
                         slack)

    # for p = +inf and indicators the inequality is the Brunn-Minkowski one, and h the indicator of the sum
    lam = config.lams[0]
    f_ind, g_ind = SampledFunction.indicator(a), SampledFunction.indicator(b)
    h = sup_convolution(f_ind, g_ind, lam, INF, config.out_h, cap=config.pair_cap, seed=config.seed,
                        threads=config.threads)
    s = _horo_sum(config, a, b, lam)
    gap = abs(h.integral - s.area) / s.area
    report.measure(kind='p_inf_indicator', lam=lam, int_h=h.integral, area_sum=s.area)
    # the two pair samples agree exactly below the pair cap
    report.check('p_inf_reduces_to_bm', gap <= slack, gap, slack)

    rng = np.random.default_rng(config.seed)
    num_random = config.param('num_random', 10)
    p_random = PMeanParam.parse(config.param('random_p', 1.0))
    lam_random = config.param('random_lam', 0.3)
    random_h = config.param('random_grid_h', config.grid_h)
    random_slack, _ = calibrate_slack(config, random_h)
    violations = 0
    for idx in tqdm(range(num_random), desc='random densities', disable=num_random == 0):
        regions = [rasterize(random_region_spec(rng, max_discs=2, grid_h=random_h,
                                                supersample=config.supersample)) for _ in range(2)]
        fns = []
        for region in regions:
            center = region.samples[int(rng.integers(len(region)))]
            fns.append(SampledFunction.from_callable(
                region, gaussian_on_disc(center, float(rng.uniform(0.3, 1.5)))))
        h = sup_convolution(fns[0], fns[1], lam_random, p_random, max(config.out_h, random_h),
                            cap=config.pair_cap, seed=config.seed, threads=config.threads)
        row = _bbl_row(fns[0], fns[1], h, lam_random, p_random)
        report.measure(kind='random', trial=idx, **row)
        violations += row['int_h'] < (1.0 - random_slack) * row['rhs']
    if num_random:
        report.check('random_sweep_violations', violations == 0, violations, random_slack,
                     f'{num_random} trials at p = {p_random}, lam = {lam_random}')
    return report


def cmd_scaling(config: ExperimentConfig) -> Report:
    report = Report('scaling', config.to_json())
    slack, error = calibrate_slack(config)
    report.measure(kind='calibration', rel_area_error=error, slack=slack)
    origin = complex(*config.param('origin', [0.0, 0.0]))
    b = _region(config, 'B', RegionSpec.disc(0.3, 0.8))

    for t in config.param('factors', [0.25, 0.5, 2.0, 3.0]):
        dilated = dilate_region(origin, b, t, config.out_h)
        ratio = dilated.area / b.area
        rel = abs(ratio / t ** 2 - 1.0)
        report.measure(kind='dilation', t=t, area_b=b.area, area_dilated=dilated.area, ratio=ratio,
                       expected=t ** 2)
        report.check(f'dilation_{t}', rel <= config.tol('scaling_rel'), rel, config.tol('scaling_rel'))

    # [A:B] = 2 x [A:B]_{1/2} has area at least (sqrt(area A) + sqrt(area B))^2
    a = _region(config, 'A', RegionSpec.disc(-0.3, 0.6))
    s = succinct_sum(origin, a, b, config.out_h, cap=config.pair_cap, seed=config.seed,
                     threads=config.threads)
    lhs, rhs = math.sqrt(s.area), math.sqrt(a.area) + math.sqrt(b.area)
    report.measure(kind='succinct', area_a=a.area, area_b=b.area, area_sum=s.area, lhs=lhs, rhs=rhs,
                   ratio=lhs / rhs)
    report.check('succinct_bm', lhs >= (1.0 - slack) * rhs, lhs / rhs, slack)
    _figure(report, config, 'succinct.svg', [(a, None, 'A'), (b, None, 'B'), (s, None, '[A:B]')],
            'Succinct horocyclic sum')
    return report


def cmd_bottleneck(config: ExperimentConfig) -> Report:
    report = Report('bottleneck', config.to_json())
    slack, error = calibrate_slack(config)
    report.measure(kind='calibration', rel_area_error=error, slack=slack)
    radius = config.param('radius', 0.5574)
    lam = config.param('lam', 0.5)
    separations = sorted(config.param('separations', [0.0, 2.0, 4.0, 6.0, 8.0]))

    geodesic_areas = []
    layers = []
    for d in separations:
        # centres at hyperbolic distance d / 2 on either side of 0
        c = math.tanh(d / 4.0)
        a = _rasterize(config, RegionSpec.disc(-c, radius))
        b = _rasterize(config, RegionSpec.disc(c, radius))
        # coincident discs are compared cell by cell, so they share A's lattice
        out_h = a.h if d == 0 else config.out_h
        geodesic = minkowski_geodesic(a, b, lam, out_h, cap=config.pair_cap, seed=config.seed,
                                      threads=config.threads)
        horo = _horo_sum(config, a, b, lam)
        row = _bm_row(a, b, horo, lam)
        if d == 0:
            _coincident_check(report, a, geodesic, slack)
        else:
            geodesic_areas.append(geodesic.area)
        report.measure(kind='separation', separation=d, area_geodesic=geodesic.area, **row)
        report.check(f'horocyclic_bm_d{d}', row['lhs'] >= (1.0 - slack) * row['rhs'], row['ratio'], slack)
        layers = [(a, None, 'A'), (b, None, 'B'), (geodesic, None, 'geodesic midpoints'),
                  (horo, None, 'horocyclic midpoints')]

    increases = int(np.sum(np.diff(geodesic_areas) >= 0))
    report.check('geodesic_strictly_decreasing', increases == 0, increases, 0.0,
                 'areas ' + ', '.join(f'{area:.5f}' for area in geodesic_areas))
    if layers:
        _figure(report, config, 'bottleneck.svg', layers, f'Separation {separations[-1]}')
    return report


def _coincident_check(report: Report, a: Region, midpoints: Region, slack: float):
    """
    At separation 0 the midpoint set of a disc with itself is the disc: it holds every cell of A, and by
    convexity it leaves A by at most the ring of cells touching A from outside.
    """
    _, areas = lattice(a.h)
    missing = float(areas[a.mask & ~midpoints.mask].sum()) / a.area
    ring = a.outer_ring_area / a.area
    excess = (midpoints.area - a.area) / a.area
    gap = max(missing, excess - ring)
    report.measure(kind='coincident', area_a=a.area, area_geodesic=midpoints.area,
                   ring_area=a.outer_ring_area, missing=missing)
    report.check('geodesic_coincident_is_disc', gap <= slack, gap, slack,
                 f'excess {excess:.5f} against a one-cell ring of {ring:.5f}')


def _needle_run(inst: MassInstance, fit_tol: float):
    dist = distance_matrix(inst)
    u, w1 = solve_kantorovich(inst, dist)
    strain = strain_pairs(inst, u, dist=dist)
    rays = extract_rays(inst, strain, u, fit_tol)
    return dist, u, w1, strain, rays


def _ray_param_error(rays, horocycles: List[Horocycle]) -> float:
    # each true horocycle against its closest fitted ray, in (lam, omega)
    errors = []
    for h in horocycles:
        truth = np.array([h.lam, h.omega.real, h.omega.imag])
        errors.append(min(float(np.max(np.abs(ray.params - truth))) for ray in rays))
    return max(errors)


def cmd_needles(config: ExperimentConfig) -> Report:
    report = Report('needles', config.to_json())
    fit_tol = config.tol('ray_params')
    rng = np.random.default_rng(config.seed)

    # two points: W1 is the distance
    x1, x2 = 0.1 + 0.2j, -0.3 + 0.1j
    two = MassInstance(np.array([x1, x2]), [1.0, 0.0], [0.0, 1.0])
    _, u, w1, _, _ = _needle_run(two, fit_tol)
    expected = dist_phi(x1, x2)
    report.check('two_point_w1', abs(w1 - expected) <= config.tol('duality_gap'), abs(w1 - expected),
                 config.tol('duality_gap'))

    # duality on random instances
    worst_gap = 0.0
    num_dual = config.param('duality_instances', 20)
    for idx in tqdm(range(num_dual), desc='duality', disable=num_dual == 0):
        inst = random_instance(rng, config.param('duality_n', 16))
        dist = distance_matrix(inst)
        u, w1 = solve_kantorovich(inst, dist)
        primal = transport_cost_lp(inst, dist)
        gap = abs(w1 - primal)
        worst_gap = max(worst_gap, gap)
        report.measure(kind='duality', trial=idx, n=len(inst), w1=w1, primal=primal, gap=gap,
                       max_violation=u.max_violation(dist))
        report.check(f'feasibility_{idx}', u.is_feasible(dist, config.tol('feasibility')),
                     u.max_violation(dist), config.tol('feasibility'))
    if num_dual:
        report.check('duality_gap', worst_gap <= config.tol('duality_gap'), worst_gap,
                     config.tol('duality_gap'))

    # nothing to transport
    trivial = trivial_instance(rng.uniform(-0.5, 0.5, 8) + 1j * rng.uniform(-0.5, 0.5, 8))
    _, _, w1, strain, rays = _needle_run(trivial, fit_tol)
    report.check('trivial_no_rays', len(rays) == 0 and w1 == 0.0, len(rays), 0.0)

    # mass along one known horocycle arc
    arc = config.param('arc', {'lam': 1.0, 't0': 0.0, 'omega': [1.0, 0.0], 't_start': -1.0,
                               't_end': 1.0, 'n': 40})
    h = Horocycle(arc['lam'], arc['t0'], complex(*arc['omega']))
    _ray_checks(report, config, 'arc', arc_instance(h, arc['t_start'], arc['t_end'], arc['n']), [h])

    # K horocycles leaving a common point
    polar = config.param('polar', {'origin': [0.0, 0.0], 't_start': 0.3, 't_end': 1.5, 'n': 20})
    origin = complex(*polar['origin'])
    for k in config.param('ray_counts', [1, 2, 3]):
        thetas = [0.3 + 2.0 * math.pi * j / k for j in range(k)]
        inst = polar_family_instance(origin, thetas, polar['t_start'], polar['t_end'], polar['n'])
        truth = [polar_horocycle(origin, theta) for theta in thetas]
        _ray_checks(report, config, f'polar_{k}', inst, truth)

    # indicator of a horocyclic polar annulus sent to the next annulus out: each polar horocycle is a ray
    annuli = config.param('annuli', {'origin': [0.0, 0.0], 'radii': [0.6, 1.2, 1.8], 'num_angles': 6,
                                     'num_radii': 6})
    origin = complex(*annuli['origin'])
    inst = annulus_instance(origin, annuli['radii'], annuli['num_angles'], annuli['num_radii'])
    thetas = [0.3 + 2.0 * math.pi * j / annuli['num_angles'] for j in range(annuli['num_angles'])]
    annuli_rays = _ray_checks(report, config, 'annuli', inst, [polar_horocycle(origin, t) for t in thetas])

    # lattice region instance: lattice points are not co-horocyclic, so rays and balance are only measured
    a = _region(config, 'A', RegionSpec.disc(-0.2, 0.5, grid_h=0.1))
    b = _region(config, 'B', RegionSpec.disc(0.2, 0.5, grid_h=0.1))
    inst = region_instance(a, b)
    dist, u, w1, strain, rays = _needle_run(inst, fit_tol)
    balance = mass_balance(inst, rays, config.tol('ray_balance'))
    report.measure(kind='region', n=len(inst), w1=w1, num_rays=len(rays),
                   num_strain_pairs=len(strain.pairs), num_loose=len(strain.loose_points),
                   coverage_gap=disintegration_coverage(inst, rays, strain),
                   max_ray_residual=balance.max_relative_residual)
    report.check('region_feasibility', u.is_feasible(dist, config.tol('feasibility')),
                 u.max_violation(dist), config.tol('feasibility'))
    report.attachments['region_rays.json'] = {'instance': inst.to_json(), 'w1': w1,
                                              'rays': [r.to_json() for r in rays],
                                              'balance': balance.to_json()}

    _jacobian_checks(report, config, annuli_rays)
    return report


def _ray_checks(report: Report, config: ExperimentConfig, label: str, inst: MassInstance,
                truth: List[Horocycle]):
    dist, u, w1, strain, rays = _needle_run(inst, config.tol('ray_params'))
    balance = mass_balance(inst, rays, config.tol('ray_balance'))
    coverage = disintegration_coverage(inst, rays, strain)
    error = _ray_param_error(rays, truth) if rays else math.inf
    report.measure(kind='rays', instance=label, n=len(inst), w1=w1, num_rays=len(rays),
                   expected_rays=len(truth), param_error=error,
                   max_ray_residual=balance.max_relative_residual, coverage_gap=coverage)
    report.check(f'{label}_feasibility', u.is_feasible(dist, config.tol('feasibility')),
                 u.max_violation(dist), config.tol('feasibility'))
    report.check(f'{label}_ray_count', len(rays) == len(truth), len(rays), 0.0,
                 f'expected {len(truth)}')
    report.check(f'{label}_ray_params', error <= config.tol('ray_params'), error, config.tol('ray_params'))
    report.check(f'{label}_mass_balance', balance.passed, balance.max_relative_residual,
                 config.tol('ray_balance'))
    report.check(f'{label}_coverage', coverage <= config.tol('coverage'), coverage, config.tol('coverage'))
    report.attachments[f'{label}_rays.json'] = {'w1': w1, 'rays': [r.to_json() for r in rays],
                                                'balance': balance.to_json()}
    return rays


def _jacobian_checks(report: Report, config: ExperimentConfig, rays):
    kwargs = {'residual_tol': config.tol('jacobian_residual'),
              'coefficient_tol': config.tol('jacobian_coefficient')}
    t_grid = np.linspace(0.1, 2.0, 20)
    families = {
        # horocyclic polar coordinates: det dF = t
        'polar': (lambda y: 1.0, lambda y: 0.0, lambda y: y),
        'growing_lam': (lambda y: 1.0 + y, lambda y: 0.0, lambda y: 0.0),
        'shifted': (lambda y: 2.0, lambda y: y, lambda y: 2.0 * y),
    }
    for name, (lam_fn, t0_fn, phi_fn) in families.items():
        result = jacobian_affine_check(lam_fn, t0_fn, phi_fn, 0.0, t_grid, **kwargs)
        report.measure(kind='jacobian', family=name, slope=result.slope, intercept=result.intercept,
                       expected_slope=result.expected_slope,
                       expected_intercept=result.expected_intercept, residual=result.residual)
        report.check(f'jacobian_{name}', result.passed, max(result.slope_error, result.intercept_error),
                     config.tol('jacobian_coefficient'))

    polar = families['polar']
    constant, _ = sign_constancy_check(jacobian_affine_check(*polar, 0.0, t_grid, **kwargs))
    report.check('sign_constant_positive_t', constant, 0.0, 0.0)
    # det dF = t changes sign at the common origin
    constant, root = sign_constancy_check(jacobian_affine_check(*polar, 0.0, np.linspace(-1.0, 1.0, 21),
                                                                **kwargs))
    root_error = abs(root) if root is not None else math.inf
    report.check('sign_change_at_origin', not constant and root_error <= config.tol('jacobian_coefficient'),
                 root_error, config.tol('jacobian_coefficient'))

    if len(rays) >= 2:
        result = ray_family_check([ray.horocycle for ray in rays], t_grid, **kwargs)
        report.measure(kind='jacobian', family='fitted_rays', slope=result.slope,
                       intercept=result.intercept, expected_slope=result.expected_slope,
                       expected_intercept=result.expected_intercept, residual=result.residual)
        report.check('jacobian_fitted_rays', result.passed, result.residual,
                     config.tol('jacobian_residual'))


def cmd_dirbbl(config: ExperimentConfig) -> Report:
    report = Report('dirbbl', config.to_json())
    rng = np.random.default_rng(config.seed)
    step = config.param('step', 2e-3)
    tol = config.tol('dirbbl_conclusion')

    num_trials = config.param('trials', 200)
    violations, cov_violations, not_applicable = 0, 0, 0
    for idx in tqdm(range(num_trials), desc='directed BBL', disable=num_trials == 0):
        f, g = random_dominated_pair(rng, step)
        lam = float(rng.uniform(0.1, 0.9))
        p = config.ps[idx % len(config.ps)]
        h = sup_convolution_1d(f, g, lam, p)
        result = verify_dirbbl(f, g, h, lam, p, tol=tol)
        cov = change_of_variables_integral(f, g, h, lam, n=config.param('cov_levels', 20_000))
        violations += not result.holds
        not_applicable += not result.applicable
        cov_violations += cov > h.mass + config.tol('change_of_variables')
        report.measure(kind='dirbbl', trial=idx, lam=lam, p=str(p), lhs=result.lhs, rhs=result.rhs,
                       dominance_gap=result.dominance_gap, change_of_variables=cov)
    if num_trials:
        report.check('dirbbl_violations', violations == 0, violations, tol, f'{num_trials} trials')
        report.check('dirbbl_applicable', not_applicable == 0, not_applicable, 0.0,
                     'dominance and hypothesis hold on every trial')
        report.check('change_of_variables_bound', cov_violations == 0, cov_violations,
                     config.tol('change_of_variables'))

    # F to the right of G: dominance fails and so does the conclusion
    f, g = negative_control_pair(step)
    h = sup_convolution_1d(f, g, 0.5, 1.0)
    control = verify_dirbbl(f, g, h, 0.5, 1.0, tol=tol)
    report.measure(kind='negative_control', lhs=control.lhs, rhs=control.rhs,
                   dominance_gap=control.dominance_gap)
    report.check('negative_control_fails', control.counterexample and not control.dominance,
                 control.rhs - control.lhs, tol)

    # needle-wise Brunn-Minkowski, exact
    needle_cases = [
        ('uniform', AffineNeedle(0.0, 10.0, 1.0, 0.0), [(0.0, 1.0)], [(4.0, 5.0)]),
        ('linear', AffineNeedle(0.0, 10.0, 0.0, 1.0), [(0.0, 1.0)], [(4.0, 5.0)]),
        ('dirac', AffineNeedle.dirac(2.0), [(1.0, 3.0)], [(2.0, 4.0)]),
    ]
    for name, needle, a_set, b_set in needle_cases:
        result = needle_bm(needle, a_set, b_set, 0.5, tol=config.tol('needle_bm'))
        report.measure(kind='needle_bm', case=name, mass_a=result.mass_a, mass_b=result.mass_b,
                       mass_sum=result.mass_sum, lhs=result.lhs, rhs=result.rhs)
        report.check(f'needle_bm_{name}', result.passed, result.lhs - result.rhs, config.tol('needle_bm'))

    _mean_checks(report, config, rng)
    _quantile_check(report, config, rng, step)
    return report


def _mean_checks(report: Report, config: ExperimentConfig, rng: np.random.Generator):
    n = config.param('mean_tuples', 10_000)
    a, b = rng.uniform(0.0, 5.0, n), rng.uniform(0.0, 5.0, n)
    lam = rng.uniform(0.01, 0.99, n)
    ps = rng.uniform(-3.0, 3.0, (n, 2))
    # powers 1/p amplify rounding near p = 0
    ps = np.sort(np.where(np.abs(ps) < 1e-2, np.copysign(1e-2, ps), ps), axis=1)
    low = np.array([p_mean_array(a[k], b[k], lam[k], ps[k, 0]) for k in range(n)])
    high = np.array([p_mean_array(a[k], b[k], lam[k], ps[k, 1]) for k in range(n)])
    worst = float(np.max((low - high) / np.maximum(high, 1.0)))
    report.check('p_mean_monotone', worst <= config.tol('p_mean_monotone'), worst,
                 config.tol('p_mean_monotone'))

    a2, b2 = rng.uniform(0.0, 5.0, n), rng.uniform(0.0, 5.0, n)
    p_holder = rng.uniform(-0.5, 4.0, n)
    gaps = np.array([holder_gap(a[k], b[k], a2[k], b2[k], lam[k], p_holder[k]) for k in range(n)])
    report.check('holder_step', float(np.min(gaps)) >= -config.tol('holder'), float(np.min(gaps)),
                 config.tol('holder'))


def _quantile_check(report: Report, config: ExperimentConfig, rng: np.random.Generator, step: float):
    # evenly spaced levels pushed through the quantile map, histogram against the normalized density
    f = random_piecewise_linear(rng, 0.0, 1.0, step=step)
    levels = (np.arange(config.param('quantile_levels', 100_000)) + 0.5) / config.param('quantile_levels',
                                                                                         100_000)
    edges = np.linspace(0.0, 1.0, 101)
    hist, _ = np.histogram(quantile_map(f, levels), bins=edges)
    expected = np.diff(f.cdf(edges)) / f.mass
    tv = 0.5 * float(np.sum(np.abs(hist / len(levels) - expected)))
    report.check('quantile_pushforward_tv', tv <= config.tol('quantile_tv'), tv, config.tol('quantile_tv'))
    report.check('dominance_self', check_dominance(f, f), 0.0, 0.0)


def _random_point(rng: np.random.Generator, radius: float) -> complex:
    return complex(radius * math.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi)))


def cmd_finsler(config: ExperimentConfig) -> Report:
    report = Report('finsler', config.to_json())
    rng = np.random.default_rng(config.seed)
    radius = config.param('radius', 0.8)
    segments = config.param('segments', 4096)

    worst = 0.0
    for idx in range(config.param('distance_pairs', 50)):
        x, y = _random_point(rng, radius), _random_point(rng, radius)
        angle, length = dist_phi(x, y), curve_length_phi(horo_arc(x, y, segments))
        worst = max(worst, abs(angle - length))
        report.measure(kind='distance', trial=idx, angle=angle, quadrature=length)
    report.check('distance_vs_quadrature', worst <= config.tol('finsler_distance'), worst,
                 config.tol('finsler_distance'))

    violations = 0
    for idx in tqdm(range(config.param('minimality_pairs', 20)), desc='minimality'):
        x, y = _random_point(rng, radius), _random_point(rng, radius)
        result = check_minimality(x, y, config.param('minimality_trials', 20), seed=config.seed + idx,
                                  segments=segments, tol=config.tol('finsler_minimality'))
        violations += result.violations
        report.measure(kind='minimality', trial=idx, reference=result.reference,
                       min_competitor=result.min_competitor, margin=result.margin)
    report.check('minimality_violations', violations == 0, violations, config.tol('finsler_minimality'))

    deta_h = config.param('deta_h', 1e-4)
    errors = [check_deta(_random_point(rng, radius), deta_h) for _ in range(config.param('deta_points', 50))]
    report.check('deta_is_area_form', max(errors) <= config.tol('finsler_deta'), max(errors),
                 config.tol('finsler_deta'))

    worst = 0.0
    for _ in range(config.param('curvature_curves', 20)):
        z = _random_point(rng, radius)
        direction = np.exp(1j * rng.uniform(0.0, 2.0 * math.pi)) * (1.0 - abs(z) ** 2) / 2.0
        h = horo_from_tangent(TangentVec(z, direction))
        worst = max(worst, abs(signed_geodesic_curvature(h.evaluate, float(rng.uniform(-1.0, 1.0))) - 1.0))
    report.check('horocycle_curvature_one', worst <= config.tol('geodesic_curvature'), worst,
                 config.tol('geodesic_curvature'))
    return report


COMMANDS = {
    'verify-bm': cmd_verify_bm,
    'verify-bbl': cmd_verify_bbl,
    'scaling': cmd_scaling,
    'bottleneck': cmd_bottleneck,
    'needles': cmd_needles,
    'dirbbl': cmd_dirbbl,
    'finsler': cmd_finsler,
}


def run_experiment(config: ExperimentConfig) -> Report:
    return COMMANDS[config.experiment](config)
