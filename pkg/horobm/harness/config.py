import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Union

from horobm import util
from horobm.meanbbl.pmean import PMeanParam
from horobm.regions.minkowski import DEFAULT_PAIR_CAP
from horobm.regions.region import RegionSpec

EXPERIMENTS = ['verify-bm', 'verify-bbl', 'scaling', 'bottleneck', 'needles', 'dirbbl', 'finsler']

DEFAULT_TOLERANCES = {
    # rasterization slack: measured relative disc-area error times slack_factor, clipped to [min, max]
    'slack_factor': 4.0,
    'slack_min': 0.005,
    'slack_max': 0.03,
    # relative agreement with closed forms
    'concentric_rel': 0.02,
    'singleton_rel': 0.03,
    'scaling_rel': 0.02,
    # one-dimensional inequalities
    'dirbbl_conclusion': 1e-6,
    'change_of_variables': 1e-6,
    'needle_bm': 1e-6,
    'holder': 1e-10,
    'p_mean_monotone': 1e-9,
    'quantile_tv': 0.02,
    # Finsler layer
    'finsler_distance': 1e-6,
    'finsler_minimality': 1e-4,
    'finsler_deta': 1e-5,
    'geodesic_curvature': 1e-4,
    # needles
    'duality_gap': 1e-6,
    'feasibility': 1e-9,
    'ray_params': 1e-3,
    'ray_balance': 0.02,
    'coverage': 0.05,
    'jacobian_residual': 1e-4,
    'jacobian_coefficient': 1e-3,
}


@dataclass
class ExperimentConfig:
    """
    One experiment run. Experiment-specific knobs (sweep sizes, separations, dilation factors, ...) live in
    params; every tolerance used in a verdict is looked up in tolerances.
    """
    experiment: str
    regions: Dict[str, RegionSpec] = field(default_factory=dict)
    lams: List[float] = field(default_factory=lambda: [0.5])
    ps: List[PMeanParam] = field(default_factory=lambda: [PMeanParam(1.0)])
    grid_h: float = 0.01
    out_h: float = None
    supersample: int = 1
    pair_cap: int = DEFAULT_PAIR_CAP
    seed: int = 0
    threads: int = None
    out_dir: Path = Path('output')
    svg: bool = False
    tolerances: Dict[str, float] = field(default_factory=dict)
    params: Dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f'unknown experiment {self.experiment}, expected one of {EXPERIMENTS}')
        for lam in self.lams:
            if not 0.0 < lam < 1.0:
                raise ValueError(f'lambda must lie in (0, 1), got {lam}')
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ValueError(f'unknown tolerances: {sorted(unknown)}')
        self.tolerances = {**DEFAULT_TOLERANCES, **self.tolerances}
        self.out_h = self.out_h or self.grid_h
        self.out_dir = Path(self.out_dir)

    def tol(self, name: str) -> float:
        return self.tolerances[name]

    def param(self, name: str, default=None):
        return self.params.get(name, default)

    def region(self, name: str) -> RegionSpec:
        assert name in self.regions, f'region {name} missing from the {self.experiment} config'
        return self.regions[name]

    def to_json(self) -> Dict:
        return {'experiment': self.experiment,
                'regions': {name: spec.to_json() for name, spec in sorted(self.regions.items())},
                'lams': self.lams, 'ps': [PMeanParam.parse(p).to_json() for p in self.ps], 'grid_h': self.grid_h,
                'out_h': self.out_h, 'supersample': self.supersample, 'pair_cap': self.pair_cap,
                'seed': self.seed, 'tolerances': self.tolerances, 'params': self.params}

    @classmethod
    def from_json(cls, json_obj: Dict, **overrides) -> 'ExperimentConfig':
        kwargs = dict(
            experiment=json_obj['experiment'],
            regions={name: RegionSpec.from_json(spec) for name, spec in json_obj.get('regions', {}).items()},
            lams=[float(lam) for lam in json_obj.get('lams', [0.5])],
            ps=[PMeanParam.parse(p) for p in json_obj.get('ps', [1.0])],
            grid_h=json_obj.get('grid_h', 0.01),
            out_h=json_obj.get('out_h'),
            supersample=json_obj.get('supersample', 1),
            pair_cap=json_obj.get('pair_cap', DEFAULT_PAIR_CAP),
            seed=json_obj.get('seed', 0),
            out_dir=json_obj.get('out_dir', 'output'),
            svg=json_obj.get('svg', False),
            tolerances=json_obj.get('tolerances', {}),
            params=json_obj.get('params', {}))
        kwargs.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**kwargs)


def read_config(path: Union[str, Path], **overrides) -> ExperimentConfig:
    config = ExperimentConfig.from_json(util.read_json_file(path, 'experiment config'), **overrides)
    logging.info(f'Experiment {config.experiment}: seed = {config.seed}, grid_h = {config.grid_h}, '
                 f'out_h = {config.out_h}')
    return config
