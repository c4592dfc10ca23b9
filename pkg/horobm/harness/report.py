"""
- Experiment reports: an echo of the inputs, a table of measurements, and pass/fail verdicts that each
  carry the tolerance they were judged with.
- report.json and measurements.csv depend only on the config; wall-clock time goes to timing.json.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Union

import pandas as pd

from horobm import util


@dataclass
class Verdict:
    name: str
    passed: bool
    value: float
    tol: float
    detail: str = ''

    def to_json(self):
        return {'name': self.name, 'passed': bool(self.passed), 'value': float(self.value),
                'tol': float(self.tol), 'detail': self.detail}


@dataclass
class Report:
    experiment: str
    inputs: Dict
    measurements: List[Dict] = field(default_factory=list)
    verdicts: List[Verdict] = field(default_factory=list)
    figures: List[str] = field(default_factory=list)
    # extra JSON files written next to the report, by file name
    attachments: Dict[str, Dict] = field(default_factory=dict)

    def measure(self, **row):
        self.measurements.append(row)

    def check(self, name: str, passed: bool, value: float, tol: float, detail: str = '') -> Verdict:
        verdict = Verdict(name, bool(passed), float(value), float(tol), detail)
        self.verdicts.append(verdict)
        log = logging.info if verdict.passed else logging.warning
        log(f'[{"PASS" if verdict.passed else "FAIL"}] {name}: value = {value:.6g}, tol = {tol:.3g}'
            + (f' ({detail})' if detail else ''))
        return verdict

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    @property
    def failures(self) -> List[Verdict]:
        return [v for v in self.verdicts if not v.passed]

    def to_json(self) -> Dict:
        return {'experiment': self.experiment, 'inputs': self.inputs,
                'verdicts': [v.to_json() for v in self.verdicts],
                'num_measurements': len(self.measurements), 'figures': self.figures,
                'attachments': sorted(self.attachments),
                'passed': self.passed}

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.measurements)


def write_report(report: Report, out_dir: Union[str, Path], elapsed: float = None) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    util.write_json_file(report.to_json(), out_dir / 'report.json', 'report')
    if report.measurements:
        csv_path = out_dir / 'measurements.csv'
        logging.info(f'Writing measurements to {csv_path} ...')
        report.to_frame().to_csv(csv_path, index=False, float_format='%.12g')
    for name, json_obj in sorted(report.attachments.items()):
        util.write_json_file(json_obj, out_dir / name, name)
    if elapsed is not None:
        util.write_json_file({'experiment': report.experiment, 'seconds': round(elapsed, 3)},
                             out_dir / 'timing.json', 'timing')
    return out_dir
