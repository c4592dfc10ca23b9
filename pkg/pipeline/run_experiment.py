"""
- Run one horocyclic Brunn-Minkowski experiment from a JSON config and write its report.
- Outputs in the output directory: report.json, measurements.csv, timing.json, extra JSON attachments and,
  with --svg, the figures. The process exits with code 0 iff every verdict passes.
"""

import logging
import sys
import time
from argparse import ArgumentParser
from pathlib import Path

from horobm import util
from horobm.harness import EXPERIMENTS, read_config, run_experiment, write_report

CONFIG_DIR = Path(__file__).resolve().parent.parent / 'resources' / 'configs'


def main():
    parser = ArgumentParser()
    parser.add_argument('experiment', choices=EXPERIMENTS, help='Which experiment to run')
    parser.add_argument('-c', '--config', default=None,
                        help='Path to the experiment config JSON, '
                             'default = resources/configs/<experiment>.json')
    parser.add_argument('-s', '--seed', type=int, default=None,
                        help='If provided, override the seed in the config')
    parser.add_argument('-o', '--out', default=None,
                        help='Directory to write the report to, default = output/<experiment>')
    parser.add_argument('--svg', action='store_true', default=None,
                        help='If specified, also write SVG figures')
    parser.add_argument('-t', '--threads', type=int, default=None,
                        help=f'If provided, the number of workers for pair mapping, '
                             f'default = ${util.THREADS_ENV_VAR} or min(4, CPU count)')
    parser.add_argument('-f', '--force', action='store_true',
                        help='If specified, overwrite existing output files without warning')

    args = parser.parse_args()

    config_path = args.config or CONFIG_DIR / f'{args.experiment}.json'
    config = read_config(config_path, seed=args.seed, svg=args.svg, threads=args.threads)
    if config.experiment != args.experiment:
        raise ValueError(f'{config_path} configures {config.experiment}, not {args.experiment}')

    out_dir = util.get_output_dir(args.out or Path('output') / args.experiment,
                                  overwrite_warning=not args.force)
    config.out_dir = out_dir

    start = time.perf_counter()
    report = run_experiment(config)
    elapsed = time.perf_counter() - start
    write_report(report, out_dir, elapsed)

    if report.passed:
        logging.info(f'{args.experiment}: all {len(report.verdicts)} verdicts passed in {elapsed:.1f} s')
    else:
        logging.warning(f'{args.experiment}: {len(report.failures)} of {len(report.verdicts)} verdicts '
                        f'failed: {", ".join(v.name for v in report.failures)}')
    sys.exit(0 if report.passed else 1)


if __name__ == '__main__':
    main()
