from .config import DEFAULT_TOLERANCES, EXPERIMENTS, ExperimentConfig, read_config
from .report import Report, Verdict, write_report
from .experiments import COMMANDS, calibrate_slack, run_experiment
