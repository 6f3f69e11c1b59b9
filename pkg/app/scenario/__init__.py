from .loader import load_config, load_scenario, parse_scenario, parse_sweep_arg
from .simulation import RunOutcome, Simulation, inputs_from_run, run_scenario
from .sweep import COLUMNS, aggregate, overhead_ratio, run_sweep, scenario_for, write_csv

__all__ = [
    "COLUMNS",
    "RunOutcome",
    "Simulation",
    "aggregate",
    "inputs_from_run",
    "load_config",
    "load_scenario",
    "overhead_ratio",
    "parse_scenario",
    "parse_sweep_arg",
    "run_scenario",
    "run_sweep",
    "scenario_for",
    "write_csv",
]
