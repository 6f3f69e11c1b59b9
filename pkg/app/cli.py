"""Command line entry point.

    python -m app.cli run --config presets/pause_sweep.cfg --seeds 3 --out results
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .errors import ConfigError
from .models import ProtocolName
from .scenario import load_scenario, parse_sweep_arg, run_sweep, write_csv
from .scenario.sweep import failed_runs, overhead_ratio, write_ratio_csv
from .settings import configure_logging, max_workers

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUN_FAILED = 1
EXIT_CONFIG = 2


def _protocols(raw: Optional[str]) -> Optional[List[ProtocolName]]:
    if not raw:
        return None
    try:
        return [ProtocolName(p.strip()) for p in raw.split(",") if p.strip()]
    except ValueError as e:
        raise ConfigError(f"unknown protocol in {raw!r}", key="protocol") from e


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="manet-sim", description="Proactive MANET routing simulator")
    ap.add_argument("-l", "--log", dest="loglevel", default=None,
                    choices=("DEBUG", "INFO", "WARNING", "ERROR"),
                    help="log level (default: $LOG_LEVEL or INFO)")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario or a sweep and write a CSV")
    run.add_argument("--config", required=True, type=Path, help="scenario file")
    run.add_argument("--sweep", default=None, help="axis=v1,v2,... (overrides a [sweep] section)")
    run.add_argument("--seeds", type=int, default=None, help="seeds per sweep point")
    run.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    run.add_argument("--protocol", default=None, help="protocol, or a comma list to compare several")
    run.add_argument("--workers", type=int, default=None, help="parallel runs (default: $SIM_MAX_WORKERS)")
    return ap


def run_command(args: argparse.Namespace) -> int:
    try:
        cfg, sweep = load_scenario(args.config)
        if args.seeds is not None and args.seeds < 1:
            raise ConfigError("--seeds must be at least 1", key="seeds")
        if args.sweep:
            sweep = parse_sweep_arg(args.sweep, seeds=args.seeds or 1)
        protocols = _protocols(args.protocol)
    except ConfigError as e:
        logger.error("%s: %s", args.config, e)
        return EXIT_CONFIG

    workers = args.workers if args.workers is not None else max_workers()
    frame = run_sweep(cfg, sweep, protocols=protocols, seeds=args.seeds, workers=max(1, workers))
    label = "-".join(p.value for p in protocols) if protocols else cfg.protocol.value
    axis = sweep.axis.value if sweep is not None else "single"
    stem = f"{args.config.stem}_{label}_{axis}"
    path = write_csv(frame, args.out / f"{stem}.csv")
    print(path)
    if protocols and {ProtocolName.FSR, ProtocolName.DSDV} <= set(protocols):
        try:
            ratio = overhead_ratio(frame)
        except ValueError as e:
            logger.warning("FSR/DSDV overhead ratio not available: %s", e)
        else:
            for value, r in ratio.items():
                logger.info("FSR/DSDV control tx ratio at %s=%s: %.4f", axis, value, r)
            print(write_ratio_csv(ratio, args.out / f"{stem}_ce_ratio.csv"))

    failed = failed_runs(frame)
    if failed:
        logger.error("%d run(s) failed, see the error column of %s", failed, path)
        return EXIT_RUN_FAILED
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.loglevel)
    if args.command == "run":
        return run_command(args)
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
