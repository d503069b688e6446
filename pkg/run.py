# run.py

import argparse
import logging
import sys
import time
from dataclasses import fields
from typing import List, Optional

from src.version import __version__
from src.utils.config_loader import load_config, settings_from_config, ConfigError, Settings
from src.utils.errors import PsaKitError
from src.utils.logger import setup_logger
from src.scenario.parser import parse_scenario, MODES
from src.report.report_writer import ReportWriter
from src.cli.commands import cmd_classify, cmd_graph, cmd_sample, cmd_ks, EXIT_OK, EXIT_ERROR

TOLERANCE_FIELDS = [f.name for f in fields(Settings) if f.name.startswith('tol_')]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('file', help="Scenario file (JSON)")
    common.add_argument('--out', help="Write the report to this path instead of stdout")
    common.add_argument('--format', choices=['json', 'table'], default='json', help="Report format")
    common.add_argument('--config', help="Configuration file (defaults to config/config.json)")
    common.add_argument('--timing', action='store_true', help="Record wall-clock timing in the report metadata")
    common.add_argument('-v', '--verbose', action='store_true', help="Debug output on the console")
    for name in TOLERANCE_FIELDS:
        option = '--tol-' + name[len('tol_'):].replace('_', '-')
        common.add_argument(option, dest=name, type=float, metavar='VALUE', help=f"Override {name}")

    parser = argparse.ArgumentParser(prog='psakit', description="Intensive and effective relations of quantum states")
    parser.add_argument('--version', action='version', version=f"psakit {__version__}")
    commands = parser.add_subparsers(dest='command', required=True)

    classify = commands.add_parser('classify', parents=[common], help="Classify a bipartite scenario")
    classify.add_argument('--mode', choices=['designated', 'all-matched'], help="Override the scenario's mode")

    commands.add_parser('graph', parents=[common], help="List power graphs and their maximal contexts")

    sample = commands.add_parser('sample', parents=[common], help="Sample tested context pairs and compare")
    sample.add_argument('--shots', type=int, help="Shots per context pair")
    sample.add_argument('--seed', type=int, help="Unsigned 64-bit seed")
    sample.add_argument('--stat-threshold', type=float, help="Leak allowed in the empirical verdict")

    ks = commands.add_parser('ks', parents=[common], help="Search for a binary valuation")
    ks.add_argument('--budget', type=int, help="Maximum number of search branches")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        config = load_config(args.config)
        settings = settings_from_config(config)
    except ConfigError as e:
        print(f"error[{e.code}]: {str(e).strip()}", file=sys.stderr)
        return EXIT_ERROR

    level = logging.DEBUG if args.verbose else getattr(logging, config['logging'].get('level', 'INFO'), logging.INFO)
    logger = setup_logger(level=level, log_to_file=config['logging'].get('log_to_file', True))

    overrides = {name: getattr(args, name) for name in TOLERANCE_FIELDS if getattr(args, name) is not None}
    started = time.perf_counter()
    try:
        spec = parse_scenario(args.file, settings, overrides)
        exit_code = EXIT_OK
        if args.command == 'classify':
            report, exit_code = cmd_classify(spec, MODES[args.mode] if args.mode else None)
        elif args.command == 'graph':
            report = cmd_graph(spec)
        elif args.command == 'sample':
            report, exit_code = cmd_sample(spec, args.shots, args.seed, args.stat_threshold)
        else:
            report = cmd_ks(spec, args.budget)

        if args.timing:
            report['metadata']['timing'] = {'seconds': time.perf_counter() - started}
        ReportWriter(args.out, args.format).write(report)
        return exit_code

    except (PsaKitError, ConfigError) as e:
        logger.debug(f"{type(e).__name__}: {str(e)}")
        print(f"error[{e.code}]: {str(e).strip()}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as e:
        logger.critical(f"An unexpected error occurred: {str(e)}", exc_info=True)
        print(f"error[internal]: {str(e)}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
