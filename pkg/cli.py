#!/usr/bin/env python3
"""
CLI for counting metric differential invariants.

Each subcommand computes exact dimensions, ranks, kernels or curvature data
for jets of pseudo-Riemannian metrics and prints a table, JSON or CSV. The
exit code is 0 on success, 1 when a certificate or oracle fails and 2 on
usage or input errors.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from dotenv import load_dotenv

load_dotenv()

import jsonschema
import pydantic
from termcolor import colored

from metric_invariants.commands import get_command, get_commands, render
from metric_invariants.commands.base import EXIT_USAGE
from metric_invariants.config import RunConfig
from metric_invariants.core.errors import JetError
from metric_invariants.utils.constants import ENV_LOG_LEVEL, ENV_WORKERS, LOGGER_NAME
from utils import parse_common_args


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Exact invariant counts for jets of pseudo-Riemannian metrics"
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for command in get_commands():
        subparser = subparsers.add_parser(
            command.name, help=command.description, description=command.description
        )
        parse_common_args(subparser)
    return parser


def setup_logging(args: argparse.Namespace) -> logging.Logger:
    if os.path.exists(args.logs_path):
        os.remove(args.logs_path)
    logger = logging.getLogger(LOGGER_NAME)
    try:
        logger.setLevel(os.getenv(ENV_LOG_LEVEL, "DEBUG").upper())
    except ValueError:
        logger.setLevel(logging.DEBUG)
    # Prevent propagation to root logger to avoid duplicate logs
    logger.propagate = False
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    logger.addHandler(logging.FileHandler(args.logs_path))
    if not args.minimize_stdout_logs:
        logger.addHandler(logging.StreamHandler(sys.stderr))
    return logger


def config_from_args(args: argparse.Namespace) -> RunConfig:
    workers = args.workers if args.workers is not None else os.getenv(ENV_WORKERS, 1)
    return RunConfig(
        subcommand=args.subcommand,
        n=args.n,
        r=args.r,
        signature=args.signature,
        trials=args.trials,
        seed=args.seed,
        prime_count=args.prime_count,
        format=args.format,
        paranoid=args.paranoid,
        point=args.point,
        curvature=args.curvature,
        flat=args.flat,
        out=args.out,
        nmax=args.nmax,
        rmax=args.rmax,
        workers=workers,
        signature_mix=args.signature_mix,
    ).resolved()


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logger = setup_logging(args)
    try:
        config = config_from_args(args)
        output = get_command(config.subcommand).run(config)
        text = render(output, config)
        if config.out:
            Path(config.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except (JetError, jsonschema.ValidationError, pydantic.ValidationError, OSError) as exc:
        message = exc.message if isinstance(exc, jsonschema.ValidationError) else str(exc)
        logger.error("%s failed: %s", args.subcommand, message)
        print(colored(f"error: {message}", "red"), file=sys.stderr)
        return EXIT_USAGE
    return output.exit_code


if __name__ == "__main__":
    sys.exit(main())
