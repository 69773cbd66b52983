import asyncio
import logging
import sys
from argparse import ArgumentParser
from traceback import format_exc

from dotenv import dotenv_values
from pydantic import ValidationError

from Shimura import __version__
from Shimura.helper.exceptions import UsageError
from Shimura.helper.modal import SUITE_NAMES, SuiteConfig
from Shimura.logger import LOGGER
from Shimura.suites import exit_status, run_suite

USAGE_EXIT = 2


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="Shimura", description="Run the verification suites and write JSON reports.")
    parser.add_argument("--suite", help=f"one of {', '.join(SUITE_NAMES)} or all")
    parser.add_argument("--tol", type=float, help="relative tolerance for numerical checks")
    parser.add_argument("--primes", help="comma separated counting primes")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--out", help="report directory")
    parser.add_argument("--config", help="flat key=value file; flags take precedence")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def load_config(argv=None) -> SuiteConfig:
    """Flags override the config file, which overrides the environment defaults."""
    args = build_parser().parse_args(argv)
    values = {}
    if args.config:
        values.update({key.lower(): value for key, value in dotenv_values(args.config).items() if value is not None})
        unknown = set(values) - set(SuiteConfig.model_fields)
        if unknown:
            raise UsageError(f"unknown config keys {sorted(unknown)} in {args.config}")
    flags = {key: value for key, value in vars(args).items() if key != "config" and value is not None}
    values.update(flags)
    return SuiteConfig(**values)


async def main(argv=None) -> int:
    try:
        config = load_config(argv)
    except (ValidationError, UsageError) as err:
        LOGGER.error(f"Invalid configuration: {err}")
        return USAGE_EXIT
    LOGGER.info(f"Shimura v-{__version__}: suite {config.suite}, seed {config.seed}, {config.workers} workers")
    try:
        reports = await run_suite(config.suite, config)
    except UsageError as err:
        LOGGER.error(str(err))
        return USAGE_EXIT
    return exit_status(reports)


if __name__ == '__main__':
    status = 1
    try:
        status = asyncio.run(main())
    except KeyboardInterrupt:
        LOGGER.info('Stopping...')
    except Exception:
        LOGGER.error(format_exc())
    finally:
        logging.shutdown()
    sys.exit(status)
