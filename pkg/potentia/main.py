"""
Potentia - Command Line Entry Point
"""
import json
import logging
import sys
import traceback
from typing import List, Optional

from pydantic import ValidationError

from potentia.cli.router import command_router
from potentia.config import settings
from potentia.exceptions import PotentiaError
from potentia.models.run_config import RunConfig
from potentia.utils.parallel import set_workers
from potentia.utils.response import error_response, success_response

logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
    format="%(asctime)s [%(levelname)s] %(name)s - %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)


def _print(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


def run(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; prints a one-line JSON summary and returns the exit code."""
    parser = command_router.build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse usage errors exit 2, --help / --version exit 0
        return int(e.code or 0)

    logging.getLogger().setLevel(getattr(logging, str(args.log_level).upper(), logging.INFO))
    try:
        config = RunConfig(
            subcommand=args.subcommand,
            input_path=getattr(args, "input", None),
            seed=args.seed,
            threads=args.threads if args.threads > 0 else settings.WORKERS,
            output_dir=args.output_dir,
            format=args.format,
            require_certified=args.require_certified,
        )
        set_workers(config.threads)
        logger.info("Running %s (seed=%s, threads=%s)", config.subcommand.value, config.seed, config.threads)
        data = args.handler(args, config)
    except PotentiaError as e:
        logger.error("%s failed: %s", args.subcommand, e.detail)
        _print(error_response(e.exit_code, e.detail, e.to_dict()))
        return e.exit_code
    except ValidationError as e:
        logger.error("%s rejected its input: %s", args.subcommand, e)
        _print(error_response(2, "Invalid input", {"kind": "invalid_input", "detail": str(e)}))
        return 2
    except Exception as e:
        logger.exception("Unexpected error in %s", args.subcommand)
        detail = str(e)
        if settings.DEBUG:
            detail = f"{detail}\n\nTraceback:\n{traceback.format_exc()}"
        _print(error_response(1, "Internal error", {"kind": "error", "detail": detail}))
        return 1

    _print(success_response(data))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
