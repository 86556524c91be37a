"""
Command Router Aggregation
"""
import argparse
from typing import List

from potentia.cli.commands import calibrate, capacity, chebyshev, diophantine, jacobi, lift
from potentia.cli.commands.common import Command, CommandGroup
from potentia.config import settings
from potentia.models.run_config import OutputFormat


class CommandRouter:
    """Collects command groups and mounts them as argparse subcommands."""

    def __init__(self):
        self.commands: List[Command] = []

    def include_router(self, group: CommandGroup) -> None:
        self.commands.extend(group.commands)

    def build_parser(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--seed", type=int, default=settings.SEED)
        common.add_argument("--threads", type=int, default=settings.THREADS, help="0 means all cores")
        common.add_argument("--output-dir", default=settings.OUTPUT_DIR)
        common.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
        common.add_argument("--require-certified", action="store_true",
                            help="exit 3 instead of reporting an uncertified result")
        common.add_argument("--log-level", default=settings.LOG_LEVEL)

        parser = argparse.ArgumentParser(prog=settings.APP_NAME,
                                         description="Logarithmic potential theory and integer polynomial lifting")
        parser.add_argument("--version", action="version", version=f"%(prog)s {settings.APP_VERSION}")
        sub = parser.add_subparsers(dest="subcommand", required=True, metavar="COMMAND")
        for cmd in self.commands:
            p = sub.add_parser(cmd.name, help=cmd.help, parents=[common])
            cmd.configure(p)
            p.set_defaults(handler=cmd.handler)
        return parser


command_router = CommandRouter()

# Capacity and Fekete points
command_router.include_router(capacity.router)

# Periodic Jacobi matrices
command_router.include_router(jacobi.router)

# Chebyshev polynomials
command_router.include_router(chebyshev.router)

# Harmonic-measure calibration
command_router.include_router(calibrate.router)

# Integer lifts and the full pipeline
command_router.include_router(lift.router)

# Small-norm and totally-in polynomials
command_router.include_router(diophantine.router)
