"""
Shared command plumbing: command groups, input resolution, output files
"""
import argparse
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from pydantic import BaseModel

from potentia.exceptions import InvalidInputError
from potentia.models.compact import BandSet, Disk, PointCloud
from potentia.models.jacobi import PeriodicJacobi
from potentia.models.run_config import OutputFormat, RunConfig
from potentia.utils.serialization import load_bandset, load_jacobi, load_json, to_csv, write_json, write_text

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace, RunConfig], Dict[str, Any]]
Configure = Callable[[argparse.ArgumentParser], None]


@dataclass
class Command:
    name: str
    help: str
    configure: Configure
    handler: Handler


@dataclass
class CommandGroup:
    """Commands of one area, collected by decorator and mounted by the router."""

    commands: List[Command] = field(default_factory=list)

    def command(self, name: str, help: str, configure: Configure) -> Callable[[Handler], Handler]:
        def decorator(fn: Handler) -> Handler:
            self.commands.append(Command(name, help, configure, fn))
            return fn
        return decorator


# ---- input flags ----

def add_set_arguments(parser: argparse.ArgumentParser, jacobi: bool = False, points: bool = False) -> None:
    group = parser.add_argument_group("compact set")
    group.add_argument("--interval", nargs=2, type=float, metavar=("A", "B"), help="single interval [A, B]")
    group.add_argument("--bands", nargs="+", type=float, metavar="E", help="band endpoints e1 < ... < e2r")
    group.add_argument("--input", help="BandSet JSON file or literal [e1, ..., e2r]")
    if jacobi:
        group.add_argument("--jacobi", help='Jacobi JSON file or literal {"r": r, "a": [...], "b": [...]}')
        group.add_argument("--json", dest="jacobi_json", help="alias of --jacobi for a literal")
    if points:
        group.add_argument("--points", help="point cloud JSON [[re, im], ...]")
        group.add_argument("--disk", type=float, metavar="RADIUS", help="closed disk |z| <= RADIUS")


def jacobi_source(args: argparse.Namespace) -> Optional[str]:
    return getattr(args, "jacobi", None) or getattr(args, "jacobi_json", None)


def resolve_jacobi(args: argparse.Namespace) -> Optional[PeriodicJacobi]:
    source = jacobi_source(args)
    return load_jacobi(source) if source else None


def resolve_bandset(args: argparse.Namespace, required: bool = True) -> Optional[BandSet]:
    if args.interval:
        return BandSet.interval(*args.interval)
    if args.bands:
        return BandSet(tuple(args.bands))
    if args.input:
        return load_bandset(args.input)
    if required:
        raise InvalidInputError("Give a set with --interval, --bands or --input")
    return None


def resolve_set(args: argparse.Namespace):
    """Band set, point cloud or disk, whichever flag was given."""
    if getattr(args, "disk", None) is not None:
        return Disk(args.disk)
    if getattr(args, "points", None):
        data = load_json(args.points)
        try:
            return PointCloud(tuple(complex(float(x), float(y)) for x, y in data))
        except (TypeError, ValueError) as e:
            raise InvalidInputError(f"Bad point cloud JSON: {e}")
    return resolve_bandset(args)


# ---- output ----

def emit(config: RunConfig, name: str, model: BaseModel,
         header: Optional[Sequence[str]] = None, rows: Optional[List[Sequence[Any]]] = None) -> str:
    """Write `name`.json, or `name`.csv when CSV was asked for and the command has a table."""
    if config.format == OutputFormat.CSV and header is not None:
        path = write_text(config.output_dir, f"{name}.csv", to_csv(header, rows or []))
    else:
        path = write_json(config.output_dir, f"{name}.json", model)
    return str(Path(path))


def as_compact(K, boundary_points: int = 512):
    """Disks are handled through their boundary circle."""
    if isinstance(K, Disk):
        return K.boundary(boundary_points)
    return K
