"""
File codecs for command inputs and outputs
"""
import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Iterable, List, Sequence

from pydantic import BaseModel

from potentia.exceptions import InvalidInputError
from potentia.models.compact import BandSet
from potentia.models.jacobi import PeriodicJacobi
from potentia.models.polynomial import RationalPoly
from potentia.utils.response import convert_to_native_types

logger = logging.getLogger(__name__)


def load_json(source: str) -> Any:
    """Parse a path to a JSON file, or a literal JSON string."""
    text = source
    path = Path(source)
    if not source.lstrip().startswith(("[", "{")) and path.exists():
        text = path.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"Invalid JSON input: {e}")


def load_bandset(source: str) -> BandSet:
    return BandSet.from_json(load_json(source))


def load_jacobi(source: str) -> PeriodicJacobi:
    return PeriodicJacobi.from_json(load_json(source))


def load_poly(source: str) -> RationalPoly:
    return RationalPoly.from_json(load_json(source))


def dump_json(data: Any) -> str:
    """Stable JSON text; identical input gives identical bytes."""
    if isinstance(data, BaseModel):
        data = data.model_dump(mode="json")
    return json.dumps(convert_to_native_types(data), indent=2, sort_keys=True) + "\n"


def write_json(output_dir: str, name: str, data: Any) -> Path:
    path = Path(output_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(data), encoding="utf-8")
    logger.info("Wrote %s", path)
    return path


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in row])
    return buf.getvalue()


def write_text(output_dir: str, name: str, text: str) -> Path:
    path = Path(output_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info("Wrote %s", path)
    return path


def complex_pairs(values: Iterable[complex]) -> List[List[float]]:
    return [[float(z.real), float(z.imag)] for z in values]
