"""
Chebyshev Commands
"""
import argparse
import logging
from typing import List, Optional

from pydantic import BaseModel, Field

from potentia.cli.commands.common import CommandGroup, add_set_arguments, emit, resolve_bandset, resolve_jacobi
from potentia.exceptions import InvalidInputError
from potentia.models.compact import BandSet
from potentia.models.run_config import RunConfig
from potentia.services.chebyshev_service import GRID_PER_DEGREE, chebyshev_service
from potentia.services.jacobi_service import jacobi_service

logger = logging.getLogger(__name__)
router = CommandGroup()


# ============ Pydantic Schemas ============

class ChebyshevResponse(BaseModel):
    method: str = Field(..., description="interval, jacobi or remez")
    degree: int
    coefficients: List[str] = Field(..., description="Ascending; exact rationals where available")
    norm: float
    alternation_points: List[float]
    alternation_count: int
    band_zero_gaps: List[float]
    norm_ratio: Optional[float] = Field(None, description="||P_n||^(1/(nr)) / |B|^(1/r)")


# ============ Commands ============

def _chebyshev_args(parser: argparse.ArgumentParser) -> None:
    add_set_arguments(parser, jacobi=True)
    parser.add_argument("--remez", action="store_true", help="Remez exchange on the given bands")
    parser.add_argument("--degree", type=int, required=True,
                        help="n; with a Jacobi matrix the degree is n*r")
    parser.add_argument("--grid", type=int, default=None, help="grid points per band (>= 10*degree)")
    parser.add_argument("--max-iters", type=int, default=50)


@router.command("chebyshev", help="monic Chebyshev polynomial and its equioscillation", configure=_chebyshev_args)
def chebyshev(args: argparse.Namespace, config: RunConfig):
    J = resolve_jacobi(args)
    ratio = None
    if args.remez:
        E = resolve_bandset(args)
        p = chebyshev_service.remez_union(E, args.degree, args.max_iters)
        coefficients = [repr(float(c)) for c in p.coef]
        method = "remez"
    elif J is not None:
        p = chebyshev_service.chebyshev_compose(J, args.degree)
        E = jacobi_service.spectrum_bands(J).bands
        coefficients = p.to_json()
        ratio = chebyshev_service.chebyshev_norm_ratio(J, args.degree)
        method = "jacobi"
    elif args.interval:
        E = BandSet.interval(*args.interval)
        p = chebyshev_service.monic_chebyshev_interval(args.interval[0], args.interval[1], args.degree)
        coefficients = p.to_json()
        method = "interval"
    else:
        raise InvalidInputError("Give --interval, --jacobi/--json, or --remez with a band set")

    degree = len(coefficients) - 1
    grid = args.grid or GRID_PER_DEGREE * degree + 1
    report = chebyshev_service.equioscillation_check(p, E, grid)
    response = ChebyshevResponse(
        method=method,
        degree=degree,
        coefficients=coefficients,
        norm=report.norm,
        alternation_points=report.alternation_points,
        alternation_count=report.alternation_count,
        band_zero_gaps=report.band_zero_gaps,
        norm_ratio=ratio,
    )
    path = emit(config, "chebyshev", response, ["x", "sign"],
                [[x, s] for x, s in zip(report.alternation_points, report.alternation_signs)])
    return {"coefficients": coefficients, "norm": report.norm,
            "alternation_points": report.alternation_points, "file": path}
