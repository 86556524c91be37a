"""
Periodic Jacobi Commands
"""
import argparse
import logging
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from potentia.cli.commands.common import CommandGroup, emit, resolve_jacobi
from potentia.exceptions import InvalidInputError
from potentia.models.run_config import RunConfig
from potentia.services.jacobi_service import jacobi_service

logger = logging.getLogger(__name__)
router = CommandGroup()


# ============ Pydantic Schemas ============

class JacobiResponse(BaseModel):
    jacobi: Dict[str, object]
    naiman: List[str] = Field(..., description="Monic Naiman polynomial P, ascending")
    modulus: str = Field(..., description="B = b_1 ... b_r")
    bands: List[List[float]]
    band_edges: List[float]
    multiplicity: List[int]
    touching: List[float]
    capacity: float
    edge_error: float
    rationalization: Optional[Dict[str, float]] = None


# ============ Commands ============

def _jacobi_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--jacobi", help="Jacobi JSON file or literal")
    parser.add_argument("--json", dest="jacobi_json", help="Jacobi JSON literal")
    parser.add_argument("--denom-bound", type=int, default=None,
                        help="round the entries to the grid 1/D before computing")


@router.command("jacobi", help="Naiman polynomial, band spectrum and capacity", configure=_jacobi_args)
def jacobi(args: argparse.Namespace, config: RunConfig):
    J = resolve_jacobi(args)
    if J is None:
        raise InvalidInputError("Give the matrix with --jacobi or --json")
    rationalization = None
    if args.denom_bound:
        Jq = jacobi_service.rationalize(J, args.denom_bound)
        rationalization = jacobi_service.rationalization_error(J, Jq)
        J = Jq
    P, B, _ = jacobi_service.naiman_polynomial(J, check_seed=config.seed)
    spectrum = jacobi_service.spectrum_bands(J)
    response = JacobiResponse(
        jacobi=J.to_json(),
        naiman=P.to_json(),
        modulus=str(B),
        bands=[[lo, hi] for lo, hi in spectrum.bands.bands],
        band_edges=list(spectrum.band_edges),
        multiplicity=list(spectrum.bands.multiplicity),
        touching=list(spectrum.bands.touching),
        capacity=jacobi_service.jacobi_capacity(J),
        edge_error=jacobi_service.band_polynomial_error(J, spectrum),
        rationalization=rationalization,
    )
    path = emit(config, "jacobi", response)
    return {"bands": response.bands, "capacity": response.capacity, "file": path}
