"""
Capacity Commands
"""
import argparse
import logging
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from potentia.cli.commands.common import (
    CommandGroup, add_set_arguments, as_compact, emit, resolve_jacobi, resolve_set,
)
from potentia.models.measure import DiscreteMeasure
from potentia.models.potential import CapacityScheme
from potentia.models.run_config import RunConfig
from potentia.services.potential_service import potential_service

logger = logging.getLogger(__name__)
router = CommandGroup()


# ============ Pydantic Schemas ============

class CapacityResponse(BaseModel):
    value: float = Field(..., description="Capacity estimate")
    scheme: CapacityScheme
    n_used: int
    error_bound: Optional[float] = None
    diameters: List[float] = Field(default_factory=list)


class FeketeResponse(BaseModel):
    n: int
    d_n: float
    log_pairwise_product: float
    energy: float = Field(..., description="Discrete logarithmic energy of the uniform measure on the points")
    grid_size: int
    points: List[Tuple[float, float]]


# ============ Commands ============

def _capacity_args(parser: argparse.ArgumentParser) -> None:
    add_set_arguments(parser, jacobi=True, points=True)
    parser.add_argument("--scheme", choices=[s.value for s in CapacityScheme],
                        default=CapacityScheme.FEKETE_EXTRAPOLATION.value)
    parser.add_argument("--n", type=int, default=64, help="largest Fekete n for extrapolation")


@router.command("capacity", help="logarithmic capacity of a compact set", configure=_capacity_args)
def capacity(args: argparse.Namespace, config: RunConfig):
    J = resolve_jacobi(args)
    K = J if J is not None else as_compact(resolve_set(args))
    estimate = potential_service.capacity_estimate(K, args.scheme, n_max=args.n, seed=config.seed)
    response = CapacityResponse(**estimate.model_dump())
    path = emit(config, "capacity", response)
    return {"value": response.value, "scheme": response.scheme.value, "file": path}


def _fekete_args(parser: argparse.ArgumentParser) -> None:
    add_set_arguments(parser, points=True)
    parser.add_argument("--n", type=int, required=True, help="number of points")
    parser.add_argument("--restarts", type=int, default=None)
    parser.add_argument("--grid-size", type=int, default=None)


@router.command("fekete", help="approximate Fekete points", configure=_fekete_args)
def fekete(args: argparse.Namespace, config: RunConfig):
    K = as_compact(resolve_set(args))
    result = potential_service.fekete_points(K, args.n, restarts=args.restarts, seed=config.seed,
                                             grid_size=args.grid_size)
    energy = potential_service.energy(DiscreteMeasure.uniform(result.complex_points()))
    response = FeketeResponse(
        n=result.n,
        d_n=result.d_n,
        log_pairwise_product=result.log_pairwise_product,
        energy=energy,
        grid_size=result.grid_size,
        points=result.points,
    )
    path = emit(config, "fekete", response, ["re", "im"], [list(p) for p in result.points])
    return {"n": result.n, "d_n": result.d_n, "file": path}
