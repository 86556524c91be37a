"""
Calibration Commands
"""
import argparse
import logging
import math
from typing import List, Optional

from pydantic import BaseModel, Field

from potentia.cli.commands.common import CommandGroup, add_set_arguments, emit, resolve_bandset
from potentia.models.calibration import CalibrationData, GreenEvaluation
from potentia.models.run_config import RunConfig
from potentia.services.calibration_service import calibration_service

logger = logging.getLogger(__name__)
router = CommandGroup()


# ============ Pydantic Schemas ============

class CoshPolynomial(BaseModel):
    N: int
    f: List[float] = Field(..., description="cosh(N G) as a polynomial, ascending")
    T: List[float] = Field(..., description="Monic Chebyshev polynomial f / lead(f), ascending")


class CalibrateResponse(BaseModel):
    original: List[float]
    calibrated: CalibrationData
    robin: float
    capacity: float
    cosh: Optional[CoshPolynomial] = None
    green: List[GreenEvaluation] = Field(default_factory=list)


# ============ Commands ============

def _calibrate_args(parser: argparse.ArgumentParser) -> None:
    add_set_arguments(parser)
    parser.add_argument("--m", type=int, default=None, help="target denominator (default: number of bands)")
    parser.add_argument("--cosh", action="store_true", help="also build the degree-m polynomial cosh(m G)")
    parser.add_argument("--green", nargs=2, type=float, action="append", metavar=("RE", "IM"),
                        default=[], help="evaluate the Green function at RE + i IM (repeatable)")


@router.command("calibrate", help="smallest inflation with rational harmonic measures", configure=_calibrate_args)
def calibrate(args: argparse.Namespace, config: RunConfig):
    E = resolve_bandset(args)
    E_m, data = calibration_service.calibrate(E, args.m or E.r)
    robin = calibration_service.robin_constant(E_m)
    cosh = None
    if args.cosh:
        f, T = calibration_service.cosh_polynomial(E_m, data.N)
        cosh = CoshPolynomial(N=data.N, f=[float(c) for c in f.coef], T=[float(c) for c in T.coef])
    green = [calibration_service.green_eval(E_m, complex(x, y)) for x, y in args.green]
    response = CalibrateResponse(
        original=list(E.endpoints),
        calibrated=data,
        robin=robin,
        capacity=math.exp(-robin),
        cosh=cosh,
        green=green,
    )
    path = emit(config, "calibrate", response, ["band", "lo", "hi", "omega", "n_k"],
                [[j + 1, lo, hi, w, k] for j, ((lo, hi), w, k) in
                 enumerate(zip(E_m.bands, data.omega, data.n_k or [None] * E_m.r))])
    return {"endpoints": list(E_m.endpoints), "omega": data.omega, "inflation": data.max_inflation, "file": path}
