"""
Integer Lift Commands
"""
import argparse
import logging

from potentia.cli.commands.common import (
    CommandGroup, add_set_arguments, emit, resolve_bandset, resolve_jacobi,
)
from potentia.exceptions import ComputationRefusedError
from potentia.models.integerize import LiftCertificateOut, PipelineReport
from potentia.models.run_config import RunConfig
from potentia.services.integerize_service import integerize_service
from potentia.utils.serialization import load_poly

logger = logging.getLogger(__name__)
router = CommandGroup()


# ============ Commands ============

def _lift_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--poly", required=True, help="monic polynomial JSON (file or literal), ascending coefficients")
    parser.add_argument("--a", type=int, default=1, help="number of protected top blocks")
    parser.add_argument("--c", type=int, default=None, help="exponent; default is the smallest admissible one")
    parser.add_argument("--R2", type=float, default=None, help="lemniscate level (default 1 + 1/deg P)")
    parser.add_argument("--samples", type=int, default=None, help="lemniscate samples")
    parser.add_argument("--localize", action="store_true", help="also root Gamma and count zeros in the lemniscate")


@router.command("lift", help="Gaussian-integer lift of P^c with a sampled Rouche certificate", configure=_lift_args)
def lift(args: argparse.Namespace, config: RunConfig):
    P = load_poly(args.poly)
    if P.is_monic and P.is_gaussian_integral:
        cert = integerize_service.identity_certificate(P)
    else:
        c = args.c or integerize_service.find_lift_exponent(P, args.a)
        cert = integerize_service.integer_lift(P, args.a, c)
        R2 = args.R2 or 1.0 + 1.0 / P.degree
        cert = integerize_service.rouche_certify(P, cert, R2, args.samples)
        if args.localize and cert.certified:
            cert = integerize_service.zero_localization(cert, P, R2)
    response = LiftCertificateOut(**cert.model_dump(mode="json"))
    path = emit(config, "lift", response)
    if config.require_certified and not cert.certified:
        raise ComputationRefusedError("Lift is not certified (sampled Rouche margin >= 1)",
                                      rouche_margin=cert.rouche_margin, file=path)
    return {"degree": cert.gamma.degree, "c": cert.params.c, "certified": cert.certified,
            "rouche_margin": cert.rouche_margin, "file": path}


def _pipeline_args(parser: argparse.ArgumentParser) -> None:
    add_set_arguments(parser, jacobi=True)
    parser.add_argument("--degree-budget", type=int, default=64)
    parser.add_argument("--denom-bound", type=int, default=1000)
    parser.add_argument("--R2", type=float, default=None)
    parser.add_argument("--m", type=int, default=None, help="calibration denominator for general band sets")


@router.command("pipeline", help="integer polynomials equidistributing on a band set", configure=_pipeline_args)
def pipeline(args: argparse.Namespace, config: RunConfig):
    J = resolve_jacobi(args)
    E = resolve_bandset(args, required=J is None)
    report: PipelineReport = integerize_service.pipeline(
        E, args.degree_budget, args.denom_bound, R2=args.R2, jacobi=J, m=args.m,
    )
    header = ["degree", "rouche_margin", "moment_distance", "capacity_estimate"]
    rows = [[s.degree, s.rouche_margin, s.moment_distance, s.capacity_estimate] for s in report.stages]
    path = emit(config, "pipeline", report, header, rows)
    if config.require_certified and not all(s.certified for s in report.stages):
        raise ComputationRefusedError("Some pipeline stages are not certified",
                                      degrees=[s.degree for s in report.stages if not s.certified], file=path)
    return {"capacity": report.capacity, "degrees": [s.degree for s in report.stages],
            "distances_non_increasing": report.distances_non_increasing, "file": path}
