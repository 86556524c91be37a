"""
Diophantine Commands
"""
import argparse
import logging
import math
from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from potentia.cli.commands.common import CommandGroup, add_set_arguments, as_compact, emit, resolve_set
from potentia.exceptions import InvalidInputError
from potentia.models.compact import BandSet, Disk
from potentia.models.diophantine import CoeffBox, NearestConjugateResult, SmallNormPolynomial
from potentia.models.potential import CapacityScheme
from potentia.models.run_config import RunConfig
from potentia.services.diophantine_service import diophantine_service
from potentia.services.potential_service import potential_service
from potentia.utils.serialization import load_json

logger = logging.getLogger(__name__)
router = CommandGroup()


# ============ Pydantic Schemas ============

class SearchResponse(BaseModel):
    n: int
    bounds: List[int]
    polynomials: List[SmallNormPolynomial] = Field(default_factory=list)
    nearest: Optional[NearestConjugateResult] = None


class EnumeratedPolynomial(BaseModel):
    coeffs: List[int]
    root_moduli: List[float]
    kronecker: Optional[List[Tuple[str, int]]] = Field(None, description="z / cyclotomic factorization when it is complete")


class EnumerateResponse(BaseModel):
    n: int
    count: int
    polynomials: List[EnumeratedPolynomial]


class VolumeRow(BaseModel):
    n: int
    samples: int
    volume: float
    normalized_log: Optional[float] = None
    minkowski: bool = Field(..., description="volume > 2^(n+1)")


class VolumeResponse(BaseModel):
    reference: Optional[float] = Field(None, description="-ln C(K), the limit of normalized_log")
    rows: List[VolumeRow]


class BernsteinResponse(BaseModel):
    n: int
    coefficients: List[str]
    ferguson_approximable: bool


# ============ Commands ============

def _search_args(parser: argparse.ArgumentParser) -> None:
    add_set_arguments(parser, points=True)
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--bound", type=int, default=None, help="uniform coefficient bound (default: Lagrange box)")
    parser.add_argument("--targets", default=None,
                        help="conjugate-closed targets [[re, im], ...]; runs the nearest conjugate set search")


@router.command("search", help="integer polynomials of sup norm < 1, or nearest conjugate sets", configure=_search_args)
def search(args: argparse.Namespace, config: RunConfig):
    if args.targets:
        targets = [complex(float(x), float(y)) for x, y in load_json(args.targets)]
        box = CoeffBox.uniform(args.n, args.bound if args.bound is not None else 2)
        box.bounds[-1] = 1
        nearest = diophantine_service.nearest_conjugate_set(targets, box)
        response = SearchResponse(n=args.n, bounds=box.bounds, nearest=nearest)
        path = emit(config, "search", response)
        return {"coeffs": nearest.coeffs, "distance": nearest.distance, "file": path}

    K = resolve_set(args)
    if args.bound is not None:
        box = CoeffBox.uniform(args.n, args.bound)
    else:
        box = diophantine_service.lagrange_box(K, args.n)
    found = diophantine_service.small_norm_search(K, args.n, box)
    response = SearchResponse(n=args.n, bounds=box.bounds, polynomials=found)
    path = emit(config, "search", response, ["sup_norm", "coeffs"],
                [[p.sup_norm, " ".join(str(c) for c in p.coeffs)] for p in found])
    return {"count": len(found), "file": path}


def _enumerate_args(parser: argparse.ArgumentParser) -> None:
    add_set_arguments(parser, points=True)
    parser.add_argument("--n", type=int, required=True)


@router.command("enumerate", help="monic integer polynomials with all roots in a disk or band set",
                configure=_enumerate_args)
def enumerate_totally_in(args: argparse.Namespace, config: RunConfig):
    K = resolve_set(args)
    if not isinstance(K, (Disk, BandSet)):
        raise InvalidInputError("enumerate needs --disk or a band set")
    rows = []
    for p in diophantine_service.totally_in_enumerate(K, args.n):
        coeffs = [int(c.re) for c in p.coeffs]
        moduli = sorted(abs(complex(z)) for z in p.to_numpy().roots())
        factors, rest = diophantine_service.kronecker_factorization(p)
        complete = rest.degree == 0
        rows.append(EnumeratedPolynomial(coeffs=coeffs, root_moduli=moduli, kronecker=factors if complete else None))
    response = EnumerateResponse(n=args.n, count=len(rows), polynomials=rows)
    path = emit(config, "enumerate", response, ["coeffs", "max_modulus"],
                [[" ".join(str(c) for c in r.coeffs), max(r.root_moduli)] for r in rows])
    return {"count": len(rows), "file": path}


def _volume_args(parser: argparse.ArgumentParser) -> None:
    add_set_arguments(parser, points=True)
    parser.add_argument("--n", type=int, nargs="+", required=True, help="one or more degrees (a sweep)")
    parser.add_argument("--samples", type=int, default=100_000)


@router.command("volume", help="Monte-Carlo volume of the unit-norm coefficient body", configure=_volume_args)
def volume(args: argparse.Namespace, config: RunConfig):
    K = resolve_set(args)
    rows = []
    for n in args.n:
        vol, normalized = diophantine_service.fn_volume_mc(K, n, args.samples, seed=config.seed)
        rows.append(VolumeRow(n=n, samples=args.samples, volume=vol, normalized_log=normalized,
                              minkowski=diophantine_service.minkowski_guarantee(vol, n)))
    reference = None
    if isinstance(K, BandSet):
        try:
            cap = potential_service.capacity_estimate(K, CapacityScheme.ROBIN_CONSTANT).value
            reference = -math.log(cap)
        except InvalidInputError:
            logger.warning("No reference capacity for this set")
    else:
        cap = potential_service.capacity_estimate(as_compact(K), CapacityScheme.FEKETE_EXTRAPOLATION,
                                                  seed=config.seed).value
        reference = -math.log(cap)
    response = VolumeResponse(reference=reference, rows=rows)
    path = emit(config, "volume", response, ["n", "samples", "volume", "normalized_log", "reference"],
                [[r.n, r.samples, r.volume, r.normalized_log, reference] for r in rows])
    return {"volumes": [r.volume for r in rows], "reference": reference, "file": path}


def _bernstein_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--values", required=True,
                        help='samples f(v/n), v = 0..n, as JSON (rationals as strings, e.g. ["0", "1/4", "1"])')


@router.command("bernstein", help="Bernstein polynomial of sampled values on [0, 1]", configure=_bernstein_args)
def bernstein(args: argparse.Namespace, config: RunConfig):
    raw = load_json(args.values)
    if not isinstance(raw, list) or len(raw) < 2:
        raise InvalidInputError("--values must be a JSON array with at least two samples")
    try:
        values = [Fraction(v) if isinstance(v, (str, int)) else Fraction(float(v)) for v in raw]
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InvalidInputError(f"Bad sample value: {e}")
    n = len(values) - 1
    p = diophantine_service.bernstein(values, n)
    response = BernsteinResponse(
        n=n,
        coefficients=p.to_json(),
        ferguson_approximable=diophantine_service.ferguson_approximable(values[0], values[-1]),
    )
    path = emit(config, "bernstein", response)
    return {"coefficients": response.coefficients, "file": path}
