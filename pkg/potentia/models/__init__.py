"""
Domain Models
"""
from potentia.models.scalar import GaussianRational
from potentia.models.polynomial import RationalPoly, GaussianIntPoly
from potentia.models.compact import BandSet, PointCloud, Disk
from potentia.models.measure import DiscreteMeasure
from potentia.models.jacobi import PeriodicJacobi, BandSpectrum
from potentia.models.potential import FeketeResult, CapacityEstimate, CapacityScheme, MeasureDistance
from potentia.models.chebyshev import EquioscillationReport
from potentia.models.calibration import CalibrationData, GreenEvaluation
from potentia.models.integerize import LiftCertificate, LiftParams, PipelineStage, PipelineReport
from potentia.models.diophantine import CoeffBox, SmallNormPolynomial, NearestConjugateResult
from potentia.models.run_config import RunConfig, Subcommand, OutputFormat

__all__ = [
    # Exact arithmetic
    "GaussianRational", "RationalPoly", "GaussianIntPoly",
    # Sets and measures
    "BandSet", "PointCloud", "Disk", "DiscreteMeasure",
    # Jacobi
    "PeriodicJacobi", "BandSpectrum",
    # Results
    "FeketeResult", "CapacityEstimate", "CapacityScheme", "MeasureDistance",
    "EquioscillationReport",
    "CalibrationData", "GreenEvaluation",
    "LiftCertificate", "LiftParams", "PipelineStage", "PipelineReport",
    "CoeffBox", "SmallNormPolynomial", "NearestConjugateResult",
    # CLI
    "RunConfig", "Subcommand", "OutputFormat",
]
