"""
Shared fixtures
"""

from fractions import Fraction

import pytest

from potentia.models.compact import BandSet
from potentia.models.jacobi import PeriodicJacobi
from potentia.models.polynomial import RationalPoly
from potentia.utils.parallel import set_workers


@pytest.fixture(autouse=True)
def _single_worker():
    """Tests run single-threaded unless they opt in."""
    set_workers(1)
    yield
    set_workers(None)


@pytest.fixture
def z() -> RationalPoly:
    return RationalPoly.identity()


@pytest.fixture
def interval() -> BandSet:
    return BandSet.interval(-2.0, 2.0)


@pytest.fixture
def two_bands() -> BandSet:
    """The spectrum of the period-2 matrix with b = (1, 2)."""
    return BandSet((-3.0, -1.0, 1.0, 3.0))


@pytest.fixture
def jacobi_12() -> PeriodicJacobi:
    return PeriodicJacobi.from_lists([0, 0], [1, 2])


@pytest.fixture
def jacobi_11() -> PeriodicJacobi:
    return PeriodicJacobi.from_lists([0, 0], [1, 1])


@pytest.fixture
def jacobi_3() -> PeriodicJacobi:
    """Period 3 with all gaps open."""
    return PeriodicJacobi.from_lists([0, 1, -1], [1, 2, Fraction(3, 2)])
