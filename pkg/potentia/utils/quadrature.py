"""
Quadrature rules for band integrals

Integrands on a band set carry 1/sqrt endpoint singularities. On a segment
[lo, hi] the substitution t = c + h*x turns them into the Chebyshev weight
1/sqrt(1 - x^2), which Gauss-Chebyshev integrates spectrally.
"""
from functools import lru_cache
from typing import Tuple

import numpy as np
from numpy.polynomial import chebyshev, legendre


@lru_cache(maxsize=64)
def chebyshev_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes/weights for integral_{-1}^{1} f(x) / sqrt(1 - x^2) dx."""
    x, w = chebyshev.chebgauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=64)
def legendre_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def segment_nodes(lo: float, hi: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes t_i and weights w_i with
    integral_lo^hi f(t) / sqrt((t - lo)(hi - t)) dt ~= sum w_i f(t_i).
    """
    x, w = chebyshev_rule(n)
    c, h = (lo + hi) / 2.0, (hi - lo) / 2.0
    return c + h * x, np.array(w)


def composite_legendre(a: complex, b: complex, n: int, panels: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre on `panels` equal pieces of the straight path a -> b."""
    x, w = legendre_rule(n)
    dz = complex(b) - complex(a)
    nodes, weights = [], []
    for k in range(panels):
        s0, s1 = k / panels, (k + 1) / panels
        half = (s1 - s0) / 2.0
        s = (s0 + s1) / 2.0 + half * x
        nodes.append(complex(a) + s * dz)
        weights.append(w * half * dz)
    return np.concatenate(nodes), np.concatenate(weights)


def graded_legendre(a: complex, b: complex, n: int, levels: int = 6,
                    grade_start: bool = True, grade_end: bool = True) -> Tuple[np.ndarray, np.ndarray]:
    """
    Composite Gauss-Legendre on the straight path a -> b, with panels halved
    geometrically towards the graded endpoints. Returns complex nodes and
    complex weights (dz included).
    """
    breaks = [0.0, 1.0]
    if grade_start and grade_end:
        left = [0.5 * 2.0 ** (-k) for k in range(levels, 0, -1)]
        right = [1.0 - s for s in reversed(left)]
        breaks = [0.0] + left + [0.5] + right + [1.0]
    elif grade_start:
        breaks = [0.0] + [2.0 ** (-k) for k in range(levels, 0, -1)] + [1.0]
    elif grade_end:
        breaks = [0.0] + [1.0 - 2.0 ** (-k) for k in range(1, levels + 1)] + [1.0]
    x, w = legendre_rule(n)
    nodes, weights = [], []
    dz = complex(b) - complex(a)
    for s0, s1 in zip(breaks, breaks[1:]):
        half = (s1 - s0) / 2.0
        s = (s0 + s1) / 2.0 + half * x
        nodes.append(complex(a) + s * dz)
        weights.append(w * half * dz)
    return np.concatenate(nodes), np.concatenate(weights)
