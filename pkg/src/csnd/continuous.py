"""Finite samples of continuous metric spaces.

Unsquared Euclidean distances are CSND on distinct points; finite metric trees
(iterated wedges of segments) are CSND; a circle carries the same antipodal
quadruple obstruction as an even cycle, with real arc lengths.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.spatial.distance import pdist, squareform

from .embedding import PointConfig
from .errors import DegenerateInput, InvariantViolation
from .graphs import Graph, path_metric
from .kernels import KernelMatrix

__all__ = [
    "euclidean_kernel",
    "weighted_tree_kernel",
    "circle_kernel",
    "circle_kernel_turns",
    "antipodal_quad",
    "fourier_identity_check",
    "fourier_rhs",
    "limit_form",
]


def euclidean_kernel(P: PointConfig) -> KernelMatrix:
    """Kernel of (unsquared) Euclidean distances between the rows of ``P``."""
    if P.d == 0:
        return KernelMatrix(P.labels, np.zeros((P.n, P.n)))
    return KernelMatrix(P.labels, squareform(pdist(P.coords, "euclidean")))


def _check_tree(T: Graph) -> None:
    if len(T.edges) != T.n - 1 or len(T.bfs_distances(T.vertices[0])) != T.n:
        raise InvariantViolation("weighted tree must be connected and acyclic")


def weighted_tree_kernel(T: Graph) -> KernelMatrix:
    """Weighted path metric of a finite metric tree."""
    _check_tree(T)
    return path_metric(T)


def circle_kernel(angles: Sequence[float], L: float) -> KernelMatrix:
    """Arc-length distances between points at ``angles`` (radians) on a circle of circumference ``L``."""
    a = np.asarray(angles, dtype=float)
    if a.ndim != 1 or a.size < 1:
        raise ValueError("need a nonempty list of angles")
    if np.any(a < 0) or np.any(a >= 2 * math.pi):
        raise ValueError("angles must lie in [0, 2*pi)")
    return circle_kernel_turns([float(x) / (2 * math.pi) for x in a], L)


def circle_kernel_turns(positions: Sequence[float | Fraction], L: float | Fraction) -> KernelMatrix:
    """Arc-length distances for points given as fractions of a full turn in ``[0, 1)``.

    With :class:`fractions.Fraction` positions and circumference the distances
    are computed exactly before the final conversion to float.
    """
    if not L > 0:
        raise ValueError("circumference must be positive")
    if len(positions) < 1:
        raise ValueError("need a nonempty list of positions")
    if any(p < 0 or p >= 1 for p in positions):
        raise ValueError("positions must lie in [0, 1)")
    for p, q in zip(positions, positions[1:]):
        if q == p:
            raise DegenerateInput("duplicate angles")
        if q < p:
            raise ValueError("angles must be strictly increasing")
    n = len(positions)
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            turn = abs(positions[j] - positions[i])
            D[i, j] = D[j, i] = float(min(turn, 1 - turn) * L)
    return KernelMatrix(tuple(str(i) for i in range(n)), D)


def antipodal_quad(angles: Sequence[float], tol: float = 1e-12) -> tuple[int, int, int, int] | None:
    """Indices ``(i, j, i', j')`` of two antipodal pairs ``{t, t+pi}`` among ``angles``, if any.

    The returned order is cyclic around the circle, so the distance matrix on
    it has the obstruction pattern and ``(1, -1, 1, -1)`` annihilates it.
    """
    a = np.asarray(angles, dtype=float)
    pairs = []
    for i in range(a.size):
        for j in range(i + 1, a.size):
            if abs((a[j] - a[i]) - math.pi) <= tol:
                pairs.append((i, j))
    if len(pairs) < 2:
        return None
    (i, ip), (j, jp) = pairs[0], pairs[1]
    return (i, j, ip, jp)


def fourier_rhs(t: float, xi: float) -> float:
    """Closed form ``t * c_1 / (t^2 + xi^2)`` with ``c_1 = Gamma(1) / pi``."""
    c1 = math.gamma(1.0) * math.pi ** (-1.0)
    return t * c1 / (t * t + xi * xi)


def fourier_identity_check(t: float, xi: float, *, nodes: int = 20) -> tuple[float, float, float]:
    """Quadrature of ``int_R exp(-2 pi t |x|) cos(2 pi xi x) dx`` against its closed form.

    The integrand is even, so twice the integral over ``[0, X]`` is taken with
    ``X = 20 ln(1e9) / (2 pi t)``; the neglected tail is below ``1e-9``.
    Gauss-Legendre panels are no wider than the oscillation wavelength
    ``min(1, 1/|xi|)`` nor the decay length ``1/(2 pi t)``.
    Returns ``(lhs, rhs, abs_error)``.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    x_max = 20.0 / (2 * math.pi * t) * math.log(1e9)
    width = min(1.0, 1.0 / abs(xi) if xi else 1.0, 1.0 / (2 * math.pi * t))
    panels = max(1, math.ceil(x_max / width))
    edges = np.linspace(0.0, x_max, panels + 1)
    g, w = leggauss(nodes)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = mid[:, None] + half[:, None] * g[None, :]
    f = np.exp(-2 * math.pi * t * x) * np.cos(2 * math.pi * xi * x)
    per_panel = half * (f @ w)
    lhs = 2.0 * math.fsum(per_panel)
    rhs = fourier_rhs(t, xi)
    return lhs, rhs, abs(lhs - rhs)


def limit_form(K: KernelMatrix, lam, n: float) -> float:
    """``n * sum l(x) l(y) (exp(-K(x, y)/n) - 1)``; tends to ``-l^T K l`` as ``n`` grows."""
    v = np.asarray(lam, dtype=float)
    E = np.expm1(-K.entries / n)
    return float(n * (v @ E @ v))
