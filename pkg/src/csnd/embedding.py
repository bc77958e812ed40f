"""Quadratic embeddings of CND Schoenberg kernels.

A CND Schoenberg kernel ``K`` on ``n`` points is realized by points
``a(x)`` in ``R^d`` with ``|a(x) - a(y)|^2 = K(x, y)``.  CSND holds exactly
when these points are affinely independent, in which case they lie on a
unique circumsphere and ``K = -A + c`` with ``A`` strictly positive definite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import HypothesisNotMet, InvariantViolation, NumericalInconsistency
from .kernels import (
    DEFAULT_TOLERANCE,
    KernelMatrix,
    TolerancePolicy,
    Verdict,
    classify,
)

__all__ = [
    "PointConfig",
    "Sphere",
    "ConstantShiftDecomposition",
    "quadratic_embed",
    "kernel_of_config",
    "affine_rank",
    "is_affinely_independent",
    "circumsphere",
    "constant_shift_decompose",
    "odd_cycle_embedding",
    "subset_sign_vector",
]


@dataclass(frozen=True, eq=False)
class PointConfig:
    labels: tuple[str, ...]
    coords: np.ndarray

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        c = np.array(self.coords, dtype=float, copy=True)
        if c.ndim == 1:
            c = c.reshape(-1, 1)
        if c.ndim != 2:
            raise InvariantViolation("coords must be an n x d array")
        if c.shape[0] < 1 or c.shape[0] != len(labels):
            raise InvariantViolation(f"{len(labels)} labels for {c.shape[0]} points")
        if len(set(labels)) != len(labels):
            raise InvariantViolation("labels must be pairwise distinct")
        if not np.all(np.isfinite(c)):
            raise InvariantViolation("coordinates must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "coords", c)

    @classmethod
    def from_coords(cls, coords, labels: Sequence[str] | None = None) -> "PointConfig":
        c = np.asarray(coords, dtype=float)
        if c.ndim == 1:
            c = c.reshape(-1, 1)
        if labels is None:
            labels = [str(i) for i in range(c.shape[0])]
        return cls(tuple(labels), c)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]


@dataclass(frozen=True)
class Sphere:
    center: np.ndarray
    radius: float
    span_constraint: bool = True


@dataclass(frozen=True)
class ConstantShiftDecomposition:
    """``K(x, y) = -A(x, y) + c`` with ``A`` strictly positive definite.

    ``radius`` is the circumradius of the embedding and ``shift`` the length
    of the orthogonal translation used to move the origin off the affine span.
    """

    A: KernelMatrix
    c: float
    radius: float
    shift: float


def quadratic_embed(
    K: KernelMatrix, tol: TolerancePolicy | None = None, *, pivot: str | None = None
) -> PointConfig:
    """Embed a CND Schoenberg kernel so that squared distances reproduce it.

    The Gram matrix ``G[i, j] = (K[i, p] + K[j, p] - K[i, j]) / 2`` about the
    pivot ``p`` (last label by default, which lands at the origin) is factored
    through its eigendecomposition.  Eigenvalues above ``rel_eps*scale/2`` are
    kept, the same cut that :func:`classify` applies to the zero-sum
    reduction ``-2 G``, so the embedding dimension is ``n - 1`` exactly when
    ``K`` classifies CSND.
    """
    tol = tol or DEFAULT_TOLERANCE
    if not K.is_schoenberg:
        raise HypothesisNotMet("schoenberg", "quadratic embedding needs a Schoenberg kernel")
    if classify(K, tol).cnd is not Verdict.HOLDS:
        raise HypothesisNotMet("cnd", "quadratic embedding needs a CND kernel")
    p = K.n - 1 if pivot is None else K.index(pivot)
    a = K.entries
    col = a[:, p]
    G = 0.5 * (col[:, None] + col[None, :] - a)
    w, V = np.linalg.eigh(G)
    thr = 0.5 * tol.threshold(K)
    if np.min(w, initial=0.0) < -2 * thr:
        raise NumericalInconsistency(f"Gram matrix has eigenvalue {np.min(w):.3g} below tolerance")
    keep = w > thr
    coords = V[:, keep] * np.sqrt(w[keep])[None, :]
    coords[p, :] = 0.0
    return PointConfig(K.labels, coords)


def kernel_of_config(P: PointConfig) -> KernelMatrix:
    """Kernel of squared Euclidean distances between the rows of ``P``."""
    if P.d == 0:
        return KernelMatrix(P.labels, np.zeros((P.n, P.n)))
    return KernelMatrix(P.labels, squareform(pdist(P.coords, "sqeuclidean")))


def _difference_matrix(P: PointConfig) -> np.ndarray:
    return P.coords[1:] - P.coords[0]


def affine_rank(P: PointConfig, tol: TolerancePolicy | None = None) -> int:
    """Dimension of the affine span, via singular values of ``coords[i] - coords[0]``."""
    tol = tol or DEFAULT_TOLERANCE
    D = _difference_matrix(P)
    if D.size == 0:
        return 0
    s = np.linalg.svd(D, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol.rel_eps * s[0]))


def is_affinely_independent(P: PointConfig, tol: TolerancePolicy | None = None) -> bool:
    return affine_rank(P, tol) == P.n - 1


def circumsphere(P: PointConfig, tol: TolerancePolicy | None = None) -> Sphere:
    """The unique sphere through affinely independent points, centered in their span.

    Writing the center as ``a_0 + D^T y`` with ``D`` the difference matrix,
    equidistance from ``a_0`` and ``a_i`` gives ``2 D D^T y = diag(D D^T)``.
    """
    if not is_affinely_independent(P, tol):
        raise HypothesisNotMet(
            "affine-independence", "points are affinely dependent: infinitely many spheres pass through them"
        )
    origin = P.coords[0]
    if P.n == 1:
        return Sphere(origin.copy(), 0.0)
    D = _difference_matrix(P)
    gram = D @ D.T
    y = np.linalg.solve(2.0 * gram, np.diag(gram))
    offset = D.T @ y
    return Sphere(origin + offset, float(np.linalg.norm(offset)))


def constant_shift_decompose(K: KernelMatrix, tol: TolerancePolicy | None = None) -> ConstantShiftDecomposition:
    """Decompose a CSND Schoenberg kernel as ``K = -A + c`` with ``A`` SPD.

    Embed ``K``, move the circumcenter to the origin so every point has norm
    ``r``, then append one extra coordinate equal to ``t = r`` (a vector
    orthogonal to all embedded points).  With ``b(x) = a(x) + v`` one gets
    ``K(x, y) = 2(r^2 + t^2) - 2<b(x), b(y)>``, so ``A = 2 <b(x), b(y)>``
    and ``c = 2(r^2 + t^2)``.  A single point has ``r = 0``; there ``t = 1``.
    """
    tol = tol or DEFAULT_TOLERANCE
    if not K.is_schoenberg:
        raise HypothesisNotMet("schoenberg", "decomposition needs a Schoenberg kernel")
    if classify(K, tol).csnd is not Verdict.HOLDS:
        raise HypothesisNotMet("csnd", "decomposition needs a CSND kernel")
    P = quadratic_embed(K, tol)
    sphere = circumsphere(P, tol)
    centered = P.coords - sphere.center[None, :]
    r = sphere.radius
    t = r if r > 0 else 1.0
    B = np.hstack([centered, np.full((P.n, 1), t)])
    A = 2.0 * (B @ B.T)
    c = 2.0 * (r * r + t * t)
    return ConstantShiftDecomposition(KernelMatrix(K.labels, A), float(c), float(r), float(t))


def subset_sign_vector(subset: set[int] | frozenset[int], size: int) -> np.ndarray:
    """``+1`` on ``subset`` and ``-1`` on its complement, over points ``1..size``."""
    return np.array([1.0 if k in subset else -1.0 for k in range(1, size + 1)])


def odd_cycle_embedding(n: int) -> PointConfig:
    """Explicit quadratic embedding of the ``(2n+1)``-cycle by sign vectors.

    Vertex ``k`` (``1 <= k <= n``) goes to the sign vector of ``{1..2k}``;
    vertex ``n + k`` (``1 <= k <= n+1``) to that of the complement of
    ``{1..2k-1}``.  The squared distance between two sign vectors is four
    times the size of the symmetric difference of their sets; the common
    scale ``s`` is computed from the first edge and checked on every pair.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    size = 2 * n + 1
    full = frozenset(range(1, size + 1))
    rows = []
    for k in range(1, n + 1):
        rows.append(subset_sign_vector(frozenset(range(1, 2 * k + 1)), size))
    for k in range(1, n + 2):
        rows.append(subset_sign_vector(full - frozenset(range(1, 2 * k)), size))
    raw = np.array(rows)
    first_edge = float(np.sum((raw[0] - raw[1]) ** 2))
    s = np.sqrt(1.0 / first_edge)
    P = PointConfig(tuple(str(i) for i in range(size)), s * raw)
    got = kernel_of_config(P).entries
    idx = np.arange(size)
    gap = np.abs(idx[:, None] - idx[None, :])
    expected = np.minimum(gap, size - gap)
    if np.max(np.abs(got - expected)) > 1e-9:
        raise NumericalInconsistency("sign-vector embedding does not reproduce the cycle metric")
    return P
