"""Finite real symmetric kernels and their definiteness classes.

A kernel on a finite set is stored as a labeled symmetric matrix.  The four
classes decided here are

* PD / SPD   -- ``l^T K l >= 0`` (``> 0``) for every nonzero ``l``;
* CND / CSND -- ``l^T K l <= 0`` (``< 0``) for every nonzero ``l`` with ``sum(l) == 0``.

Eigenvalue signs are decided relative to ``rel_eps * scale(K)`` where
``scale(K)`` is the largest absolute entry, so ``K`` and ``c*K`` (``c > 0``)
always receive the same verdicts.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    DegenerateInput,
    HypothesisNotMet,
    InvariantViolation,
    LabelError,
)
from .exact import bareiss_determinant

__all__ = [
    "KernelMatrix",
    "Verdict",
    "TolerancePolicy",
    "ClassReport",
    "InvertibilityResult",
    "zero_sum_reduction",
    "lift_zero_sum",
    "classify",
    "csnd_by_invertibility",
    "csnd_by_bordered_determinant",
    "invertibility_verdict",
    "cnd_decompose",
    "markov_sum_kernel",
    "schur_exponential",
]

_SYMMETRY_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """A labeled real symmetric matrix ``K(x, y)``."""

    labels: tuple[str, ...]
    entries: np.ndarray

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        a = np.array(self.entries, dtype=float, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvariantViolation(f"kernel matrix must be square, got shape {a.shape}")
        n = a.shape[0]
        if n < 1:
            raise InvariantViolation("kernel needs at least one point")
        if len(labels) != n:
            raise InvariantViolation(f"{len(labels)} labels for a {n}x{n} matrix")
        if len(set(labels)) != n:
            raise InvariantViolation("labels must be pairwise distinct")
        if not np.all(np.isfinite(a)):
            raise InvariantViolation("kernel entries must be finite")
        asym = np.max(np.abs(a - a.T))
        if asym > _SYMMETRY_RTOL * max(1.0, float(np.max(np.abs(a)))):
            raise InvariantViolation(f"kernel matrix is not symmetric (max |K - K^T| = {asym:.3g})")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "entries", a)

    @classmethod
    def from_matrix(cls, matrix, labels: Sequence[str] | None = None) -> "KernelMatrix":
        a = np.asarray(matrix, dtype=float)
        if labels is None:
            labels = [str(i) for i in range(a.shape[0])]
        return cls(tuple(labels), a)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def scale(self) -> float:
        s = float(np.max(np.abs(self.entries)))
        return s if s > 0 else 1.0

    @property
    def is_integral(self) -> bool:
        """True when every entry is an integer, enabling the exact determinant path."""
        a = self.entries
        return bool(np.all(a == np.round(a)) and np.max(np.abs(a)) < 2.0**52)

    @property
    def is_schoenberg(self) -> bool:
        a = self.entries
        return bool(np.all(np.diag(a) == 0) and np.all(a >= 0))

    def int_rows(self) -> list[list[int]]:
        if not self.is_integral:
            raise ValueError("kernel has non-integer entries")
        return [[int(x) for x in row] for row in np.round(self.entries)]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise LabelError(f"unknown label {label!r}") from None

    def __getitem__(self, pair: tuple[str, str]) -> float:
        x, y = pair
        return float(self.entries[self.index(x), self.index(y)])

    def restrict(self, labels: Sequence[str]) -> "KernelMatrix":
        idx = [self.index(x) for x in labels]
        return KernelMatrix(tuple(self.labels[i] for i in idx), self.entries[np.ix_(idx, idx)])

    def quadratic_form(self, vector) -> float:
        v = np.asarray(vector, dtype=float)
        return float(v @ self.entries @ v)

    def __eq__(self, other):
        if not isinstance(other, KernelMatrix):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.entries, other.entries)

    def __repr__(self):
        return f"KernelMatrix(n={self.n}, labels={list(self.labels)!r})"


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    NOT_APPLICABLE = "not-applicable"

    def __bool__(self):
        return self is Verdict.HOLDS


@dataclass(frozen=True)
class TolerancePolicy:
    rel_eps: float = 1e-9

    def __post_init__(self):
        if not self.rel_eps > 0:
            raise ValueError("rel_eps must be positive")

    def threshold(self, K: KernelMatrix) -> float:
        return self.rel_eps * K.scale


DEFAULT_TOLERANCE = TolerancePolicy()


@dataclass(frozen=True)
class ClassReport:
    """Verdicts for the four classes, with spectra and failure certificates.

    ``spectrum`` is the spectrum of ``K``; ``reduced_spectrum`` is the spectrum
    of ``K`` restricted to the zero-sum subspace (see :func:`zero_sum_reduction`).
    ``certificates`` maps a failed class name to a vector whose quadratic form
    violates that class's strict inequality.
    """

    labels: tuple[str, ...]
    pd: Verdict
    spd: Verdict
    cnd: Verdict
    csnd: Verdict
    spectrum: tuple[float, ...]
    reduced_spectrum: tuple[float, ...]
    certificates: dict[str, np.ndarray] = field(default_factory=dict)
    tolerance_used: float = DEFAULT_TOLERANCE.rel_eps
    scale: float = 1.0

    @property
    def certificate(self) -> np.ndarray | None:
        """The zero-sum witness against CSND, if any."""
        return self.certificates.get("csnd")

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "verdicts": {
                "pd": self.pd.value,
                "spd": self.spd.value,
                "cnd": self.cnd.value,
                "csnd": self.csnd.value,
            },
            "spectrum": [float(x) for x in self.spectrum],
            "reduced_spectrum": [float(x) for x in self.reduced_spectrum],
            "certificates": {k: [float(x) for x in v] for k, v in sorted(self.certificates.items())},
            "certificate": None if self.certificate is None else [float(x) for x in self.certificate],
            "tolerance": self.tolerance_used,
            "scale": self.scale,
        }


def zero_sum_reduction(K: KernelMatrix) -> np.ndarray:
    """Quadratic form of ``K`` on the zero-sum subspace.

    Uses the basis ``u_i = d_i - d_n`` (last label as pivot), so
    ``M[i, j] = K[i, j] - K[i, n] - K[n, j] + K[n, n]``.
    """
    if K.n < 2:
        raise DegenerateInput("zero-sum subspace is trivial for a single point")
    a = K.entries
    last_row = a[-1, :-1]
    m = a[:-1, :-1] - last_row[:, None] - last_row[None, :] + a[-1, -1]
    return 0.5 * (m + m.T)


def lift_zero_sum(y) -> np.ndarray:
    """Coordinates in the ``u_i`` basis -> zero-sum vector on all ``n`` points."""
    y = np.asarray(y, dtype=float)
    return np.append(y, -y.sum())


def _normalize_certificate(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    peak = np.max(np.abs(v))
    v = v / peak
    lead = int(np.argmax(np.abs(v) >= 1.0 - 1e-9))
    if v[lead] < 0:
        v = -v
    v[np.abs(v) < 1e-13] = 0.0
    return v


def classify(K: KernelMatrix, tol: TolerancePolicy | None = None) -> ClassReport:
    """Decide PD, SPD, CND and CSND for ``K``.

    PD/SPD are read from the spectrum of ``K`` itself and CND/CSND from the
    spectrum of :func:`zero_sum_reduction`.  Every failure ships an eigenvector
    of the offending sign, normalized to max-norm one; for CND/CSND it is lifted
    back to a zero-sum vector over all labels.
    """
    tol = tol or DEFAULT_TOLERANCE
    thr = tol.threshold(K)
    certs: dict[str, np.ndarray] = {}

    w, V = np.linalg.eigh(K.entries)
    lo = int(np.argmin(w))
    pd = Verdict.HOLDS if w[lo] >= -thr else Verdict.FAILS
    spd = Verdict.HOLDS if w[lo] > thr else Verdict.FAILS
    if pd is Verdict.FAILS:
        certs["pd"] = _normalize_certificate(V[:, lo])
    if spd is Verdict.FAILS:
        certs["spd"] = _normalize_certificate(V[:, lo])

    if K.n == 1:
        cnd = csnd = Verdict.HOLDS
        mu: np.ndarray = np.empty(0)
    else:
        mu, Y = np.linalg.eigh(zero_sum_reduction(K))
        hi = int(np.argmax(mu))
        cnd = Verdict.HOLDS if mu[hi] <= thr else Verdict.FAILS
        csnd = Verdict.HOLDS if mu[hi] < -thr else Verdict.FAILS
        lifted = _normalize_certificate(lift_zero_sum(Y[:, hi]))
        if cnd is Verdict.FAILS:
            certs["cnd"] = lifted
        if csnd is Verdict.FAILS:
            certs["csnd"] = lifted

    return ClassReport(
        labels=K.labels,
        pd=pd,
        spd=spd,
        cnd=cnd,
        csnd=csnd,
        spectrum=tuple(float(x) for x in w),
        reduced_spectrum=tuple(float(x) for x in mu),
        certificates=certs,
        tolerance_used=tol.rel_eps,
        scale=K.scale,
    )


class InvertibilityResult(NamedTuple):
    verdict: bool
    determinant: int | float
    exact: bool


def _require_cnd_schoenberg(K: KernelMatrix, tol: TolerancePolicy | None) -> None:
    if not K.is_schoenberg:
        raise HypothesisNotMet("schoenberg", "kernel is not a Schoenberg kernel (zero diagonal, nonnegative entries)")
    if classify(K, tol).cnd is not Verdict.HOLDS:
        raise HypothesisNotMet("cnd", "kernel is not conditionally negative definite")


def _determinant_test(matrix: np.ndarray, exact: bool, thr: float) -> InvertibilityResult:
    if exact:
        det = bareiss_determinant(np.round(matrix).astype(np.int64).tolist())
        return InvertibilityResult(det != 0, det, True)
    w = np.linalg.eigvalsh(matrix)
    return InvertibilityResult(bool(np.min(np.abs(w)) > thr), float(np.linalg.det(matrix)), False)


def csnd_by_invertibility(
    K: KernelMatrix, tol: TolerancePolicy | None = None, *, exact: bool | None = None
) -> InvertibilityResult:
    """Invertibility of the matrix of a CND Schoenberg kernel.

    Integer kernels take the exact Bareiss path, so the verdict carries no
    tolerance.  A single point counts as CSND (vacuously) even though
    ``det([0]) == 0``.

    Invertibility is necessary for CSND but not sufficient: the squared
    distances of the collinear points 0, 1, 2 give ``det = 8`` while
    ``(1, -2, 1)`` annihilates the form.  Use
    :func:`csnd_by_bordered_determinant` for an exact test that is also
    sufficient.
    """
    tol = tol or DEFAULT_TOLERANCE
    _require_cnd_schoenberg(K, tol)
    use_exact = K.is_integral if exact is None else exact
    if use_exact and not K.is_integral:
        raise ValueError("exact path requested for a non-integer kernel")
    res = _determinant_test(K.entries, use_exact, tol.threshold(K))
    if K.n == 1:
        return InvertibilityResult(True, res.determinant, res.exact)
    return res


def bordered_matrix(K: KernelMatrix) -> np.ndarray:
    n = K.n
    b = np.ones((n + 1, n + 1))
    b[:n, :n] = K.entries
    b[n, n] = 0.0
    return b


def csnd_by_bordered_determinant(
    K: KernelMatrix, tol: TolerancePolicy | None = None, *, exact: bool | None = None
) -> InvertibilityResult:
    """CSND test for CND Schoenberg kernels via ``det [[K, 1], [1^T, 0]]``.

    For CND ``K`` a zero-sum null direction ``l`` of the form satisfies
    ``K l = c 1`` for some ``c``, i.e. ``(l, -c)`` is in the kernel of the
    bordered matrix, and conversely.  Hence CSND iff the bordered matrix is
    invertible.
    """
    tol = tol or DEFAULT_TOLERANCE
    _require_cnd_schoenberg(K, tol)
    use_exact = K.is_integral if exact is None else exact
    if use_exact and not K.is_integral:
        raise ValueError("exact path requested for a non-integer kernel")
    return _determinant_test(bordered_matrix(K), use_exact, tol.threshold(K))


def invertibility_verdict(K: KernelMatrix, tol: TolerancePolicy | None = None) -> Verdict:
    """Three-valued wrapper: NOT_APPLICABLE when K is not a CND Schoenberg kernel."""
    try:
        return Verdict.HOLDS if csnd_by_bordered_determinant(K, tol).verdict else Verdict.FAILS
    except HypothesisNotMet:
        return Verdict.NOT_APPLICABLE


def cnd_decompose(
    K: KernelMatrix, base: str, tol: TolerancePolicy | None = None
) -> tuple[KernelMatrix, np.ndarray]:
    """Write a CND kernel as ``K(x, y) = -A(x, y) + F(x) + F(y)`` with ``A`` PD.

    ``A(x, y) = K(x, e) + K(e, y) - K(x, y) - K(e, e)`` and
    ``F(x) = K(x, e) - K(e, e) / 2`` for the base point ``e``; for Schoenberg
    kernels the ``K(e, e)`` terms vanish.
    """
    if classify(K, tol).cnd is not Verdict.HOLDS:
        raise HypothesisNotMet("cnd", "kernel is not conditionally negative definite")
    e = K.index(base)
    a = K.entries
    col = a[:, e]
    kee = a[e, e]
    A = col[:, None] + col[None, :] - a - kee
    F = col - kee / 2.0
    return KernelMatrix(K.labels, A), F


def markov_sum_kernel(K1: KernelMatrix, e1: str, K2: KernelMatrix, e2: str) -> KernelMatrix:
    """Kernel on the wedge ``X1 * X2`` obtained by identifying ``e1 ~ e2``.

    Labels are those of ``K1`` followed by those of ``K2`` without ``e2``; the
    glued point keeps the label ``e1``.  Cross entries are
    ``K(x, y) = K1(x, e1) + K2(e2, y)``.
    """
    i1 = K1.index(e1)
    i2 = K2.index(e2)
    rest = [j for j in range(K2.n) if j != i2]
    labels2 = [K2.labels[j] for j in rest]
    clash = set(K1.labels) & set(labels2)
    if clash:
        raise LabelError(f"labels occur in both summands: {sorted(clash)}")
    n1, n2 = K1.n, len(rest)
    out = np.zeros((n1 + n2, n1 + n2))
    out[:n1, :n1] = K1.entries
    b = K2.entries[np.ix_(rest, rest)]
    out[n1:, n1:] = b
    cross = K1.entries[:, i1][:, None] + K2.entries[i2, rest][None, :]
    out[:n1, n1:] = cross
    out[n1:, :n1] = cross.T
    return KernelMatrix(K1.labels + tuple(labels2), out)


def schur_exponential(K: KernelMatrix, s: float) -> KernelMatrix:
    """Entrywise ``exp(-s K)``; maps CND to PD and CSND to SPD."""
    if not s > 0:
        raise ValueError("s must be positive")
    return KernelMatrix(K.labels, np.exp(-s * K.entries))
