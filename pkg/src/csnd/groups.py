"""Coxeter, free and cyclic-amalgam groups and their Cayley balls.

Coxeter group elements are identified through the Tits (geometric)
representation: generator ``s`` acts on ``R^S`` by ``v -> v - 2 B(a_s, v) a_s``
with ``B(a_s, a_t) = -cos(pi / m_st)``.  The representation is faithful, so
two words name the same element iff their matrices agree.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from .errors import NumericalIdentificationError, PresentationError
from .graphs import (
    EMPTY_WORD,
    CycleCertificate,
    Graph,
    ball_interior,
    even_cycle_certificate,
    interior_metric,
    path_metric,
)
from .kernels import KernelMatrix, Verdict, classify

__all__ = [
    "INF",
    "GroupPresentation",
    "CayleyBall",
    "WordMetricVerdict",
    "alternating_product",
    "tits_matrices",
    "coxeter_element",
    "coxeter_length",
    "coxeter_cayley_ball",
    "free_group_ball",
    "amalgam_cyclic_ball",
    "dihedral_cycle",
    "word_metric_verdict",
]

INF = math.inf
DEFAULT_MAX_M = 12
_GRID = 1e-7


@dataclass(frozen=True)
class GroupPresentation:
    """Generators ``S`` with a symmetric coefficient table ``m[s][t]`` in ``{2, 3, ...} | {inf}``."""

    generators: tuple[str, ...]
    m: tuple[tuple[float, ...], ...]
    kind: str = "coxeter"

    def __post_init__(self):
        gens = tuple(str(g) for g in self.generators)
        if len(set(gens)) != len(gens) or not gens:
            raise PresentationError("generators must be a nonempty list of distinct names")
        for g in gens:
            if g == EMPTY_WORD or any(ch in g for ch in ". |:"):
                raise PresentationError(f"generator name {g!r} is reserved or contains a separator")
        if self.kind not in ("coxeter", "artin"):
            raise PresentationError(f"unknown kind {self.kind!r}")
        n = len(gens)
        table = [[float(x) for x in row] for row in self.m]
        if len(table) != n or any(len(row) != n for row in table):
            raise PresentationError("coefficient table must be len(generators) square")
        for i in range(n):
            table[i][i] = 1.0
            for j in range(i + 1, n):
                a, b = table[i][j], table[j][i]
                if a != b:
                    raise PresentationError(f"m[{gens[i]}][{gens[j]}] != m[{gens[j]}][{gens[i]}]")
                if not (a == INF or (a >= 2 and a == int(a))):
                    raise PresentationError(f"coefficient {a} must be an integer >= 2 or inf")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "m", tuple(tuple(row) for row in table))

    @classmethod
    def from_pairs(
        cls, generators: Sequence[str], pairs: Mapping[tuple[str, str], float], kind: str = "coxeter"
    ) -> "GroupPresentation":
        """Build from ``{(s, t): m}``; unlisted pairs default to ``inf``."""
        gens = list(generators)
        idx = {g: i for i, g in enumerate(gens)}
        table = [[INF] * len(gens) for _ in gens]
        for (s, t), v in pairs.items():
            table[idx[s]][idx[t]] = table[idx[t]][idx[s]] = float(v)
        return cls(tuple(gens), tuple(tuple(r) for r in table), kind)

    @classmethod
    def free(cls, n: int, kind: str = "coxeter") -> "GroupPresentation":
        gens = tuple(f"s{i}" for i in range(n))
        return cls(gens, tuple(tuple(INF for _ in gens) for _ in gens), kind)

    def coefficient(self, s: str, t: str) -> float:
        i, j = self.generators.index(s), self.generators.index(t)
        return self.m[i][j]

    def finite_pairs(self) -> list[tuple[float, str, str]]:
        gens = self.generators
        return [
            (self.m[i][j], gens[i], gens[j])
            for i, j in combinations(range(len(gens)), 2)
            if self.m[i][j] != INF
        ]

    @property
    def is_free(self) -> bool:
        return not self.finite_pairs()

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "generators": list(self.generators),
            "m": [["inf" if x == INF else int(x) for x in row] for row in self.m],
        }


def alternating_product(s: str, t: str, k: int) -> tuple[str, ...]:
    """The word ``s t s t ...`` of length ``k``, starting with ``s``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return tuple(s if i % 2 == 0 else t for i in range(k))


def _word_label(word: Sequence[str]) -> str:
    return ".".join(word) if word else EMPTY_WORD


@dataclass(frozen=True)
class CayleyBall:
    """Ball about the identity in a Cayley graph.

    ``words`` maps each vertex label to a geodesic word.  ``exactness_note``
    states how far ball distances can be trusted.
    """

    graph: Graph
    words: dict[str, tuple[str, ...]]
    radius: int
    exactness_note: str = ""

    @property
    def identity(self) -> str:
        return EMPTY_WORD

    def interior(self) -> list[str]:
        return ball_interior(self.graph, self.radius // 2)

    def interior_metric(self) -> KernelMatrix:
        return interior_metric(self.graph, self.radius // 2)


def tits_matrices(P: GroupPresentation) -> list[np.ndarray]:
    """Matrices of the generators in the geometric representation (basis of simple roots)."""
    n = len(P.generators)
    B = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            m = P.m[i][j]
            B[i, j] = 1.0 if i == j else (-1.0 if m == INF else -math.cos(math.pi / m))
    mats = []
    for i in range(n):
        M = np.eye(n)
        M[i, :] -= 2.0 * B[i, :]
        mats.append(M)
    return mats


def coxeter_element(P: GroupPresentation, word: Sequence[str], mats: list[np.ndarray] | None = None) -> np.ndarray:
    mats = mats or tits_matrices(P)
    idx = {g: i for i, g in enumerate(P.generators)}
    W = np.eye(len(P.generators))
    for s in word:
        W = W @ mats[idx[s]]
    return W


def coxeter_length(P: GroupPresentation, W: np.ndarray, mats: list[np.ndarray] | None = None) -> int:
    """Word length of the element with matrix ``W``, by descent.

    ``l(ws) < l(w)`` iff ``w(a_s)`` (column ``s`` of ``W``) is a negative
    root; right-multiplying by such ``s`` until none is left counts the
    length.
    """
    mats = mats or tits_matrices(P)
    W = np.array(W, dtype=float)
    length = 0
    while True:
        for i in range(W.shape[0]):
            col = W[:, i]
            if np.max(col) <= 1e-9 * (1.0 + np.max(np.abs(col))):
                W = W @ mats[i]
                length += 1
                break
        else:
            return length


def _key(W: np.ndarray) -> bytes:
    return np.round(W / _GRID).astype(np.int64).tobytes()


def coxeter_cayley_ball(P: GroupPresentation, radius: int, *, max_m: int = DEFAULT_MAX_M) -> CayleyBall:
    """Breadth-first enumeration of the Coxeter group elements of length ``<= radius``.

    Elements are hashed by their Tits matrices rounded to a 1e-7 grid; a hash
    hit whose matrices differ by more than 1e-6 raises
    :class:`NumericalIdentificationError`.  Vertex labels are the
    shortlex-first geodesic words (generator order), joined by ``"."``.
    """
    if P.kind != "coxeter":
        raise PresentationError("coxeter_cayley_ball needs a Coxeter presentation")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    for m, s, t in P.finite_pairs():
        if m > max_m:
            raise PresentationError(f"m[{s}][{t}] = {int(m)} exceeds the identification bound {max_m}")
    mats = tits_matrices(P)
    gens = P.generators
    identity = np.eye(len(gens))
    elements: dict[bytes, tuple[tuple[str, ...], np.ndarray]] = {_key(identity): ((), identity)}
    frontier = [((), identity)]
    edges: set[tuple[str, str]] = set()
    for depth in range(radius):
        nxt = []
        for word, W in frontier:
            for s, M in zip(gens, mats):
                V = W @ M
                k = _key(V)
                hit = elements.get(k)
                if hit is None:
                    elements[k] = (word + (s,), V)
                    nxt.append((word + (s,), V))
                    hit = elements[k]
                elif np.max(np.abs(hit[1] - V)) > 1e-6 * (1.0 + np.max(np.abs(V))):
                    raise NumericalIdentificationError(
                        f"matrices of {_word_label(hit[0])} and {_word_label(word + (s,))} collide on the hash grid; "
                        "use a smaller radius"
                    )
                if len(hit[0]) not in (depth - 1, depth + 1):
                    raise NumericalIdentificationError(
                        f"{_word_label(word + (s,))} identified with {_word_label(hit[0])} of incompatible length"
                    )
                a, b = _word_label(word), _word_label(hit[0])
                edges.add((a, b) if a < b else (b, a))
        frontier = nxt
    words = {_word_label(w): w for w, _ in elements.values()}
    order = sorted(words, key=lambda x: (len(words[x]), [gens.index(g) for g in words[x]]))
    graph = Graph(tuple(order), tuple(sorted(edges)), EMPTY_WORD)
    return CayleyBall(graph, {v: words[v] for v in order}, radius, "exact word lengths; distances exact within radius // 2")


def free_group_ball(n: int, radius: int) -> CayleyBall:
    """Ball in the Cayley graph of the free group on ``n`` generators (the ``2n``-regular tree).

    Generators are ``g1 .. gn`` with inverses ``G1 .. Gn``.
    """
    if n < 1 or radius < 0:
        raise ValueError("need n >= 1 and radius >= 0")
    letters = [f"g{i}" for i in range(1, n + 1)] + [f"G{i}" for i in range(1, n + 1)]
    inverse = {f"g{i}": f"G{i}" for i in range(1, n + 1)}
    inverse.update({v: k for k, v in inverse.items()})
    words: dict[str, tuple[str, ...]] = {EMPTY_WORD: ()}
    frontier: list[tuple[str, ...]] = [()]
    edges = []
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and inverse[w[-1]] == x:
                    continue
                v = w + (x,)
                words[_word_label(v)] = v
                edges.append((_word_label(w), _word_label(v)))
                nxt.append(v)
        frontier = nxt
    graph = Graph(tuple(words), tuple(edges), EMPTY_WORD)
    return CayleyBall(graph, words, radius, "tree: all ball distances exact")


def amalgam_cyclic_ball(m: int, n: int, d: int, radius: int) -> CayleyBall:
    """Ball in the Cayley graph of ``C_m *_{C_d} C_n = <a, b | a^m, b^n, a^(m/d) = b^(n/d)>``.

    Generating set ``a, a^-1, b, b^-1``.  Elements are kept in the normal form
    ``z^c r_1 ... r_k`` where ``z = a^(m/d) = b^(n/d)`` is central,
    ``0 <= c < d``, and the ``r_i`` alternate between ``a^j`` (``0 < j < m/d``)
    and ``b^j`` (``0 < j < n/d``).  Vertex labels are these normal forms
    (``"z^c.a^j.b^j..."``, ``"e"`` for the identity).
    """
    if d < 1 or m < 1 or n < 1 or m % d or n % d:
        raise PresentationError("need d >= 1 dividing both m and n")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    period = {"a": m // d, "b": n // d}

    def mul(elem, letter: str, step: int):
        c, rs = elem
        p = period[letter]
        if rs and rs[-1][0] == letter:
            total = rs[-1][1] + step
            rs = rs[:-1]
        else:
            total = step
        c = (c + total // p) % d
        j = total % p
        if j:
            rs = rs + ((letter, j),)
        return (c, rs)

    def label(elem) -> str:
        c, rs = elem
        parts = ([f"z^{c}"] if c else []) + [f"{x}^{j}" for x, j in rs]
        return ".".join(parts) if parts else EMPTY_WORD

    moves = [("a", 1, "a"), ("a", -1, "A"), ("b", 1, "b"), ("b", -1, "B")]
    start = (0, ())
    words = {start: ()}
    queue = deque([start])
    edges: set[tuple[str, str]] = set()
    while queue:
        u = queue.popleft()
        if len(words[u]) == radius:
            continue
        for letter, step, name in moves:
            v = mul(u, letter, step)
            if v not in words:
                words[v] = words[u] + (name,)
                queue.append(v)
    for u in words:
        for letter, step, _ in moves:
            v = mul(u, letter, step)
            if v in words and v != u:
                a, b = label(u), label(v)
                edges.add((a, b) if a < b else (b, a))
    order = list(words)
    graph = Graph(tuple(label(x) for x in order), tuple(sorted(edges)), EMPTY_WORD)
    return CayleyBall(
        graph,
        {label(x): words[x] for x in order},
        radius,
        "exact normal forms; distances exact within radius // 2",
    )


def dihedral_cycle(s: str, t: str, m: int) -> list[tuple[str, ...]]:
    """Geodesic words for the ``2m`` elements of ``<s, t>`` in cyclic order around the Cayley graph."""
    forward = [alternating_product(s, t, k) for k in range(m + 1)]
    backward = [alternating_product(t, s, k) for k in range(m - 1, 0, -1)]
    return forward + backward


@dataclass(frozen=True)
class WordMetricVerdict:
    """Whether the word metric of a Coxeter or Artin group is CSND, with its witness.

    On the negative branch ``pair`` and ``m`` name a generator pair with the
    least finite coefficient, ``relators`` the two alternating words of
    length ``m`` and ``cycle_length = 2m``.  ``cross_check`` is ``None`` when
    no computation was attempted.
    """

    csnd: bool
    kind: str
    witness: str
    pair: tuple[str, str] | None = None
    m: int | None = None
    relators: tuple[tuple[str, ...], tuple[str, ...]] | None = None
    cycle_length: int | None = None
    cross_check: bool | None = None
    certificate: CycleCertificate | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "csnd": self.csnd,
            "kind": self.kind,
            "witness": self.witness,
            "cross_check": self.cross_check,
        }
        if not self.csnd:
            out.update(
                pair=list(self.pair),
                m=self.m,
                relators=[_word_label(r) for r in self.relators],
                cycle_length=self.cycle_length,
            )
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        return out


def _coxeter_cycle_check(
    P: GroupPresentation, s: str, t: str, m: int
) -> tuple[bool, CycleCertificate | None, KernelMatrix]:
    """Word metric of the whole group on the ``2m`` elements of ``<s, t>``.

    Distances ``l(g^-1 h)`` come from descent in the Tits representation,
    so they are distances in the full group, not in a truncated ball.
    """
    mats = tits_matrices(P)
    cycle = dihedral_cycle(s, t, m)
    elems = [coxeter_element(P, w, mats) for w in cycle]
    inv = [coxeter_element(P, tuple(reversed(w)), mats) for w in cycle]
    size = len(cycle)
    lengths: dict[bytes, int] = {}
    D = np.zeros((size, size))
    for i in range(size):
        for j in range(i + 1, size):
            g = inv[i] @ elems[j]
            k = _key(g)
            if k not in lengths:
                lengths[k] = coxeter_length(P, g, mats)
            D[i, j] = D[j, i] = lengths[k]
    labels = tuple(_word_label(w) for w in cycle)
    K = KernelMatrix(labels, D)
    idx = np.arange(size)
    gap = np.abs(idx[:, None] - idx[None, :])
    isometric = bool(np.array_equal(D, np.minimum(gap, size - gap).astype(float)))
    G = Graph.from_edges([(labels[i], labels[(i + 1) % size]) for i in range(size)], labels)
    cert = even_cycle_certificate(G, witness=labels)
    return isometric, cert, K


def word_metric_verdict(
    P: GroupPresentation,
    *,
    cross_check: bool = False,
    ball_radius: int = 3,
    max_m: int = DEFAULT_MAX_M,
) -> WordMetricVerdict:
    """CSND verdict for the word metric of a Coxeter or Artin group.

    The metric is CSND iff every coefficient is infinite (free Coxeter group
    or free group).  Otherwise a pair ``(s, t)`` with the least finite
    ``m`` spans a cycle of length ``2m`` in the Cayley graph, isometric by
    minimality, and an even shortest cycle rules out CSND.

    With ``cross_check``: on the free branch a Cayley ball of radius
    ``ball_radius`` is classified; on the Coxeter negative branch the
    full-group word metric on the ``2m`` dihedral elements is computed, checked
    to be the cycle metric, and classified.  Artin negative verdicts are not
    cross-checked (no word problem is implemented for them).
    """
    gens = P.generators
    if P.is_free:
        if P.kind == "coxeter":
            witness = f"Cayley graph is the {len(gens)}-regular tree (free Coxeter group)"
        else:
            witness = f"Cayley graph is the {2 * len(gens)}-regular tree (free group)"
        checked = None
        if cross_check:
            ball = (
                coxeter_cayley_ball(P, ball_radius)
                if P.kind == "coxeter"
                else free_group_ball(len(gens), ball_radius)
            )
            checked = classify(path_metric(ball.graph)).csnd is Verdict.HOLDS
        return WordMetricVerdict(True, P.kind, witness, cross_check=checked)

    m, s, t = min(P.finite_pairs())
    m = int(m)
    relators = (alternating_product(s, t, m), alternating_product(t, s, m))
    witness = f"<{s},{t}>^{m} = <{t},{s}>^{m} closes a cycle of length {2 * m}"
    checked = None
    cert = None
    details: dict = {}
    if cross_check and P.kind == "coxeter" and m <= max_m:
        isometric, cert, K = _coxeter_cycle_check(P, s, t, m)
        report = classify(K)
        exact_zero = cert is not None and cert.evaluate(K) == 0
        checked = isometric and exact_zero and report.csnd is Verdict.FAILS
        details = {"isometric": isometric, "certificate_value": None if cert is None else cert.evaluate(K)}
    return WordMetricVerdict(
        False, P.kind, witness, (s, t), m, relators, 2 * m, checked, cert, details
    )
