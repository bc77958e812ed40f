"""Finite graphs, their path metrics, and product constructions.

Shortest cycles of even length obstruct CSND: on a shortest cycle of length
``2m`` the four vertices at positions ``0, 1, m, m+1`` have a distance matrix
annihilated by ``(1, -1, 1, -1)``.  Wedge sums, comb products and free
products preserve CSND.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import ConnectivityError, InvariantViolation, LabelError
from .exact import integer_quadratic_form
from .kernels import KernelMatrix

__all__ = [
    "Graph",
    "CycleCertificate",
    "path_metric",
    "girth",
    "even_cycle_certificate",
    "wedge_sum",
    "comb_product",
    "free_product_ball",
    "free_product_ball_of",
    "ball_interior",
    "interior_metric",
    "complete_graph",
    "cycle_graph",
    "path_graph",
    "star_graph",
    "tree_from_parent_array",
    "is_isometric_quad",
    "parse_expression",
    "GIRTH_INFINITE",
]

GIRTH_INFINITE = float("inf")


@dataclass(frozen=True, eq=False)
class Graph:
    """Finite simple graph with optional positive edge weights and a basepoint."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, float], ...]
    basepoint: str | None = None

    def __post_init__(self):
        vertices = tuple(str(v) for v in self.vertices)
        if len(set(vertices)) != len(vertices):
            raise InvariantViolation("duplicate vertex labels")
        vset = set(vertices)
        seen = set()
        edges = []
        for e in self.edges:
            u, v = str(e[0]), str(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            if u not in vset or v not in vset:
                raise LabelError(f"edge {u}-{v} uses an unknown vertex")
            if u == v:
                raise InvariantViolation(f"self-loop at {u!r}")
            if not w > 0:
                raise InvariantViolation(f"edge {u}-{v} has non-positive weight {w}")
            key = frozenset((u, v))
            if key in seen:
                raise InvariantViolation(f"duplicate edge {u}-{v}")
            seen.add(key)
            edges.append((u, v, w))
        if self.basepoint is not None and str(self.basepoint) not in vset:
            raise LabelError(f"basepoint {self.basepoint!r} is not a vertex")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", tuple(edges))
        if self.basepoint is not None:
            object.__setattr__(self, "basepoint", str(self.basepoint))

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[Sequence],
        vertices: Iterable[str] | None = None,
        basepoint: str | None = None,
    ) -> "Graph":
        edges = [tuple(e) for e in edges]
        order: dict[str, None] = {}
        for v in vertices or ():
            order[str(v)] = None
        for e in edges:
            order.setdefault(str(e[0]), None)
            order.setdefault(str(e[1]), None)
        return cls(tuple(order), tuple(edges), basepoint)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def weighted(self) -> bool:
        return any(w != 1.0 for _, _, w in self.edges)

    @cached_property
    def index(self) -> Mapping[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def adjacency(self) -> Mapping[str, tuple[str, ...]]:
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(ns) for v, ns in adj.items()}

    def has_vertex(self, v: str) -> bool:
        return v in self.index

    def _check(self, v: str) -> str:
        v = str(v)
        if v not in self.index:
            raise LabelError(f"unknown vertex {v!r}")
        return v

    def relabel(self, fn: Callable[[str], str]) -> "Graph":
        base = None if self.basepoint is None else fn(self.basepoint)
        return Graph(
            tuple(fn(v) for v in self.vertices),
            tuple((fn(u), fn(v), w) for u, v, w in self.edges),
            base,
        )

    def with_basepoint(self, v: str) -> "Graph":
        return Graph(self.vertices, self.edges, self._check(v))

    def induced(self, keep: Iterable[str]) -> "Graph":
        keep_set = set(keep)
        verts = tuple(v for v in self.vertices if v in keep_set)
        edges = tuple(e for e in self.edges if e[0] in keep_set and e[1] in keep_set)
        base = self.basepoint if self.basepoint in keep_set else None
        return Graph(verts, edges, base)

    def bfs_distances(self, source: str) -> dict[str, int]:
        source = self._check(source)
        dist = {source: 0}
        queue = deque([source])
        adj = self.adjacency
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)}, basepoint={self.basepoint!r})"


def path_metric(G: Graph) -> KernelMatrix:
    """All-pairs shortest-path distances as a kernel.

    Breadth-first for unweighted graphs (integer entries), Dijkstra otherwise.
    """
    n = G.n
    idx = G.index
    rows = [idx[u] for u, _, _ in G.edges]
    cols = [idx[v] for _, v, _ in G.edges]
    data = [w for _, _, w in G.edges]
    adj = csr_matrix((data, (rows, cols)), shape=(n, n))
    D = shortest_path(adj, method="auto", directed=False, unweighted=not G.weighted)
    if not np.all(np.isfinite(D)):
        i, j = np.argwhere(~np.isfinite(D))[0]
        raise ConnectivityError(G.vertices[i], G.vertices[j])
    return KernelMatrix(G.vertices, D)


def _bfs_tree(G: Graph, root: str) -> tuple[dict[str, int], dict[str, str | None], list[str]]:
    dist = {root: 0}
    parent: dict[str, str | None] = {root: None}
    order = [root]
    queue = deque([root])
    adj = G.adjacency
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                parent[w] = u
                order.append(w)
                queue.append(w)
    return dist, parent, order


def girth(G: Graph) -> tuple[float | int, list[str]]:
    """Length of a shortest cycle and one witness cycle (``inf`` and ``[]`` for forests).

    Runs a breadth-first search from every vertex; each non-tree edge ``u-w``
    closes a walk of length ``d(u) + d(w) + 1`` through the root.  At the
    global minimum the two tree paths are disjoint (otherwise a shorter
    cycle would exist), so the witness is a genuine cycle.
    """
    if G.weighted:
        raise ValueError("girth is defined here for unweighted graphs only")
    best = GIRTH_INFINITE
    best_data = None
    adj = G.adjacency
    for root in G.vertices:
        dist, parent, order = _bfs_tree(G, root)
        for u in order:
            if 2 * dist[u] + 1 >= best:
                break
            for w in adj[u]:
                if parent[u] == w or parent[w] == u:
                    continue
                length = dist[u] + dist[w] + 1
                if length < best:
                    best = length
                    best_data = (parent, u, w)
    if best_data is None:
        return GIRTH_INFINITE, []
    parent, u, w = best_data

    def to_root(x):
        path = [x]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        return path

    pu, pw = to_root(u), to_root(w)
    cycle = list(reversed(pu)) + pw[:-1]
    if G.index[cycle[1]] > G.index[cycle[-1]]:
        cycle = [cycle[0]] + cycle[:0:-1]
    if len(set(cycle)) != len(cycle) or len(cycle) != best:
        raise AssertionError("girth witness is not a simple cycle")
    return int(best), cycle


@dataclass(frozen=True)
class CycleCertificate:
    """Four vertices on a shortest even cycle and the vector ``(1, -1, 1, -1)`` on them.

    ``k`` is the distance between consecutive quad vertices ``x1-x2`` and
    ``x3-x4`` and ``n`` the distance ``x1-x4``; ``x1-x3`` are at ``n + k``.
    ``vector`` is the full integer vector over ``labels`` (zero off the quad).
    """

    cycle_vertices: tuple[str, ...]
    quad: tuple[str, str, str, str]
    lam: tuple[int, int, int, int]
    k: int | float
    n: int | float
    labels: tuple[str, ...] = field(default=())
    vector: tuple[int, ...] = field(default=())

    @property
    def length(self) -> int:
        return len(self.cycle_vertices)

    def quad_matrix(self) -> np.ndarray:
        k, n = self.k, self.n
        return np.array(
            [[0, k, n + k, n], [k, 0, n, n + k], [n + k, n, 0, k], [n, n + k, k, 0]],
            dtype=float,
        )

    def evaluate(self, K: KernelMatrix) -> int | float:
        """``l^T K l`` for the lifted vector: exact integer when ``K`` is integral."""
        sub = K.restrict(self.quad)
        if sub.is_integral:
            return integer_quadratic_form(sub.int_rows(), self.lam)
        return sub.quadratic_form(self.lam)

    def lifted(self, labels: Sequence[str]) -> tuple[int, ...]:
        pos = {q: s for q, s in zip(self.quad, self.lam)}
        return tuple(pos.get(x, 0) for x in labels)

    def to_dict(self) -> dict:
        return {
            "cycle": list(self.cycle_vertices),
            "quad": list(self.quad),
            "lambda": list(self.lam),
            "k": self.k,
            "n": self.n,
        }


def even_cycle_certificate(
    G: Graph, allowed: Iterable[str] | None = None, *, witness: Sequence[str] | None = None
) -> CycleCertificate | None:
    """Certificate that the path metric of ``G`` is not CSND, from an even shortest cycle.

    With girth ``2m`` the quad sits at cycle positions ``o, o+1, o+m, o+m+1``
    (``k = 1``, ``n = m - 1``).  The offset ``o`` is the first one whose quad
    lies inside ``allowed`` (all vertices by default); ``None`` when the girth
    is odd or infinite, or no rotation fits.
    """
    if witness is None:
        length, cycle = girth(G)
    else:
        cycle = [str(v) for v in witness]
        length = len(cycle)
    if length == GIRTH_INFINITE or length % 2:
        return None
    m = length // 2
    ok = set(G.vertices) if allowed is None else set(allowed)
    for o in range(length):
        quad = tuple(cycle[(o + j) % length] for j in (0, 1, m, m + 1))
        if all(q in ok for q in quad):
            labels = G.vertices if allowed is None else tuple(v for v in G.vertices if v in ok)
            cert = CycleCertificate(
                cycle_vertices=tuple(cycle[o:] + cycle[:o]),
                quad=quad,  # type: ignore[arg-type]
                lam=(1, -1, 1, -1),
                k=1,
                n=m - 1,
                labels=tuple(labels),
            )
            return replace(cert, vector=cert.lifted(labels))
    return None


def is_isometric_quad(K: KernelMatrix, quad: Sequence[str], k, n) -> bool:
    """Whether the 4x4 submatrix of ``K`` on ``quad`` has the antipodal pattern."""
    k_, n_ = k, n
    target = np.array(
        [[0, k_, n_ + k_, n_], [k_, 0, n_, n_ + k_], [n_ + k_, n_, 0, k_], [n_, n_ + k_, k_, 0]],
        dtype=float,
    )
    return bool(np.allclose(K.restrict(quad).entries, target, rtol=0, atol=1e-12 * K.scale))


def wedge_sum(
    G1: Graph,
    v1: str,
    G2: Graph,
    v2: str,
    *,
    prefixes: tuple[str, str] | None = None,
) -> Graph:
    """Glue ``G1`` and ``G2`` by identifying ``v1`` with ``v2``.

    The glued vertex keeps ``v1``'s label and the basepoint of ``G1``
    survives.  Labels must otherwise be disjoint unless ``prefixes`` are given,
    in which case every label of ``Gi`` is prefixed with ``prefixes[i]``.
    """
    v1 = G1._check(v1)
    v2 = G2._check(v2)
    if prefixes is not None:
        p1, p2 = prefixes
        G1 = G1.relabel(lambda x: p1 + x)
        G2 = G2.relabel(lambda x: p2 + x)
        v1, v2 = p1 + v1, p2 + v2
    rename = {v2: v1}
    others = [v for v in G2.vertices if v != v2]
    clash = set(others) & set(G1.vertices)
    if clash:
        raise LabelError(f"vertex labels occur in both graphs: {sorted(clash)[:5]}")
    edges = list(G1.edges) + [(rename.get(u, u), rename.get(v, v), w) for u, v, w in G2.edges]
    return Graph(G1.vertices + tuple(others), tuple(edges), G1.basepoint)


def comb_product(G1: Graph, G2: Graph, v2: str, *, sep: str = "/") -> Graph:
    """Attach a copy of ``(G2, v2)`` at every vertex of ``G1``.

    Vertex ``(u, w)`` is labeled ``f"{u}{sep}{w}"``; the spine vertex ``u`` of
    ``G1`` becomes ``(u, v2)``.  Built as iterated wedge sums, one tooth per
    spine vertex in order.
    """
    v2 = G2._check(v2)
    out = G1.relabel(lambda u: f"{u}{sep}{v2}")
    for u in G1.vertices:
        tooth = G2.relabel(lambda w, u=u: f"{u}{sep}{w}")
        out = wedge_sum(out, f"{u}{sep}{v2}", tooth, f"{u}{sep}{v2}")
    return out


EMPTY_WORD = "e"


def _word_label(word: tuple[tuple[int, str], ...]) -> str:
    if not word:
        return EMPTY_WORD
    return "|".join(f"{i}:({v})" if ("|" in v or ":" in v) else f"{i}:{v}" for i, v in word)


def free_product_ball_of(factors: Sequence[tuple[Graph, str]], radius: int) -> Graph:
    """Ball of radius ``radius`` about the empty word in a free product of rooted graphs.

    Vertices are alternating words ``s_1 ... s_m`` with ``s_k`` a non-root
    vertex of factor ``i_k`` and consecutive factors distinct; they are
    labeled ``"i:v|j:w|..."`` (``"e"`` for the empty word).  Edges change the
    first letter along an edge of its factor (dropping it on reaching the
    factor root) or prepend a neighbour of a root from another factor.  The
    depth of a word is the sum of the root distances of its letters.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if len(factors) < 1:
        raise ValueError("need at least one factor")
    roots = []
    depth_in = []
    for G, v in factors:
        if G.weighted:
            raise ValueError("free products are built for unweighted graphs")
        v = G._check(v)
        roots.append(v)
        depth_in.append(G.bfs_distances(v))
    adjs = [G.adjacency for G, _ in factors]

    def neighbours(word):
        out = []
        first_factor = word[0][0] if word else None
        for i, adj in enumerate(adjs):
            if i == first_factor:
                head = word[0][1]
                for w in adj[head]:
                    out.append(word[1:] if w == roots[i] else ((i, w),) + word[1:])
            else:
                for w in adj[roots[i]]:
                    out.append(((i, w),) + word)
        return out

    def depth(word):
        return sum(depth_in[i][v] for i, v in word)

    start: tuple = ()
    seen = {start: 0}
    order = [start]
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if seen[u] == radius:
            continue
        for w in neighbours(u):
            if w not in seen and depth(w) <= radius:
                seen[w] = seen[u] + 1
                order.append(w)
                queue.append(w)
    edges = set()
    for u in order:
        for w in neighbours(u):
            if w in seen:
                a, b = _word_label(u), _word_label(w)
                edges.add((a, b) if a < b else (b, a))
    labels = tuple(_word_label(w) for w in order)
    return Graph(labels, tuple(sorted(edges)), EMPTY_WORD)


def free_product_ball(G1: Graph, v1: str, G2: Graph, v2: str, radius: int) -> Graph:
    return free_product_ball_of([(G1, v1), (G2, v2)], radius)


def ball_interior(G: Graph, radius: int) -> list[str]:
    """Vertices within graph distance ``radius`` of the basepoint."""
    if G.basepoint is None:
        raise ValueError("graph has no basepoint")
    dist = G.bfs_distances(G.basepoint)
    return [v for v in G.vertices if v in dist and dist[v] <= radius]


def interior_metric(G: Graph, radius: int | None = None) -> KernelMatrix:
    """Path metric of the ball ``G`` restricted to its safe interior.

    For a ball of radius ``R`` about the basepoint, distances between vertices
    of depth at most ``R // 2`` are realized by geodesics that stay in the
    ball, so they equal distances in the untruncated graph.  ``radius``
    defaults to the eccentricity of the basepoint halved.
    """
    if G.basepoint is None:
        raise ValueError("graph has no basepoint")
    if radius is None:
        ecc = max(G.bfs_distances(G.basepoint).values())
        radius = ecc // 2
    return path_metric(G).restrict(ball_interior(G, radius))


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("n must be >= 1")
    vs = [str(i) for i in range(n)]
    return Graph.from_edges([(vs[i], vs[j]) for i in range(n) for j in range(i + 1, n)], vs, vs[0])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs n >= 3")
    vs = [str(i) for i in range(n)]
    return Graph.from_edges([(vs[i], vs[(i + 1) % n]) for i in range(n)], vs, vs[0])


def path_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("n must be >= 1")
    vs = [str(i) for i in range(n)]
    return Graph.from_edges([(vs[i], vs[i + 1]) for i in range(n - 1)], vs, vs[0])


def star_graph(n: int) -> Graph:
    """Star on ``n`` vertices: centre ``"0"`` joined to ``"1" .. str(n-1)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    vs = [str(i) for i in range(n)]
    return Graph.from_edges([(vs[0], vs[i]) for i in range(1, n)], vs, vs[0])


def tree_from_parent_array(parents: Sequence[int], weights: Sequence[float] | None = None) -> Graph:
    """Rooted tree from ``parents[i]`` (``-1`` for the single root)."""
    n = len(parents)
    if n < 1:
        raise ValueError("need at least one vertex")
    roots = [i for i, p in enumerate(parents) if p < 0]
    if len(roots) != 1:
        raise ValueError("exactly one root (parent -1) is required")
    for i, p in enumerate(parents):
        if p >= n or p == i:
            raise ValueError(f"bad parent {p} for vertex {i}")
    vs = [str(i) for i in range(n)]
    edges = []
    for i, p in enumerate(parents):
        if p >= 0:
            w = 1.0 if weights is None else float(weights[i])
            edges.append((vs[p], vs[i], w))
    G = Graph.from_edges(edges, vs, vs[roots[0]])
    if len(G.bfs_distances(vs[roots[0]])) != n:
        raise ValueError("parent array contains a cycle")
    return G


# --- expression syntax --------------------------------------------------------

_ATOM = re.compile(r"([KCPS])(\d+)$")


def _split_args(s: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in s:
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    if cur or out:
        out.append("".join(cur).strip())
    return out


def _split_base(s: str) -> tuple[str, str | None]:
    depth = 0
    for i in range(len(s) - 1, -1, -1):
        ch = s[i]
        if ch == ")":
            depth += 1
        elif ch == "(":
            depth -= 1
        elif ch == "@" and depth == 0:
            return s[:i].strip(), s[i + 1 :].strip()
    return s.strip(), None


def parse_expression(expr: str) -> Graph:
    """Evaluate a small graph-construction language.

    Atoms: ``K<n>``, ``C<n>``, ``P<n>``, ``S<n>`` (complete, cycle, path,
    star).  Operations: ``wedge(A@u, B@v)``, ``comb(A, B@v)`` and
    ``free(A@u, B@v, R)``.  ``X@v`` picks a vertex, defaulting to the graph's
    basepoint.  Wedge sums prefix the labels of their arguments with ``a.``
    and ``b.``.

    >>> parse_expression("wedge(K3@0, C5@2)").n
    7
    """
    expr = expr.strip()
    m = _ATOM.match(expr)
    if m:
        kind, n = m.group(1), int(m.group(2))
        return {"K": complete_graph, "C": cycle_graph, "P": path_graph, "S": star_graph}[kind](n)
    m = re.match(r"(\w+)\s*\((.*)\)$", expr, re.S)
    if not m:
        raise ValueError(f"cannot parse graph expression {expr!r}")
    op, args = m.group(1), _split_args(m.group(2))

    def based(arg):
        body, v = _split_base(arg)
        G = parse_expression(body)
        if v is None:
            v = G.basepoint if G.basepoint is not None else G.vertices[0]
        return G, v

    if op == "wedge" and len(args) == 2:
        (A, u), (B, v) = based(args[0]), based(args[1])
        return wedge_sum(A, u, B, v, prefixes=("a.", "b."))
    if op == "comb" and len(args) == 2:
        A = parse_expression(args[0])
        B, v = based(args[1])
        return comb_product(A, B, v)
    if op == "free" and len(args) == 3:
        (A, u), (B, v) = based(args[0]), based(args[1])
        return free_product_ball(A, u, B, v, int(args[2]))
    raise ValueError(f"unknown operation {op!r} with {len(args)} arguments")
