"""Random kernel generators shared by the test modules."""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from csnd import Graph, KernelMatrix, PointConfig, Verdict, classify, kernel_of_config, path_metric


def integer_config(rng: np.random.Generator, n: int, d: int, span: int = 6) -> PointConfig:
    """``n`` distinct integer points in ``[-span, span]^d``."""
    seen: set[tuple[int, ...]] = set()
    rows = []
    while len(rows) < n:
        p = tuple(int(x) for x in rng.integers(-span, span + 1, size=d))
        if p not in seen:
            seen.add(p)
            rows.append(p)
    return PointConfig.from_coords(np.array(rows, dtype=float))


def random_connected_graph(rng: np.random.Generator, n: int, p: float = 0.3) -> Graph:
    """Random spanning tree plus independent extra edges with probability ``p``."""
    vs = [str(i) for i in range(n)]
    edges = set()
    for i in range(1, n):
        j = int(rng.integers(0, i))
        edges.add((j, i))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < p:
                edges.add((i, j))
    return Graph.from_edges([(vs[i], vs[j]) for i, j in sorted(edges)], vs)


def random_tree(rng: np.random.Generator, n: int) -> Graph:
    vs = [str(i) for i in range(n)]
    edges = [(vs[int(rng.integers(0, i))], vs[i]) for i in range(1, n)]
    return Graph.from_edges(edges, vs)


def cnd_corpus(seed: int, count: int, max_n: int = 12) -> list[KernelMatrix]:
    """CND Schoenberg integer kernels: half from point sets, half from graph metrics.

    Point sets use a random dimension in 1..4, so both affinely independent
    and dependent configurations occur.  Graph metrics that are not CND are
    skipped.
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(1, max_n + 1))
        if len(out) % 2 == 0:
            d = int(rng.integers(1, 5))
            out.append(kernel_of_config(integer_config(rng, n, d)))
        else:
            K = path_metric(random_connected_graph(rng, n, float(rng.uniform(0.05, 0.6))))
            if classify(K).cnd is Verdict.HOLDS:
                out.append(K)
    return out


def csnd_corpus(seed: int, count: int, max_n: int = 12) -> list[KernelMatrix]:
    """CSND Schoenberg kernels: affinely independent points, trees, odd cycles, complete graphs."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        kind = len(out) % 3
        n = int(rng.integers(1, max_n + 1))
        if kind == 0:
            # n <= d + 1 real points are affinely independent almost surely
            P = PointConfig.from_coords(rng.normal(size=(n, n)) * rng.uniform(0.5, 5))
            K = kernel_of_config(P)
        elif kind == 1:
            K = path_metric(random_tree(rng, n))
        else:
            K = path_metric(random_connected_graph(rng, n, float(rng.uniform(0.0, 0.4))))
        if classify(K).csnd is Verdict.HOLDS:
            out.append(K)
    return out


def relabel(K: KernelMatrix, prefix: str) -> KernelMatrix:
    return KernelMatrix(tuple(prefix + x for x in K.labels), K.entries)


# hypothesis strategies


@st.composite
def integer_points(draw, max_n: int = 8, max_d: int = 4, span: int = 5):
    n = draw(st.integers(1, max_n))
    d = draw(st.integers(1, max_d))
    coord = st.tuples(*[st.integers(-span, span)] * d)
    rows = draw(st.lists(coord, min_size=n, max_size=n, unique=True))
    return PointConfig.from_coords(np.array(rows, dtype=float))


@st.composite
def symmetric_matrices(draw, max_n: int = 6):
    n = draw(st.integers(1, max_n))
    vals = draw(st.lists(st.integers(-9, 9), min_size=n * n, max_size=n * n))
    a = np.array(vals, dtype=float).reshape(n, n)
    return KernelMatrix.from_matrix(a + a.T)


@st.composite
def connected_graphs(draw, max_n: int = 9):
    n = draw(st.integers(1, max_n))
    parents = [draw(st.integers(0, i - 1)) for i in range(1, n)]
    edges = {(p, i) for i, p in enumerate(parents, start=1)}
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n))
    for a, b in extra:
        if a != b:
            edges.add((min(a, b), max(a, b)))
    vs = [str(i) for i in range(n)]
    return Graph.from_edges([(vs[a], vs[b]) for a, b in sorted(edges)], vs)
