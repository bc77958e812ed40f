"""Catalogue of worked examples, each recomputed and checked.

``run_demo`` returns one row per example; ``format_table`` renders them.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .continuous import antipodal_quad, circle_kernel, euclidean_kernel, weighted_tree_kernel
from .embedding import PointConfig, circumsphere, constant_shift_decompose, kernel_of_config, odd_cycle_embedding
from .errors import HypothesisNotMet
from .graphs import (
    comb_product,
    complete_graph,
    cycle_graph,
    even_cycle_certificate,
    free_product_ball,
    girth,
    interior_metric,
    path_metric,
    tree_from_parent_array,
    wedge_sum,
)
from .groups import (
    GroupPresentation,
    alternating_product,
    amalgam_cyclic_ball,
    coxeter_cayley_ball,
    free_group_ball,
    word_metric_verdict,
)
from .kernels import KernelMatrix, Verdict, classify, csnd_by_invertibility, markov_sum_kernel


@dataclass(frozen=True)
class DemoRow:
    name: str
    passed: bool
    detail: str
    seconds: float


def _csnd(K: KernelMatrix) -> bool:
    return classify(K).csnd is Verdict.HOLDS


def _c4_certificate():
    r = classify(path_metric(cycle_graph(4)))
    cert = r.certificate
    ok = r.cnd is Verdict.HOLDS and r.csnd is Verdict.FAILS and np.allclose(cert, [1, -1, 1, -1])
    return ok, f"cnd={r.cnd.value} csnd={r.csnd.value} certificate={np.round(cert, 6).tolist()}"


def _triangle():
    r = classify(path_metric(complete_graph(3)))
    return r.csnd is Verdict.HOLDS, f"csnd={r.csnd.value}"


def _c4_determinant():
    res = csnd_by_invertibility(path_metric(cycle_graph(4)))
    return (not res.verdict and res.determinant == 0), f"det={res.determinant}"


def _triangle_wedge():
    K3 = path_metric(complete_graph(3))
    other = KernelMatrix(("0", "a", "b"), K3.entries)
    K = markov_sum_kernel(K3, "0", other, "0")
    return _csnd(K), f"{K.n} points"


def _circumsphere_growth():
    def ratio(N):
        P = PointConfig.from_coords(np.diag(np.arange(1, N + 1, dtype=float)))
        return circumsphere(P).radius / N**1.5

    a, b = ratio(20), ratio(40)
    return abs(a - b) / max(a, b) < 0.2, f"r/N^1.5: N=20 {a:.4f}, N=40 {b:.4f}"


def _needs_csnd_hypothesis():
    try:
        constant_shift_decompose(path_metric(cycle_graph(4)))
    except HypothesisNotMet as exc:
        return exc.hypothesis == "csnd", f"refused: {exc.hypothesis}"
    return False, "decomposition accepted a non-CSND kernel"


def _odd_cycles_embedded():
    ok = all(_csnd(kernel_of_config(odd_cycle_embedding(n))) for n in range(1, 11))
    return ok, "sign-vector embeddings of C3..C21 are CSND"


def _graph_metrics():
    c4 = path_metric(cycle_graph(4)).int_rows() == [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]]
    k4 = path_metric(complete_graph(4)).entries
    ok = c4 and np.array_equal(k4, 1 - np.eye(4))
    return ok, "C4 and K4 path metrics"


def _c6_certificate():
    G = cycle_graph(6)
    cert = even_cycle_certificate(G)
    K = path_metric(G)
    ok = cert.quad == ("0", "1", "3", "4") and cert.evaluate(K) == 0
    c4 = even_cycle_certificate(cycle_graph(4))
    ok = ok and sorted(c4.quad) == ["0", "1", "2", "3"]
    return ok, f"quad={cert.quad} value={cert.evaluate(K)}"


def _wedge_of_triangles():
    G = wedge_sum(complete_graph(3), "0", complete_graph(3), "0", prefixes=("a.", "b."))
    return _csnd(path_metric(G)), f"{G.n} vertices"


def _comb_of_triangles():
    G = comb_product(complete_graph(3), complete_graph(3), "0")
    return _csnd(path_metric(G)), f"{G.n} vertices"


def _free_product_edges():
    ball = free_product_ball(complete_graph(2), "0", complete_graph(2), "0", 3)
    g, _ = girth(ball)
    degrees = sorted(len(ball.adjacency[v]) for v in ball.vertices)
    is_path = ball.n == 7 and g == math.inf and degrees == [1, 1, 2, 2, 2, 2, 2]
    mixed = free_product_ball(complete_graph(3), "0", complete_graph(2), "0", 2)
    ok = is_path and _csnd(interior_metric(mixed, 2))
    return ok, f"K2*K2 ball: {ball.n} vertices, path; K3*K2 interior CSND"


def _free_coxeter_tree():
    ball = coxeter_cayley_ball(GroupPresentation.free(3), 2)
    deg = {len(ball.graph.adjacency[v]) for v in ball.interior()}
    ok = ball.graph.n == 10 and deg == {3} and girth(ball.graph)[0] == math.inf
    return ok, f"{ball.graph.n} vertices"


def _free_group_ball():
    ball = free_group_ball(2, 3)
    return _csnd(path_metric(ball.graph)), f"{ball.graph.n} vertices"


def _amalgam_hexagon():
    ball = amalgam_cyclic_ball(9, 9, 3, 3)
    G = ball.graph
    hexagon = ["e", "a^1", "a^2", "z^1", "b^2", "b^1"]
    ok = all(G.has_vertex(v) for v in hexagon)
    ok = ok and all(hexagon[(i + 1) % 6] in G.adjacency[hexagon[i]] for i in range(6))
    return ok, "e, a, a^2, a^3 = b^3, b^2, b closes a 6-cycle"


def _alternating_words():
    ok = alternating_product("s", "t", 2) == ("s", "t") and alternating_product("s", "t", 3) == ("s", "t", "s")
    return ok, "<s,t>^2 = st, <s,t>^3 = sts"


def _word_metric_verdicts():
    free3 = GroupPresentation.free(3)
    v1 = word_metric_verdict(free3, cross_check=True, ball_radius=3)
    p3 = GroupPresentation.from_pairs(["s", "t", "u"], {("s", "t"): 3})
    v2 = word_metric_verdict(p3, cross_check=True)
    v3 = word_metric_verdict(GroupPresentation.free(3, kind="artin"))
    ok = v1.csnd and v1.cross_check and not v2.csnd and v2.cycle_length == 6 and v2.cross_check and v3.csnd
    return ok, f"free: {v1.csnd}; m=3: cycle {v2.cycle_length}; free Artin: {v3.csnd}"


def _euclidean():
    rng = np.random.default_rng(7)
    P = PointConfig.from_coords(rng.normal(size=(10, 3)))
    return _csnd(euclidean_kernel(P)), "10 random points in R^3"


def _tree_metric():
    rng = np.random.default_rng(11)
    parents = [-1] + [int(rng.integers(0, i)) for i in range(1, 79)]
    T = tree_from_parent_array(parents, weights=rng.uniform(0.1, 2.0, size=79).tolist())
    return _csnd(weighted_tree_kernel(T)), f"{T.n}-vertex weighted tree"


def _circle():
    theta = 1.0
    angles = [0.0, theta, math.pi, math.pi + theta]
    K = circle_kernel(angles, 2 * math.pi)
    quad = antipodal_quad(angles)
    v = np.zeros(4)
    v[list(quad)] = [1, -1, 1, -1]
    value = K.quadratic_form(v)
    return abs(value) < 1e-12 and classify(K).csnd is Verdict.FAILS, f"form on antipodal quad = {value:.2e}"


def _complete_graphs():
    ok = all(csnd_by_invertibility(path_metric(complete_graph(n))).verdict for n in range(2, 12))
    return ok, "K2..K11 invertible, exact"


ROWS: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
    ("4-cycle: CND, not CSND, alternating certificate", _c4_certificate),
    ("triangle metric is CSND", _triangle),
    ("4-cycle metric matrix is singular", _c4_determinant),
    ("Markov sum of two triangles is CSND", _triangle_wedge),
    ("circumradius of k*e_k grows like N^1.5", _circumsphere_growth),
    ("constant-shift decomposition requires CSND", _needs_csnd_hypothesis),
    ("odd cycles embed CSND by sign vectors", _odd_cycles_embedded),
    ("path metrics of C4 and K4", _graph_metrics),
    ("even-cycle certificate on C6 and C4", _c6_certificate),
    ("wedge of two triangles is CSND", _wedge_of_triangles),
    ("comb product of two triangles is CSND", _comb_of_triangles),
    ("free products of edges: path; K3*K2 interior CSND", _free_product_edges),
    ("free Coxeter group on 3 generators: 3-regular tree", _free_coxeter_tree),
    ("free group ball is CSND", _free_group_ball),
    ("(9,9,3) amalgam contains a hexagon", _amalgam_hexagon),
    ("alternating products", _alternating_words),
    ("word metric verdicts for Coxeter/Artin groups", _word_metric_verdicts),
    ("Euclidean distances are CSND", _euclidean),
    ("weighted tree metric is CSND", _tree_metric),
    ("circle with antipodal pairs is not CSND", _circle),
    ("complete graphs are CSND", _complete_graphs),
]


def run_demo() -> list[DemoRow]:
    rows = []
    for name, fn in ROWS:
        t0 = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # a crash is a failed row, not a crashed report
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        rows.append(DemoRow(name, bool(passed), detail, time.perf_counter() - t0))
    return rows


def format_table(rows: list[DemoRow]) -> str:
    width = max(len(r.name) for r in rows)
    lines = [f"{'example'.ljust(width)}  result  detail"]
    for r in rows:
        mark = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name.ljust(width)}  {mark:6}  {r.detail}")
    passed = sum(r.passed for r in rows)
    lines.append(f"{passed}/{len(rows)} examples pass")
    return "\n".join(lines) + "\n"
