import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from scipy.integrate import quad

from corpus import random_tree
from csnd import (
    DegenerateInput,
    Graph,
    InvariantViolation,
    PointConfig,
    Verdict,
    antipodal_quad,
    circle_kernel,
    circle_kernel_turns,
    classify,
    cycle_graph,
    euclidean_kernel,
    fourier_identity_check,
    limit_form,
    path_metric,
    weighted_tree_kernel,
    zero_sum_reduction,
)
from csnd.continuous import fourier_rhs


# Euclidean


def test_euclidean_collinear():
    K = euclidean_kernel(PointConfig.from_coords([0.0, 1.0, 2.0]))
    assert K.entries.tolist() == [[0, 1, 2], [1, 0, 1], [2, 1, 0]]
    M = zero_sum_reduction(K)
    assert M.tolist() == [[-4, -2], [-2, -2]]
    assert classify(K).csnd is Verdict.HOLDS


def test_euclidean_duplicate_point():
    K = euclidean_kernel(PointConfig(("p", "q"), np.array([[1.0, 2.0], [1.0, 2.0]])))
    assert K.entries.tolist() == [[0, 0], [0, 0]]
    r = classify(K)
    assert r.cnd is Verdict.HOLDS and r.csnd is Verdict.FAILS


def test_euclidean_random_samples():
    rng = np.random.default_rng(21)
    for _ in range(30):
        n, k = int(rng.integers(2, 21)), int(rng.integers(1, 6))
        P = PointConfig.from_coords(rng.uniform(-3, 3, size=(n, k)))
        r = classify(euclidean_kernel(P))
        assert r.csnd is Verdict.HOLDS
        # rescaling keeps the verdict
        Q = PointConfig(P.labels, 1e3 * P.coords)
        assert classify(euclidean_kernel(Q)).csnd is Verdict.HOLDS


def test_euclidean_is_not_squared():
    P = PointConfig.from_coords([[0.0, 0.0], [3.0, 4.0]])
    assert euclidean_kernel(P).entries[0, 1] == 5.0


# trees


def test_single_edge_and_star():
    T = Graph(("0", "1"), (("0", "1", math.pi),))
    K = weighted_tree_kernel(T)
    assert K.entries.tolist() == [[0, math.pi], [math.pi, 0]]
    assert math.isclose(zero_sum_reduction(K)[0, 0], -2 * math.pi)
    star = Graph(("c", "x", "y", "z"), (("c", "x", 1.0), ("c", "y", 2.0), ("c", "z", 3.0)))
    K = weighted_tree_kernel(star)
    # exact reduction; negative definite by Sylvester's criterion on -M
    D = sympy.Matrix(K.entries.astype(int).tolist())
    M = sympy.Matrix(3, 3, lambda i, j: D[i, j] - D[i, 3] - D[3, j] + D[3, 3])
    assert all((-M)[:k, :k].det() > 0 for k in (1, 2, 3))
    assert classify(K).csnd is Verdict.HOLDS


def test_random_binary_tree_40_leaves():
    rng = np.random.default_rng(5)
    # grow a binary tree by splitting leaves until there are 40
    edges, leaves, next_id = [], ["0"], 1
    while len(leaves) < 40:
        leaf = leaves.pop(int(rng.integers(0, len(leaves))))
        for _ in range(2):
            v = str(next_id)
            next_id += 1
            edges.append((leaf, v, float(rng.uniform(1e-3, 1.0))))
            leaves.append(v)
    T = Graph.from_edges(edges)
    r = classify(weighted_tree_kernel(T))
    assert r.csnd is Verdict.HOLDS
    assert max(r.reduced_spectrum) < 0


def test_tree_kernel_rejects_cycles():
    with pytest.raises(InvariantViolation):
        weighted_tree_kernel(cycle_graph(4))


def test_random_weighted_trees():
    rng = np.random.default_rng(6)
    for _ in range(20):
        T0 = random_tree(rng, int(rng.integers(2, 30)))
        T = Graph(T0.vertices, tuple((u, v, float(rng.uniform(0.01, 5))) for u, v, _ in T0.edges))
        assert classify(weighted_tree_kernel(T)).csnd is Verdict.HOLDS


# circles


def test_circle_c4_and_c5():
    K = circle_kernel([0, math.pi / 2, math.pi, 3 * math.pi / 2], 4)
    assert K.entries.tolist() == [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]]
    assert classify(K).csnd is Verdict.FAILS
    K5 = circle_kernel([2 * math.pi * k / 5 for k in range(5)], 5)
    assert np.allclose(K5.entries, path_metric(cycle_graph(5)).entries, atol=1e-12)
    assert classify(K5).csnd is Verdict.HOLDS


@pytest.mark.parametrize("n", [2, 3, 7, 25])
def test_circle_matches_even_cycle_exactly(n):
    K = circle_kernel_turns([Fraction(k, 2 * n) for k in range(2 * n)], 2 * n)
    assert K == path_metric(cycle_graph(2 * n))


@pytest.mark.parametrize("theta", [0.1, 1.0, 2.0, 3.0])
@pytest.mark.parametrize("L", [1.0, 2 * math.pi, 17.0])
def test_antipodal_certificate(theta, L):
    angles = [0.0, theta, math.pi, math.pi + theta]
    K = circle_kernel(angles, L)
    quad_idx = antipodal_quad(angles)
    assert quad_idx == (0, 1, 2, 3)
    lam = np.array([1, -1, 1, -1], dtype=float)
    assert np.max(np.abs(K.entries @ lam)) < 1e-12 * L
    assert classify(K).csnd is Verdict.FAILS


def test_circle_without_antipodes_is_csnd():
    angles = [0.0, 1.0, 2.5]
    assert antipodal_quad(angles) is None
    assert classify(circle_kernel(angles, 2 * math.pi)).csnd is Verdict.HOLDS


def test_circle_errors():
    with pytest.raises(DegenerateInput):
        circle_kernel([0.0, 1.0, 1.0], 3)
    with pytest.raises(ValueError):
        circle_kernel([1.0, 0.5], 3)
    with pytest.raises(ValueError):
        circle_kernel([0.0, 7.0], 3)
    with pytest.raises(ValueError):
        circle_kernel([0.0], 0)


# Fourier identity


def test_fourier_examples():
    assert math.isclose(fourier_rhs(1, 0), 1 / math.pi)
    assert math.isclose(fourier_rhs(1, 1), 1 / (2 * math.pi))
    lhs, rhs, err = fourier_identity_check(1.0, 0.0)
    assert err < 1e-10 and math.isclose(rhs, 0.318310, abs_tol=1e-6)
    with pytest.raises(ValueError):
        fourier_identity_check(0.0, 1.0)


@pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 2.0, 10.0])
@pytest.mark.parametrize("xi", [0.5, 1.0, 5.0, 10.0])
def test_fourier_against_scipy_oscillatory_quadrature(t, xi):
    # QAWF: a Fourier-integral routine independent of our panels
    half, _ = quad(lambda x: math.exp(-2 * math.pi * t * x), 0, math.inf, weight="cos", wvar=2 * math.pi * xi)
    lhs, _, err = fourier_identity_check(t, xi)
    assert math.isclose(lhs, 2 * half, abs_tol=1e-9)
    assert err <= 1e-6


def test_fourier_decay_in_t():
    vals = [fourier_identity_check(t, 1.0)[0] for t in (1, 5, 25, 125)]
    assert all(a > b > 0 for a, b in zip(vals, vals[1:]))


# limit identity


def test_limit_form_converges():
    rng = np.random.default_rng(3)
    P = PointConfig.from_coords(rng.normal(size=(6, 2)))
    K = euclidean_kernel(P)
    lam = rng.normal(size=6)
    lam -= lam.mean()
    target = -K.quadratic_form(lam)
    errs = [abs(limit_form(K, lam, n) - target) for n in (1e2, 1e3, 1e4)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-3 * abs(target)
