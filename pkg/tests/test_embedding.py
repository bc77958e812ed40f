import itertools
import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings

from corpus import cnd_corpus, csnd_corpus, integer_points
from csnd import (
    HypothesisNotMet,
    InvariantViolation,
    KernelMatrix,
    PointConfig,
    Verdict,
    affine_rank,
    circumsphere,
    classify,
    constant_shift_decompose,
    is_affinely_independent,
    kernel_of_config,
    odd_cycle_embedding,
    quadratic_embed,
)
from csnd.embedding import subset_sign_vector

C4 = KernelMatrix.from_matrix([[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]])
K3 = KernelMatrix.from_matrix([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
SEG = KernelMatrix.from_matrix([[0, 1], [1, 0]])


def test_point_config_validation():
    with pytest.raises(InvariantViolation):
        PointConfig(("a", "b"), np.zeros((3, 1)))
    with pytest.raises(InvariantViolation):
        PointConfig(("a", "a"), np.zeros((2, 1)))
    with pytest.raises(InvariantViolation):
        PointConfig(("a",), np.array([[np.inf]]))
    P = PointConfig.from_coords([0.0, 1.0, 2.0])
    assert (P.n, P.d) == (3, 1)


# quadratic_embed


def test_embed_segment():
    P = quadratic_embed(SEG)
    assert P.d == 1
    assert abs(abs(P.coords[0, 0] - P.coords[1, 0]) - 1) < 1e-12


def test_embed_triangle():
    P = quadratic_embed(K3)
    assert affine_rank(P) == 2
    assert np.allclose(kernel_of_config(P).entries, K3.entries, atol=1e-12)


def test_embed_c4_is_flat():
    P = quadratic_embed(C4)
    assert affine_rank(P) == 2 and not is_affinely_independent(P)
    # Gram matrix about the last point
    assert sympy.Matrix([[1, 1, 0], [1, 2, 1], [0, 1, 1]]).det() == 0
    assert np.allclose(kernel_of_config(P).entries, C4.entries, atol=1e-12)


def test_embed_hypotheses():
    with pytest.raises(HypothesisNotMet) as e:
        quadratic_embed(KernelMatrix.from_matrix([[1, 0], [0, 1]]))
    assert e.value.hypothesis == "schoenberg"
    k23 = KernelMatrix.from_matrix(
        [[0, 2, 1, 1, 1], [2, 0, 1, 1, 1], [1, 1, 0, 2, 2], [1, 1, 2, 0, 2], [1, 1, 2, 2, 0]]
    )
    with pytest.raises(HypothesisNotMet) as e:
        quadratic_embed(k23)
    assert e.value.hypothesis == "cnd"


def test_embed_round_trip_and_dimension_on_corpus():
    for K in cnd_corpus(seed=11, count=80):
        P = quadratic_embed(K)
        assert np.max(np.abs(kernel_of_config(P).entries - K.entries)) <= 1e-8 * K.scale
        csnd = classify(K).csnd is Verdict.HOLDS
        assert is_affinely_independent(P) == csnd
        if csnd:
            assert P.d == K.n - 1
        assert affine_rank(P) <= min(K.n - 1, P.d)


@settings(max_examples=40, deadline=None)
@given(integer_points(max_n=7))
def test_embedding_is_pivot_independent(Q):
    K = kernel_of_config(Q)
    ref = kernel_of_config(quadratic_embed(K)).entries
    for pivot in K.labels:
        got = kernel_of_config(quadratic_embed(K, pivot=pivot)).entries
        assert np.max(np.abs(got - ref)) <= 1e-8 * K.scale


# kernel_of_config


def test_kernel_of_config_examples():
    assert kernel_of_config(PointConfig.from_coords([0.0, 1.0])).entries.tolist() == [[0, 1], [1, 0]]
    I = kernel_of_config(PointConfig.from_coords(np.eye(3)))
    assert I.entries.tolist() == [[0, 2, 2], [2, 0, 2], [2, 2, 0]]
    T = kernel_of_config(PointConfig.from_coords([[0, 0], [1, 0], [0, 1]]))
    assert T.entries.tolist() == [[0, 1, 1], [1, 0, 2], [1, 2, 0]]
    Z = kernel_of_config(PointConfig(("a", "b"), np.zeros((2, 0))))
    assert Z.entries.tolist() == [[0, 0], [0, 0]]


@settings(max_examples=60, deadline=None)
@given(integer_points())
def test_kernel_of_config_is_cnd_schoenberg(P):
    K = kernel_of_config(P)
    assert K.is_schoenberg
    assert classify(K).cnd is Verdict.HOLDS


# affine rank


def test_affine_rank_examples():
    assert affine_rank(PointConfig.from_coords([[3.0, 4.0]])) == 0
    assert is_affinely_independent(PointConfig.from_coords([[3.0, 4.0]]))
    line = PointConfig.from_coords([0.0, 1.0, 2.0])
    assert affine_rank(line) == 1 and not is_affinely_independent(line)
    tri = PointConfig.from_coords([[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]])
    assert affine_rank(tri) == 2 and is_affinely_independent(tri)


@settings(max_examples=60, deadline=None)
@given(integer_points())
def test_affine_rank_invariances(P):
    r = affine_rank(P)
    shifted = PointConfig(P.labels, P.coords + 7.5)
    rolled = PointConfig(P.labels, np.roll(P.coords, 1, axis=0))
    assert affine_rank(shifted) == r == affine_rank(rolled)
    assert r <= min(P.n - 1, P.d)


# circumsphere


def test_circumsphere_examples():
    S = circumsphere(PointConfig.from_coords([0.0, 1.0]))
    assert np.allclose(S.center, [0.5]) and math.isclose(S.radius, 0.5)
    tri = PointConfig.from_coords([[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]])
    assert math.isclose(circumsphere(tri).radius, 1 / math.sqrt(3), rel_tol=1e-12)
    S1 = circumsphere(PointConfig.from_coords([[2.0, 3.0]]))
    assert S1.radius == 0.0
    with pytest.raises(HypothesisNotMet) as e:
        circumsphere(PointConfig.from_coords([0.0, 1.0, 2.0]))
    assert e.value.hypothesis == "affine-independence"


def test_circumsphere_residuals_on_corpus():
    for K in csnd_corpus(seed=13, count=40):
        P = quadratic_embed(K)
        S = circumsphere(P)
        dist = np.linalg.norm(P.coords - S.center[None, :], axis=1)
        assert np.max(np.abs(dist - S.radius)) <= 1e-8 * max(S.radius, 1e-300) or K.n == 1


def test_circumsphere_growth():
    def ratio(N):
        return circumsphere(PointConfig.from_coords(np.diag(np.arange(1.0, N + 1)))).radius / N**1.5

    # frozen from this implementation; the limit is 1/sqrt(12) = 0.288675
    assert math.isclose(ratio(20), 0.28868, abs_tol=1e-4)
    assert abs(ratio(20) - ratio(40)) / ratio(40) < 0.2


# constant-shift decomposition


def test_decompose_segment():
    dec = constant_shift_decompose(SEG)
    assert math.isclose(dec.c, 1.0) and np.allclose(dec.A.entries, np.eye(2))


def test_decompose_triangle():
    dec = constant_shift_decompose(K3)
    third = 1 / 3
    assert math.isclose(dec.c, 4 / 3)
    expect = np.full((3, 3), third) + np.eye(3)
    assert np.allclose(dec.A.entries, expect)
    assert np.allclose(np.linalg.eigvalsh(dec.A.entries), [1, 1, 2])


def test_decompose_rejects_c4():
    with pytest.raises(HypothesisNotMet) as e:
        constant_shift_decompose(C4)
    assert e.value.hypothesis == "csnd"


def test_decompose_single_point():
    dec = constant_shift_decompose(KernelMatrix.from_matrix([[0]]))
    assert dec.radius == 0 and dec.c == 2.0 and dec.A.entries.tolist() == [[2.0]]


def test_decompose_on_corpus():
    for K in csnd_corpus(seed=17, count=60):
        dec = constant_shift_decompose(K)
        recon = -dec.A.entries + dec.c
        assert np.max(np.abs(recon - K.entries)) <= 1e-8 * K.scale
        assert classify(dec.A).spd is Verdict.HOLDS
        assert np.allclose(np.diag(dec.A.entries), dec.c)


# odd cycles


def test_sign_vector():
    assert subset_sign_vector({1, 3}, 4).tolist() == [1, -1, 1, -1]


def _cycle_metric(size):
    idx = np.arange(size)
    gap = np.abs(idx[:, None] - idx[None, :])
    return np.minimum(gap, size - gap)


def test_odd_cycle_triangle():
    P = odd_cycle_embedding(1)
    assert P.n == 3 and P.d == 3
    s = abs(P.coords[0, 0])
    assert np.allclose(np.abs(P.coords), s)
    assert np.allclose(kernel_of_config(P).entries, 1 - np.eye(3))


def test_pentagon_symmetric_differences():
    # independent oracle: 4 |A delta B| over the five sets is 8 times the C5 metric
    full = set(range(1, 6))
    sets = [{1, 2}, {1, 2, 3, 4}, full - {1}, full - {1, 2, 3}, full - {1, 2, 3, 4, 5}]
    metric = _cycle_metric(5)
    for i, j in itertools.combinations(range(5), 2):
        assert 4 * len(sets[i] ^ sets[j]) == 8 * metric[i, j]
    P = odd_cycle_embedding(2)
    assert math.isclose(abs(P.coords[0, 0]), 1 / (2 * math.sqrt(2)))


@pytest.mark.parametrize("n", range(1, 11))
def test_odd_cycle_embedding(n):
    P = odd_cycle_embedding(n)
    K = kernel_of_config(P)
    assert np.max(np.abs(K.entries - _cycle_metric(2 * n + 1))) < 1e-12
    assert np.linalg.matrix_rank(P.coords) == 2 * n + 1
    assert classify(K).csnd is Verdict.HOLDS


def test_odd_cycle_bad_argument():
    with pytest.raises(ValueError):
        odd_cycle_embedding(0)
