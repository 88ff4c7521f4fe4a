import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linear_sum_assignment

from diamatch.errors import SizeGuardError, ValidationError
from diamatch.instances import generate_instance
from diamatch.matching import (Instance, brute_force_max_matching, greedy_matching,
                               is_k_subset_maximum, local_search_2swap, make_matching,
                               max_matching, min_matching, random_matching, solve_assignment,
                               weight_matrix)

EXAMPLE = Instance(((0, 0), (2, 0)), ((3, 0), (-1, 0)))


def test_single_pair():
    m = max_matching(Instance(((0, 0),), ((5, 5),)))
    assert m.perm == (0,) and m.weight == 50


def test_two_pair_example():
    m = max_matching(EXAMPLE)
    assert m.perm == (0, 1) and m.weight == 18
    assert make_matching(EXAMPLE, (1, 0)).weight == 2
    assert brute_force_max_matching(EXAMPLE) == m


def test_instance_validation():
    with pytest.raises(ValidationError, match="equal size"):
        Instance(((0, 0), (1, 1)), ((2, 2),))
    with pytest.raises(ValidationError, match="both red and blue"):
        Instance(((0, 0),), ((0, 0),))
    with pytest.raises(ValidationError, match="duplicate"):
        Instance(((0, 0), (0, 0)), ((1, 1), (2, 2)))
    Instance(((0, 0), (0, 0)), ((1, 1), (2, 2)), allow_duplicates=True)
    with pytest.raises(ValidationError):
        Instance((), ())
    with pytest.raises(ValidationError):
        make_matching(EXAMPLE, (0, 0))


def test_assignment_solver_against_scipy(rng):
    for _ in range(200):
        n = int(rng.integers(1, 25))
        cost = rng.normal(size=(n, n))
        perm, u, v = solve_assignment(cost)
        rows, cols = linear_sum_assignment(cost)
        assert cost[np.arange(n), perm].sum() == pytest.approx(cost[rows, cols].sum(), abs=1e-9)
        # dual feasibility and complementary slackness
        assert (cost - u[:, None] - v[None, :] >= -1e-9).all()
        assert np.allclose(cost[np.arange(n), perm], u + v[perm])


def test_max_matching_equals_brute_force_exactly():
    for seed in range(150):
        n = 1 + seed % 7
        inst = generate_instance(n, seed, "uniform" if seed % 2 else "clustered")
        assert max_matching(inst).weight == brute_force_max_matching(inst).weight


def test_tie_break_is_lexicographic():
    # all four points on a unit-square corner set: both matchings tie
    inst = Instance(((0, 0), (1, 1)), ((1, 0), (0, 1)))
    assert max_matching(inst).perm == (0, 1)
    assert brute_force_max_matching(inst).perm == (0, 1)


def test_brute_force_size_guard():
    with pytest.raises(SizeGuardError):
        brute_force_max_matching(generate_instance(9, 0))


def test_max_weight_dominates_random_permutations(rng):
    for seed in range(20):
        inst = generate_instance(12, seed)
        W = weight_matrix(inst)
        best = max_matching(inst).weight
        for _ in range(50):
            perm = rng.permutation(12)
            assert W[np.arange(12), perm].sum() <= best * (1 + 1e-12)
        assert min_matching(inst).weight <= best


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.floats(0, 2 * math.pi), st.floats(0.01, 100),
       st.floats(-50, 50), st.floats(-50, 50))
def test_matching_invariant_under_similarity(seed, ang, scale, tx, ty):
    inst = generate_instance(6, seed)
    c, s = math.cos(ang), math.sin(ang)
    moved = inst.transformed(lambda p: (scale * (c * p[0] - s * p[1]) + tx,
                                        scale * (s * p[0] + c * p[1]) + ty))
    a, b = max_matching(inst), max_matching(moved)
    assert b.weight == pytest.approx(a.weight * scale * scale, rel=1e-9)
    # the optimum is unique for generic points so the permutation is preserved
    assert make_matching(moved, a.perm).weight == pytest.approx(b.weight, rel=1e-9)


def test_subset_maximality():
    for seed in range(30):
        inst = generate_instance(10, seed)
        m = max_matching(inst)
        assert is_k_subset_maximum(inst, m, 2)
        assert is_k_subset_maximum(inst, m, 3)
    chk = is_k_subset_maximum(EXAMPLE, make_matching(EXAMPLE, (1, 0)), 2)
    assert not chk and chk.subset == (0, 1) and chk.improved_blues == (0, 1)
    assert chk.gain == pytest.approx(16)
    with pytest.raises(ValidationError):
        is_k_subset_maximum(EXAMPLE, make_matching(EXAMPLE, (0, 1)), 4)


def test_local_search():
    m = max_matching(EXAMPLE)
    assert local_search_2swap(EXAMPLE, m, 3) == m
    assert local_search_2swap(EXAMPLE, make_matching(EXAMPLE, (1, 0)), 0).weight == 18
    inst = generate_instance(10, 77)
    out = local_search_2swap(inst, random_matching(inst, 5), 5)
    assert is_k_subset_maximum(inst, out, 2)
    assert out == local_search_2swap(inst, random_matching(inst, 5), 5)


def test_greedy_and_random_are_permutations():
    inst = generate_instance(9, 3)
    for m in (greedy_matching(inst), random_matching(inst, 1)):
        assert sorted(m.perm) == list(range(9))
        assert m.weight == make_matching(inst, m.perm).weight
