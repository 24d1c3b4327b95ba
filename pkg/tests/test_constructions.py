import itertools
import warnings

import numpy as np
import pytest

from indtrans.algorithms import build_auxiliary, greedy_hall_factor
from indtrans.constructions import (
    LatinSquare,
    catlin,
    cyclic_latin_square,
    first_column_clique,
    greedy_trap_instance,
    latin_greedy_trap,
    random_knd1,
)
from indtrans.core import is_independent_transversal
from indtrans.exhaustive import brute_force_factor
from indtrans.matching import HallWitness, max_matching, perfect_matching_or_witness


def _all_transversals(g):
    return itertools.product(range(g.n), repeat=g.k)


def test_clique_k2():
    g = first_column_clique(2)
    assert (g.k, g.n, g.edge_count()) == (2, 1, 1)


def test_clique_k3_independent_transversals_hold_at_most_one_zero():
    g = first_column_clique(3)
    indep = [T for T in _all_transversals(g) if is_independent_transversal(g, T)]
    assert indep
    assert max(sum(v == 0 for v in T) for T in indep) == 1
    # k = 3 vertices with index 0 but only n = 2 rows, at most one each
    assert brute_force_factor(g) is None


def test_clique_k4_no_factor():
    assert brute_force_factor(first_column_clique(4)) is None


def test_catlin3_shape_and_no_factor():
    g = catlin(3)
    assert (g.k, g.n) == (3, 3)
    assert all(g.edge_count(i, j) == 3 for i, j in itertools.combinations(range(3), 2))
    assert brute_force_factor(g) is None


@pytest.mark.parametrize("k", [3, 5, 7])
def test_catlin_pairs_are_perfect_matchings(k):
    g = catlin(k)
    g.validate()
    for i in range(k):
        for j in range(k):
            if i != j:
                assert sorted(g.nbr[i, j].tolist()) == list(range(k))


def test_catlin5_no_factor():
    assert brute_force_factor(catlin(5), time_budget=600) is None


def test_catlin_even_warns_but_builds():
    with pytest.warns(UserWarning):
        g = catlin(4)
    g.validate()
    # even k is a negative control: a factor exists here
    assert brute_force_factor(g) is not None


def test_catlin_rejects_small():
    with pytest.raises(ValueError):
        catlin(2)


def test_cyclic_latin_square():
    L = cyclic_latin_square(5)
    assert L.order == 5 and L.cells[2, 4] == 1
    with pytest.raises(ValueError):
        LatinSquare([[0, 1], [0, 1]])


@pytest.mark.parametrize("k", range(3, 13))
def test_latin_trap_hall_violation(k):
    B, W = latin_greedy_trap(k)
    n = 2 * k - 3
    assert B.m == n
    assert len(W) == k - 1
    assert B.neighborhood(list(W)).size == k - 2
    assert max_matching(B).size == n - 1
    out = perfect_matching_or_witness(B)
    assert isinstance(out, HallWitness)
    assert len(out.neighborhood) < len(out.right)


def test_latin_trap_k3():
    B, W = latin_greedy_trap(3)
    assert B.m == 3 and len(W) == 2
    assert B.neighborhood(list(W)).size == 1


@pytest.mark.parametrize("k", [3, 4, 5, 7])
def test_trap_instance_matches_bipartite_trap(k):
    g, F = greedy_trap_instance(k)
    g.validate()
    assert F.t == k - 1
    B, _ = latin_greedy_trap(k)
    assert build_auxiliary(g, F) == B


def test_trap_instance_any_latin_square():
    L = LatinSquare([[0, 1, 2], [2, 0, 1], [1, 2, 0]])
    g, F = greedy_trap_instance(4, L)
    assert build_auxiliary(g, F) == latin_greedy_trap(4)[0]


@pytest.mark.parametrize("k", [4, 5])
def test_greedy_fails_from_pinned_start_though_factor_exists(k):
    g, F = greedy_trap_instance(k)
    res = greedy_hall_factor(g, start=F)
    assert not res.success
    assert res.failed_stage == k - 1
    assert len(res.witness.right) - len(res.witness.neighborhood) >= 1
    if g.n <= 6:
        assert brute_force_factor(g) is not None


def test_random_knd1_valid_and_perfect(rng):
    g = random_knd1(5, 7, rng)
    g.validate()
    assert g.edge_count() == 10 * 7


def test_random_knd1_k2_has_factor(rng):
    for n in range(2, 8):
        assert greedy_hall_factor(random_knd1(2, n, rng)).success


def test_random_knd1_k4_n8_greedy(rng):
    for _ in range(10):
        assert greedy_hall_factor(random_knd1(4, 8, rng)).success


def test_random_knd1_seed_determinism():
    assert random_knd1(3, 4, 42) == random_knd1(3, 4, 42)
    assert random_knd1(3, 4, 42) != random_knd1(3, 4, 43)
