import itertools

import numpy as np
import pytest

from indtrans.constructions import catlin, first_column_clique, random_knd1
from indtrans.core import is_factor, new_graph
from indtrans.exhaustive import (
    F4_INSTANCE_COUNT,
    PERMUTATIONS_4,
    BudgetExceeded,
    SizeCapExceeded,
    brute_force_factor,
    enumerate_f4_instances,
    f4_instance,
    find_factor_by_permutation_triples,
    has_factor_by_permutation_triples,
    relabel_spot_check,
    verify_f4,
)


def test_permutation_table():
    rows = {tuple(p) for p in PERMUTATIONS_4.tolist()}
    assert len(rows) == 24
    assert rows == set(itertools.permutations(range(4)))
    assert PERMUTATIONS_4[0].tolist() == [0, 1, 2, 3]


def test_enumeration_count_and_first():
    assert F4_INSTANCE_COUNT == 13824
    stream = enumerate_f4_instances()
    first = next(stream)
    assert all(np.array_equal(first.nbr[i, j], np.arange(4))
               for i in range(4) for j in range(4) if i != j)
    assert 1 + sum(1 for _ in stream) == 13824


def test_enumeration_validates_sample():
    for idx in range(0, F4_INSTANCE_COUNT, 97):
        g = f4_instance(idx)
        g.validate()
        for j in (1, 2, 3):
            assert g.nbr[0, j].tolist() == [0, 1, 2, 3]


def test_enumeration_digit_order():
    g = f4_instance(1)
    assert g.nbr[2, 3].tolist() == PERMUTATIONS_4[1].tolist()
    assert g.nbr[1, 2].tolist() == [0, 1, 2, 3]
    with pytest.raises(IndexError):
        f4_instance(F4_INSTANCE_COUNT)


def test_identity_instance_has_factor():
    g = f4_instance(0)
    F = find_factor_by_permutation_triples(g)
    assert F is not None and is_factor(g, F)
    assert F.rows[:, 0].tolist() == [0, 1, 2, 3]


def test_triples_wrong_shape():
    with pytest.raises(ValueError):
        has_factor_by_permutation_triples(new_graph(3, 4))


def test_triples_agree_with_brute_force():
    rng = np.random.default_rng(404)
    for _ in range(100):
        g = random_knd1(4, 4, rng)
        assert has_factor_by_permutation_triples(g) == (brute_force_factor(g) is not None)


def test_brute_force_small_negatives():
    for k in (3, 4, 5):
        assert brute_force_factor(first_column_clique(k)) is None
    assert brute_force_factor(catlin(3)) is None


def test_brute_force_edgeless():
    g = new_graph(4, 4)
    F = brute_force_factor(g)
    assert F is not None and is_factor(g, F)


def test_brute_force_size_cap():
    with pytest.raises(SizeCapExceeded):
        brute_force_factor(new_graph(3, 7))
    with pytest.raises(SizeCapExceeded):
        brute_force_factor(new_graph(7, 3))
    assert brute_force_factor(new_graph(3, 7), max_n=7) is not None


def test_brute_force_budget():
    g = catlin(7)
    with pytest.raises(BudgetExceeded) as info:
        brute_force_factor(g, max_n=7, max_k=7, time_budget=0.05)
    assert info.value.nodes > 0 and info.value.parts_placed >= 1


def test_verify_prefix():
    rep = verify_f4(limit=24)
    assert rep.checked == 24 and rep.failures == [] and rep.passed
    assert rep.summary() == "24 instances, 0 failures"
    assert rep.to_dict()["wall_time_s"] is None
    assert rep.to_dict(timing=True)["wall_time_s"] is not None


def test_relabel_spot_check():
    assert relabel_spot_check(100, seed=3) == []


@pytest.mark.slow
def test_verify_full_family():
    rep = verify_f4()
    assert rep.checked == 13824 and rep.failures == []
