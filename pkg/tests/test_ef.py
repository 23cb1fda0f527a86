import random

import pytest

from conftest import all_connected, k_bipartite
from locert.ef import EFBudgetExceeded, ef_equivalent, random_sentence, sample_sentence_check
from locert.graph import complete_graph, cycle_graph, path_graph, star_graph
from locert.logic import evaluate, free_variables, parse_formula, quantifier_depth
from oracles import naive_ef


def test_reflexive():
    for g in (path_graph(5), cycle_graph(4), star_graph(3)):
        for k in range(4):
            assert ef_equivalent(g, g, k)


def test_p3_p4_depth_two():
    assert not ef_equivalent(path_graph(3), path_graph(4), 2)
    assert ef_equivalent(path_graph(3), path_graph(4), 1)
    f = parse_formula("exists x forall y (x = y | x ~ y)")
    assert evaluate(path_graph(3), f) and not evaluate(path_graph(4), f)


def test_stars():
    assert ef_equivalent(star_graph(5), star_graph(2), 2)
    assert not ef_equivalent(star_graph(5), star_graph(2), 3)


def test_zero_rounds():
    assert ef_equivalent(complete_graph(1), cycle_graph(7), 0)


def test_budget_is_explicit():
    with pytest.raises(EFBudgetExceeded):
        ef_equivalent(cycle_graph(8), path_graph(8), 4, budget=5)


def test_negative_rounds():
    with pytest.raises(ValueError):
        ef_equivalent(path_graph(2), path_graph(2), -1)


def test_agrees_with_naive_game():
    graphs = all_connected(4) + [k_bipartite(2, 2), star_graph(4)]
    for k in (1, 2, 3):
        for i, g in enumerate(graphs):
            for h in graphs[i:]:
                assert ef_equivalent(g, h, k) == naive_ef(g, h, k), (g, h, k)


def test_symmetric_and_monotone():
    graphs = all_connected(4)
    for g in graphs:
        for h in graphs:
            vals = [ef_equivalent(g, h, k) for k in range(4)]
            assert vals == [ef_equivalent(h, g, k) for k in range(4)]
            assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_random_sentence_is_a_sentence():
    rng = random.Random(1)
    for _ in range(200):
        d = rng.randint(1, 3)
        f = random_sentence(rng, d)
        assert not free_variables(f)
        assert 1 <= quantifier_depth(f) <= d or quantifier_depth(f) == 0


def test_sample_sentence_check():
    assert not sample_sentence_check(path_graph(4), path_graph(4), 3, 100, seed=0)
    report = sample_sentence_check(path_graph(3), path_graph(4), 2, 1000, seed=7)
    assert report
    for text in report.disagreements[:5]:
        f = parse_formula(text)
        assert quantifier_depth(f) <= 2
        assert evaluate(path_graph(3), f) != evaluate(path_graph(4), f)


def test_equivalent_pairs_never_disagree():
    graphs = all_connected(5)
    rng = random.Random(3)
    for _ in range(40):
        g, h = rng.sample(graphs, 2)
        for k in (1, 2):
            if ef_equivalent(g, h, k):
                assert not sample_sentence_check(g, h, k, 60, seed=rng.random())
