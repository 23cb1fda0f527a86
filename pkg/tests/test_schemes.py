import pytest

from conftest import CLIQUE, DOMINATING, TAUTOLOGY, TRIANGLE, balanced_p7_model, spider
from locert.certs import CannotCertify, cert_size_bits, fuzz_scheme, id_width, run_verification
from locert.graph import (
    complete_graph, cycle_graph, path_graph, random_bounded_treedepth_graph, star_graph,
)
from locert.kernel import k_reduce
from locert.logic import evaluate, parse_formula
from locert.schemes import (
    KERNEL_FIELDS, count_scheme, depth2_classify, depth2_fo_scheme, existential_fo_scheme,
    fo_treedepth_scheme, kernel_scheme, spanning_tree_scheme, treedepth_scheme,
)
from locert.schemes.kernel_scheme import _description
from locert.treedepth import compute_treedepth_exact, model_from_parents


def accepted(g, scheme, **kw):
    return run_verification(g, scheme.prove(g, **kw), scheme).accepted


# -- spanning tree and count ---------------------------------------------------

def test_spanning_tree_k1():
    g = complete_graph(1)
    certs = spanning_tree_scheme().prove(g)
    assert (certs[1]["parent"], certs[1]["root"], certs[1]["dist"]) == (1, 1, 0)
    assert accepted(g, spanning_tree_scheme())


def test_spanning_tree_with_root_property():
    # root must have maximum possible degree
    s = spanning_tree_scheme(lambda view: view.degree >= 3)
    assert accepted(star_graph(3), s)
    with pytest.raises(CannotCertify):
        s.prove(path_graph(5))
    assert fuzz_scheme(path_graph(5), s, seed=1, budget=1000).escaped == 0


def test_count_examples():
    g = path_graph(3)
    certs = count_scheme().prove(g)
    assert [certs[v]["sub"] for v in (1, 2, 3)] == [3, 2, 1]
    assert all(c["total"] == 3 for c in certs.values())
    forged = {v: c.replace("total", 4) for v, c in certs.items()}
    assert run_verification(g, forged, count_scheme()).rejecting == {1}
    assert accepted(complete_graph(1), count_scheme())


def test_count_predicate():
    s = count_scheme(lambda n: n % 2 == 0)
    assert accepted(cycle_graph(6), s)
    with pytest.raises(CannotCertify):
        s.prove(cycle_graph(5))
    assert fuzz_scheme(cycle_graph(5), s, seed=0, budget=2000).escaped == 0


# -- existential FO ------------------------------------------------------------

def test_triangle_scheme():
    s = existential_fo_scheme(parse_formula(TRIANGLE))
    g = complete_graph(3)
    certs = s.prove(g)
    assert run_verification(g, certs, s).accepted
    assert certs[1]["wit"] == (1, 2, 3)
    w = id_width(g.id_bound)
    tree_bits = 3 * (2 * w + 2)
    # witness ids + matrix + three tree fragments, plus length prefixes
    assert cert_size_bits(certs)[0] <= 3 * w + 9 + tree_bits + 10
    with pytest.raises(CannotCertify):
        s.prove(cycle_graph(5))


def test_single_witness():
    s = existential_fo_scheme(parse_formula("exists x x = x"))
    for g in (path_graph(4), complete_graph(1)):
        certs = s.prove(g)
        assert run_verification(g, certs, s).accepted
        assert len(certs[g.nodes[0]]["trees"]) == 1


def test_existential_rejects_universal():
    with pytest.raises(ValueError):
        existential_fo_scheme(parse_formula(CLIQUE))


def test_existential_with_equalities():
    # two distinct non-adjacent vertices
    s = existential_fo_scheme(parse_formula("exists x exists y (!x = y & !x ~ y)"))
    assert accepted(path_graph(3), s)
    with pytest.raises(CannotCertify):
        s.prove(complete_graph(4))
    assert fuzz_scheme(complete_graph(4), s, seed=3, budget=2000).escaped == 0


def test_triangle_fuzz_small():
    s = existential_fo_scheme(parse_formula(TRIANGLE))
    assert fuzz_scheme(cycle_graph(6), s, seed=0, budget=1500).escaped == 0


# -- depth two -----------------------------------------------------------------

def test_depth2_classify_examples():
    assert depth2_classify(parse_formula(CLIQUE)) == {
        (1, 1, 1): True, (0, 1, 1): True, (0, 0, 1): False, (0, 0, 0): False}
    assert depth2_classify(parse_formula(DOMINATING)) == {
        (1, 1, 1): True, (0, 1, 1): True, (0, 0, 1): True, (0, 0, 0): False}
    assert all(depth2_classify(parse_formula(TAUTOLOGY)).values())
    with pytest.raises(ValueError):
        depth2_classify(parse_formula(TRIANGLE))


def test_depth2_scheme_examples():
    dom = depth2_fo_scheme(parse_formula(DOMINATING))
    assert accepted(star_graph(4), dom)
    clique = depth2_fo_scheme(parse_formula(CLIQUE))
    certs = clique.prove(complete_graph(4))
    assert certs[1]["cnt"]["total"] == 4
    assert run_verification(complete_graph(4), certs, clique).accepted
    with pytest.raises(CannotCertify):
        clique.prove(path_graph(3))
    assert fuzz_scheme(path_graph(3), clique, seed=5, budget=2000).escaped == 0


# -- treedepth -----------------------------------------------------------------

def test_treedepth_p7():
    s = treedepth_scheme(2)
    g = path_graph(7)
    certs = s.prove(g, model=balanced_p7_model())
    assert run_verification(g, certs, s).accepted
    assert certs[4]["anc"] == (4,) and certs[1]["anc"] == (1, 2, 4)
    assert [f["tag"] for f in certs[1]["frags"]] == [1, 2]


def test_treedepth_k1():
    certs = treedepth_scheme(0).prove(complete_graph(1))
    assert certs[1]["anc"] == (1,) and certs[1]["frags"] == ()
    assert accepted(complete_graph(1), treedepth_scheme(0))


def test_treedepth_cannot_certify():
    with pytest.raises(CannotCertify):
        treedepth_scheme(1).prove(path_graph(7))
    with pytest.raises(CannotCertify):
        treedepth_scheme(1).prove(path_graph(7), model=balanced_p7_model())


def test_treedepth_non_coherent_model_is_repaired():
    g = path_graph(3)
    bad = model_from_parents(2, {2: 2, 1: 2, 3: 1})
    assert accepted(g, treedepth_scheme(2), model=bad)


def test_treedepth_c5_fuzz_small():
    g = cycle_graph(5)
    t = compute_treedepth_exact(g)[0] - 1
    assert fuzz_scheme(g, treedepth_scheme(t), seed=0, budget=2000).escaped == 0


def test_treedepth_random_completeness():
    for seed in range(20):
        t = 1 + seed % 4
        g, m = random_bounded_treedepth_graph(t, 5 + seed, seed)
        assert accepted(g, treedepth_scheme(t), model=m)


# -- kernel --------------------------------------------------------------------

def test_kernel_star():
    g = star_graph(5)
    s = kernel_scheme(2, 1)
    certs = s.prove(g)
    assert run_verification(g, certs, s).accepted
    flagged = {v for v, c in certs.items() if c["pruned"][0]}
    assert len(flagged) == 3
    e = certs[2]["etype"]
    size = len(certs[2]["table"])
    certs[2] = certs[2].replace("etype", ((e[0] + 1) % size,) + tuple(e[1:]))
    assert not run_verification(g, certs, s).accepted


def test_kernel_fixpoint():
    g = path_graph(7)
    certs = kernel_scheme(2, 2).prove(g, model=balanced_p7_model())
    assert all(not any(c["pruned"]) for c in certs.values())
    assert run_verification(g, certs, kernel_scheme(2, 2)).accepted


def test_kernel_random_completeness():
    for seed in range(20):
        t = 1 + seed % 3
        g, m = random_bounded_treedepth_graph(t, 6 + seed, seed, p=0.1)
        for k in (1, 2):
            assert accepted(g, kernel_scheme(k, t), model=m)


def test_kernel_attacks_on_yes_instance():
    g = spider(5, 2)
    s = kernel_scheme(2, 2)
    for name in ("corrupt-etype", "unprune-all", "over-prune"):
        for certs in s.adversaries(g)[name]():
            assert not run_verification(g, certs, s).accepted, name


# -- FO through the kernel ---------------------------------------------------

def test_fo_td_star():
    f = parse_formula(DOMINATING)
    g = star_graph(20)
    s = fo_treedepth_scheme(f, 1)
    assert s.k == 2
    certs = s.prove(g)
    assert run_verification(g, certs, s).accepted
    kern = certs[1]["kern"]
    assert kern["h"] == 3 and kern["adj"] == (1, 1, 0)


def test_fo_td_p4():
    f = parse_formula(DOMINATING)
    s = fo_treedepth_scheme(f, 2)
    with pytest.raises(CannotCertify):
        s.prove(path_graph(4))
    assert fuzz_scheme(path_graph(4), s, seed=0, budget=1500).escaped == 0


def test_fo_td_kernel_preserves_truth():
    f = parse_formula(DOMINATING)
    for seed in range(15):
        g, m = random_bounded_treedepth_graph(2, 8 + seed, seed, p=0.1)
        r = k_reduce(g, m, 2)
        assert evaluate(g, f) == evaluate(r.kernel, f)


def test_kernel_fields_present():
    certs = fo_treedepth_scheme(parse_formula(TAUTOLOGY), 1).prove(star_graph(4))
    assert all(name in certs[1] for name in KERNEL_FIELDS)


def test_description_matches_kernel():
    g = spider(4, 2)
    m = model_from_parents(1, {v: (1 if v % 2 == 0 else v - 1) for v in g.nodes if v != 1} | {1: 1})
    r = k_reduce(g, m, 2)
    order = sorted(r.survivors, key=lambda v: (m.depth[v], v))
    desc, pos = _description(r, order)
    assert desc["h"] == r.kernel.n
    bits = iter(desc["adj"])
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            assert next(bits) == r.kernel.has_edge(order[i], order[j])
