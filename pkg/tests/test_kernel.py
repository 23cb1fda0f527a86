import itertools
from dataclasses import replace

import networkx as nx
import pytest

from conftest import balanced_p7_model, k_bipartite
from locert.ef import ef_equivalent
from locert.graph import complete_graph, path_graph, random_bounded_treedepth_graph, star_graph
from locert.kernel import (
    ancestor_vector, compute_type, distinct_end_types_by_depth, dump_reduction,
    end_type_consistency_check, exactly_k_check, k_reduce, parse_type_code, type_bound, type_code,
)
from locert.treedepth import make_coherent, model_from_parents


def star_model(g):
    return model_from_parents(1, {v: 1 for v in g.nodes})


def restrict(m, keep):
    return model_from_parents(m.root, {v: m.parent[v] for v in keep})


def test_ancestor_vectors_on_balanced_p7():
    g, m = path_graph(7), balanced_p7_model()
    assert ancestor_vector(g, m, 4) == ()
    assert ancestor_vector(g, m, 3) == (1, 1)
    assert ancestor_vector(g, m, 1) == (0, 1)
    assert ancestor_vector(g, m, 5) == (1, 1)
    assert ancestor_vector(g, m, 2) == (0,)


def test_types_on_balanced_p7_and_star():
    g, m = path_graph(7), balanced_p7_model()
    assert compute_type(g, m, 1) == compute_type(g, m, 7)
    assert compute_type(g, m, 3) == compute_type(g, m, 5)
    assert compute_type(g, m, 1) != compute_type(g, m, 3)
    s = star_graph(10)
    assert len({compute_type(s, star_model(s), v) for v in s.nodes if v != 1}) == 1


def test_parse_type_code_inverse():
    code = type_code((1, 0), [type_code((1, 1, 0), []), type_code((0, 0, 1), [])])
    vec, kids = parse_type_code(code)
    assert vec == (1, 0)
    assert type_code(vec, kids) == code
    with pytest.raises(ValueError):
        parse_type_code("1:")


def _labelled_tree(g, m, v):
    t = nx.DiGraph()
    for x in m.subtree(v):
        t.add_node(x, vec=ancestor_vector(g, m, x))
        if x != v:
            t.add_edge(m.parent[x], x)
    return t


def test_type_codes_match_labelled_isomorphism():
    # independent oracle: networkx isomorphism of the labelled rooted subtrees
    match = nx.algorithms.isomorphism.categorical_node_match("vec", None)
    for seed in range(12):
        g, m = random_bounded_treedepth_graph(3, 11, seed, p=0.1)
        codes = {v: compute_type(g, m, v) for v in g.nodes}
        for u, v in itertools.combinations(g.nodes, 2):
            if m.depth[u] != m.depth[v]:
                continue
            iso = nx.is_isomorphic(_labelled_tree(g, m, u), _labelled_tree(g, m, v), node_match=match)
            assert (codes[u] == codes[v]) == iso


def test_already_reduced_is_fixpoint():
    g, m = path_graph(7), balanced_p7_model()
    r = k_reduce(g, m, 2)
    assert r.kernel == g and r.prune_log == () and not r.deleted


def test_star_kernels():
    s = star_graph(5)
    r = k_reduce(s, star_model(s), 2)
    assert r.kernel.n == 3 and sorted(r.pruned_roots) == [4, 5, 6]
    assert ef_equivalent(s, r.kernel, 2)
    for m in range(2, 12):
        s = star_graph(m)
        assert k_reduce(s, star_model(s), 2).kernel.n == 3


def test_type_bound_values():
    for k in (1, 2, 3):
        for t in range(5):
            assert type_bound(k, t, t) == 2**t
    assert type_bound(1, 1, 0) == 4
    assert type_bound(5, 0, 0) == 1
    assert type_bound(2, 2, 1) == 2 * 3**4
    assert type_bound(2, 2, 0) == 3 ** (2 * 3**4)
    assert type_bound(3, 4, 0, cap=10**6) == 10**6
    with pytest.raises(OverflowError):
        type_bound(3, 4, 0)
    with pytest.raises(ValueError):
        type_bound(1, 2, 3)


def test_end_type_consistency():
    s = star_graph(6)
    r = k_reduce(s, star_model(s), 2)
    assert end_type_consistency_check(r) and exactly_k_check(r)
    victim = next(iter(r.deleted))
    bad = dict(r.end_type)
    bad[1] = type_code((), [bad[victim]] * 3)
    assert not end_type_consistency_check(replace(r, end_type=bad))
    k1 = complete_graph(1)
    assert end_type_consistency_check(k_reduce(k1, model_from_parents(1, {1: 1}), 1))


def _random_reductions(count=60):
    for seed in range(count):
        t = 1 + seed % 3
        g, m = random_bounded_treedepth_graph(t, 6 + seed % 9, seed, p=0.15)
        m = make_coherent(g, m)
        for k in (1, 2):
            yield g, m, k, k_reduce(g, m, k)


def test_reduction_invariants():
    pruned_any = 0
    for g, m, k, r in _random_reductions():
        assert r.kernel.nodes == tuple(sorted(set(g.nodes) - r.deleted))
        assert r.deleted == {x for u in r.pruned_roots for x in m.subtree(u)}
        depths = [d for _, d in r.prune_log]
        assert depths == sorted(depths, reverse=True)
        assert end_type_consistency_check(r) and exactly_k_check(r)
        again = k_reduce(r.kernel, restrict(m, r.kernel.nodes), k)
        assert again.prune_log == ()
        assert k_reduce(g, m, k) == r
        pruned_any += bool(r.pruned_roots)
    assert pruned_any > 20


def test_kernel_bipartite():
    g = k_bipartite(2, 6)
    m = make_coherent(g, model_from_parents(1, {1: 1, 2: 1, **{v: 2 for v in range(3, 9)}}))
    r = k_reduce(g, m, 2)
    assert r.kernel.n == 4
    assert ef_equivalent(g, r.kernel, 2)


def test_distinct_end_types_by_depth_bounded():
    for g, m, k, r in _random_reductions(30):
        counts = distinct_end_types_by_depth(r)
        for d, c in counts.items():
            assert c <= type_bound(k, m.height, d, cap=10**9)


def test_dump_format():
    s = star_graph(3)
    text = dump_reduction(k_reduce(s, star_model(s), 1))
    lines = text.splitlines()
    assert lines[0].startswith("# k=1")
    assert lines[1] == "1 0 0 0 1"
    assert "2 1 0 0 0" in lines and "4 1 1 1 0" in lines
    assert lines[lines.index("types") + 1] == "0 (1:)"
