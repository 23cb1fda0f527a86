import pytest

from conftest import balanced_p7_model
from locert.certs import (
    Certificate, Field, LocalView, MissingCertificateError, adversarial_prover, cert_size_bits,
    certs_from_json, certs_to_json, dump_certs, fuzz_scheme, is_accepted, local_views,
    mutate_certs, run_verification,
)
from locert.graph import cycle_graph, make_graph, path_graph
from locert.schemes import (
    AcyclicityScheme, count_scheme, spanning_tree_scheme, tree_cert, treedepth_scheme,
)

# measured once and frozen
P7_TD_MAX_BITS = 56


def p3_tree():
    # widths: ids on 4 bits (idBound 9), distances on 2 bits
    return {
        1: tree_cert(1, 1, 0, 4, 2),
        2: tree_cert(1, 1, 1, 4, 2),
        3: tree_cert(2, 1, 2, 4, 2),
    }


def test_spanning_tree_hand_example():
    g, s = path_graph(3), spanning_tree_scheme()
    assert run_verification(g, p3_tree(), s).accepted
    bad = p3_tree()
    bad[3] = bad[3].replace("dist", 3)
    v = run_verification(g, bad, s)
    assert not v.accepted and v.rejecting == {3}


def test_empty_certificates_rejected():
    g = path_graph(3)
    empty = {v: Certificate() for v in g.nodes}
    v = run_verification(g, empty, spanning_tree_scheme())
    assert v.rejecting == set(g.nodes)


def test_single_tampered_root():
    g = path_graph(3)
    certs = p3_tree()
    certs[2] = certs[2].replace("root", 3)
    assert run_verification(g, certs, spanning_tree_scheme()).rejecting


def test_missing_certificate():
    g = path_graph(3)
    certs = p3_tree()
    del certs[2]
    with pytest.raises(MissingCertificateError):
        run_verification(g, certs, spanning_tree_scheme())


def test_verdict_consistency():
    g = path_graph(3)
    v = run_verification(g, p3_tree(), spanning_tree_scheme())
    assert v.accepted == (not v.rejecting)
    assert is_accepted(g, p3_tree(), spanning_tree_scheme())


def test_size_accounting():
    assert cert_size_bits({1: Certificate(), 2: Certificate()}) == (0, 0, {1: 0, 2: 0})
    g = path_graph(7)
    certs = spanning_tree_scheme().prove(g)
    mx, total, per = cert_size_bits(certs)
    assert mx == 15 and total == 105 and set(per.values()) == {15}
    td = treedepth_scheme(2).prove(g, model=balanced_p7_model())
    assert cert_size_bits(td)[0] == P7_TD_MAX_BITS


def test_serialisation_exact():
    g = path_graph(7)
    for certs in (count_scheme().prove(g), treedepth_scheme(2).prove(g)):
        for c in certs.values():
            assert len(c.to_bits()) == c.bit_size
        back = certs_from_json(certs_to_json(certs, scheme="x"))
        assert back == certs


def test_overflow_detected():
    with pytest.raises(ValueError):
        Certificate((Field("a", 8, 3),)).to_bits()


def test_dump_format():
    text = dump_certs(p3_tree())
    assert text.splitlines()[0] == "1: parent=1(4b), root=1(4b), dist=0(2b)"


def test_mutations():
    certs = count_scheme().prove(path_graph(5))
    assert list(mutate_certs(certs, seed=1, budget=0)) == []
    a = list(mutate_certs(certs, seed=1, budget=50))
    b = list(mutate_certs(certs, seed=1, budget=50))
    assert a == b and len(a) == 50
    assert all(m != certs for m in a)
    assert all(set(m) == set(certs) for m in a)


def test_adversarial_prover_streams():
    c5 = cycle_graph(5)
    s = AcyclicityScheme()
    attempts = list(adversarial_prover(c5, s, ["distance-shift"]))
    assert attempts
    for c in attempts:
        assert not run_verification(c5, c, s).accepted
    assert list(adversarial_prover(c5, s, [])) == []
    with pytest.raises(KeyError):
        list(adversarial_prover(c5, s, ["nope"]))


def test_forged_suffix_fails_suffix_step():
    g = path_graph(7)
    s = treedepth_scheme(1)
    for certs in adversarial_prover(g, s, ["forged-suffix"]):
        rejecting = run_verification(g, certs, s).rejecting
        assert rejecting
        # some rejecting node has a neighbour whose list is neither a suffix nor an extension
        lists = {v: tuple(c["anc"]) for v, c in certs.items()}

        def related(a, b):
            short, long_ = sorted((a, b), key=len)
            return long_[len(long_) - len(short):] == short

        assert any(not related(lists[v], lists[u]) for v in rejecting for u in g.adj[v])


def test_locality():
    # node 2 sees the same view in a path and in a longer graph
    small = path_graph(3)
    big = make_graph(range(1, 7), [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)])
    s = count_scheme()
    certs = s.prove(big)
    view_big = next(v for v in local_views(big, certs) if v.self_id == 2)
    view_small = LocalView(2, certs[2], tuple((u, certs[u]) for u in sorted(small.adj[2])))
    assert view_small == view_big
    assert s.verify(view_small) == s.verify(view_big)


def test_acyclicity_scheme():
    s = AcyclicityScheme()
    g = path_graph(6)
    assert run_verification(g, s.prove(g), s).accepted
    assert fuzz_scheme(cycle_graph(6), s, seed=2, budget=2000).escaped == 0
