from __future__ import annotations

from pathlib import Path

import networkx as nx
import pytest

from locert.graph import from_networkx, make_graph, path_graph
from locert.logic import parse_formula
from locert.treedepth import model_from_parents

DATA = Path(__file__).parent / "data"

TRIANGLE = "exists x exists y exists z (x ~ y & y ~ z & x ~ z)"
DIAMETER2 = "forall x forall y (x = y | x ~ y | exists z (x ~ z & z ~ y))"
DOMINATING = "exists x forall y (x = y | x ~ y)"
CLIQUE = "forall x forall y (x = y | x ~ y)"
TAUTOLOGY = "forall x x = x"

# sentences of quantifier depth <= 2
DEPTH2_SENTENCES = [
    CLIQUE,
    DOMINATING,
    TAUTOLOGY,
    "forall x forall y x = y",
    "exists x exists y (!x = y & !x ~ y)",
    "forall x exists y x ~ y",
    "!exists x forall y (x = y | x ~ y)",
    "exists x forall y (x = y | !x ~ y)",
    "(forall x exists y (!x = y & !x ~ y)) | (forall x forall y x = y)",
    "(exists x exists y x ~ y) -> forall x exists y (x = y | !x ~ y)",
]

# sentences of quantifier depth <= 3
DEPTH3_SENTENCES = [
    TRIANGLE,
    DIAMETER2,
    DOMINATING,
    "!exists x exists y exists z (x ~ y & y ~ z & !x ~ z & !x = z)",
    "exists x exists y (!x = y & forall z (z ~ x <-> z ~ y))",
]


def all_connected(max_n=7):
    """Every connected graph on 1..max_n vertices (max_n <= 7), ids 1..n."""
    return [
        from_networkx(h)
        for h in nx.graph_atlas_g()[1:]
        if h.number_of_nodes() <= max_n and nx.is_connected(h)
    ]


def connected8():
    lines = (DATA / "connected8.g6").read_text().split()
    return [from_networkx(nx.from_graph6_bytes(s.encode())) for s in lines]


def balanced_p7_model():
    """Root 4, children 2 and 6, leaves 1, 3 under 2 and 5, 7 under 6."""
    return model_from_parents(4, {4: 4, 2: 4, 6: 4, 1: 2, 3: 2, 5: 6, 7: 6})


def k_bipartite(a, b):
    left = list(range(1, a + 1))
    right = list(range(a + 1, a + b + 1))
    return make_graph(left + right, [(u, v) for u in left for v in right])


def spider(legs, length=2):
    """Centre 1 with ``legs`` paths of ``length`` edges."""
    edges, nxt = [], 2
    for _ in range(legs):
        prev = 1
        for _ in range(length):
            edges.append((prev, nxt))
            prev, nxt = nxt, nxt + 1
    return make_graph(range(1, nxt), edges)


@pytest.fixture(scope="session")
def small_corpus():
    return all_connected(6)


@pytest.fixture
def p7():
    return path_graph(7)


@pytest.fixture
def formulas():
    return {name: parse_formula(text) for name, text in [
        ("triangle", TRIANGLE), ("diameter2", DIAMETER2), ("dominating", DOMINATING),
        ("clique", CLIQUE), ("tautology", TAUTOLOGY),
    ]}


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
