"""Small FO fragments: existential sentences and sentences of quantifier depth at most two."""

from __future__ import annotations

import itertools

from ..certs import CannotCertify, Certificate, Field, Scheme, count_width, id_width
from ..graph import complete_graph, path_graph
from ..logic import (
    Formula, evaluate, evaluate_with, is_existential, quantifier_depth, split_prenex,
)
from .spanning import bfs_tree, check_count, check_tree, count_certs, tree_cert

__all__ = [
    "ExistentialFOScheme",
    "existential_fo_scheme",
    "depth2_classify",
    "REALIZABLE_PROFILES",
    "graph_profile",
    "Depth2Scheme",
    "depth2_fo_scheme",
]


class ExistentialFOScheme(Scheme):
    """Witness ids, their induced adjacency matrix, and one spanning tree per witness.

    Each witness checks its own row of the matrix against its real
    neighbourhood, which binds the broadcast matrix to the graph.
    """

    name = "efo"

    def __init__(self, formula: Formula):
        if not is_existential(formula):
            raise ValueError("formula is not existential")
        prefix, matrix = split_prenex(formula)
        self.formula = formula
        self.variables = [v for _, v in prefix]
        self.matrix = matrix
        self.k = len(self.variables)

    def params(self):
        return {"k": self.k}

    def _holds(self, ids, mat) -> bool:
        k = self.k
        slots = range(k)
        adj = {i: {j for j in slots if mat[i * k + j]} for i in slots}
        # slot indices stand for witnesses; equal ids share one slot
        canon = {i: ids.index(ids[i]) for i in slots}
        env = {x: canon[i] for i, x in enumerate(self.variables)}
        adj_c = {i: {canon[j] for j in adj[i]} for i in slots}
        return evaluate_with(sorted(set(canon.values())), adj_c, self.matrix, env)

    def witnesses(self, g):
        for combo in itertools.product(g.nodes, repeat=self.k):
            env = dict(zip(self.variables, combo))
            if evaluate_with(g.nodes, g.adj, self.matrix, env):
                return combo
        return None

    def certs_for(self, g, combo):
        idw, cw = id_width(g.id_bound), count_width(g.n)
        k = self.k
        mat = tuple(int(combo[j] in g.adj[combo[i]]) for i in range(k) for j in range(k))
        trees = [bfs_tree(g, w) for w in combo]
        kw = count_width(k)
        return {
            v: Certificate((
                Field("wit", tuple(combo), idw, kw),
                Field("mat", mat, 1, count_width(k * k)),
                Field("trees", tuple(tree_cert(p[v], w, d[v], idw, cw)
                                     for w, (p, d) in zip(combo, trees)), 0, kw),
            ))
            for v in g.nodes
        }

    def prove(self, g):
        combo = self.witnesses(g)
        if combo is None:
            raise CannotCertify("sentence is false on this graph")
        return self.certs_for(g, combo)

    def verify(self, view):
        me, c = view.self_id, view.cert
        k = self.k
        ids, mat, trees = c["wit"], c["mat"], c["trees"]
        if len(ids) != k or len(mat) != k * k or len(trees) != k:
            return False
        nbrs = dict(view.neighbors)
        for u, cu in nbrs.items():
            if cu["wit"] != ids or cu["mat"] != mat or len(cu["trees"]) != k:
                return False
        for i in range(k):
            if trees[i]["root"] != ids[i]:
                return False
            if not check_tree(me, trees[i], {u: cu["trees"][i] for u, cu in nbrs.items()}):
                return False
        for i in range(k):
            for j in range(k):
                if mat[i * k + j] != mat[j * k + i]:
                    return False
                if ids[i] == ids[j] and mat[i * k + j]:
                    return False
        for i in range(k):
            if ids[i] == me:
                for j in range(k):
                    if mat[i * k + j] != int(ids[j] in view.neighbor_ids):
                        return False
        return self._holds(ids, mat)

    def adversaries(self, g):
        k = self.k

        def forged_matrix():
            # honest witnesses, matrix claiming every pair of distinct witnesses adjacent
            for combo in itertools.islice(itertools.product(g.nodes, repeat=k), 6):
                honest = self.certs_for(g, combo)
                full = tuple(int(combo[i] != combo[j]) for i in range(k) for j in range(k))
                yield {v: c.replace("mat", full) for v, c in honest.items()}

        def honest_matrix():
            for combo in itertools.islice(itertools.permutations(g.nodes, k), 6):
                yield self.certs_for(g, combo)

        def phantom_witness():
            # a witness id that belongs to no vertex
            combo = tuple(itertools.islice(itertools.cycle(g.nodes), k))
            honest = self.certs_for(g, combo)
            ghost = next(x for x in range(1, g.id_bound + 2) if x not in g.adj)
            ghost = min(ghost, (1 << id_width(g.id_bound)) - 1)
            full = tuple(int(i != j) for i in range(k) for j in range(k))
            yield {v: c.replace("wit", (ghost,) + tuple(combo[1:])).replace("mat", full)
                   for v, c in honest.items()}

        return {"forged-matrix": forged_matrix, "honest-matrix": honest_matrix,
                "phantom-witness": phantom_witness}


def existential_fo_scheme(formula: Formula) -> ExistentialFOScheme:
    return ExistentialFOScheme(formula)


# -- depth two --------------------------------------------------------------

# (at most one vertex, clique, has a dominating vertex) on connected graphs
REALIZABLE_PROFILES = ((1, 1, 1), (0, 1, 1), (0, 0, 1), (0, 0, 0))
_REPRESENTATIVES = {
    (1, 1, 1): lambda: complete_graph(1),
    (0, 1, 1): lambda: complete_graph(2),
    (0, 0, 1): lambda: path_graph(3),
    (0, 0, 0): lambda: path_graph(4),
}


def graph_profile(g) -> tuple:
    n = g.n
    degs = [g.degree(v) for v in g.nodes]
    return (int(n <= 1), int(all(d == n - 1 for d in degs)), int(any(d == n - 1 for d in degs)))


def depth2_classify(f: Formula) -> dict:
    """Truth value of ``f`` for each realizable profile, read off K1, K2, P3, P4."""
    if quantifier_depth(f) > 2:
        raise ValueError("quantifier depth exceeds 2")
    return {p: evaluate(_REPRESENTATIVES[p](), f) for p in REALIZABLE_PROFILES}


class Depth2Scheme(Scheme):
    """Certified vertex count, the claimed profile, and up to two rooted trees.

    The clique bit is checked at every vertex (degree ``n-1``) when claimed
    and witnessed by a tree rooted at a low-degree vertex when denied; the
    dominating-vertex bit is the other way round.
    """

    name = "fo2"

    def __init__(self, formula: Formula):
        self.formula = formula
        self.table = depth2_classify(formula)

    def prove(self, g):
        prof = graph_profile(g)
        if not self.table[prof]:
            raise CannotCertify("sentence is false on this graph")
        return self.certs_for(g, prof)

    def certs_for(self, g, prof):
        idw, cw = id_width(g.id_bound), count_width(g.n)
        cnt = count_certs(g)
        extra = {}
        full = [v for v in g.nodes if g.degree(v) == g.n - 1]
        low = [v for v in g.nodes if g.degree(v) != g.n - 1]
        if prof[2] and full:
            extra["dom"] = bfs_tree(g, full[0]) + (full[0],)
        if not prof[1] and low:
            extra["low"] = bfs_tree(g, low[0]) + (low[0],)
        out = {}
        for v in g.nodes:
            fields = [Field("cnt", cnt[v]), Field("prof", prof, 1, 2)]
            for name, (par, dist, r) in extra.items():
                fields.append(Field(name, tree_cert(par[v], r, dist[v], idw, cw)))
            out[v] = Certificate(tuple(fields))
        return out

    def verify(self, view):
        me, c = view.self_id, view.cert
        nbrs = dict(view.neighbors)
        if not check_count(me, c["cnt"], {u: x["cnt"] for u, x in nbrs.items()}):
            return False
        prof = tuple(c["prof"])
        if prof not in self.table or not self.table[prof]:
            return False
        if any(tuple(x["prof"]) != prof for x in nbrs.values()):
            return False
        n = c["cnt"]["total"]
        full_degree = view.degree == n - 1
        if prof[0] != int(n <= 1):
            return False
        for name, needed, root_ok in (
            ("low", not prof[1], lambda: not full_degree),
            ("dom", prof[2], lambda: full_degree),
        ):
            if not needed:
                continue
            tree = c[name]
            if not check_tree(me, tree, {u: x[name] for u, x in nbrs.items()}):
                return False
            if tree["dist"] == 0 and not root_ok():
                return False
        if prof[1] and not full_degree:
            return False
        if not prof[2] and full_degree:
            return False
        return True

    def adversaries(self, g):
        def claimed_profiles():
            for prof in REALIZABLE_PROFILES:
                if self.table[prof]:
                    yield self.certs_for(g, prof)

        def forged_count():
            for prof in REALIZABLE_PROFILES:
                if not self.table[prof]:
                    continue
                base = self.certs_for(g, prof)
                for n in (1, 2, 3, g.n - 1, g.n + 1):
                    if n < 1:
                        continue
                    out = {}
                    for v, c in base.items():
                        cnt = c["cnt"]
                        n_ = min(n, (1 << cnt.field("total").width) - 1)
                        cnt = cnt.replace("total", n_)
                        if cnt["dist"] == 0:
                            cnt = cnt.replace("sub", n_)
                        out[v] = c.replace("cnt", cnt)
                    yield out

        return {"claimed-profile": claimed_profiles, "forged-count": forged_count}


def depth2_fo_scheme(formula: Formula) -> Depth2Scheme:
    return Depth2Scheme(formula)
