"""Certifying treedepth at most ``t`` with ancestor lists and per-ancestor spanning trees.

A vertex at depth ``d`` holds its ancestor list ``L`` (itself first, the root
last) and, for every depth ``k = 1..d``, a fragment of a spanning tree of
``G_a`` where ``a`` is its ancestor at depth ``k``.  That tree is rooted at the
exit vertex of ``a`` and its fragments carry the tag ``k``.
"""

from __future__ import annotations

from ..certs import (
    CannotCertify, Certificate, Field, Scheme, count_width, depth_width, id_width,
)
from ..treedepth import (
    Model, SizeLimitError, compute_treedepth_exact, greedy_model, is_valid_model, make_coherent,
    model_from_parents,
)
from .spanning import bfs_tree, check_tree, tree_cert

__all__ = ["TreedepthScheme", "treedepth_scheme", "treedepth_certs", "check_treedepth", "find_model"]


def find_model(g, t: int, model: Model | None = None) -> Model:
    """A coherent model of height <= ``t``, or :class:`CannotCertify`.

    Exact on graphs within the solver's size limit, greedy beyond it.
    """
    if model is None:
        try:
            td, model = compute_treedepth_exact(g)
        except SizeLimitError:
            # too large for the exact solver: a greedy model may still fit
            model = greedy_model(g)
            td = model.height
        if td > t:
            raise CannotCertify(f"no model of height at most {t} found (best {td})")
    elif not is_valid_model(g, model, t):
        raise CannotCertify(f"supplied model is not a model of height at most {t}")
    return make_coherent(g, model)


def _fragment_trees(g, m: Model) -> dict:
    """For every non-root ``a``: (parent, dist, root) of a BFS tree of ``G_a`` from its exit vertex.

    Works on any rooted tree over the vertices.  When ``G_a`` is not
    connected or misses ``parent(a)`` the leftovers become roots of their
    own, which the verifier rejects.
    """
    out = {}
    for a in m.parent:
        if a == m.root:
            continue
        sub = m.subtree(a)
        nb = g.adj[m.parent[a]]
        exits = [x for x in sub if x in nb] or sub
        par, dist = bfs_tree(g, exits[0], sub)
        rootof = {x: exits[0] for x in par}
        for x in sub:
            if x not in par:
                par[x], dist[x], rootof[x] = x, 0, x
        out[a] = (par, dist, rootof)
    return out


def treedepth_certs(g, m: Model, t: int) -> dict:
    """Certificates of the scheme for the rooted tree ``m`` (honest when ``m`` is a coherent model)."""
    idw, cw, dw = id_width(g.id_bound), count_width(g.n), depth_width(t)
    trees = _fragment_trees(g, m)
    certs = {}
    for v in g.nodes:
        anc = tuple(m.ancestors(v))
        frags = []
        for k in range(1, len(anc)):
            a = anc[len(anc) - 1 - k]
            par, dist, rootof = trees[a]
            frags.append(tree_cert(par[v], rootof[v], dist[v], idw, cw, Field("tag", k, dw)))
        certs[v] = Certificate((
            Field("anc", anc, idw, dw),
            Field("frags", tuple(frags), 0, dw),
        ))
    return certs


def _is_suffix(short, long_) -> bool:
    return len(short) <= len(long_) and tuple(long_[len(long_) - len(short):]) == tuple(short)


def check_treedepth(view, t: int) -> bool:
    """The four local steps of the verifier."""
    me, c = view.self_id, view.cert
    nbrs = dict(view.neighbors)
    L = tuple(c["anc"])
    d = len(L) - 1
    # step 1
    if d < 0 or d > t or L[0] != me:
        return False
    lists = {u: tuple(cu["anc"]) for u, cu in nbrs.items()}
    if any(not Lu or Lu[-1] != L[-1] for Lu in lists.values()):
        return False
    # step 2
    for Lu in lists.values():
        if not (_is_suffix(Lu, L) or _is_suffix(L, Lu)):
            return False
    # step 3
    frags = c["frags"]
    if len(frags) != d or [f["tag"] for f in frags] != list(range(1, d + 1)):
        return False
    # step 4, for every depth k <= d
    for k in range(1, d + 1):
        key = L[-(k + 1):]
        members = {}
        for u, cu in nbrs.items():
            Lu = lists[u]
            if len(Lu) >= k + 1 and Lu[-(k + 1):] == key:
                fu = cu["frags"][k - 1]
                if fu["tag"] != k:
                    return False
                members[u] = fu
        mine = frags[k - 1]
        if not check_tree(me, mine, members):
            return False
        if mine["dist"] == 0 and not any(Lu == L[-k:] for Lu in lists.values()):
            return False
    return True


class TreedepthScheme(Scheme):
    """Treedepth at most ``t``."""

    name = "td"

    def __init__(self, t: int):
        if t < 0:
            raise ValueError("t must be non-negative")
        self.t = t

    def params(self):
        return {"t": self.t}

    def prove(self, g, model: Model | None = None):
        return treedepth_certs(g, find_model(g, self.t, model), self.t)

    def verify(self, view):
        return check_treedepth(view, self.t)

    def adversaries(self, g):
        return treedepth_adversaries(g, self.t, lambda m: treedepth_certs(g, m, self.t))


def _truncate(c: Certificate, t: int) -> Certificate:
    anc = tuple(c["anc"])
    if len(anc) <= t + 1:
        return c
    anc = (anc[0],) + anc[len(anc) - t:]
    return c.replace("anc", anc).replace("frags", tuple(c["frags"])[-t:] if t else ())


def treedepth_adversaries(g, t: int, build) -> dict:
    """Structured attacks shared by every scheme built on ancestor lists.

    ``build(model)`` turns a rooted tree into certificates of the attacked scheme.
    """

    def optimal():
        try:
            _, m = compute_treedepth_exact(g)
        except SizeLimitError:
            m = greedy_model(g)
        return make_coherent(g, m)

    def overflow():
        # an honest, too tall model
        yield build(optimal())

    def drop_level():
        # contract one level of an optimal model so its height fits
        m = optimal()
        for lvl in range(1, m.height):
            # children of level ``lvl`` hang from their grandparent
            parent = {v: m.parent[m.parent[v]] if m.depth[v] == lvl + 1 else m.parent[v]
                      for v in m.parent}
            yield build(model_from_parents(m.root, parent))

    def forged_suffix():
        # honest certificates with lists cut down to t + 1 entries
        base = build(optimal())
        yield {v: _truncate(c, t) for v, c in base.items()}

    def fake_tree():
        for r in g.nodes[:3]:
            yield build(bfs_model(g, r))

    def star():
        for r in g.nodes[:3]:
            yield build(model_from_parents(r, {v: r for v in g.nodes}))

    return {"overflow": overflow, "drop-level": drop_level, "forged-suffix": forged_suffix,
            "fake-tree": fake_tree, "star": star}


def bfs_model(g, root) -> Model:
    par, _ = bfs_tree(g, root)
    return model_from_parents(root, par)


def treedepth_scheme(t: int) -> TreedepthScheme:
    return TreedepthScheme(t)
