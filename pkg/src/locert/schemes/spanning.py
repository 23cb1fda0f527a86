"""Spanning-tree and vertex-count certification, plus the tree helpers the
other schemes reuse."""

from __future__ import annotations

from collections import deque

from ..certs import (
    CannotCertify, Certificate, Field, LocalView, Scheme, count_width, id_width,
)

__all__ = [
    "bfs_tree",
    "tree_cert",
    "check_tree",
    "check_count",
    "SpanningTreeScheme",
    "CountScheme",
    "spanning_tree_scheme",
    "count_scheme",
    "AcyclicityScheme",
]


def bfs_tree(g, root, allowed=None):
    """BFS parent/dist maps from ``root`` inside ``allowed`` (all nodes by default)."""
    allowed = set(g.nodes) if allowed is None else set(allowed)
    parent, dist = {root: root}, {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in sorted(g.adj[u]):
            if w in allowed and w not in parent:
                parent[w] = u
                dist[w] = dist[u] + 1
                queue.append(w)
    return parent, dist


def tree_cert(parent, root, dist, idw, distw, *extra: Field) -> Certificate:
    return Certificate((
        Field("parent", parent, idw),
        Field("root", root, idw),
        Field("dist", dist, distw),
    ) + extra)


def check_tree(self_id, mine, members) -> bool:
    """Local spanning-tree rules.

    ``members`` maps the neighbours belonging to the same tree to their tree
    certificates.  They must agree on the root; a node at distance 0 is the
    root and points to itself; any other node points to a member one step
    closer to the root.
    """
    root, par, dist = mine["root"], mine["parent"], mine["dist"]
    for c in members.values():
        if c["root"] != root:
            return False
    if dist == 0:
        return par == self_id and root == self_id
    if par == self_id or par not in members:
        return False
    return members[par]["dist"] == dist - 1


def check_count(self_id, mine, members) -> bool:
    """Tree rules plus subtree counts that add up, and an agreed total at the root."""
    if not check_tree(self_id, mine, members):
        return False
    total, sub = mine["total"], mine["sub"]
    if any(c["total"] != total for c in members.values()):
        return False
    kids = sum(c["sub"] for c in members.values() if c["parent"] == self_id)
    if sub != 1 + kids:
        return False
    if mine["dist"] == 0 and sub != total:
        return False
    return True


def _widths(g):
    return id_width(g.id_bound), count_width(g.n)


def _views_without_certs(g):
    empty = Certificate()
    return {
        v: LocalView(v, empty, tuple((u, empty) for u in sorted(g.adj[v])))
        for v in g.nodes
    }


class SpanningTreeScheme(Scheme):
    """Spanning tree rooted at a special vertex.

    ``root_check(view)`` (optional) is the property the root must have; without
    it the scheme accepts every connected graph.
    """

    name = "st"

    def __init__(self, root_check=None):
        self.root_check = root_check

    def prove(self, g, root=None):
        if root is None:
            if self.root_check is None:
                root = g.nodes[0]
            else:
                views = _views_without_certs(g)
                cands = [v for v in g.nodes if self.root_check(views[v])]
                if not cands:
                    raise CannotCertify("no vertex has the required property")
                root = cands[0]
        parent, dist = bfs_tree(g, root)
        idw, cw = _widths(g)
        return {v: tree_cert(parent[v], root, dist[v], idw, cw) for v in g.nodes}

    def verify(self, view):
        if not check_tree(view.self_id, view.cert, dict(view.neighbors)):
            return False
        if view.cert["dist"] == 0 and self.root_check is not None:
            return bool(self.root_check(view))
        return True

    def adversaries(self, g):
        idw, cw = _widths(g)

        def self_roots():
            # every node claims to be a root
            yield {v: tree_cert(v, v, 0, idw, cw) for v in g.nodes}

        def fake_root():
            # a consistent tree whose root is not special
            for r in g.nodes[:3]:
                parent, dist = bfs_tree(g, r)
                yield {v: tree_cert(parent[v], r, dist[v], idw, cw) for v in g.nodes}

        def shifted_distances():
            # the root hands its role to a neighbour and every distance moves by one
            r = g.nodes[0]
            parent, dist = bfs_tree(g, r)
            if g.adj[r]:
                parent = dict(parent)
                parent[r] = min(g.adj[r])
            yield {v: tree_cert(parent[v], r, min(dist[v] + 1, (1 << cw) - 1), idw, cw)
                   for v in g.nodes}

        return {"self-roots": self_roots, "fake-root": fake_root, "distance-shift": shifted_distances}


class CountScheme(Scheme):
    """Certified number of vertices; ``n_check(n)`` optionally restricts it."""

    name = "count"

    def __init__(self, n_check=None):
        self.n_check = n_check

    def prove(self, g, root=None):
        if self.n_check is not None and not self.n_check(g.n):
            raise CannotCertify(f"vertex count {g.n} rejected by the predicate")
        return count_certs(g, root)

    def verify(self, view):
        mine = view.cert
        if not check_count(view.self_id, mine, dict(view.neighbors)):
            return False
        if self.n_check is not None and not self.n_check(mine["total"]):
            return False
        return True

    def adversaries(self, g):
        honest = count_certs(g)

        def forged_total():
            for n in {g.n - 1, g.n + 1, max(1, g.n // 2)}:
                if n >= 1 and (self.n_check is None or self.n_check(n)):
                    yield {v: c.replace("total", min(n, (1 << c.field("total").width) - 1))
                           for v, c in honest.items()}

        def forged_sub():
            forged = forged_total()
            for c in forged:
                yield {v: x.replace("sub", x["total"]) if x["dist"] == 0 else x for v, x in c.items()}

        return {"forged-total": forged_total, "forged-root-count": forged_sub}


def count_certs(g, root=None) -> dict:
    root = g.nodes[0] if root is None else root
    parent, dist = bfs_tree(g, root)
    sub = {v: 1 for v in g.nodes}
    for v in sorted(g.nodes, key=lambda x: -dist[x]):
        if v != root:
            sub[parent[v]] += sub[v]
    idw, cw = _widths(g)
    return {
        v: tree_cert(parent[v], root, dist[v], idw, cw,
                     Field("total", g.n, cw), Field("sub", sub[v], cw))
        for v in g.nodes
    }


def spanning_tree_scheme(root_check=None) -> SpanningTreeScheme:
    return SpanningTreeScheme(root_check)


def count_scheme(n_check=None) -> CountScheme:
    return CountScheme(n_check)


class AcyclicityScheme(Scheme):
    """Trees certified by distances to a root.

    Each node holds the root identifier and its distance to it; a non-root
    node needs exactly one neighbour one step closer and every other
    neighbour one step further.  On a graph with a cycle some node of the
    cycle always sees an inconsistent distance.
    """

    name = "acyclic"

    def prove(self, g, root=None):
        if g.m != g.n - 1:
            raise CannotCertify("graph has a cycle")
        root = g.nodes[0] if root is None else root
        _, dist = bfs_tree(g, root)
        idw, cw = _widths(g)
        return {v: Certificate((Field("root", root, idw), Field("dist", dist[v], cw)))
                for v in g.nodes}

    def verify(self, view):
        root, d = view.cert["root"], view.cert["dist"]
        ds = []
        for _, c in view.neighbors:
            if c["root"] != root:
                return False
            ds.append(c["dist"])
        if d == 0:
            return view.self_id == root and all(x == 1 for x in ds)
        return ds.count(d - 1) == 1 and all(x in (d - 1, d + 1) for x in ds)

    def adversaries(self, g):
        idw, cw = _widths(g)

        def shifted():
            # honest BFS distances from each candidate root, then shifted by one
            for r in g.nodes[:4]:
                _, dist = bfs_tree(g, r)
                for shift in (0, 1):
                    yield {v: Certificate((Field("root", r, idw),
                                           Field("dist", min(dist[v] + shift, (1 << cw) - 1), cw)))
                           for v in g.nodes}

        return {"distance-shift": shifted}
