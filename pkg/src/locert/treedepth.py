"""Elimination trees (models): validation, exact treedepth, coherence.

Depth convention: the root has depth 0 and the treedepth of a graph is the
smallest possible height of a model, so a single vertex has treedepth 0 and
the path on seven vertices has treedepth 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .graph import Graph

__all__ = [
    "Model",
    "ModelError",
    "NotCoherentError",
    "SizeLimitError",
    "is_valid_model",
    "check_model_structure",
    "compute_treedepth_exact",
    "greedy_model",
    "make_coherent",
    "is_coherent",
    "coherence_witness",
    "load_model",
    "save_model",
    "model_from_parents",
    "EXACT_SOLVER_LIMIT",
]

EXACT_SOLVER_LIMIT = 20


class ModelError(ValueError):
    pass


class NotCoherentError(ModelError):
    pass


class SizeLimitError(ValueError):
    pass


@dataclass(frozen=True)
class Model:
    """Rooted tree on the vertex set; ``parent[root] == root``."""

    root: int
    parent: dict = field(hash=False)
    depth: dict = field(hash=False)

    @cached_property
    def children(self) -> dict:
        kids = {v: [] for v in self.parent}
        for v, p in self.parent.items():
            if v != self.root:
                kids[p].append(v)
        for v in kids:
            kids[v].sort()
        return kids

    @property
    def height(self) -> int:
        return max(self.depth.values())

    def ancestors(self, v) -> list:
        """``[v, parent(v), ..., root]``."""
        out = [v]
        while v != self.root:
            v = self.parent[v]
            out.append(v)
        return out

    def subtree(self, v) -> list:
        out, stack = [], [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self.children[u])
        return sorted(out)

    def is_ancestor(self, a, v) -> bool:
        """True if ``a`` is a (non-strict) ancestor of ``v``."""
        da = self.depth[a]
        while self.depth[v] > da:
            v = self.parent[v]
        return v == a

    def by_depth(self) -> list[list]:
        levels = [[] for _ in range(self.height + 1)]
        for v in sorted(self.depth):
            levels[self.depth[v]].append(v)
        return levels


def model_from_parents(root, parent: dict) -> Model:
    """Build a model from parent pointers, computing depths."""
    depth = {root: 0}

    def dep(v):
        path = []
        while v not in depth:
            if v in path:
                raise ModelError(f"cycle in parent pointers through {v}")
            path.append(v)
            if v not in parent:
                raise ModelError(f"node {v} has no parent entry")
            v = parent[v]
        d = depth[v]
        for u in reversed(path):
            d += 1
            depth[u] = d

    for v in parent:
        dep(v)
    return Model(root, dict(parent), depth)


def check_model_structure(g: Graph, m: Model) -> None:
    """Raise :class:`ModelError` unless ``m`` is a well-formed rooted tree on ``nodes(g)``."""
    nodes = set(g.nodes)
    if set(m.parent) != nodes or set(m.depth) != nodes:
        raise ModelError("model maps do not cover exactly the graph's nodes")
    if m.root not in nodes or m.parent[m.root] != m.root:
        raise ModelError("root must map to itself")
    if m.depth[m.root] != 0:
        raise ModelError("root must have depth 0")
    for v in nodes:
        if v == m.root:
            continue
        p = m.parent[v]
        if p == v:
            raise ModelError(f"non-root node {v} is its own parent")
        if p not in nodes:
            raise ModelError(f"parent {p} of {v} is not a node")
        if m.depth[v] != m.depth[p] + 1:
            raise ModelError(f"depth of {v} is not depth of its parent plus one")
    # depths strictly decrease along parent pointers, so every walk reaches the root
    for v in nodes:
        steps = 0
        while v != m.root:
            v = m.parent[v]
            steps += 1
            if steps > len(nodes):
                raise ModelError("cycle in parent pointers")


def is_valid_model(g: Graph, m: Model, t: int) -> bool:
    """True iff ``m`` is a model of ``g`` of height at most ``t``."""
    check_model_structure(g, m)
    if m.height > t:
        return False
    return all(m.is_ancestor(u, v) or m.is_ancestor(v, u) for u, v in g.edges)


# -- exact solver ------------------------------------------------------------

def _components(mask, adjmask):
    comps = []
    while mask:
        low = mask & -mask
        comp = low
        frontier = low
        while frontier:
            b = frontier & -frontier
            frontier ^= b
            new = adjmask[b.bit_length() - 1] & mask & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        mask &= ~comp
    return comps


def compute_treedepth_exact(g: Graph, *, limit: int = EXACT_SOLVER_LIMIT):
    """Exact treedepth by memoised vertex removal over connected vertex subsets.

    Returns ``(t, model)``.  Ties are broken towards the smallest identifier,
    so the root of the returned model is the smallest optimal root.
    """
    if g.n > limit:
        raise SizeLimitError(f"exact solver limited to {limit} nodes, got {g.n}")
    order = list(g.nodes)
    index = {v: i for i, v in enumerate(order)}
    adjmask = [0] * len(order)
    for v in order:
        for w in g.adj[v]:
            adjmask[index[v]] |= 1 << index[w]

    memo: dict[int, tuple[int, int]] = {}

    def td(mask):
        # connected mask -> (treedepth, best root bit index)
        hit = memo.get(mask)
        if hit is not None:
            return hit
        if mask & (mask - 1) == 0:
            res = (0, mask.bit_length() - 1)
            memo[mask] = res
            return res
        best = (mask.bit_count(), -1)
        rest = mask
        while rest:
            b = rest & -rest
            rest ^= b
            i = b.bit_length() - 1
            worst = 0
            for comp in _components(mask & ~b, adjmask):
                worst = max(worst, td(comp)[0])
                if 1 + worst >= best[0]:
                    break
            if 1 + worst < best[0]:
                best = (1 + worst, i)
        memo[mask] = best
        return best

    full = (1 << len(order)) - 1
    t = td(full)[0]

    parent = {}

    def build(mask, par):
        _, i = td(mask)
        v = order[i]
        parent[v] = v if par is None else par
        for comp in _components(mask & ~(1 << i), adjmask):
            build(comp, v)

    build(full, None)
    root = next(v for v, p in parent.items() if v == p)
    return t, model_from_parents(root, parent)


def greedy_model(g: Graph) -> Model:
    """Heuristic model for graphs beyond the exact solver: repeatedly remove a
    highest-degree vertex of each component (smallest id on ties)."""
    parent = {}
    stack = [(frozenset(g.nodes), None)]
    while stack:
        part, par = stack.pop()
        v = min(part, key=lambda x: (-len(g.adj[x] & part), x))
        parent[v] = v if par is None else par
        rest = set(part) - {v}
        while rest:
            seed = min(rest)
            comp, frontier = {seed}, [seed]
            while frontier:
                u = frontier.pop()
                for w in g.adj[u]:
                    if w in rest and w not in comp:
                        comp.add(w)
                        frontier.append(w)
            rest -= comp
            stack.append((frozenset(comp), v))
    root = next(v for v, p in parent.items() if v == p)
    return model_from_parents(root, parent)


# -- coherence ---------------------------------------------------------------

def _touches(g: Graph, vertices, target) -> bool:
    nb = g.adj[target]
    return any(x in nb for x in vertices)


def is_coherent(g: Graph, m: Model) -> bool:
    return all(
        _touches(g, m.subtree(v), m.parent[v]) for v in m.parent if v != m.root
    )


def make_coherent(g: Graph, m: Model) -> Model:
    """Reattach child subtrees until every subtree touches its parent.

    A subtree of ``w`` that has no vertex adjacent to ``parent(w)`` moves to the
    lowest ancestor adjacent to some vertex of the subtree.  Each move lowers
    the sum of depths, so the loop terminates, and the height never grows.
    """
    check_model_structure(g, m)
    parent = dict(m.parent)
    cur = m
    while True:
        moved = False
        for levels in cur.by_depth()[1:]:
            for w in levels:
                sub = cur.subtree(w)
                p = parent[w]
                if _touches(g, sub, p):
                    continue
                outside = {x for s in sub for x in g.adj[s]} - set(sub)
                a = p
                while a not in outside:
                    if a == cur.root:
                        raise ModelError("graph is disconnected or model is invalid")
                    a = parent[a]
                parent[w] = a
                moved = True
                break
            if moved:
                break
        if not moved:
            return cur
        cur = model_from_parents(m.root, parent)


def coherence_witness(g: Graph, m: Model) -> dict:
    """Exit vertex of every non-root ``v``: smallest vertex of its subtree adjacent to ``parent(v)``."""
    out = {}
    for v in sorted(m.parent):
        if v == m.root:
            continue
        nb = g.adj[m.parent[v]]
        cands = [x for x in m.subtree(v) if x in nb]
        if not cands:
            raise NotCoherentError(f"subtree of {v} has no vertex adjacent to {m.parent[v]}")
        out[v] = cands[0]
    return out


# -- file format -------------------------------------------------------------

def save_model(m: Model) -> str:
    """Lines ``m <node> <parent> <depth>``; the root is its own parent."""
    return "".join(f"m {v} {m.parent[v]} {m.depth[v]}\n" for v in sorted(m.parent))


def load_model(text: str) -> Model:
    parent, depth, root = {}, {}, None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "m" or len(parts) != 4:
            raise ModelError(f"line {lineno}: expected 'm <node> <parent> <depth>'")
        try:
            v, p, d = (int(x) for x in parts[1:])
        except ValueError:
            raise ModelError(f"line {lineno}: non-integer field") from None
        if v in parent:
            raise ModelError(f"line {lineno}: node {v} listed twice")
        parent[v], depth[v] = p, d
        if v == p:
            if root is not None:
                raise ModelError("more than one root")
            root = v
    if root is None:
        raise ModelError("no root line (node whose parent is itself)")
    return Model(root, parent, depth)
