"""Simple undirected graphs with integer identifiers, edge-list I/O and generators.

Every node carries a distinct positive integer identifier bounded by
``id_bound`` (``n ** id_exponent`` by default).  Graphs are immutable once
built; :func:`make_graph` and :func:`load_graph` validate them, while
:func:`induced_subgraph` deliberately skips the connectivity check.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

__all__ = [
    "Graph",
    "GraphError",
    "ParseError",
    "DisconnectedGraphError",
    "SelfLoopError",
    "DuplicateEdgeError",
    "IdRangeError",
    "UnknownNodeError",
    "make_graph",
    "validate",
    "load_graph",
    "save_graph",
    "induced_subgraph",
    "relabel",
    "random_connected_graph",
    "random_bounded_treedepth_graph",
    "path_graph",
    "cycle_graph",
    "complete_graph",
    "star_graph",
    "to_networkx",
    "from_networkx",
    "DEFAULT_ID_EXPONENT",
]

DEFAULT_ID_EXPONENT = 2


class GraphError(ValueError):
    pass


class ParseError(GraphError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DisconnectedGraphError(GraphError):
    pass


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class IdRangeError(GraphError):
    pass


class UnknownNodeError(GraphError, KeyError):
    pass


def default_id_bound(n: int, exponent: int = DEFAULT_ID_EXPONENT) -> int:
    return max(1, n) ** exponent


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph.

    ``adj`` maps each identifier to the frozenset of its neighbours.  Use
    :func:`make_graph` rather than the constructor when the input is untrusted.
    """

    adj: Mapping[int, frozenset]
    id_bound: int
    _sorted: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_sorted", tuple(sorted(self.adj)))

    @property
    def nodes(self) -> tuple[int, ...]:
        """Identifiers in increasing order."""
        return self._sorted

    def __len__(self):
        return len(self.adj)

    def __contains__(self, v):
        return v in self.adj

    def __iter__(self):
        return iter(self._sorted)

    def neighbors(self, v: int) -> frozenset:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj.get(u, ())

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in self._sorted for v in sorted(self.adj[u]) if u < v]

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def m(self) -> int:
        return sum(len(s) for s in self.adj.values()) // 2

    @property
    def id_width(self) -> int:
        """Bits needed for one identifier: ``ceil(log2(id_bound + 1))``."""
        return self.id_bound.bit_length()

    def is_connected(self) -> bool:
        if not self.adj:
            return False
        start = self._sorted[0]
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.adj)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return dict(self.adj) == dict(other.adj)

    def __hash__(self):
        return hash(tuple((v, tuple(sorted(self.adj[v]))) for v in self._sorted))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}, edges={self.edges})"


def make_graph(
    nodes: Iterable[int],
    edges: Iterable[tuple[int, int]],
    *,
    id_bound: int | None = None,
    id_exponent: int = DEFAULT_ID_EXPONENT,
    check_connected: bool = True,
) -> Graph:
    """Build and validate a graph from a node list and an edge list."""
    node_list = list(nodes)
    adj: dict[int, set] = {}
    for v in node_list:
        if not isinstance(v, int) or isinstance(v, bool):
            raise GraphError(f"node identifier {v!r} is not an integer")
        if v in adj:
            raise GraphError(f"duplicate node identifier {v}")
        adj[v] = set()
    for u, v in edges:
        if u not in adj or v not in adj:
            raise UnknownNodeError(f"edge {u}-{v} uses an undeclared node")
        if u == v:
            raise SelfLoopError(f"self-loop on node {u}")
        if v in adj[u]:
            raise DuplicateEdgeError(f"duplicate edge {u}-{v}")
        adj[u].add(v)
        adj[v].add(u)
    if id_bound is None:
        id_bound = default_id_bound(len(adj), id_exponent)
    g = Graph({v: frozenset(s) for v, s in adj.items()}, id_bound)
    validate(g, check_connected=check_connected)
    return g


def validate(g: Graph, *, check_connected: bool = True) -> None:
    """Raise a :class:`GraphError` subclass if ``g`` breaks a graph invariant."""
    if not g.adj:
        raise GraphError("graph is empty")
    for v, nbrs in g.adj.items():
        if v < 1 or v > g.id_bound:
            raise IdRangeError(f"identifier {v} outside [1, {g.id_bound}]")
        if v in nbrs:
            raise SelfLoopError(f"self-loop on node {v}")
        for w in nbrs:
            if v not in g.adj.get(w, ()):
                raise GraphError(f"asymmetric adjacency between {v} and {w}")
    if check_connected and not g.is_connected():
        raise DisconnectedGraphError("graph is not connected")


def load_graph(text: str, *, id_exponent: int = DEFAULT_ID_EXPONENT) -> Graph:
    """Parse the edge-list format.

    ::

        # comment
        p <n> <m>
        v <id>        (n lines)
        e <id> <id>   (m lines)
    """
    header = None
    nodes: list[int] = []
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag = parts[0]
        try:
            args = [int(x) for x in parts[1:]]
        except ValueError:
            raise ParseError(f"non-integer field in {raw.strip()!r}", lineno) from None
        if tag == "p":
            if header is not None:
                raise ParseError("repeated header", lineno)
            if len(args) != 2 or min(args) < 0:
                raise ParseError("header must be 'p <n> <m>'", lineno)
            header = tuple(args)
        elif header is None:
            raise ParseError("missing 'p <n> <m>' header before data", lineno)
        elif tag == "v":
            if len(args) != 1:
                raise ParseError("node line must be 'v <id>'", lineno)
            nodes.append(args[0])
        elif tag == "e":
            if len(args) != 2:
                raise ParseError("edge line must be 'e <id> <id>'", lineno)
            edges.append((args[0], args[1]))
        else:
            raise ParseError(f"unknown line tag {tag!r}", lineno)
    if header is None:
        raise ParseError("missing 'p <n> <m>' header")
    if len(nodes) != header[0]:
        raise ParseError(f"header declares {header[0]} nodes, found {len(nodes)}")
    if len(edges) != header[1]:
        raise ParseError(f"header declares {header[1]} edges, found {len(edges)}")
    return make_graph(nodes, edges, id_exponent=id_exponent)


def save_graph(g: Graph) -> str:
    lines = [f"p {g.n} {g.m}"]
    lines += [f"v {v}" for v in g.nodes]
    lines += [f"e {u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    """Subgraph induced by ``s``; keeps ``g.id_bound`` and may be disconnected."""
    keep = set(s)
    unknown = keep - set(g.adj)
    if unknown:
        raise UnknownNodeError(f"unknown nodes {sorted(unknown)}")
    return Graph({v: g.adj[v] & keep for v in keep}, g.id_bound)


def relabel(g: Graph, mapping: Mapping[int, int], *, id_bound: int | None = None) -> Graph:
    """Rename identifiers through an injective ``mapping``."""
    if len(set(mapping[v] for v in g.nodes)) != g.n:
        raise GraphError("relabelling is not injective")
    adj = {mapping[v]: frozenset(mapping[w] for w in g.adj[v]) for v in g.nodes}
    return Graph(adj, id_bound if id_bound is not None else g.id_bound)


def _distinct_ids(rng: random.Random, n: int, id_bound: int) -> list[int]:
    return rng.sample(range(1, id_bound + 1), n)


def random_connected_graph(
    n: int, seed: int, *, p: float = 0.25, id_exponent: int = DEFAULT_ID_EXPONENT
) -> Graph:
    """Random spanning tree plus independent extra edges with probability ``p``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(seed)
    id_bound = default_id_bound(n, id_exponent)
    ids = _distinct_ids(rng, n, id_bound)
    edges = set()
    for i in range(1, n):
        j = rng.randrange(i)
        edges.add((min(i, j), max(i, j)))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < p:
                edges.add((i, j))
    return make_graph(ids, [(ids[i], ids[j]) for i, j in sorted(edges)], id_bound=id_bound)


def random_bounded_treedepth_graph(
    t: int,
    n: int,
    seed: int,
    *,
    p: float = 0.3,
    max_branching: int | None = None,
    id_exponent: int = DEFAULT_ID_EXPONENT,
):
    """Random graph together with a model of height at most ``t``.

    A random rooted tree of height <= t is drawn first (the first vertex
    after the root always extends a deepest chain, so the height is
    ``min(t, n - 1)``).  Each non-root ``v`` then gets one edge between a
    random vertex of its subtree and its parent, which makes the model
    coherent and the graph connected; every other ancestor/descendant pair
    becomes an edge with probability ``p``.

    Returns ``(graph, model)``.
    """
    from .treedepth import Model

    if n < 1 or t < 0:
        raise ValueError("need n >= 1 and t >= 0")
    if t == 0 and n > 1:
        raise ValueError("a model of height 0 has a single vertex")
    if max_branching is not None:
        capacity = sum(max_branching**d for d in range(t + 1))
        if n > capacity:
            raise ValueError(f"n={n} exceeds capacity {capacity} of height {t} trees")
    rng = random.Random(seed)
    id_bound = default_id_bound(n, id_exponent)
    ids = _distinct_ids(rng, n, id_bound)

    parent = {0: 0}
    depth = {0: 0}
    children: dict[int, list[int]] = {0: []}
    chain_len = min(t, n - 1)
    for i in range(1, n):
        if i <= chain_len:
            par = i - 1
        else:
            open_ = [
                u for u in range(i)
                if depth[u] < t and (max_branching is None or len(children[u]) < max_branching)
            ]
            par = rng.choice(open_)
        parent[i] = par
        depth[i] = depth[par] + 1
        children[i] = []
        children[par].append(i)

    def subtree(v):
        out, stack = [], [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(children[u])
        return out

    edges = set()
    for v in range(1, n):
        x = rng.choice(subtree(v))
        edges.add(frozenset((x, parent[v])))
    for v in range(1, n):
        a = parent[v]
        while True:
            e = frozenset((v, a))
            if e not in edges and rng.random() < p:
                edges.add(e)
            if a == 0:
                break
            a = parent[a]

    g = make_graph(ids, [tuple(ids[i] for i in sorted(e)) for e in edges], id_bound=id_bound)
    model = Model(
        root=ids[0],
        parent={ids[i]: ids[parent[i]] for i in range(n)},
        depth={ids[i]: depth[i] for i in range(n)},
    )
    return g, model


def _from_pairs(n: int, pairs, id_exponent=DEFAULT_ID_EXPONENT) -> Graph:
    return make_graph(range(1, n + 1), pairs, id_exponent=id_exponent)


def path_graph(n: int) -> Graph:
    """Path 1-2-...-n."""
    return _from_pairs(n, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int) -> Graph:
    return _from_pairs(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)])


def complete_graph(n: int) -> Graph:
    return _from_pairs(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with centre 1."""
    return _from_pairs(leaves + 1, [(1, i) for i in range(2, leaves + 2)])


def to_networkx(g: Graph):
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(g.nodes)
    h.add_edges_from(g.edges)
    return h


def from_networkx(h, *, offset: int = 1, id_exponent: int = DEFAULT_ID_EXPONENT) -> Graph:
    """Convert a networkx graph, renumbering nodes ``offset, offset+1, ...`` in sorted order."""
    order = {v: i + offset for i, v in enumerate(sorted(h.nodes))}
    return make_graph(order.values(), [(order[u], order[v]) for u, v in h.edges], id_exponent=id_exponent)
