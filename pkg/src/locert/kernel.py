"""Types, valid pruning and the k-reduced kernel of a graph with a model.

A vertex's *type* is its subtree in the model with every node labelled by
its ancestor vector.  Types are encoded canonically (AHU style): a node's
code is its ancestor-vector bits followed by the sorted codes of its
children, so two vertices share a code exactly when their labelled subtrees
are isomorphic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .graph import Graph, induced_subgraph
from .treedepth import Model, check_model_structure

__all__ = [
    "ancestor_vector",
    "compute_type",
    "type_code",
    "parse_type_code",
    "Reduction",
    "k_reduce",
    "type_bound",
    "end_type_consistency_check",
    "exactly_k_check",
    "distinct_end_types_by_depth",
    "dump_reduction",
]


def ancestor_vector(g: Graph, m: Model, v) -> tuple[int, ...]:
    """Bit ``j`` is 1 iff ``v`` is adjacent to its ancestor at depth ``j``."""
    anc = m.ancestors(v)[1:][::-1]  # anc[j] sits at depth j
    nb = g.adj[v]
    return tuple(int(a in nb) for a in anc)


def type_code(vector, child_codes) -> str:
    bits = "".join(map(str, vector))
    return "(" + bits + ":" + ",".join(sorted(child_codes)) + ")"


def parse_type_code(code: str):
    """Inverse of :func:`type_code`: ``(vector, [child codes])``."""
    if not (code.startswith("(") and code.endswith(")")):
        raise ValueError(f"malformed type code {code!r}")
    inner = code[1:-1]
    bits, _, rest = inner.partition(":")
    kids, level, start = [], 0, 0
    for i, ch in enumerate(rest):
        if ch == "(":
            if level == 0:
                start = i
            level += 1
        elif ch == ")":
            level -= 1
            if level == 0:
                kids.append(rest[start:i + 1])
    return tuple(int(b) for b in bits), kids


def compute_type(g: Graph, m: Model, v) -> str:
    """Canonical code of the labelled subtree of ``v`` in ``m``."""
    return type_code(ancestor_vector(g, m, v), [compute_type(g, m, c) for c in m.children[v]])


@dataclass(frozen=True)
class Reduction:
    """Outcome of :func:`k_reduce`.

    ``end_type`` covers every vertex of the original graph.  ``type_table`` is
    the sorted list of distinct end types; indices into it are what the
    certification schemes transmit.
    """

    graph: Graph
    model: Model
    k: int
    kernel: Graph
    pruned_roots: frozenset
    deleted: frozenset
    end_type: dict = field(hash=False)
    prune_log: tuple = ()

    @property
    def type_table(self) -> list[str]:
        return sorted(set(self.end_type.values()), key=lambda c: (c.count("("), c))

    @property
    def type_index(self) -> dict:
        return {c: i for i, c in enumerate(self.type_table)}

    @property
    def survivors(self) -> list:
        return list(self.kernel.nodes)


def k_reduce(g: Graph, m: Model, k: int) -> Reduction:
    """Apply valid prunings deepest-first until no vertex has more than ``k`` same-type children.

    Processing is level by level from the deepest parents upward: at that
    point the types of all children are final.  Within a level parents go in
    increasing identifier order; for each over-full type group the
    largest-identifier children are pruned one at a time until ``k`` remain.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    check_model_structure(g, m)
    levels = m.by_depth()
    present_children = {v: list(m.children[v]) for v in m.parent}
    vec = {v: ancestor_vector(g, m, v) for v in m.parent}
    cur_type: dict = {}
    end_type: dict = {}
    deleted: set = set()
    pruned: list = []
    log = []

    def settle(v):
        cur_type[v] = type_code(vec[v], [cur_type[c] for c in present_children[v]])

    for v in levels[-1]:
        settle(v)
    for d in range(len(levels) - 2, -1, -1):
        for u in levels[d]:
            groups: dict[str, list] = {}
            for c in present_children[u]:
                groups.setdefault(cur_type[c], []).append(c)
            for code in sorted(groups):
                members = sorted(groups[code])
                while len(members) > k:
                    victim = members.pop()
                    for x in m.subtree(victim):
                        if x not in deleted:
                            deleted.add(x)
                            end_type[x] = cur_type[x]
                    present_children[u].remove(victim)
                    pruned.append(victim)
                    log.append((victim, d + 1))
            settle(u)
    for v in m.parent:
        if v not in deleted:
            end_type[v] = cur_type[v]
    kernel = induced_subgraph(g, set(g.nodes) - deleted)
    return Reduction(
        graph=g, model=m, k=k, kernel=kernel,
        pruned_roots=frozenset(pruned), deleted=frozenset(deleted),
        end_type=end_type, prune_log=tuple(log),
    )


def type_bound(k: int, t: int, d: int, *, cap: int | None = None) -> int:
    """Recursive bound on the number of end types at depth ``d``.

    ``f_t = 2**t`` and ``f_d = 2**d * (k+1)**f_{d+1}``.  The values explode;
    pass ``cap`` to get ``min(f_d, cap)`` without materialising huge powers.
    Without a cap an :class:`OverflowError` is raised once an exponent
    exceeds ten million.
    """
    if not 0 <= d <= t:
        raise ValueError("need 0 <= d <= t")
    value = 2**t
    for level in range(t - 1, d - 1, -1):
        value = _capped_mul_pow(2**level, k + 1, value, cap)
    return value if cap is None else min(value, cap)


def _capped_mul_pow(factor, base, exponent, cap):
    if cap is None:
        if exponent > 10_000_000:
            raise OverflowError("type bound too large to materialise; pass cap=")
        return factor * base**exponent
    if base == 1:
        return min(factor, cap)
    # base >= 2: base**exponent >= cap as soon as exponent >= cap.bit_length()
    if exponent >= cap.bit_length():
        return cap
    return min(factor * base**exponent, cap)


def _children_multiset(r: Reduction, v) -> Counter:
    return Counter(r.end_type[c] for c in r.model.children[v] if c not in r.pruned_roots)


def end_type_consistency_check(r: Reduction) -> bool:
    """Every end type is rebuilt from the ancestor vector and the unpruned children's end types."""
    g, m = r.graph, r.model
    for v in m.parent:
        kids = _children_multiset(r, v)
        if any(c > r.k for c in kids.values()):
            return False
        if r.end_type.get(v) != type_code(ancestor_vector(g, m, v), list(kids.elements())):
            return False
    return True


def exactly_k_check(r: Reduction) -> bool:
    """Each pruned root leaves exactly ``k`` unpruned siblings with its end type."""
    for u in r.pruned_roots:
        v = r.model.parent[u]
        if _children_multiset(r, v)[r.end_type[u]] != r.k:
            return False
    return True


def distinct_end_types_by_depth(r: Reduction, *, kernel_only: bool = True) -> dict:
    out: dict[int, set] = {}
    for v, code in r.end_type.items():
        if kernel_only and v in r.deleted:
            continue
        out.setdefault(r.model.depth[v], set()).add(code)
    return {d: len(s) for d, s in sorted(out.items())}


def dump_reduction(r: Reduction) -> str:
    """Per-vertex lines ``<id> <depth> <pruned> <deleted> <type-index>`` then the type table."""
    idx = r.type_index
    lines = [f"# k={r.k} kernel_nodes={r.kernel.n} pruned={len(r.pruned_roots)}"]
    for v in sorted(r.model.parent):
        lines.append(
            f"{v} {r.model.depth[v]} {int(v in r.pruned_roots)} {int(v in r.deleted)} {idx[r.end_type[v]]}"
        )
    lines.append("types")
    lines += [f"{i} {code}" for i, code in enumerate(r.type_table)]
    return "\n".join(lines) + "\n"
