"""Certifying a k-reduction on top of the treedepth certificate, and FO sentences through the kernel.

Every vertex carries, aligned with its ancestor list, the pruned flags and
end-type indices of itself and its ancestors.  Indices point into a type
table shared by all vertices; entry ``i`` is ``(vec, kids, counts)``: the
ancestor vector and the multiset of unpruned children's end types.
"""

from __future__ import annotations

from collections import Counter

from ..certs import (
    CannotCertify, Certificate, Field, Scheme, count_width, depth_width, index_width,
)
from ..kernel import Reduction, k_reduce, parse_type_code
from ..logic import Formula, evaluate, evaluate_with, quantifier_depth
from ..treedepth import Model
from .treedepth_scheme import check_treedepth, find_model, treedepth_adversaries, treedepth_certs

__all__ = [
    "KernelScheme",
    "kernel_scheme",
    "FOTreedepthScheme",
    "fo_treedepth_scheme",
    "kernel_certs",
    "KERNEL_FIELDS",
]

# fields whose size depends on (k, t) and the kernel but not on identifiers
KERNEL_FIELDS = ("pruned", "etype", "table", "kidx", "kern")


def _table(r: Reduction, dw: int):
    codes = r.type_table
    idx = {c: i for i, c in enumerate(codes)}
    iw, cw = index_width(len(codes)), r.k.bit_length()
    entries = []
    for code in codes:
        vec, kids = parse_type_code(code)
        cnt = Counter(idx[c] for c in kids)
        order = sorted(cnt)
        entries.append(Certificate((
            Field("vec", vec, 1, dw),
            Field("kids", tuple(order), iw, iw),
            Field("counts", tuple(cnt[i] for i in order), cw, iw),
        )))
    return tuple(entries), idx, iw


def kernel_certs(g, m: Model, t: int, r: Reduction) -> dict:
    dw = depth_width(t)
    base = treedepth_certs(g, m, t)
    table, idx, iw = _table(r, dw)
    out = {}
    for v, c in base.items():
        anc = c["anc"]
        out[v] = Certificate(c.fields + (
            Field("pruned", tuple(int(a in r.pruned_roots) for a in anc), 1, dw),
            Field("etype", tuple(idx[r.end_type[a]] for a in anc), iw, dw),
            Field("table", table, 0, iw),
        ))
    return out


def _agree_on_suffix(a, b) -> bool:
    s = min(len(a), len(b))
    return tuple(a[len(a) - s:]) == tuple(b[len(b) - s:])


def _child_reports(L, nbrs, names):
    """Group deeper neighbours by the child of the current vertex whose subtree they lie in.

    Returns ``{child: report}`` where a report is the tuple of the named list
    entries at the child's position, or ``None`` if two neighbours disagree.
    """
    d = len(L) - 1
    out = {}
    for cu in nbrs.values():
        Lu = cu["anc"]
        if len(Lu) < d + 2:
            continue
        pos = len(Lu) - (d + 2)
        rep = tuple(cu[n][pos] for n in names)
        child = Lu[pos]
        if out.setdefault(child, rep) != rep:
            return None
    return out


def check_kernel(view, k: int, t: int) -> bool:
    me, c = view.self_id, view.cert
    nbrs = dict(view.neighbors)
    if not check_treedepth(view, t):
        return False
    L, pruned, etype, table = tuple(c["anc"]), tuple(c["pruned"]), tuple(c["etype"]), c["table"]
    d = len(L) - 1
    if len(pruned) != d + 1 or len(etype) != d + 1:
        return False
    if any(p not in (0, 1) for p in pruned) or any(not 0 <= e < len(table) for e in etype):
        return False
    for cu in nbrs.values():
        if cu["table"] != table:
            return False
        if not (_agree_on_suffix(pruned, cu["pruned"]) and _agree_on_suffix(etype, cu["etype"])):
            return False
    # the table is well formed
    rows = [(tuple(e["vec"]), tuple(e["kids"]), tuple(e["counts"])) for e in table]
    if len(set(rows)) != len(rows):
        return False
    for vec, kids, counts in rows:
        if len(kids) != len(counts) or list(kids) != sorted(set(kids)):
            return False
        if any(not 1 <= x <= k for x in counts) or any(b not in (0, 1) for b in vec):
            return False
        if any(not 0 <= i < len(rows) or len(rows[i][0]) != len(vec) + 1 for i in kids):
            return False
    vec, kids, counts = rows[etype[0]]
    # ancestor at depth j is L[d - j]
    if vec != tuple(int(L[d - j] in view.neighbor_ids) for j in range(d)):
        return False
    reports = _child_reports(L, nbrs, ("etype", "pruned"))
    if reports is None:
        return False
    unpruned = Counter(e for e, p in reports.values() if not p)
    if any(x > k for x in unpruned.values()):
        return False
    if any(p and unpruned[e] != k for e, p in reports.values()):
        return False
    if dict(unpruned) != dict(zip(kids, counts)):
        return False
    if d == 0 and pruned[0]:
        return False
    return True


class KernelScheme(Scheme):
    """Treedepth at most ``t`` together with a certified k-reduction."""

    name = "kernel"

    def __init__(self, k: int, t: int):
        if k < 1:
            raise ValueError("k must be at least 1")
        self.k, self.t = k, t

    def params(self):
        return {"k": self.k, "t": self.t}

    def reduction(self, g, model=None):
        m = find_model(g, self.t, model)
        return m, k_reduce(g, m, self.k)

    def prove(self, g, model: Model | None = None):
        m, r = self.reduction(g, model)
        return kernel_certs(g, m, self.t, r)

    def verify(self, view):
        return check_kernel(view, self.k, self.t)

    def _build(self, g, m, k=None):
        return kernel_certs(g, m, self.t, k_reduce(g, m, k or self.k))

    def adversaries(self, g):
        table = dict(treedepth_adversaries(g, self.t, lambda m: self._build(g, m)))
        table.update(_kernel_attacks(self, g))
        return table


def _honest_or_none(scheme, g):
    try:
        return scheme.reduction(g)
    except CannotCertify:
        return None


def _kernel_attacks(scheme, g) -> dict:
    """Attacks on the reduction part, built on an honest model when one exists."""

    def corrupt_etype():
        got = _honest_or_none(scheme, g)
        if got is None:
            return
        base = scheme._build(g, got[0])
        size = len(next(iter(base.values()))["table"])
        for v in g.nodes[:6]:
            c = base[v]
            e = c["etype"]
            bad = ((e[0] + 1) % size,) + tuple(e[1:])
            if bad != e:
                yield {**base, v: c.replace("etype", bad)}

    def unprune_all():
        got = _honest_or_none(scheme, g)
        if got is None:
            return
        base = scheme._build(g, got[0])
        yield {v: c.replace("pruned", (0,) * len(c["pruned"])) for v, c in base.items()}

    def over_prune():
        got = _honest_or_none(scheme, g)
        if got is None:
            return
        for k in range(1, scheme.k):
            yield scheme._build(g, got[0], k)

    return {"corrupt-etype": corrupt_etype, "unprune-all": unprune_all, "over-prune": over_prune}


def kernel_scheme(k: int, t: int) -> KernelScheme:
    return KernelScheme(k, t)


# -- FO sentences through the kernel ----------------------------------------

def _description(r: Reduction, order):
    """Kernel map: survivors in ``order`` with their adjacency, parent, end type and depth."""
    m, h = r.model, len(order)
    pos = {v: i for i, v in enumerate(order)}
    tidx = r.type_index
    hw = h.bit_length()
    adj = tuple(int(order[j] in r.graph.adj[order[i]]) for i in range(h) for j in range(i + 1, h))
    kpar = tuple(0 if v == m.root else pos[m.parent[v]] + 1 for v in order)
    return Certificate((
        Field("h", h, hw),
        Field("adj", adj, 1, 2 * hw),
        Field("kpar", kpar, hw, hw),
        Field("ktype", tuple(tidx[r.end_type[v]] for v in order), index_width(len(tidx)), hw),
        Field("kdepth", tuple(m.depth[v] for v in order), depth_width(m.height), hw),
    )), pos


def _desc_graph(desc):
    h, bits = desc["h"], desc["adj"]
    adj = {i: set() for i in range(h)}
    p = 0
    for i in range(h):
        for j in range(i + 1, h):
            if bits[p]:
                adj[i].add(j)
                adj[j].add(i)
            p += 1
    return adj


class FOTreedepthScheme(Scheme):
    """A first-order sentence on graphs of treedepth at most ``t``.

    The kernel map is broadcast to every vertex.  Each survivor checks its row
    and its tree position against the certified reduction, so the map is the
    kernel up to renaming; every vertex then evaluates the sentence on it.
    """

    name = "fo-td"

    def __init__(self, formula: Formula, t: int):
        self.formula = formula
        self.t = t
        self.k = max(1, quantifier_depth(formula))
        self.kernel = KernelScheme(self.k, t)
        self._cache: dict = {}

    def params(self):
        return {"k": self.k, "t": self.t}

    def certs_for(self, g, m, r: Reduction, desc=None):
        order = sorted(r.survivors, key=lambda v: (m.depth[v], v))
        real, pos = _description(r, order)
        desc = real if desc is None else desc
        hw = count_width(desc["h"])
        base = kernel_certs(g, m, self.t, r)
        out = {}
        for v, c in base.items():
            kidx = tuple(0 if a in r.deleted else pos[a] + 1 for a in c["anc"])
            out[v] = Certificate(c.fields + (
                Field("kidx", kidx, hw, depth_width(self.t)),
                Field("kern", desc),
            ))
        return out

    def prove(self, g, model: Model | None = None):
        m, r = self.kernel.reduction(g, model)
        if not evaluate(g, self.formula):
            raise CannotCertify("sentence is false on this graph")
        return self.certs_for(g, m, r)

    def _holds(self, desc) -> bool:
        hit = self._cache.get(desc)
        if hit is None:
            adj = _desc_graph(desc)
            hit = self._cache[desc] = evaluate_with(sorted(adj), adj, self.formula, {})
        return hit

    def verify(self, view):
        if not check_kernel(view, self.k, self.t):
            return False
        c, nbrs = view.cert, dict(view.neighbors)
        desc, kidx, L = c["kern"], tuple(c["kidx"]), tuple(c["anc"])
        pruned = tuple(c["pruned"])
        d = len(L) - 1
        h = desc["h"]
        kpar, ktype, kdepth = tuple(desc["kpar"]), tuple(desc["ktype"]), tuple(desc["kdepth"])
        if len(desc["adj"]) != h * (h - 1) // 2 or not (len(kpar) == len(ktype) == len(kdepth) == h):
            return False
        if len(kidx) != d + 1:
            return False
        for cu in nbrs.values():
            if cu["kern"] != desc or not _agree_on_suffix(kidx, cu["kidx"]):
                return False
        # the map is a rooted tree, depths going down by one along parents
        roots = [i for i in range(h) if kpar[i] == 0]
        if len(roots) != 1 or kdepth[roots[0]] != 0:
            return False
        for i in range(h):
            p = kpar[i]
            if p > h or p == i + 1 or (p and kdepth[p - 1] != kdepth[i] - 1):
                return False
        # an entry is a survivor iff nothing from it up to the root is pruned
        for j in range(d + 1):
            if (kidx[j] >= 1) != (not any(pruned[j:])):
                return False
            if kidx[j] > h:
                return False
        if not kidx[0]:
            return self._holds(desc)
        i = kidx[0] - 1
        if ktype[i] != c["etype"][0] or kdepth[i] != d:
            return False
        if kpar[i] != (kidx[1] if d else 0):
            return False
        reports = _child_reports(L, nbrs, ("kidx",))
        if reports is None:
            return False
        kids = [x for (x,) in reports.values() if x]
        if len(set(kids)) != len(kids):
            return False
        if set(kids) != {j + 1 for j in range(h) if kpar[j] == i + 1}:
            return False
        row = _desc_graph(desc)[i]
        seen = {cu["kidx"][0] - 1 for cu in nbrs.values() if cu["kidx"][0]}
        if seen != row:
            return False
        return self._holds(desc)

    def _build(self, g, m, k=None, desc=None):
        return self.certs_for(g, m, k_reduce(g, m, k or self.k), desc)

    def adversaries(self, g):
        table = dict(treedepth_adversaries(g, self.t, lambda m: self._build(g, m)))
        got = _honest_or_none(self.kernel, g)
        if got is None:
            return table
        m, r = got

        def honest_but_false():
            yield self.certs_for(g, m, r)

        def over_prune():
            for k in range(1, self.k):
                yield self._build(g, m, k)

        def fake_kernel():
            # the real map with one adjacency bit flipped, or a fixed small map
            order = sorted(r.survivors, key=lambda v: (m.depth[v], v))
            real, _ = _description(r, order)
            bits = real["adj"]
            for p in range(min(len(bits), 8)):
                forged = real.replace("adj", bits[:p] + (1 - bits[p],) + bits[p + 1:])
                yield self.certs_for(g, m, r, forged)

        def unprune_all():
            base = self.certs_for(g, m, r)
            yield {v: c.replace("pruned", (0,) * len(c["pruned"])) for v, c in base.items()}

        table.update({"honest-but-false": honest_but_false, "over-prune": over_prune,
                      "fake-kernel": fake_kernel, "unprune-all": unprune_all})
        return table


def fo_treedepth_scheme(formula: Formula, t: int) -> FOTreedepthScheme:
    return FOTreedepthScheme(formula, t)
