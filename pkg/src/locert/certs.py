"""Certificates with exact bit accounting, radius-1 views, the verification
runner and the soundness fuzzer.

A :class:`Certificate` is an ordered tuple of :class:`Field` s.  A field value
is an integer, a tuple of integers, a nested certificate or a tuple of
certificates.  Integers occupy ``width`` bits; sequences are prefixed by their
length on ``len_width`` bits.  ``bit_size`` is exactly ``len(to_bits())``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, Mapping

from .graph import Graph

__all__ = [
    "Field", "Certificate", "CertMap", "LocalView", "Verdict", "Scheme",
    "CannotCertify", "MissingCertificateError",
    "id_width", "count_width", "depth_width", "index_width",
    "local_views", "run_verification", "is_accepted", "cert_size_bits",
    "mutate_certs", "adversarial_prover", "fuzz_scheme", "FuzzReport",
    "dump_certs", "certs_to_json", "certs_from_json",
]


def id_width(id_bound: int) -> int:
    return id_bound.bit_length()


def count_width(n: int) -> int:
    return n.bit_length()


def depth_width(t: int) -> int:
    return (t + 1).bit_length()


def index_width(size: int) -> int:
    return size.bit_length()


@dataclass(frozen=True)
class Field:
    name: str
    value: object
    width: int = 0
    len_width: int = 0

    @property
    def bits(self) -> int:
        v = self.value
        if isinstance(v, Certificate):
            return v.bit_size
        if isinstance(v, tuple):
            if v and isinstance(v[0], Certificate):
                return self.len_width + sum(c.bit_size for c in v)
            return self.len_width + len(v) * self.width
        return self.width


@dataclass(frozen=True)
class Certificate:
    fields: tuple = ()

    def __getitem__(self, name):
        for f in self.fields:
            if f.name == name:
                return f.value
        raise KeyError(name)

    def get(self, name, default=None):
        for f in self.fields:
            if f.name == name:
                return f.value
        return default

    def __contains__(self, name):
        return any(f.name == name for f in self.fields)

    def names(self):
        return [f.name for f in self.fields]

    def field(self, name) -> Field:
        for f in self.fields:
            if f.name == name:
                return f
        raise KeyError(name)

    @property
    def bit_size(self) -> int:
        return sum(f.bits for f in self.fields)

    def to_bits(self) -> str:
        """Canonical serialisation; raises ``ValueError`` if a value overflows its width."""
        out = []
        for f in self.fields:
            v = f.value
            if isinstance(v, Certificate):
                out.append(v.to_bits())
            elif isinstance(v, tuple):
                out.append(_uint(len(v), f.len_width))
                for x in v:
                    out.append(x.to_bits() if isinstance(x, Certificate) else _uint(x, f.width))
            else:
                out.append(_uint(v, f.width))
        return "".join(out)

    def replace(self, name, value) -> "Certificate":
        return Certificate(tuple(
            Field(f.name, value, f.width, f.len_width) if f.name == name else f
            for f in self.fields
        ))


def _uint(value: int, width: int) -> str:
    if not isinstance(value, int) or value < 0 or value >= (1 << width):
        raise ValueError(f"value {value!r} does not fit in {width} bits")
    return format(value, f"0{width}b") if width else ""


def make_cert(*fields: Field) -> Certificate:
    return Certificate(tuple(fields))


CertMap = Dict[int, Certificate]


class CannotCertify(Exception):
    """The prover was asked to certify a no-instance (or lacks a witness)."""


class MissingCertificateError(KeyError):
    pass


@dataclass(frozen=True)
class LocalView:
    """Everything a node may read: its id, its certificate, and its neighbours' ids and certificates."""

    self_id: int
    cert: Certificate
    neighbors: tuple  # ((id, Certificate), ...) sorted by id

    @property
    def degree(self) -> int:
        return len(self.neighbors)

    @property
    def neighbor_ids(self) -> frozenset:
        return frozenset(u for u, _ in self.neighbors)

    def certs_of_neighbors(self) -> dict:
        return dict(self.neighbors)


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    rejecting: frozenset = frozenset()


class Scheme:
    """A prover plus a local verifier.

    ``verify`` must depend on the :class:`LocalView` and the scheme's public
    parameters only.
    """

    name = "scheme"

    def prove(self, g: Graph, **kwargs) -> CertMap:
        raise NotImplementedError

    def verify(self, view: LocalView) -> bool:
        raise NotImplementedError

    def adversaries(self, g: Graph) -> Mapping[str, Callable[[], Iterable[CertMap]]]:
        """Named structured cheating strategies for a no-instance ``g``."""
        return {}

    def params(self) -> dict:
        return {}


# Malformed certificates (missing fields, wrong shapes) make a verifier raise;
# the node then rejects.
_MALFORMED = (LookupError, TypeError, ValueError, ZeroDivisionError, AttributeError)


def local_views(g: Graph, certs: Mapping[int, Certificate]) -> Iterator[LocalView]:
    for v in g.nodes:
        yield _view(g, certs, v)


def _view(g, certs, v):
    return LocalView(v, certs[v], tuple((u, certs[u]) for u in sorted(g.adj[v])))


def _check_domain(g, certs):
    missing = [v for v in g.nodes if v not in certs]
    if missing:
        raise MissingCertificateError(f"no certificate for nodes {missing}")


def _node_accepts(scheme, view) -> bool:
    try:
        return bool(scheme.verify(view))
    except _MALFORMED:
        return False


def run_verification(g: Graph, certs: Mapping[int, Certificate], scheme: Scheme) -> Verdict:
    """Run the local verifier at every node and collect the rejecting ones."""
    _check_domain(g, certs)
    rejecting = frozenset(
        v for v in g.nodes if not _node_accepts(scheme, _view(g, certs, v))
    )
    return Verdict(not rejecting, rejecting)


def is_accepted(g: Graph, certs, scheme: Scheme, order: Iterable[int] | None = None) -> bool:
    """Like :func:`run_verification` but stops at the first rejecting node."""
    _check_domain(g, certs)
    seen = set()
    for v in list(order or ()) + list(g.nodes):
        if v in seen:
            continue
        seen.add(v)
        if not _node_accepts(scheme, _view(g, certs, v)):
            return False
    return True


def cert_size_bits(certs: Mapping[int, Certificate]):
    """``(max_bits, total_bits, {node: bits})``."""
    per = {v: c.bit_size for v, c in certs.items()}
    return (max(per.values(), default=0), sum(per.values()), per)


# -- mutation fuzzer ---------------------------------------------------------

def _walk(value, path=()):
    """Yield ``(path, width)`` for every integer atom below a certificate."""
    if isinstance(value, Certificate):
        for i, f in enumerate(value.fields):
            v = f.value
            if isinstance(v, tuple):
                for j, x in enumerate(v):
                    if isinstance(x, Certificate):
                        yield from _walk(x, path + (i, j))
                    else:
                        yield path + (i, j), f.width
            elif isinstance(v, Certificate):
                yield from _walk(v, path + (i,))
            else:
                yield path + (i,), f.width


def _sequences(value, path=()):
    """Yield paths of every tuple-valued field."""
    if isinstance(value, Certificate):
        for i, f in enumerate(value.fields):
            v = f.value
            if isinstance(v, tuple):
                yield path + (i,)
                for j, x in enumerate(v):
                    if isinstance(x, Certificate):
                        yield from _sequences(x, path + (i, j))
            elif isinstance(v, Certificate):
                yield from _sequences(v, path + (i,))


def _get(value, path):
    for step in path:
        value = value.fields[step].value if isinstance(value, Certificate) else value[step]
    return value


def _set(value, path, new):
    if not path:
        return new
    step, rest = path[0], path[1:]
    if isinstance(value, Certificate):
        f = value.fields[step]
        fields = list(value.fields)
        fields[step] = Field(f.name, _set(f.value, rest, new), f.width, f.len_width)
        return Certificate(tuple(fields))
    items = list(value)
    items[step] = _set(items[step], rest, new)
    return tuple(items)


_OPERATORS = ("bitflip", "overwrite", "incdec", "swap", "copy", "resize")


def _mutate_once(certs: dict, rng: random.Random, nodes: list) -> dict:
    op = rng.choice(_OPERATORS)
    if op in ("swap", "copy"):
        if len(nodes) < 2:
            op = "bitflip"
        else:
            a, b = rng.sample(nodes, 2)
            out = dict(certs)
            if op == "swap":
                out[a], out[b] = certs[b], certs[a]
            else:
                out[b] = certs[a]
            return out
    v = rng.choice(nodes)
    cert = certs[v]
    if op == "resize":
        seqs = list(_sequences(cert))
        if seqs:
            path = rng.choice(seqs)
            seq = _get(cert, path)
            if seq and (rng.random() < 0.5 or len(seq) < 2):
                i = rng.randrange(len(seq))
                new = seq[:i] + seq[i + 1:] if rng.random() < 0.5 else seq[:i] + (seq[i],) + seq[i:]
            elif seq:
                i, j = sorted(rng.sample(range(len(seq)), 2))
                new = seq[:i] + (seq[j],) + seq[i + 1:j] + (seq[i],) + seq[j + 1:]
            else:
                new = seq
            out = dict(certs)
            out[v] = _set(cert, path, new)
            return out
        op = "bitflip"
    atoms = [(p, w) for p, w in _walk(cert) if w > 0]
    if not atoms:
        return dict(certs)
    path, width = rng.choice(atoms)
    old = _get(cert, path)
    if op == "bitflip":
        new = old ^ (1 << rng.randrange(width))
    elif op == "overwrite":
        new = rng.randrange(1 << width)
    else:
        new = old + rng.choice((-1, 1))
        if not 0 <= new < (1 << width):
            new = old - (new - old)
        new = min(max(new, 0), (1 << width) - 1)
    out = dict(certs)
    out[v] = _set(cert, path, new)
    return out


def mutate_certs(
    certs: Mapping[int, Certificate], seed, budget: int, *, max_ops: int = 3
) -> Iterator[CertMap]:
    """Deterministic stream of ``budget`` mutated copies of ``certs``.

    Each member applies between one and ``max_ops`` random operators (bit
    flip, overwrite, increment/decrement, swap, copy, sequence resize) and
    always differs from the input.
    """
    rng = random.Random(seed)
    base = dict(certs)
    nodes = sorted(base)
    for _ in range(budget):
        for _attempt in range(100):
            cur = base
            for _ in range(rng.randint(1, max_ops)):
                cur = _mutate_once(cur, rng, nodes)
            if cur != base:
                yield cur
                break


def adversarial_prover(g: Graph, scheme: Scheme, strategies=None) -> Iterator[CertMap]:
    """Stream of structured cheating attempts from ``scheme.adversaries(g)``.

    ``strategies`` selects names (default: all, in declaration order).
    """
    table = scheme.adversaries(g)
    names = list(table) if strategies is None else list(strategies)
    for name in names:
        if name not in table:
            raise KeyError(f"scheme {scheme.name!r} has no strategy {name!r}")
        yield from table[name]()


@dataclass
class FuzzReport:
    attempts: int = 0
    escapes: list = field(default_factory=list)

    @property
    def escaped(self) -> int:
        return len(self.escapes)


def fuzz_scheme(g: Graph, scheme: Scheme, *, seed=0, budget: int = 10_000) -> FuzzReport:
    """Run every adversarial strategy and ``budget`` mutations of them; count accepted assignments."""
    report = FuzzReport()
    bases = list(adversarial_prover(g, scheme))
    for c in bases:
        report.attempts += 1
        if is_accepted(g, c, scheme):
            report.escapes.append(c)
    if not bases:
        return report
    rng = random.Random(seed)
    per = [budget // len(bases) + (1 if i < budget % len(bases) else 0) for i in range(len(bases))]
    for base, count in zip(bases, per):
        hint = sorted(run_verification(g, base, scheme).rejecting)
        for c in mutate_certs(base, rng.randrange(1 << 30), count):
            report.attempts += 1
            if is_accepted(g, c, scheme, order=hint):
                report.escapes.append(c)
    return report


# -- text and JSON dumps ------------------------------------------------------

def _show(value) -> str:
    if isinstance(value, Certificate):
        return "{" + ", ".join(f"{f.name}={_show(f.value)}({f.bits}b)" for f in value.fields) + "}"
    if isinstance(value, tuple):
        return "[" + ",".join(_show(x) for x in value) + "]"
    return str(value)


def dump_certs(certs: Mapping[int, Certificate]) -> str:
    """One line per node: ``<id>: <field>=<value>(<bits>b), ...``."""
    lines = []
    for v in sorted(certs):
        c = certs[v]
        lines.append(f"{v}: " + ", ".join(f"{f.name}={_show(f.value)}({f.bits}b)" for f in c.fields))
    return "\n".join(lines) + "\n"


def _enc(value):
    if isinstance(value, Certificate):
        return {"cert": [[f.name, _enc(f.value), f.width, f.len_width] for f in value.fields]}
    if isinstance(value, tuple):
        return [_enc(x) for x in value]
    return value


def _dec(obj):
    if isinstance(obj, dict):
        return Certificate(tuple(Field(n, _dec(v), w, lw) for n, v, w, lw in obj["cert"]))
    if isinstance(obj, list):
        return tuple(_dec(x) for x in obj)
    return obj


def certs_to_json(certs: Mapping[int, Certificate], **meta) -> str:
    return json.dumps({"meta": meta, "certs": {str(v): _enc(certs[v]) for v in sorted(certs)}}, indent=1)


def certs_from_json(text: str) -> CertMap:
    data = json.loads(text)
    return {int(v): _dec(obj) for v, obj in data["certs"].items()}
