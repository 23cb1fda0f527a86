"""First-order sentences over graphs: AST, parser, printer, prenex form, evaluation.

Concrete syntax::

    formula := iff
    iff     := imp ('<->' imp)*
    imp     := or ('->' imp)?
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '!' unary | quant | atom | '(' formula ')' | 'true' | 'false'
    quant   := ('exists' | 'forall') VAR formula     # scope extends right
    atom    := VAR '=' VAR | VAR '~' VAR

``->`` and ``<->`` are sugar and never appear in the AST.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Mapping, Union

__all__ = [
    "Formula", "Eq", "Adj", "Not", "And", "Or", "Forall", "Exists", "Const",
    "FormulaSyntaxError", "UnboundVariableError",
    "parse_formula", "to_text", "free_variables", "quantifier_depth",
    "quantifier_count", "to_prenex", "split_prenex", "is_existential",
    "evaluate", "evaluate_with", "conj", "disj",
]


@dataclass(frozen=True)
class Eq:
    x: str
    y: str


@dataclass(frozen=True)
class Adj:
    x: str
    y: str


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Eq, Adj, Const, Not, And, Or, Forall, Exists]
_QUANT = (Forall, Exists)


def conj(*parts: Formula) -> Formula:
    if not parts:
        return Const(True)
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Formula) -> Formula:
    if not parts:
        return Const(False)
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


# -- parsing ---------------------------------------------------------------

class FormulaSyntaxError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UnboundVariableError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(<->|->|[()!&|=~])|([A-Za-z_][A-Za-z0-9_]*))")
_KEYWORDS = {"exists", "forall", "true", "false"}


def _tokenize(text):
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        tok = m.group(1) or m.group(2)
        tokens.append((tok, m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    tokens.append(("<eof>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def pos(self):
        return self.toks[self.i][1]

    def take(self, expected=None):
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, found {tok!r}", pos)
        self.i += 1
        return tok

    def var(self):
        tok, pos = self.toks[self.i]
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok) or tok in _KEYWORDS:
            raise FormulaSyntaxError(f"expected a variable, found {tok!r}", pos)
        self.i += 1
        return tok

    def formula(self):
        left = self.imp()
        while self.peek() == "<->":
            self.take()
            right = self.imp()
            left = Or(And(left, right), And(Not(left), Not(right)))
        return left

    def imp(self):
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Or(Not(left), self.imp())
        return left

    def disj(self):
        left = self.conj()
        while self.peek() == "|":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.peek() == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok in ("exists", "forall"):
            self.take()
            v = self.var()
            body = self.formula()
            return Exists(v, body) if tok == "exists" else Forall(v, body)
        if tok == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if tok in ("true", "false"):
            self.take()
            return Const(tok == "true")
        x = self.var()
        op = self.peek()
        if op not in ("=", "~"):
            raise FormulaSyntaxError(f"expected '=' or '~', found {op!r}", self.pos())
        self.take()
        y = self.var()
        return Eq(x, y) if op == "=" else Adj(x, y)


def parse_formula(text: str, *, sentence: bool = True) -> Formula:
    """Parse ``text``; with ``sentence=True`` free variables raise :class:`UnboundVariableError`."""
    p = _Parser(text)
    f = p.formula()
    if p.peek() != "<eof>":
        raise FormulaSyntaxError(f"unexpected token {p.peek()!r}", p.pos())
    if sentence:
        free = free_variables(f)
        if free:
            raise UnboundVariableError(f"free variables {sorted(free)} in sentence")
    return f


# -- printing --------------------------------------------------------------

_PREC = {Or: 1, And: 2}


def to_text(f: Formula) -> str:
    """Render ``f`` in the concrete syntax; ``parse_formula(to_text(f)) == f``."""
    return _show(f, 0)


def _show(f, ctx):
    # ctx: 0 = top/anything, 1 = operand of |, 2 = operand of &, 3 = operand of !
    if isinstance(f, Eq):
        return f"{f.x} = {f.y}"
    if isinstance(f, Adj):
        return f"{f.x} ~ {f.y}"
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        return "!" + _show(f.body, 3)
    if isinstance(f, _QUANT):
        kw = "exists" if isinstance(f, Exists) else "forall"
        s = f"{kw} {f.var} {_show(f.body, 0)}"
        return f"({s})" if ctx else s
    prec = _PREC[type(f)]
    op = " | " if isinstance(f, Or) else " & "
    # left-associative: the right operand needs one more level
    s = _show(f.left, prec) + op + _show(f.right, prec + 1)
    return f"({s})" if ctx > prec else s


# -- structure -------------------------------------------------------------

def free_variables(f: Formula) -> frozenset:
    if isinstance(f, (Eq, Adj)):
        return frozenset((f.x, f.y))
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, (And, Or)):
        return free_variables(f.left) | free_variables(f.right)
    return free_variables(f.body) - {f.var}


def quantifier_depth(f: Formula) -> int:
    """Maximum nesting of quantifiers."""
    if isinstance(f, (Eq, Adj, Const)):
        return 0
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if isinstance(f, (And, Or)):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    return 1 + quantifier_depth(f.body)


def quantifier_count(f: Formula) -> int:
    if isinstance(f, (Eq, Adj, Const)):
        return 0
    if isinstance(f, Not):
        return quantifier_count(f.body)
    if isinstance(f, (And, Or)):
        return quantifier_count(f.left) + quantifier_count(f.right)
    return 1 + quantifier_count(f.body)


def _rename_apart(f, used, env):
    """Give every quantifier a distinct variable name, keeping first occurrences."""
    if isinstance(f, Eq):
        return Eq(env.get(f.x, f.x), env.get(f.y, f.y))
    if isinstance(f, Adj):
        return Adj(env.get(f.x, f.x), env.get(f.y, f.y))
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(_rename_apart(f.body, used, env))
    if isinstance(f, (And, Or)):
        return type(f)(_rename_apart(f.left, used, env), _rename_apart(f.right, used, env))
    name = f.var
    if name in used:
        name = next(f"{f.var}_{i}" for i in itertools.count(1) if f"{f.var}_{i}" not in used)
    used.add(name)
    return type(f)(name, _rename_apart(f.body, used, {**env, f.var: name}))


def _nnf(f, negate=False):
    if isinstance(f, (Eq, Adj)):
        return Not(f) if negate else f
    if isinstance(f, Const):
        return Const(f.value != negate)
    if isinstance(f, Not):
        return _nnf(f.body, not negate)
    if isinstance(f, (And, Or)):
        flip = {And: Or, Or: And}[type(f)] if negate else type(f)
        return flip(_nnf(f.left, negate), _nnf(f.right, negate))
    flip = {Forall: Exists, Exists: Forall}[type(f)] if negate else type(f)
    return flip(f.var, _nnf(f.body, negate))


def _pull(f):
    """Return (prefix, matrix) for an NNF formula whose bound names are distinct."""
    if isinstance(f, _QUANT):
        prefix, matrix = _pull(f.body)
        return [(type(f), f.var)] + prefix, matrix
    if isinstance(f, (And, Or)):
        pl, ml = _pull(f.left)
        pr, mr = _pull(f.right)
        return pl + pr, type(f)(ml, mr)
    return [], f


def split_prenex(f: Formula):
    """Prenex decomposition: ``([(Exists|Forall, var), ...], quantifier-free matrix)``.

    Valid over non-empty domains, which is all graphs here.
    """
    g = _rename_apart(f, set(free_variables(f)), {})
    return _pull(_nnf(g))


def to_prenex(f: Formula) -> Formula:
    prefix, matrix = split_prenex(f)
    for q, v in reversed(prefix):
        matrix = q(v, matrix)
    return matrix


def is_existential(f: Formula) -> bool:
    prefix, _ = split_prenex(f)
    return all(q is Exists for q, _ in prefix)


# -- semantics -------------------------------------------------------------

def evaluate(g, f: Formula) -> bool:
    """Brute-force truth of sentence ``f`` in graph ``g`` (anything with ``nodes`` and ``adj``)."""
    return evaluate_with(g.nodes, g.adj, f, {})


def evaluate_with(domain, adj: Mapping, f: Formula, env: dict) -> bool:
    if isinstance(f, Eq):
        return env[f.x] == env[f.y]
    if isinstance(f, Adj):
        return env[f.y] in adj[env[f.x]]
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not evaluate_with(domain, adj, f.body, env)
    if isinstance(f, And):
        return evaluate_with(domain, adj, f.left, env) and evaluate_with(domain, adj, f.right, env)
    if isinstance(f, Or):
        return evaluate_with(domain, adj, f.left, env) or evaluate_with(domain, adj, f.right, env)
    saved = env.get(f.var, _MISSING)
    want = isinstance(f, Exists)
    result = not want
    for v in domain:
        env[f.var] = v
        if evaluate_with(domain, adj, f.body, env) == want:
            result = want
            break
    if saved is _MISSING:
        env.pop(f.var, None)
    else:
        env[f.var] = saved
    return result


_MISSING = object()
