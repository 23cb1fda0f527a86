"""Exhaustive Ehrenfeucht-Fraisse games on pairs of graphs.

Duplicator wins the k-round game on (G, H) exactly when G and H agree on
every first-order sentence of quantifier depth at most k.  The search below
is exact; it never guesses, and gives up with :class:`EFBudgetExceeded`
when the position budget runs out.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .logic import (
    Adj, And, Eq, Exists, Forall, Not, Or, evaluate, quantifier_depth, to_text,
)

__all__ = [
    "ef_equivalent",
    "EFBudgetExceeded",
    "random_sentence",
    "sample_sentence_check",
    "SentenceReport",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10_000_000


class EFBudgetExceeded(RuntimeError):
    """The search hit its position budget; the answer is undecided."""


def _atomic_type(x, played, adj_x):
    # 2 = same vertex, 1 = adjacent, 0 = distinct and non-adjacent
    return tuple(2 if x == p else (1 if p in adj_x else 0) for p in played)


def ef_equivalent(g, h, k: int, *, budget: int = DEFAULT_BUDGET) -> bool:
    """Decide whether Duplicator wins the ``k``-round game on ``(g, h)``.

    Positions are memoised on the *set* of played pairs: the remaining game
    does not depend on the order in which pairs were played, and repeated
    pairs add nothing.  Spoiler never replays a vertex (Duplicator would copy
    the old answer), and Duplicator only answers with vertices of the same
    atomic type relative to the played tuple, which is exactly the
    partial-isomorphism condition.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if g is h or k == 0:
        return True
    if dict(g.adj) == dict(h.adj):
        return True
    gnodes, hnodes = list(g.nodes), list(h.nodes)
    gadj, hadj = g.adj, h.adj
    memo: dict = {}
    counter = [0]

    def classes(nodes, adj, played):
        out: dict = {}
        for x in nodes:
            if x in played:
                continue
            out.setdefault(_atomic_type(x, played, adj[x]), []).append(x)
        return out

    def wins(a, b, r):
        if r == 0:
            return True
        key = (frozenset(zip(a, b)), r)
        hit = memo.get(key)
        if hit is not None:
            return hit
        counter[0] += 1
        if counter[0] > budget:
            raise EFBudgetExceeded(f"more than {budget} positions explored")
        cg = classes(gnodes, gadj, a)
        ch = classes(hnodes, hadj, b)
        if cg.keys() != ch.keys():
            result = False
        elif r == 1:
            result = True
        else:
            result = all(
                all(any(wins(a + (x,), b + (y,), r - 1) for y in ch[tau]) for x in cg[tau])
                and all(any(wins(a + (x,), b + (y,), r - 1) for x in cg[tau]) for y in ch[tau])
                for tau in cg
            )
        memo[key] = result
        return result

    return wins((), (), k)


# -- random sentences --------------------------------------------------------

def random_sentence(rng: random.Random, depth: int, *, p_atom: float = 0.35):
    """Random sentence of quantifier depth at most ``depth`` (``depth >= 1``)."""
    if depth < 1:
        raise ValueError("a sentence needs at least one quantifier")
    names = [f"x{i}" for i in range(depth)]

    def gen(bound, left, size):
        # with one variable in scope an atom is constant, so nest deeper first
        can_stop = bound and (left == 0 or len(bound) > 1)
        if bound and (size <= 0 or can_stop and rng.random() < (0.5 if left == 0 else p_atom)):
            x = rng.choice(bound)
            others = [v for v in bound if v != x]
            y = rng.choice(others) if others and rng.random() < 0.9 else x
            atom = Eq(x, y) if rng.random() < 0.4 else Adj(x, y)
            return Not(atom) if rng.random() < 0.3 else atom
        if not bound:
            op = "q"
        elif left == 0:
            op = rng.choice(("and", "or", "not"))
        else:
            op = rng.choices(("q", "and", "or", "not"), weights=(5, 2, 2, 1))[0]
        if op == "q":
            v = names[len(bound)]  # len(bound) <= depth - left < depth
            q = Exists if rng.random() < 0.5 else Forall
            return q(v, gen(bound + [v], left - 1, size - 1))
        if op == "not":
            return Not(gen(bound, left, size - 1))
        cls = And if op == "and" else Or
        return cls(gen(bound, left, size - 2), gen(bound, left, size - 2))

    return gen([], depth, 6)


@dataclass
class SentenceReport:
    trials: int
    disagreements: list = field(default_factory=list)

    def __bool__(self):
        return bool(self.disagreements)


def sample_sentence_check(g, h, k: int, trials: int, seed) -> SentenceReport:
    """Evaluate random sentences of depth <= k on both graphs; list those that disagree."""
    report = SentenceReport(trials)
    if k < 1:
        return report
    rng = random.Random(seed)
    for _ in range(trials):
        f = random_sentence(rng, rng.randint(1, k))
        assert quantifier_depth(f) <= k
        if evaluate(g, f) != evaluate(h, f):
            report.disagreements.append(to_text(f))
    return report
