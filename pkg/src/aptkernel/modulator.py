"""Vertex sets whose removal leaves a forest of cliques."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, comb

from .blocks import block_decomposition, is_clique, is_forest_of_cliques
from .graph import Graph, GraphError

GREEDY = "greedy"
EXACT = "exact"
PROCEED = "proceed"
TOO_LARGE = "too_large"

EXACT_VERTEX_CAP = 20
EXACT_SUBSET_CAP = 1 << 20


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Modulator:
    s: frozenset[int]
    method: str
    size_ok: bool | None = None


def greedy_modulator(g: Graph, start=()) -> frozenset[int]:
    """Break the smallest non-clique block at its vertex with most non-edges."""
    s = set(start)
    adj = g.adj
    while True:
        bad = [b for b in block_decomposition(g, s).blocks if not is_clique(g, b)]
        if not bad:
            return frozenset(s)
        block = min(bad, key=lambda b: (len(b), sorted(b)))
        s.add(min(block, key=lambda v: (-sum(1 for w in block if w != v and w not in adj[v]), v)))


def exact_modulator(g: Graph, max_size: int | None = None) -> frozenset[int] | None:
    """A minimum modulator of size at most ``max_size``, or ``None``."""
    limit = g.n if max_size is None else min(max_size, g.n)
    if g.n > EXACT_VERTEX_CAP or sum(comb(g.n, i) for i in range(limit + 1)) > EXACT_SUBSET_CAP:
        raise BudgetExceeded(f"exact modulator search on {g.n} vertices up to size {limit}")
    for size in range(limit + 1):
        for cand in combinations(range(g.n), size):
            if is_forest_of_cliques(g, cand):
                return frozenset(cand)
    return None


def modulator_budget(k, lam) -> int:
    """Largest modulator size passing the gate for ``k`` and ``lam``."""
    return max(ceil(6 * Fraction(k) / (1 - Fraction(lam))) - 1, 0)


def find_modulator(g: Graph, budget: int) -> Modulator:
    """Greedy modulator, replaced by an exact search when it exceeds ``budget``.

    Raises :class:`BudgetExceeded` when the exact phase would be infeasible.
    """
    if not g.is_connected():
        raise GraphError("modulator search needs a connected graph")
    s = greedy_modulator(g)
    if len(s) <= budget:
        return Modulator(s, GREEDY, True)
    best = exact_modulator(g, budget)
    if best is None:
        return Modulator(s, GREEDY, False)
    return Modulator(best, EXACT, True)


def modulator_gate(s, k, lam) -> str:
    return PROCEED if len(s) < 6 * Fraction(k) / (1 - Fraction(lam)) else TOO_LARGE


def check_modulator(g: Graph, s) -> bool:
    return is_forest_of_cliques(g, s)
