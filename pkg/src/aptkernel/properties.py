"""Strongly lambda-extendible properties and the excess calculus.

Everything here is exact: ``lam`` is a :class:`~fractions.Fraction` and so
are all bounds and excess values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, partial
from itertools import combinations
from typing import Callable, Iterator

import numpy as np

from .blocks import block_decomposition
from .graph import (LABELLED, ORIENTED, SIMPLE, Graph, complete_graph,
                    induced_subgraph, variants)

HALF = Fraction(1, 2)
DEFAULT_EDGE_CAP = 20
DEFAULT_VERTEX_CAP = 16


class BlockTooLarge(ValueError):
    pass


class CliqueTooLarge(ValueError):
    pass


class NoDivergenceWitness(ValueError):
    pass


def as_lambda(value) -> Fraction:
    lam = Fraction(value)
    if not 0 < lam < 1:
        raise ValueError(f"lambda must lie strictly between 0 and 1, got {lam}")
    return lam


@dataclass(frozen=True)
class PropertySpec:
    """A graph property together with its lambda.

    ``membership`` decides ``G in Pi`` for graphs of ``kind``.  ``solver``,
    when given, returns the size of a largest Pi-subgraph directly and is
    used instead of edge-subset search.
    """
    name: str
    lam: Fraction
    kind: str
    membership: Callable[[Graph], bool] = field(compare=False)
    hereditary: bool
    alphabet: int | None = None
    solver: Callable[[Graph], int] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "lam", as_lambda(self.lam))
        if (self.kind == LABELLED) != (self.alphabet is not None):
            raise ValueError("alphabet must be given exactly for labelled properties")

    def __hash__(self):
        return hash((self.name, self.lam, self.kind, self.alphabet, id(self.membership)))

    def __eq__(self, other):
        return (isinstance(other, PropertySpec) and self.name == other.name
                and self.lam == other.lam and self.kind == other.kind
                and self.alphabet == other.alphabet and self.membership is other.membership)

    @property
    def slack(self) -> Fraction:
        """``(1 - lam) / 2``, the excess of a single edge."""
        return (1 - self.lam) / 2


# -- membership oracles --------------------------------------------------------

def is_bipartite(g: Graph) -> bool:
    return _two_colour(g, lambda u, v: True)


def is_balanced(g: Graph) -> bool:
    """Signed graph balance; label 0 is a positive edge, label 1 negative."""
    return _two_colour(g, lambda u, v: g.attr(u, v) == 1)


def _two_colour(g: Graph, differ) -> bool:
    side: dict[int, int] = {}
    for s in range(g.n):
        if s in side:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                want = side[x] ^ (1 if differ(x, y) else 0)
                if y not in side:
                    side[y] = want
                    stack.append(y)
                elif side[y] != want:
                    return False
    return True


def is_q_colourable(g: Graph, q: int) -> bool:
    adj = g.adj
    order = sorted(range(g.n), key=lambda v: -len(adj[v]))
    colour = [-1] * g.n

    def place(i):
        if i == len(order):
            return True
        v = order[i]
        used = {colour[w] for w in adj[v]}
        # first uncoloured vertex only needs colours already in use plus one new
        limit = min(q, max(colour) + 2)
        for c in range(limit):
            if c not in used:
                colour[v] = c
                if place(i + 1):
                    return True
        colour[v] = -1
        return False

    return place(0)


def is_acyclic(g: Graph) -> bool:
    indeg = [0] * g.n
    out: list[list[int]] = [[] for _ in range(g.n)]
    for t, h in g.arcs():
        out[t].append(h)
        indeg[h] += 1
    ready = [v for v in range(g.n) if indeg[v] == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return seen == g.n


# -- exact max-subgraph solvers ----------------------------------------------------

_CHUNK = 1 << 17


def _max_agreement(n: int, q: int, pairs: list[tuple[int, int]], want_diff: list[bool]) -> int:
    """Max over colourings ``c: V -> [q]`` of edges with ``(c_u != c_v) == want``.

    Vertex 0 is pinned to colour 0, which is harmless because both callers
    are invariant under permuting colours.
    """
    m = len(pairs)
    if m == 0:
        return 0
    u = np.fromiter((a for a, _ in pairs), dtype=np.int64, count=m)
    v = np.fromiter((b for _, b in pairs), dtype=np.int64, count=m)
    want = np.array(want_diff, dtype=bool)
    total = q ** (n - 1)
    powers = [q ** i for i in range(n - 1)]
    best = 0
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        cols = np.zeros((idx.size, n), dtype=np.int8)
        for i in range(1, n):
            cols[:, i] = (idx // powers[i - 1]) % q
        score = ((cols[:, u] != cols[:, v]) == want).sum(axis=1)
        best = max(best, int(score.max()))
        if best == m:
            break
    return best


def _by_components(solve):
    def run(g: Graph) -> int:
        comps = g.components()
        if len(comps) == 1:
            return solve(g)
        return sum(solve(induced_subgraph(g, c)) for c in comps if len(c) > 1)
    return run


@_by_components
def _max_bipartite(g: Graph) -> int:
    pairs = g.edges()
    return _max_agreement(g.n, 2, pairs, [True] * len(pairs))


def max_colourable_edges(g: Graph, q: int) -> int:
    """Edges of a largest q-colourable spanning subgraph."""
    return _by_components(lambda h: _max_agreement(h.n, q, h.edges(), [True] * h.m))(g)


@_by_components
def max_balanced_edges(g: Graph) -> int:
    items = g.edge_items()
    return _max_agreement(g.n, 2, [e for e, _ in items], [a == 1 for _, a in items])


@_by_components
def max_acyclic_arcs(g: Graph) -> int:
    """Arcs of a largest acyclic spanning subgraph, by DP over vertex orders."""
    n = g.n
    tails = [0] * n
    for t, h in g.arcs():
        tails[h] |= 1 << t
    dp = [0] * (1 << n)
    for mask in range(1 << n):
        d = dp[mask]
        for v in range(n):
            bit = 1 << v
            if not mask & bit:
                val = d + (tails[v] & mask).bit_count()
                if val > dp[mask | bit]:
                    dp[mask | bit] = val
    return dp[-1]


def max_subgraph_by_membership(g: Graph, membership: Callable[[Graph], bool]) -> int:
    """Largest Pi-subgraph by trying edge subsets from the largest down."""
    items = g.edge_items()
    for size in range(len(items), -1, -1):
        for subset in combinations(items, size):
            if membership(g.with_edges(subset)):
                return size
    raise AssertionError("the edgeless graph must belong to the property")


# -- built-in properties -----------------------------------------------------------

@lru_cache(maxsize=None)
def bipartite() -> PropertySpec:
    return PropertySpec("bipartite", HALF, SIMPLE, is_bipartite, True, solver=_max_bipartite)


@lru_cache(maxsize=None)
def qcolourable(q: int) -> PropertySpec:
    if q < 3:
        raise ValueError("q-colourability is built in for q >= 3 (q = 2 is bipartite)")
    return PropertySpec(f"qcol:{q}", 1 - Fraction(1, q), SIMPLE,
                        partial(is_q_colourable, q=q), True,
                        solver=partial(max_colourable_edges, q=q))


@lru_cache(maxsize=None)
def acyclic_oriented() -> PropertySpec:
    return PropertySpec("acyclic-oriented", HALF, ORIENTED, is_acyclic, True,
                        solver=max_acyclic_arcs)


@lru_cache(maxsize=None)
def balanced_signed() -> PropertySpec:
    return PropertySpec("balanced-signed", HALF, LABELLED, is_balanced, True,
                        alphabet=2, solver=max_balanced_edges)


def builtin(name: str) -> PropertySpec:
    """Look up ``bipartite``, ``qcol:<q>`` or ``acyclic-oriented``."""
    if name == "bipartite":
        return bipartite()
    if name == "acyclic-oriented":
        return acyclic_oriented()
    if name.startswith("qcol:"):
        try:
            q = int(name[5:])
        except ValueError:
            raise ValueError(f"bad colour count in {name!r}") from None
        return qcolourable(q)
    raise ValueError(f"unknown property {name!r}; expected bipartite, qcol:<q> or acyclic-oriented")


# -- pt / ms / ex ------------------------------------------------------------------

def pt(n: int, m: int, lam, components: int = 1) -> Fraction:
    """Poljak-Turzik bound ``lam*m + (1-lam)/2 * (n - components)``."""
    lam = Fraction(lam)
    return lam * m + (1 - lam) / 2 * (n - components)


@dataclass(frozen=True)
class ExcessValue:
    ms: int
    pt: Fraction
    ex: Fraction


def _check_kind(g: Graph, pi: PropertySpec):
    if g.kind != pi.kind or g.alphabet != pi.alphabet:
        raise ValueError(f"{pi.name} is defined on {pi.kind} graphs, got {g.kind}")


def solve_max_subgraph(g: Graph, pi: PropertySpec, edge_cap: int = DEFAULT_EDGE_CAP,
                       vertex_cap: int = DEFAULT_VERTEX_CAP) -> int:
    """Largest Pi-subgraph of ``g`` searched on the whole graph at once."""
    if pi.solver is not None:
        if max((len(c) for c in g.components()), default=0) > vertex_cap:
            raise BlockTooLarge(f"{g.n} vertices exceed the solver cap of {vertex_cap}")
        return pi.solver(g)
    if g.m > edge_cap:
        raise BlockTooLarge(f"{g.m} edges exceed the search cap of {edge_cap}")
    return max_subgraph_by_membership(g, pi.membership)


@lru_cache(maxsize=1 << 16)
def _block_ms(pi: PropertySpec, block: Graph, edge_cap: int, vertex_cap: int) -> int:
    return solve_max_subgraph(block, pi, edge_cap, vertex_cap)


def ms(g: Graph, pi: PropertySpec, *, by_blocks: bool = True,
       edge_cap: int = DEFAULT_EDGE_CAP, vertex_cap: int = DEFAULT_VERTEX_CAP) -> int:
    """Edges of a largest spanning Pi-subgraph of ``g``.

    With ``by_blocks`` the search runs per block and the results are summed,
    which is exact by block additivity.
    """
    _check_kind(g, pi)
    if not by_blocks:
        return solve_max_subgraph(g, pi, edge_cap, vertex_cap)
    bd = block_decomposition(g)
    return sum(_block_ms(pi, induced_subgraph(g, b), edge_cap, vertex_cap)
               for b in bd.blocks if len(b) > 1)


def excess(g: Graph, pi: PropertySpec, **caps) -> ExcessValue:
    """``ms - pt``; a disconnected ``g`` uses ``n - c`` in place of ``n - 1``."""
    size = ms(g, pi, **caps)
    bound = pt(g.n, g.m, pi.lam, len(g.components()))
    return ExcessValue(size, bound, size - bound)


def ex(g: Graph, pi: PropertySpec, **caps) -> Fraction:
    return excess(g, pi, **caps).ex


# -- cliques, divergence, inf_AK ---------------------------------------------------

def default_clique_cap(pi: PropertySpec) -> int:
    return 8 if pi.kind == SIMPLE else 5


def pi_variants(g: Graph, pi: PropertySpec) -> Iterator[Graph]:
    return variants(g, pi.kind, pi.alphabet)


@lru_cache(maxsize=None)
def _ex_clique(j: int, pi: PropertySpec) -> Fraction:
    return min(ex(v, pi, by_blocks=False, edge_cap=j * j)
               for v in pi_variants(complete_graph(j), pi))


def ex_clique(j: int, pi: PropertySpec, cap: int | None = None) -> Fraction:
    """Minimum excess over all variants of the j-clique."""
    cap = default_clique_cap(pi) if cap is None else cap
    if j > cap:
        raise CliqueTooLarge(f"K_{j} exceeds the clique cap {cap} for {pi.name}")
    if j < 1:
        raise ValueError("clique order must be positive")
    return _ex_clique(j, pi)


def divergence_witness(pi: PropertySpec, cap: int | None = None) -> tuple[int, Fraction] | None:
    """Smallest ``j`` with ``ex(K_j) > (1-lam)/2`` and its surplus ``a``."""
    cap = default_clique_cap(pi) if cap is None else cap
    for j in range(2, cap + 1):
        e = ex_clique(j, pi, cap)
        if e > pi.slack:
            return j, e - pi.slack
    return None


def almost_cliques(r: int) -> Iterator[Graph]:
    """Connected almost-cliques on ``r`` vertices, one per isomorphism class.

    Vertex ``r-1`` is joined to ``d`` vertices of a ``K_{r-1}``; ``d = r-1``
    gives ``K_r``.
    """
    base = [(u, v) for u in range(r - 1) for v in range(u + 1, r - 1)]
    for d in range(1, r):
        yield Graph(r, base + [(i, r - 1) for i in range(d)])


@lru_cache(maxsize=None)
def _small_ak_min(pi: PropertySpec, j: int) -> Fraction | None:
    best = None
    for r in range(2, j + 1):
        for shape in almost_cliques(r):
            for g in pi_variants(shape, pi):
                e = ex(g, pi, by_blocks=False, edge_cap=r * r)
                if e > 0 and (best is None or e < best):
                    best = e
    return best


def inf_ak(pi: PropertySpec, j: int, a: Fraction) -> Fraction:
    """Lower bound on the excess of any almost-clique with positive excess.

    Almost-cliques with more than ``j`` vertices have excess at least ``a``;
    the smaller ones are enumerated with every orientation or labelling.
    """
    small = _small_ak_min(pi, j)
    return a if small is None else min(a, small)


@dataclass(frozen=True)
class PropertyConstants:
    j: int
    a: Fraction
    inf_ak: Fraction
    lam: Fraction


@lru_cache(maxsize=None)
def property_constants(pi: PropertySpec) -> PropertyConstants:
    w = divergence_witness(pi)
    if w is None:
        raise NoDivergenceWitness(
            f"{pi.name}: no clique up to K_{default_clique_cap(pi)} has excess above {pi.slack}")
    j, a = w
    return PropertyConstants(j, a, inf_ak(pi, j, a), pi.lam)


# -- triangles ---------------------------------------------------------------------

ALL = "all"
NONE = "none"
PARTIAL = "partial"


def cyclic_triangle() -> Graph:
    return Graph(3, [(0, 1), (1, 2), (2, 0)], kind=ORIENTED)


def transitive_triangle() -> Graph:
    return Graph(3, [(0, 1), (1, 2), (0, 2)], kind=ORIENTED)


def is_cyclic_triangle(g: Graph, vertices) -> bool:
    """Whether ``g[vertices]`` is a directed 3-cycle."""
    a, b, c = sorted(vertices)
    if not (g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)):
        return False
    # a->b->c->a or the reverse
    return g.attr(a, b) == g.attr(b, c) == -g.attr(a, c)


@dataclass(frozen=True)
class TriangleMembership:
    status: str
    members: tuple[tuple[str, bool], ...]

    def member(self, name: str) -> bool:
        return dict(self.members)[name]


@lru_cache(maxsize=None)
def triangle_membership(pi: PropertySpec) -> TriangleMembership:
    """Membership of every variant of K_3 (up to isomorphism for oriented)."""
    if pi.kind == ORIENTED:
        found = (("transitive", pi.membership(transitive_triangle())),
                 ("cyclic", pi.membership(cyclic_triangle())))
    else:
        found = tuple((_tag(v), pi.membership(v)) for v in pi_variants(complete_graph(3), pi))
    flags = [ok for _, ok in found]
    status = ALL if all(flags) else NONE if not any(flags) else PARTIAL
    return TriangleMembership(status, found)


def _tag(g: Graph) -> str:
    if g.kind == SIMPLE:
        return "K3"
    return "labels" + "".join(str(a) for _, a in g.edge_items())
