"""Exhaustive checks of the strong lambda-extendibility axioms on small graphs.

The axioms, for a property Pi of graphs in a class G:

inclusiveness
    every graph whose underlying graph is K_1 or K_2 is in Pi.
block additivity
    G is in Pi if and only if every block of G is in Pi.
strong lambda-subgraph extension
    if V(G) = U + W with G[U] and G[W] in Pi, then for any positive weights
    on the cut edges E(U, W) there is F within E(U, W) of weight at least
    lambda * w(E(U, W)) such that G - (E(U, W) - F) is in Pi.  Only unit
    weights are checked here.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import ceil

from .blocks import block_decomposition
from .enumeration import all_variants, simple_graphs
from .graph import SIMPLE, Graph, complete_graph, delete_vertices, induced_subgraph
from .properties import PropertySpec, pi_variants

INCLUSIVENESS = "inclusiveness"
BLOCK_ADDITIVITY = "block_additivity"
EXTENSION = "strong_subgraph_extension"
AXIOMS = (INCLUSIVENESS, BLOCK_ADDITIVITY, EXTENSION)


@dataclass
class AxiomReport:
    property: str
    n_max: int
    checked: dict[str, int] = field(default_factory=lambda: dict.fromkeys(AXIOMS, 0))
    counterexamples: dict[str, list[dict]] = field(default_factory=lambda: {a: [] for a in AXIOMS})

    def passed(self, axiom: str) -> bool:
        return not self.counterexamples[axiom]

    @property
    def ok(self) -> bool:
        return all(self.passed(a) for a in AXIOMS)

    def as_dict(self) -> dict:
        return {
            "property": self.property,
            "n_max": self.n_max,
            "axioms": {a: {"checked": self.checked[a],
                           "passed": self.passed(a),
                           "counterexamples": self.counterexamples[a]} for a in AXIOMS},
        }


def default_axiom_n_max(pi: PropertySpec) -> int:
    return 5 if pi.kind == SIMPLE else 4


def _describe(g: Graph, **extra) -> dict:
    return {"n": g.n, "edges": [[u, v] if a is None else [u, v, a] for (u, v), a in g.edge_items()],
            **extra}


def check_axioms(pi: PropertySpec, n_max: int | None = None, limit: int = 5) -> AxiomReport:
    """Check all three axioms on every graph with at most ``n_max`` vertices.

    At most ``limit`` counterexamples are kept per axiom.
    """
    n_max = default_axiom_n_max(pi) if n_max is None else n_max
    report = AxiomReport(pi.name, n_max)
    member = pi.membership

    def flag(axiom, g, **extra):
        if len(report.counterexamples[axiom]) < limit:
            report.counterexamples[axiom].append(_describe(g, **extra))

    for base in (complete_graph(1), complete_graph(2)):
        for g in pi_variants(base, pi):
            report.checked[INCLUSIVENESS] += 1
            if not member(g):
                flag(INCLUSIVENESS, g)

    for g in all_variants(simple_graphs(n_max), pi.kind, pi.alphabet):
        inside = member(g)
        report.checked[BLOCK_ADDITIVITY] += 1
        blocks = block_decomposition(g).blocks
        by_blocks = all(member(induced_subgraph(g, b)) for b in blocks)
        if inside != by_blocks:
            flag(BLOCK_ADDITIVITY, g, member=inside, blocks_member=by_blocks)
        _check_extension(g, pi, report, flag)
    return report


def _check_extension(g: Graph, pi: PropertySpec, report: AxiomReport, flag):
    n = g.n
    items = g.edge_items()
    # (U, W) and (W, U) are the same split, so vertex 0 always sits in U
    for mask in range(1, 1 << n, 2):
        if mask == (1 << n) - 1:
            continue
        inside = [e for e in items if (mask >> e[0][0] & 1) == (mask >> e[0][1] & 1)]
        cross = [e for e in items if (mask >> e[0][0] & 1) != (mask >> e[0][1] & 1)]
        if not cross:
            continue
        u_side = [v for v in range(n) if mask >> v & 1]
        w_side = [v for v in range(n) if not mask >> v & 1]
        if not (pi.membership(induced_subgraph(g, u_side))
                and pi.membership(induced_subgraph(g, w_side))):
            continue
        report.checked[EXTENSION] += 1
        need = ceil(pi.lam * len(cross))
        if not any(pi.membership(g.with_edges(inside + list(f)))
                   for size in range(len(cross), need - 1, -1)
                   for f in combinations(cross, size)):
            flag(EXTENSION, g, U=u_side, cross_edges=len(cross), needed=need)


def hereditary_counterexample(pi: PropertySpec, n_max: int) -> tuple[Graph, int] | None:
    """A member of Pi with at most ``n_max`` vertices losing membership when a
    vertex is deleted, as ``(graph, vertex)``."""
    for g in all_variants(simple_graphs(n_max), pi.kind, pi.alphabet):
        if not pi.membership(g):
            continue
        for v in range(g.n):
            if not pi.membership(delete_vertices(g, [v])):
                return g, v
    return None


def is_hereditary_upto(pi: PropertySpec, n_max: int) -> bool:
    # single-vertex deletions suffice: induced subgraphs are iterated deletions
    return hereditary_counterexample(pi, n_max) is None
