from __future__ import annotations

from itertools import combinations

import hypothesis.strategies as st
from hypothesis import settings

from aptkernel.graph import ORIENTED, SIMPLE, Graph

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def connected_graphs(draw, min_n=1, max_n=8, kind=SIMPLE, extra_max=None):
    """Random spanning tree plus extra edges, optionally oriented."""
    n = draw(st.integers(min_n, max_n))
    edges = set()
    for v in range(1, n):
        p = draw(st.integers(0, v - 1))
        edges.add((p, v))
    pairs = [(u, v) for u, v in combinations(range(n), 2) if (u, v) not in edges]
    if pairs:
        limit = len(pairs) if extra_max is None else min(extra_max, len(pairs))
        edges.update(draw(st.lists(st.sampled_from(pairs), max_size=limit, unique=True)))
    edges = sorted(edges)
    if kind == ORIENTED:
        flips = draw(st.lists(st.booleans(), min_size=len(edges), max_size=len(edges)))
        return Graph(n, [(v, u) if f else (u, v) for (u, v), f in zip(edges, flips)], kind=ORIENTED)
    return Graph(n, edges)


@st.composite
def any_graphs(draw, max_n=7):
    n = draw(st.integers(0, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


def brute_blocks(g: Graph) -> set[frozenset[int]]:
    """Maximal vertex sets inducing a connected graph with no cut vertex."""
    def biconnected(xs):
        if len(xs) == 1:
            return False
        sub = [v for v in xs]
        if not _connected(g, sub):
            return False
        return len(xs) == 2 or all(_connected(g, [w for w in sub if w != v]) for v in sub)

    good = [frozenset(c) for r in range(2, g.n + 1) for c in combinations(range(g.n), r)
            if biconnected(c)]
    maximal = {b for b in good if not any(b < o for o in good)}
    isolated = {frozenset([v]) for v in range(g.n) if not g.adj[v]}
    return maximal | isolated


def brute_cut_vertices(g: Graph) -> set[int]:
    base = len(g.components())
    return {v for v in range(g.n) if len(g.components(ignore=[v])) > base}


def _connected(g: Graph, vs) -> bool:
    vs = set(vs)
    if not vs:
        return True
    start = next(iter(vs))
    seen, stack = {start}, [start]
    while stack:
        u = stack.pop()
        for w in g.adj[u]:
            if w in vs and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vs


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> bool:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
