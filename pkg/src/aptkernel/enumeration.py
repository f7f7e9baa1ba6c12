"""Exhaustive small-graph enumeration up to isomorphism."""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator

import networkx as nx

from .graph import Graph, variants

ATLAS_MAX = 7


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def from_nx(h: nx.Graph) -> Graph:
    idx = {v: i for i, v in enumerate(sorted(h.nodes()))}
    return Graph(len(idx), [(idx[u], idx[v]) for u, v in h.edges()])


@lru_cache(maxsize=None)
def _atlas() -> tuple[Graph, ...]:
    return tuple(from_nx(h) for h in nx.graph_atlas_g() if h.number_of_nodes() > 0)


def simple_graphs(n_max: int, n_min: int = 1, connected: bool = False) -> list[Graph]:
    """Every simple graph with ``n_min..n_max`` vertices, one per isomorphism class."""
    out = []
    for n in range(n_min, n_max + 1):
        out.extend(graphs_of_order(n, connected))
    return out


@lru_cache(maxsize=None)
def _order(n: int, connected: bool) -> tuple[Graph, ...]:
    if n <= ATLAS_MAX:
        return tuple(g for g in _atlas() if g.n == n and (not connected or g.is_connected()))
    if not connected:
        raise ValueError(f"only connected graphs are enumerated beyond {ATLAS_MAX} vertices")
    return tuple(_augment(_order(n - 1, True)))


def graphs_of_order(n: int, connected: bool = False) -> tuple[Graph, ...]:
    return _order(n, connected)


def _augment(smaller: Iterable[Graph]) -> Iterator[Graph]:
    # every connected graph has a non-cut vertex, so adding one vertex to
    # each smaller connected graph in all ways reaches every class
    buckets: dict[tuple, list[nx.Graph]] = {}
    for g in smaller:
        n = g.n
        base = g.edges()
        for mask in range(1, 1 << n):
            extra = [(i, n) for i in range(n) if mask >> i & 1]
            cand = Graph(n + 1, base + extra)
            h = to_nx(cand)
            key = (tuple(sorted(d for _, d in h.degree())),
                   nx.weisfeiler_lehman_graph_hash(h, iterations=3))
            bucket = buckets.setdefault(key, [])
            if any(nx.is_isomorphic(h, other) for other in bucket):
                continue
            bucket.append(h)
            yield cand


def all_variants(graphs: Iterable[Graph], kind: str, alphabet: int | None = None) -> Iterator[Graph]:
    for g in graphs:
        yield from variants(g, kind, alphabet)
