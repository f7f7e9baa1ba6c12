"""Blocks, cut vertices, block classes and clique-structure recognition."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .graph import Graph, GraphError

B0 = "B0"
B1 = "B1"
B2 = "B2"
B3 = "B>=3"
BLOCK_CLASSES = (B0, B1, B2, B3)


@dataclass
class BlockDecomposition:
    """Blocks of ``g - removed`` in original vertex ids.

    ``classes`` and ``interiors`` are filled by :func:`classify_blocks`.
    """
    blocks: list[frozenset[int]]
    cut_vertices: frozenset[int]
    removed: frozenset[int] = frozenset()
    classes: list[str] | None = None
    interiors: list[frozenset[int]] | None = None
    _nbrs: list[set[int]] | None = field(default=None, repr=False)

    def blocks_at(self, v: int) -> list[int]:
        return [i for i, b in enumerate(self.blocks) if v in b]

    def neighbours(self, i: int) -> set[int]:
        """Indices of the block neighbours of block ``i``."""
        if self._nbrs is None:
            at: dict[int, list[int]] = {}
            for idx, b in enumerate(self.blocks):
                for v in b & self.cut_vertices:
                    at.setdefault(v, []).append(idx)
            nbrs: list[set[int]] = [set() for _ in self.blocks]
            for idxs in at.values():
                for a in idxs:
                    nbrs[a].update(x for x in idxs if x != a)
            self._nbrs = nbrs
        return self._nbrs[i]

    def of_class(self, cls: str) -> list[int]:
        if self.classes is None:
            raise ValueError("decomposition is not classified")
        return [i for i, c in enumerate(self.classes) if c == cls]

    def counts(self) -> dict[str, int]:
        return {c: len(self.of_class(c)) for c in BLOCK_CLASSES}


def block_decomposition(g: Graph, removed: Iterable[int] = ()) -> BlockDecomposition:
    """Blocks and cut vertices of ``g - removed``; isolated vertices are blocks."""
    gone = frozenset(removed)
    adj = [() if v in gone else tuple(sorted(w for w in g.adj[v] if w not in gone))
           for v in range(g.n)]
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    blocks: list[frozenset[int]] = []
    clock = 0
    for root in range(g.n):
        if root in gone or root in disc:
            continue
        disc[root] = low[root] = clock
        clock += 1
        if not adj[root]:
            blocks.append(frozenset((root,)))
            continue
        edge_stack: list[tuple[int, int]] = []
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, parent, it = stack[-1]
            for w in it:
                if w == parent:
                    continue
                if w not in disc:
                    disc[w] = low[w] = clock
                    clock += 1
                    edge_stack.append((v, w))
                    stack.append((w, v, iter(adj[w])))
                    break
                if disc[w] < disc[v]:
                    low[v] = min(low[v], disc[w])
                    edge_stack.append((v, w))
            else:
                stack.pop()
                if not stack:
                    continue
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                if low[v] >= disc[p]:
                    comp: set[int] = set()
                    while True:
                        e = edge_stack.pop()
                        comp.update(e)
                        if e == (p, v):
                            break
                    blocks.append(frozenset(comp))
    blocks.sort(key=lambda b: sorted(b))
    seen: dict[int, int] = {}
    for b in blocks:
        for v in b:
            seen[v] = seen.get(v, 0) + 1
    cut = frozenset(v for v, c in seen.items() if c > 1)
    return BlockDecomposition(blocks, cut, gone)


def classify_blocks(g: Graph, s: Iterable[int] = ()) -> BlockDecomposition:
    """Decompose ``g - s`` and sort every block into B0 / B1 / B2 / B>=3."""
    s = frozenset(s)
    if any(not 0 <= v < g.n for v in s):
        raise GraphError("modulator vertex out of range")
    bd = block_decomposition(g, s)
    q = bd.cut_vertices
    classes = []
    for i, b in enumerate(bd.blocks):
        nq = len(b & q)
        if nq == 0:
            classes.append(B0)
        elif nq == 1:
            classes.append(B1)
        elif nq == 2 and len(bd.neighbours(i)) == 2:
            classes.append(B2)
        else:
            classes.append(B3)
    bd.classes = classes
    bd.interiors = [b - q for b in bd.blocks]
    return bd


def is_clique(g: Graph, vertices: Iterable[int] | None = None) -> bool:
    vs = list(range(g.n)) if vertices is None else list(vertices)
    adj = g.adj
    return all(vs[j] in adj[vs[i]] for i in range(len(vs)) for j in range(i + 1, len(vs)))


def almost_clique_witness(g: Graph, vertices: Iterable[int] | None = None) -> int | None:
    """A vertex whose removal leaves a clique, or ``None``.

    For a clique the smallest vertex is returned.
    """
    vs = sorted(range(g.n) if vertices is None else vertices)
    if not vs:
        return None
    adj = g.adj
    candidates: set[int] | None = None
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            if v not in adj[u]:
                pair = {u, v}
                candidates = pair if candidates is None else candidates & pair
                if not candidates:
                    return None
    if candidates is None:
        return vs[0]
    return min(candidates)


def is_almost_clique(g: Graph, vertices: Iterable[int] | None = None) -> bool:
    return almost_clique_witness(g, vertices) is not None


def is_forest_of_cliques(g: Graph, removed: Iterable[int] = ()) -> bool:
    bd = block_decomposition(g, removed)
    return all(is_clique(g, b) for b in bd.blocks)


@dataclass(frozen=True)
class DanglingComponent:
    root: int
    body: frozenset[int]

    @property
    def vertices(self) -> frozenset[int]:
        return self.body | {self.root}


def dangling_components(g: Graph, bd: BlockDecomposition | None = None) -> list[DanglingComponent]:
    """All dangling components of the connected graph ``g``.

    A component ``X`` of ``g - v`` with ``g[X + v]`` 2-connected is exactly a
    block of ``g`` holding a single cut vertex ``v``, so only leaf blocks of
    ``g`` need testing.
    """
    if not g.is_connected():
        raise GraphError("dangling components need a connected graph")
    if bd is None:
        bd = block_decomposition(g)
    out = []
    for b in bd.blocks:
        roots = b & bd.cut_vertices
        if len(roots) == 1 and is_almost_clique(g, b):
            (v,) = roots
            out.append(DanglingComponent(v, b - {v}))
    return out
