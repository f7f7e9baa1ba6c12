"""Graph representation for simple, oriented and edge-labelled graphs.

Vertices are the dense integers ``0..n-1``.  Every edge is stored once under
its sorted pair ``(u, v)`` with ``u < v`` together with an attribute:

* simple graphs: ``None``
* oriented graphs: ``+1`` when the arc runs ``u -> v`` and ``-1`` for ``v -> u``
* labelled graphs: the label, an int in ``range(alphabet)``

Graphs are immutable; all surgery returns a new graph.  Surviving vertices
always keep their relative order, see :func:`survivor_map`.
"""
from __future__ import annotations

from typing import Iterable, Iterator

SIMPLE = "simple"
ORIENTED = "oriented"
LABELLED = "labelled"
KINDS = (SIMPLE, ORIENTED, LABELLED)


class GraphError(ValueError):
    pass


class Graph:
    __slots__ = ("n", "kind", "alphabet", "_edges", "_adj", "_key")

    def __init__(self, n: int, edges: Iterable = (), kind: str = SIMPLE,
                 alphabet: int | None = None):
        """Build a graph on ``n`` vertices.

        ``edges`` holds ``(u, v)`` or ``(u, v, tag)`` tuples.  For oriented
        graphs ``(u, v)`` is the arc ``u -> v`` and the optional tag ``'>'`` /
        ``'<'`` flips it, mirroring the text format.  For labelled graphs the
        tag is the label and is mandatory.
        """
        if kind not in KINDS:
            raise GraphError(f"unknown graph kind {kind!r}")
        if n < 0:
            raise GraphError("negative vertex count")
        if kind == LABELLED:
            if alphabet is None or alphabet < 1:
                raise GraphError("labelled graphs need a positive alphabet size")
        elif alphabet is not None:
            raise GraphError(f"{kind} graphs carry no alphabet")
        self.n = n
        self.kind = kind
        self.alphabet = alphabet
        store: dict[tuple[int, int], int | None] = {}
        for e in edges:
            u, v = e[0], e[1]
            tag = e[2] if len(e) > 2 else None
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            key = (u, v) if u < v else (v, u)
            if key in store:
                raise GraphError(f"parallel edge {key}")
            store[key] = _normalise_tag(kind, alphabet, u, v, tag)
        self._edges = store
        self._adj: list[set[int]] | None = None
        self._key = None

    @classmethod
    def _raw(cls, n, kind, alphabet, store):
        g = cls.__new__(cls)
        g.n, g.kind, g.alphabet = n, kind, alphabet
        g._edges = store
        g._adj = None
        g._key = None
        return g

    # -- queries ---------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def adj(self) -> list[set[int]]:
        if self._adj is None:
            adj: list[set[int]] = [set() for _ in range(self.n)]
            for u, v in self._edges:
                adj[u].add(v)
                adj[v].add(u)
            self._adj = adj
        return self._adj

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self._edges)

    def edge_items(self) -> list[tuple[tuple[int, int], int | None]]:
        return sorted(self._edges.items())

    def attr(self, u: int, v: int):
        return self._edges[(u, v) if u < v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edges

    def arcs(self) -> list[tuple[int, int]]:
        """Arcs ``(tail, head)`` of an oriented graph."""
        if self.kind != ORIENTED:
            raise GraphError("arcs() needs an oriented graph")
        return [(u, v) if d > 0 else (v, u) for (u, v), d in sorted(self._edges.items())]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def key(self) -> tuple:
        """Hashable encoding; equal keys mean identical labelled graphs."""
        if self._key is None:
            self._key = (self.n, self.kind, self.alphabet, tuple(sorted(self._edges.items())))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Graph) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}, kind={self.kind})"

    def underlying(self) -> Graph:
        return Graph._raw(self.n, SIMPLE, None, {e: None for e in self._edges})

    def with_edges(self, items: Iterable[tuple[tuple[int, int], int | None]]) -> Graph:
        """Same vertex set and kind, edge set replaced by normalised ``items``."""
        return Graph._raw(self.n, self.kind, self.alphabet, dict(items))

    def components(self, ignore: Iterable[int] = ()) -> list[list[int]]:
        """Connected components (sorted vertex lists) of ``self - ignore``."""
        skip = set(ignore)
        seen = set(skip)
        out = []
        adj = self.adj
        for s in range(self.n):
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            stack = [s]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1


def _normalise_tag(kind, alphabet, u, v, tag):
    if kind == SIMPLE:
        if tag is not None:
            raise GraphError("simple graphs take no edge tags")
        return None
    if kind == ORIENTED:
        if tag in (None, ">", 1):
            forward = True
        elif tag in ("<", -1):
            forward = False
        else:
            raise GraphError(f"bad orientation tag {tag!r}")
        # forward means u -> v; store relative to the sorted pair
        return 1 if forward == (u < v) else -1
    if not isinstance(tag, int) or not 0 <= tag < alphabet:
        raise GraphError(f"label {tag!r} outside alphabet of size {alphabet}")
    return tag


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def oriented(n: int, arcs: Iterable[tuple[int, int]]) -> Graph:
    return Graph(n, arcs, kind=ORIENTED)


# -- surgery -----------------------------------------------------------------

def survivor_map(n: int, removed: Iterable[int]) -> dict[int, int]:
    """Old id -> new id for the vertices left after deleting ``removed``."""
    gone = set(removed)
    out = {}
    for v in range(n):
        if v not in gone:
            out[v] = len(out)
    return out


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """``g[vertices]``; vertex ``i`` of the result is ``sorted(vertices)[i]``."""
    keep = sorted(set(vertices))
    pos = {v: i for i, v in enumerate(keep)}
    store = {}
    for (u, v), a in g._edges.items():
        if u in pos and v in pos:
            # pos preserves order, so orientation tags stay valid
            store[(pos[u], pos[v])] = a
    return Graph._raw(len(keep), g.kind, g.alphabet, store)


def delete_vertices(g: Graph, vertices: Iterable[int]) -> Graph:
    gone = set(vertices)
    return induced_subgraph(g, (v for v in range(g.n) if v not in gone))


def identify_vertices(g: Graph, keep: int, drop: int) -> Graph:
    """Merge ``drop`` into ``keep``.

    The two vertices must be distinct, non-adjacent and have disjoint
    neighbourhoods, so no loop or parallel edge can arise.
    """
    if keep == drop:
        raise GraphError("cannot identify a vertex with itself")
    if g.has_edge(keep, drop):
        raise GraphError(f"{keep} and {drop} are adjacent")
    if g.adj[keep] & g.adj[drop]:
        raise GraphError(f"{keep} and {drop} share a neighbour")
    remap = survivor_map(g.n, [drop])
    remap[drop] = remap[keep]
    store = {}
    for (u, v), a in g._edges.items():
        nu, nv = remap[u], remap[v]
        if g.kind == ORIENTED and (nu < nv) != (u < v):
            a = -a
        store[(nu, nv) if nu < nv else (nv, nu)] = a
    return Graph._raw(g.n - 1, g.kind, g.alphabet, store)


def relabel(g: Graph, perm: list[int]) -> Graph:
    """Graph with vertex ``v`` renamed ``perm[v]`` (``perm`` a permutation)."""
    store = {}
    for (u, v), a in g._edges.items():
        nu, nv = perm[u], perm[v]
        if g.kind == ORIENTED and nu > nv:
            a = -a
        store[(nu, nv) if nu < nv else (nv, nu)] = a
    return Graph._raw(g.n, g.kind, g.alphabet, store)


def disjoint_union(*graphs: Graph) -> Graph:
    kind = graphs[0].kind
    alphabet = graphs[0].alphabet
    store = {}
    offset = 0
    for h in graphs:
        if h.kind != kind or h.alphabet != alphabet:
            raise GraphError("cannot unite graphs of different kinds")
        for (u, v), a in h._edges.items():
            store[(u + offset, v + offset)] = a
        offset += h.n
    return Graph._raw(offset, kind, alphabet, store)


def variants(g: Graph, kind: str, alphabet: int | None = None) -> Iterator[Graph]:
    """Every graph of ``kind`` whose underlying graph is ``g``."""
    from itertools import product

    edges = g.edges()
    if kind == SIMPLE:
        yield g.underlying()
        return
    choices = (1, -1) if kind == ORIENTED else tuple(range(alphabet))
    for tags in product(choices, repeat=len(edges)):
        yield Graph._raw(g.n, kind, alphabet if kind == LABELLED else None,
                         dict(zip(edges, tags)))
