"""Brute-force ground truth, seeded instance generators and lemma checks."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Iterator, Union

from .blocks import B1, B3, block_decomposition, classify_blocks
from .enumeration import simple_graphs
from .graph import (LABELLED, ORIENTED, SIMPLE, Graph, complete_graph, delete_vertices,
                    induced_subgraph, relabel, variants)
from .kernel import Instance, Kernel, Yes, kernelize
from .properties import (HALF, BlockTooLarge, NoDivergenceWitness,
                         PropertySpec, almost_cliques, default_clique_cap, ex, ex_clique,
                         ms, pi_variants, property_constants, pt, triangle_membership)

NAIVE_EDGE_CAP = 16


# -- deciding APT ------------------------------------------------------------------

def naive_ms(g: Graph, pi: PropertySpec, edge_cap: int = NAIVE_EDGE_CAP) -> int:
    """Largest Pi-subgraph by trying every edge subset of the whole graph."""
    if g.m > edge_cap:
        raise BlockTooLarge(f"{g.m} edges exceed the naive search cap of {edge_cap}")
    items = g.edge_items()
    for size in range(len(items), -1, -1):
        for keep in combinations(items, size):
            if pi.membership(g.with_edges(keep)):
                return size
    raise AssertionError("the edgeless graph is always a member")


def naive_ex(g: Graph, pi: PropertySpec) -> Fraction:
    return naive_ms(g, pi) - pt(g.n, g.m, pi.lam, len(g.components()))


def solve_apt(inst: Instance) -> bool:
    """Whether some spanning Pi-subgraph has at least ``pt(G) + k`` edges."""
    return ex(inst.g, inst.pi) >= inst.k


# -- generators --------------------------------------------------------------------

@dataclass(frozen=True)
class AllConnected:
    n_max: int
    n_min: int = 1


@dataclass(frozen=True)
class RandomGnp:
    n: int
    p: float
    count: int = 1


@dataclass(frozen=True)
class ForestOfCliquesPlusS:
    clique_sizes: tuple[int, ...]
    s_size: int
    attach_prob: float

    def __post_init__(self):
        object.__setattr__(self, "clique_sizes", tuple(self.clique_sizes))
        if not self.clique_sizes or min(self.clique_sizes) < 1:
            raise ValueError("clique sizes must be positive")


Family = Union[AllConnected, RandomGnp, ForestOfCliquesPlusS]

# variant policies
CANONICAL = "canonical"   # simple graphs as built; orient low -> high; label 0
ALL_VARIANTS = "all"
UNIFORM = "uniform"
CYCLIC_TRIANGLES = "cyclic_triangles"  # uniform, but triangle blocks made cyclic
POLICIES = (CANONICAL, ALL_VARIANTS, UNIFORM, CYCLIC_TRIANGLES)


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    family: Family
    variant_policy: str = CANONICAL
    kind: str = SIMPLE
    alphabet: int | None = None

    def __post_init__(self):
        if self.variant_policy not in POLICIES:
            raise ValueError(f"unknown variant policy {self.variant_policy!r}")


def random_variant(g: Graph, kind: str, alphabet: int | None, rng: random.Random) -> Graph:
    if kind == SIMPLE:
        return g
    if kind == ORIENTED:
        return Graph(g.n, [(u, v) if rng.random() < 0.5 else (v, u) for u, v in g.edges()],
                     kind=ORIENTED)
    return Graph(g.n, [(u, v, rng.randrange(alphabet)) for u, v in g.edges()],
                 kind=LABELLED, alphabet=alphabet)


def canonical_variant(g: Graph, kind: str, alphabet: int | None) -> Graph:
    if kind == SIMPLE:
        return g
    if kind == ORIENTED:
        return Graph(g.n, g.edges(), kind=ORIENTED)
    return Graph(g.n, [(u, v, 0) for u, v in g.edges()], kind=LABELLED, alphabet=alphabet)


def _cyclic_triangles(g: Graph, rng: random.Random) -> Graph:
    """Uniform orientation in which every triangle block is a directed 3-cycle."""
    arcs = {}
    for b in block_decomposition(g).blocks:
        if len(b) == 3:
            a, c, d = sorted(b)
            if rng.random() < 0.5:
                a, c = c, a
            arcs.update({frozenset(p): p for p in ((a, c), (c, d), (d, a))})
    out = []
    for u, v in g.edges():
        out.append(arcs.get(frozenset((u, v))) or ((u, v) if rng.random() < 0.5 else (v, u)))
    return Graph(g.n, out, kind=ORIENTED)


def _apply_policy(g: Graph, config: GeneratorConfig, rng: random.Random) -> Iterator[Graph]:
    policy = config.variant_policy
    if policy == ALL_VARIANTS:
        yield from variants(g, config.kind, config.alphabet)
    elif policy == CANONICAL:
        yield canonical_variant(g, config.kind, config.alphabet)
    elif policy == CYCLIC_TRIANGLES and config.kind == ORIENTED:
        yield _cyclic_triangles(g, rng)
    else:
        yield random_variant(g, config.kind, config.alphabet, rng)


def random_connected_gnp(n: int, p: float, rng: random.Random, tries: int = 1000) -> Graph:
    for _ in range(tries):
        g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])
        if g.is_connected():
            return g
    raise ValueError(f"no connected G({n}, {p}) sample in {tries} tries")


def forest_of_cliques_plus_s(family: ForestOfCliquesPlusS, rng: random.Random
                             ) -> tuple[Graph, frozenset[int]]:
    """A connected graph and a vertex set whose removal leaves a forest of cliques.

    Cliques are glued at single vertices into trees; with a non-empty S a
    clique may instead start a new tree.  S vertices attach to every other
    vertex independently, then extra S edges join any separate pieces.
    """
    edges: set[tuple[int, int]] = set()
    n = 0
    for i, size in enumerate(family.clique_sizes):
        if i == 0 or (family.s_size and rng.random() < 0.25):
            members = list(range(n, n + size))
            n += size
        else:
            members = [rng.randrange(n)] + list(range(n, n + size - 1))
            n += size - 1
        edges.update((min(u, v), max(u, v)) for u, v in combinations(members, 2))
    core = n
    s = list(range(core, core + family.s_size))
    n += family.s_size
    for x in s:
        for w in range(x):
            if rng.random() < family.attach_prob:
                edges.add((w, x))
    g = Graph(n, edges)
    for comp in Graph(core, [e for e in edges if e[1] < core]).components():
        if s and not any(x in g.adj[w] for w in comp for x in s):
            edges.add((rng.choice(comp), rng.choice(s)))
    for x in s:
        if not any(w < core for w in Graph(n, edges).adj[x]):
            edges.add((rng.randrange(core), x))
    while True:
        comps = Graph(n, edges).components()
        if len(comps) == 1:
            break
        a, b = comps[0], comps[1]
        x = next((v for v in a if v >= core), None)
        if x is not None:
            edges.add(tuple(sorted((x, rng.choice(b)))))
        else:
            x = next(v for v in b if v >= core)
            edges.add(tuple(sorted((x, rng.choice(a)))))
    perm = list(range(n))
    rng.shuffle(perm)
    return relabel(Graph(n, edges), perm), frozenset(perm[x] for x in s)


def generate(config: GeneratorConfig) -> Iterator[Graph]:
    """Graphs for ``config``; the same config always yields the same graphs."""
    rng = random.Random(config.seed)
    fam = config.family
    if isinstance(fam, AllConnected):
        for g in simple_graphs(fam.n_max, fam.n_min, connected=True):
            yield from _apply_policy(g, config, rng)
    elif isinstance(fam, RandomGnp):
        for _ in range(fam.count):
            yield from _apply_policy(random_connected_gnp(fam.n, fam.p, rng), config, rng)
    elif isinstance(fam, ForestOfCliquesPlusS):
        g, _ = forest_of_cliques_plus_s(fam, rng)
        yield from _apply_policy(g, config, rng)
    else:
        raise TypeError(f"unknown generator family {fam!r}")


def corpus_family(seed: int, max_vertices: int = 12) -> ForestOfCliquesPlusS:
    """A seeded forest-of-cliques family with at most ``max_vertices`` vertices."""
    rng = random.Random(f"corpus-{seed}")
    while True:
        sizes = tuple(rng.choice((1, 2, 2, 3, 3, 3, 4)) for _ in range(rng.randint(1, 5)))
        s_size = rng.randint(0, 2)
        if sum(sizes) - len(sizes) + 1 + s_size <= max_vertices:
            return ForestOfCliquesPlusS(sizes, s_size, rng.choice((0.2, 0.35, 0.5)))


def corpus_graph(seed: int, pi: PropertySpec, policy: str = UNIFORM, max_vertices: int = 12) -> Graph:
    config = GeneratorConfig(seed, corpus_family(seed, max_vertices), policy, pi.kind, pi.alphabet)
    return next(generate(config))


# -- equivalence contract ----------------------------------------------------------

class ContractViolation(AssertionError):
    def __init__(self, message: str, payload: dict):
        super().__init__(f"{message}: {payload}")
        self.payload = payload


@dataclass
class EquivalenceReport:
    outcome: str
    answer: bool
    kernel_answer: bool | None = None
    lemma: str | None = None

    @property
    def ok(self) -> bool:
        if self.outcome == Yes.tag:
            return self.answer
        if self.outcome == Kernel.tag:
            return self.kernel_answer == self.answer
        return True


def _payload(inst: Instance, outcome, answer, kernel_answer) -> dict:
    from .graphio import write_graph
    return {"property": inst.pi.name, "k": str(inst.k), "graph": write_graph(inst.g),
            "outcome": outcome.tag, "answer": answer, "kernel_answer": kernel_answer}


def equivalence_check(inst: Instance) -> EquivalenceReport:
    """Run the kernelizer and compare its outcome with brute force."""
    outcome = kernelize(inst)
    answer = solve_apt(inst)
    report = EquivalenceReport(outcome.tag, answer)
    if isinstance(outcome, Yes):
        report.lemma = outcome.witness.lemma
    elif isinstance(outcome, Kernel):
        report.kernel_answer = solve_apt(Instance(outcome.g, outcome.k, inst.pi))
    if not report.ok:
        raise ContractViolation("kernelizer answer differs from brute force",
                                _payload(inst, outcome, answer, report.kernel_answer))
    return report


# -- block graph recognition by a second route -------------------------------------

def is_chordal(g: Graph, removed: Iterable[int] = ()) -> bool:
    """Chordality by repeatedly deleting simplicial vertices."""
    left = set(range(g.n)) - set(removed)
    adj = {v: g.adj[v] & left for v in left}
    while left:
        for v in sorted(left):
            nb = sorted(adj[v])
            if all(b in adj[a] for a, b in combinations(nb, 2)):
                break
        else:
            return False
        left.discard(v)
        for w in adj.pop(v):
            adj[w].discard(v)
    return True


def is_diamond_free(g: Graph, removed: Iterable[int] = ()) -> bool:
    gone = set(removed)
    for u, v in g.edges():
        if u in gone or v in gone:
            continue
        common = (g.adj[u] & g.adj[v]) - gone
        if any(b not in g.adj[a] for a, b in combinations(sorted(common), 2)):
            return False
    return True


def is_block_graph(g: Graph, removed: Iterable[int] = ()) -> bool:
    """Forest of cliques via the chordal and diamond-free characterisation."""
    removed = tuple(removed)
    return is_chordal(g, removed) and is_diamond_free(g, removed)


def min_modulator_size(g: Graph) -> int:
    for size in range(g.n + 1):
        if any(is_block_graph(g, c) for c in combinations(range(g.n), size)):
            return size
    raise AssertionError("deleting every vertex leaves an empty forest")


# -- lemma suite -------------------------------------------------------------------

CUT_VERTEX = "cut_vertex_additivity"
HALF_LEMMA = "half_inequality"
ALMOST_CLIQUE_FLOOR = "almost_clique_floor"
CLIQUE_GROWTH = "clique_growth"
NONLEAF_BLOCKS = "nonleaf_blocks"
CYCLIC_IMPLIES_TRANSITIVE = "cyclic_implies_transitive"
TRANSITIVE_DIVERGES = "transitive_only_diverges"
ORIENTED_TIGHT = "oriented_cliques_tight"


@dataclass
class LemmaResult:
    checked: int = 0
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


@dataclass
class LemmaReport:
    property: str
    results: dict[str, LemmaResult] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results.values())

    def as_dict(self) -> dict:
        return {"property": self.property,
                "lemmas": {name: {"checked": r.checked, "passed": r.ok,
                                  "counterexamples": r.counterexamples}
                           for name, r in sorted(self.results.items())}}


def shrink(g: Graph, fails: Callable[[Graph], bool]) -> Graph:
    """Delete vertices while the graph stays connected and still fails."""
    changed = True
    while changed and g.n > 1:
        changed = False
        for v in range(g.n):
            h = delete_vertices(g, [v])
            if h.is_connected() and fails(h):
                g, changed = h, True
                break
    return g


def _record(result: LemmaResult, ok: bool, g: Graph, fails=None, **detail):
    from .graphio import write_graph
    result.checked += 1
    if not ok:
        if fails is not None:
            g = shrink(g, fails)
        # a proven lemma failing means the code is wrong, not the lemma
        result.counterexamples.append({"kind": "implementation bug",
                                       "graph": write_graph(g), **detail})


def cut_vertex_holds(g: Graph, pi: PropertySpec, v: int) -> bool:
    """Excess at a cut vertex equals the sum over its pieces, by whole-graph search."""
    pieces = [induced_subgraph(g, comp + [v]) for comp in g.components(ignore=[v])]
    whole = ms(g, pi, by_blocks=False)
    parts = sum(ms(p, pi, by_blocks=False) for p in pieces)
    pt_sum = sum(pt(p.n, p.m, pi.lam) for p in pieces)
    return whole == parts and pt(g.n, g.m, pi.lam) == pt_sum


def random_cut_vertex_graph(rng: random.Random, n_max: int = 10) -> tuple[Graph, int]:
    """Two random connected pieces glued at one vertex."""
    n1 = rng.randint(2, n_max - 1)
    n2 = rng.randint(2, n_max - n1 + 1)
    g1 = random_connected_gnp(n1, rng.choice((0.4, 0.6, 0.8)), rng)
    g2 = random_connected_gnp(n2, rng.choice((0.4, 0.6, 0.8)), rng)
    glue = rng.randrange(n1)
    # vertex 0 of the second piece becomes the glue vertex
    ids = [glue] + list(range(n1, n1 + n2 - 1))
    edges = g1.edges() + [(ids[u], ids[v]) for u, v in g2.edges()]
    n = n1 + n2 - 1
    perm = list(range(n))
    rng.shuffle(perm)
    return relabel(Graph(n, edges), perm), perm[glue]


def half_holds(g: Graph, pi: PropertySpec, part: Iterable[int]) -> bool:
    part = set(part)
    rest = [v for v in range(g.n) if v not in part]
    g1, g2 = induced_subgraph(g, sorted(part)), induced_subgraph(g, rest)
    c1, c2 = len(g1.components()), len(g2.components())
    return ex(g, pi) >= ex(g1, pi) + ex(g2, pi) - pi.slack * (c1 + c2 - 1)


def half_graphs(pi: PropertySpec, seed: int = 0, n_small: int = 6, n_large: int = 8,
                random_count: int = 12) -> list[Graph]:
    """Connected graphs up to ``n_small`` vertices plus seeded larger samples.

    Oriented and labelled classes use every variant up to four vertices and
    one seeded variant beyond.
    """
    rng = random.Random(f"half-{seed}")
    out = []
    for g in simple_graphs(n_small, connected=True):
        if pi.kind == SIMPLE or g.n <= 4:
            out.extend(pi_variants(g, pi))
        else:
            out.append(random_variant(g, pi.kind, pi.alphabet, rng))
    for i in range(random_count):
        n = n_small + 1 + i % (n_large - n_small)
        g = random_connected_gnp(n, rng.choice((0.3, 0.5, 0.7)), rng)
        out.append(random_variant(g, pi.kind, pi.alphabet, rng))
    return out


def check_half(pi: PropertySpec, graphs: Iterable[Graph], result: LemmaResult):
    for g in graphs:
        # (V1, V2) and (V2, V1) give the same inequality, so V1 holds vertex 0
        for mask in range(1, (1 << g.n) - 1, 2):
            part = [v for v in range(g.n) if mask >> v & 1]
            ok = half_holds(g, pi, part)
            _record(result, ok, g, part=part)


def check_almost_clique_floor(pi: PropertySpec, result: LemmaResult, cap: int | None = None,
                              samples: int = 40, seed: int = 0):
    """Almost-cliques with more than ``j`` vertices have excess at least ``a``."""
    consts = property_constants(pi)
    cap = default_clique_cap(pi) if cap is None else cap
    rng = random.Random(f"floor-{seed}")
    for r in range(consts.j + 1, cap + 1):
        for shape in almost_cliques(r):
            if pi.kind == SIMPLE or shape.m <= 10:
                graphs = list(pi_variants(shape, pi))
            else:
                graphs = [random_variant(shape, pi.kind, pi.alphabet, rng) for _ in range(samples)]
            for g in graphs:
                _record(result, ex(g, pi, by_blocks=False) >= consts.a, g, r=r)


def check_clique_growth(pi: PropertySpec, result: LemmaResult, cap: int = 9,
                        samples: int = 200, seed: int = 0):
    """``ex(K_rj) >= (1-lam)/2 + r*a``; oriented cliques above K_5 are sampled."""
    consts = property_constants(pi)
    rng = random.Random(f"growth-{seed}")
    r = 1
    while r * consts.j <= cap:
        size = r * consts.j
        bound = pi.slack + r * consts.a
        if pi.kind == SIMPLE or size <= default_clique_cap(pi):
            graphs = list(pi_variants(complete_graph(size), pi))
        else:
            graphs = [random_variant(complete_graph(size), pi.kind, pi.alphabet, rng)
                      for _ in range(samples)]
        for g in graphs:
            _record(result, ex(g, pi, by_blocks=False) >= bound, g, clique=size,
                    bound=str(bound))
        r += 1


def random_forest_of_cliques(rng: random.Random, max_cliques: int = 12) -> Graph:
    """A connected tree of cliques."""
    sizes = tuple(rng.randint(1, 4) for _ in range(rng.randint(1, max_cliques)))
    g, _ = forest_of_cliques_plus_s(ForestOfCliquesPlusS(sizes, 0, 0.0), rng)
    return g


def nonleaf_holds(g: Graph) -> bool:
    counts = classify_blocks(g).counts()
    return counts[B3] <= 3 * counts[B1]


def check_nonleaf_blocks(result: LemmaResult, count: int = 1000, seed: int = 0):
    rng = random.Random(f"nonleaf-{seed}")
    for _ in range(count):
        g = random_forest_of_cliques(rng)
        _record(result, nonleaf_holds(g), g, nonleaf_holds)


def _oriented_lemmas(pi: PropertySpec, report: LemmaReport):
    tri = triangle_membership(pi)
    cyclic, transitive = tri.member("cyclic"), tri.member("transitive")
    res = report.results.setdefault(CYCLIC_IMPLIES_TRANSITIVE, LemmaResult())
    _record(res, transitive or not cyclic, complete_graph(3))
    if transitive and not cyclic:
        res = report.results.setdefault(TRANSITIVE_DIVERGES, LemmaResult())
        _record(res, ex_clique(4, pi) > Fraction(1, 4), complete_graph(4))
        res = report.results.setdefault(ORIENTED_TIGHT, LemmaResult())
        for j in range(2, default_clique_cap(pi) + 1):
            e = ex_clique(j, pi)
            _record(res, e == 0 if j == 3 else e > 0, complete_graph(j), j=j, ex=str(e))


def lemma_suite(pi: PropertySpec, n_max: int | None = None, seed: int = 0,
                cut_vertex_count: int = 500, nonleaf_count: int = 1000) -> LemmaReport:
    """Check the excess lemmas for ``pi`` on seeded and enumerated instances.

    ``n_max`` caps the largest exhaustively enumerated graphs of the half
    inequality (default 6 simple, 4 oriented or labelled).
    """
    report = LemmaReport(pi.name)
    rng = random.Random(f"cut-{seed}")
    res = report.results[CUT_VERTEX] = LemmaResult()
    for _ in range(cut_vertex_count):
        g, v = random_cut_vertex_graph(rng)
        g = random_variant(g, pi.kind, pi.alphabet, rng)
        _record(res, cut_vertex_holds(g, pi, v), g, vertex=v)

    n_small = (6 if pi.kind == SIMPLE else 5) if n_max is None else n_max
    res = report.results[HALF_LEMMA] = LemmaResult()
    check_half(pi, half_graphs(pi, seed, n_small=n_small), res)

    try:
        property_constants(pi)
    except NoDivergenceWitness:
        pass
    else:
        check_almost_clique_floor(pi, report.results.setdefault(ALMOST_CLIQUE_FLOOR, LemmaResult()),
                                  seed=seed)
        check_clique_growth(pi, report.results.setdefault(CLIQUE_GROWTH, LemmaResult()),
                            seed=seed)

    check_nonleaf_blocks(report.results.setdefault(NONLEAF_BLOCKS, LemmaResult()),
                         nonleaf_count, seed)
    if pi.kind == ORIENTED and pi.lam == HALF and pi.hereditary:
        _oriented_lemmas(pi, report)
    return report


# -- Poljak-Turzik bound -----------------------------------------------------------

def pt_bound_graphs(pi: PropertySpec, n_max: int = 7, variant_n_max: int = 5) -> Iterator[Graph]:
    """Connected graphs up to ``n_max`` vertices; every variant up to ``variant_n_max``."""
    for g in simple_graphs(n_max, connected=True):
        if pi.kind != SIMPLE and g.n <= variant_n_max:
            yield from pi_variants(g, pi)
        else:
            yield canonical_variant(g, pi.kind, pi.alphabet)


def pt_bound_counterexamples(pi: PropertySpec, graphs: Iterable[Graph]) -> list[Graph]:
    return [g for g in graphs if ms(g, pi) < pt(g.n, g.m, pi.lam)]


# -- planted reduction-rule patterns -----------------------------------------------

def _random_oriented(g: Graph, rng: random.Random, fixed: dict) -> Graph:
    arcs = []
    for u, v in g.edges():
        arc = fixed.get(frozenset((u, v)))
        arcs.append(arc or ((u, v) if rng.random() < 0.5 else (v, u)))
    return Graph(g.n, arcs, kind=ORIENTED)


def dangling_triangle_graph(seed: int, n_max: int = 12) -> Graph:
    """A random connected oriented graph with a cyclic triangle hanging off one vertex."""
    rng = random.Random(f"dangling-{seed}")
    base = random_connected_gnp(rng.randint(2, n_max - 2), rng.choice((0.3, 0.5, 0.7)), rng)
    root = rng.randrange(base.n)
    a, b = base.n, base.n + 1
    g = Graph(base.n + 2, base.edges() + [(root, a), (a, b), (root, b)])
    tri = {frozenset((root, a)): (root, a), frozenset((a, b)): (a, b), frozenset((b, root)): (b, root)}
    g = _random_oriented(g, rng, tri)
    perm = list(range(g.n))
    rng.shuffle(perm)
    return relabel(g, perm)


def triangle_path_graph(seed: int, n_max: int = 12) -> tuple[Graph, frozenset[int], bool]:
    """Two cyclic triangles meeting in a vertex ``v`` inside a longer block path.

    Returns the graph, a modulator and whether S was wired across the
    pattern so that removing ``v`` leaves the graph connected.
    """
    rng = random.Random(f"tripath-{seed}")
    across = seed % 2 == 0
    # u1 - w1 - v - w2 - u2 with cyclic triangles {u1, w1, v} and {v, w2, u2}
    u1, w1, v, w2, u2 = range(5)
    edges = {(u1, w1), (w1, v), (u1, v), (v, w2), (w2, u2), (v, u2)}
    n = 5
    sides = {}
    for root in (u1, u2):
        # each end gets at least one more block so that u1 and u2 are cut vertices
        # a single block at the root keeps both triangles in the path class
        members = [root]
        at = root
        for _ in range(rng.randint(1, 2)):
            # leave room for two S vertices
            size = min(rng.choice((2, 2, 3)), n_max - 1 - n)
            if size < 2:
                break
            new = list(range(n, n + size - 1))
            n += size - 1
            clique = [at] + new
            edges.update((min(a, b), max(a, b)) for a, b in combinations(clique, 2))
            members += new
            at = rng.choice(new)
        sides[root] = members
    s_size = rng.randint(1 if across else 0, 2)
    s = list(range(n, n + s_size))
    n += s_size
    far = [x for x in range(n) if x not in (w1, v, w2) and x not in s]
    for x in s:
        for w in far:
            if rng.random() < 0.3:
                edges.add((w, x))
    if across:
        x = s[0]
        edges.add((rng.choice(sides[u1]), x))
        edges.add((rng.choice(sides[u2]), x))
    else:
        # every S vertex stays on the u1 side, so v separates the two halves
        edges = {(a, b) for a, b in edges if not (b in s and a in sides[u2])}
    for x in s:
        if not any(w not in s for w, b in edges if b == x):
            edges.add((rng.choice(sides[u1]), x))
    g = Graph(n, edges)
    tri = {frozenset((u1, w1)): (u1, w1), frozenset((w1, v)): (w1, v), frozenset((v, u1)): (v, u1),
           frozenset((v, w2)): (v, w2), frozenset((w2, u2)): (w2, u2), frozenset((u2, v)): (u2, v)}
    g = _random_oriented(g, rng, tri)
    perm = list(range(n))
    rng.shuffle(perm)
    return relabel(g, perm), frozenset(perm[x] for x in s), across
