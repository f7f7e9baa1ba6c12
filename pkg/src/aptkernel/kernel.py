"""Reduction rules, YES thresholds and the kernelization pipeline."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Union

from .blocks import (B1, B2, B3, BlockDecomposition, classify_blocks,
                     dangling_components, block_decomposition, is_forest_of_cliques)
from .graph import (ORIENTED, SIMPLE, Graph, GraphError, delete_vertices,
                    identify_vertices, induced_subgraph, survivor_map)
from .modulator import (BudgetExceeded, Modulator, find_modulator, greedy_modulator,
                        modulator_budget, modulator_gate, PROCEED, GREEDY)
from .properties import (HALF, NoDivergenceWitness, PropertyConstants, PropertySpec,
                         ex, is_cyclic_triangle, property_constants, triangle_membership,
                         ALL)

QUARTER = Fraction(1, 4)

QUADRATIC = "quadratic"
CUBIC = "cubic"
MAXCUT = "maxcut"
UNSUPPORTED = "unsupported"

DELEGATE_REASON = ("delegate: the property is Max-Cut; kernelize with an external "
                   "Max-Cut above-guarantee kernel")
OUTSIDE_REASON = ("outside the supported cases: lambda = 1/2 and the property is "
                  "non-hereditary or depends on edge labels of the triangle")

# lemma tags carried by YES witnesses
TRIVIAL = "trivial"
DANGLING = "dangling-bound"
STAR = "star-bound"
S_NEIGHBOURS = "s-neighbour-bound"
POSITIVE_BLOCKS = "positive-excess-blocks"
INTERIOR = "interior-size"
CLIQUE_WEIGHT = "clique-weight"
Q0_NEIGHBOURS = "q0-neighbour-bound"


class BoundViolation(RuntimeError):
    """A reduced non-YES instance exceeds its kernel bound."""


class PreconditionViolated(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    g: Graph
    k: Fraction
    pi: PropertySpec

    def __post_init__(self):
        k = Fraction(self.k)
        if 4 % k.denominator:
            raise ValueError(f"k = {k}: the denominator must divide 4")
        object.__setattr__(self, "k", k)
        if self.g.kind != self.pi.kind or self.g.alphabet != self.pi.alphabet:
            raise ValueError(f"{self.pi.name} needs {self.pi.kind} graphs, got {self.g.kind}")
        if not self.g.is_connected():
            raise GraphError("instances must be connected")


# -- thresholds --------------------------------------------------------------------

@dataclass(frozen=True)
class Thresholds:
    t_dangling: Fraction
    t_star: Fraction
    t_sneighbor: Fraction
    t_components: Fraction
    t_nonpath: Fraction
    t_posblocks: Fraction
    t_interior: int
    t_cliqueweight: Fraction
    t_q0: Fraction

    def as_dict(self) -> dict[str, Fraction]:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


def thresholds(consts: PropertyConstants, k) -> Thresholds:
    k = Fraction(k)
    lam, inf, a, j = consts.lam, consts.inf_ak, consts.a, consts.j
    star_rate = 16 / (1 - lam) + 2 / inf
    s_size = 6 * k / (1 - lam)
    t_star = star_rate * k - 2
    t_sneighbor = t_star * s_size
    t_components = t_sneighbor + k / inf
    t_nonpath = 4 * t_components
    return Thresholds(
        t_dangling=k / inf,
        t_star=t_star,
        t_sneighbor=t_sneighbor,
        t_components=t_components,
        t_nonpath=t_nonpath,
        t_posblocks=(star_rate * k - 1) * 6 * k / (inf * (1 - lam)) + k / inf ** 2 + (k - 1) / inf,
        t_interior=ceil(4 * k / a + (1 - lam) / (2 * a)) * j,
        t_cliqueweight=(star_rate * k - 1) * 6 * k / (a * (1 - lam)) + k / (a * inf) + (k - 1) / a,
        # components of G - U may also consist of modulator vertices alone,
        # hence the |S| - 1 term
        t_q0=t_nonpath + 4 * k + s_size - 1,
    )


def _sup_over_k(poly) -> Fraction:
    """``sup t(k)/k^2`` over ``k >= 1/4`` for ``t(k) = p2 k^2 + p1 k + p0``."""
    p0, p1, p2 = poly
    # t(k)/k^2 = p2 + p1 x + p0 x^2 with x = 1/k in (0, 4]
    cands = [Fraction(0), Fraction(4)]
    if p0 < 0:
        x = -p1 / (2 * p0)
        if 0 < x < 4:
            cands.append(x)
    return max(p2 + p1 * x + p0 * x * x for x in cands)


def _poly(fn) -> tuple[Fraction, Fraction, Fraction]:
    """Coefficients ``(p0, p1, p2)`` of a quadratic from three exact samples."""
    y0, y1, y2 = fn(Fraction(0)), fn(Fraction(1)), fn(Fraction(2))
    p2 = (y2 - 2 * y1 + y0) / 2
    p1 = y1 - y0 - p2
    return y0, p1, p2


@dataclass(frozen=True)
class BoundConstants:
    """Constants of ``|V| <= 6k/(1-lam) + (c1 + c2 (j-1) + c3 j) k^2``."""
    c1: Fraction
    c2: Fraction
    c3: Fraction
    j: int

    @property
    def leading(self) -> Fraction:
        return self.c1 + self.c2 * (self.j - 1) + self.c3 * self.j


def bound_constants(consts: PropertyConstants) -> BoundConstants:
    """Constants valid for every admissible ``k`` (all ``k >= 1/4``).

    ``c1`` covers isolated single-vertex blocks, ``c2`` blocks with fewer than
    ``j`` vertices and ``c3`` blocks with at least ``j`` vertices.
    """
    c1 = _sup_over_k(_poly(lambda k: thresholds(consts, k).t_components))
    c2 = _sup_over_k(_poly(lambda k: thresholds(consts, k).t_posblocks))
    c3 = _sup_over_k(_poly(lambda k: 2 * thresholds(consts, k).t_cliqueweight))
    return BoundConstants(c1, c2, c3, consts.j)


def kernel_size_bound(consts: PropertyConstants, k, case: str = QUADRATIC) -> int:
    k = Fraction(k)
    lam = consts.lam
    s_size = 6 * k / (1 - lam)
    if case == QUADRATIC:
        return floor(s_size + bound_constants(consts).leading * k * k)
    if case != CUBIC:
        raise ValueError(f"unknown bound case {case!r}")
    t = thresholds(consts, k)
    nonpath, positive, b2_touched = t.t_nonpath, t.t_posblocks, t.t_sneighbor
    q0_touched = t.t_q0 * s_size
    b2_q_touched = 2 * (nonpath + positive + b2_touched + q0_touched)
    b2_free = nonpath + positive + b2_touched + b2_q_touched
    blocks = nonpath + positive + b2_touched + b2_q_touched + b2_free
    # cut vertices <= blocks; zero-excess path blocks have a single interior vertex
    total = (s_size + blocks + (nonpath + positive) * t.t_interior
             + b2_touched + b2_q_touched + b2_free)
    return floor(total)


# -- dispatch ----------------------------------------------------------------------

def dispatch_case(pi: PropertySpec) -> str:
    tri = triangle_membership(pi)
    if pi.lam != HALF or tri.status == ALL:
        return QUADRATIC
    if pi.kind == SIMPLE and pi.hereditary:
        return MAXCUT
    if pi.kind == ORIENTED and pi.hereditary:
        cyclic, transitive = tri.member("cyclic"), tri.member("transitive")
        if not cyclic and not transitive:
            return MAXCUT
        if transitive and not cyclic:
            return CUBIC
    return UNSUPPORTED


# -- reduction rule 1 --------------------------------------------------------------

def _remap(s, mapping) -> frozenset[int]:
    return frozenset(mapping[v] for v in s if v in mapping)


def _has_zero_excess(g: Graph, vertices, pi: PropertySpec, consts: PropertyConstants | None) -> bool:
    # almost-cliques with more than j vertices have excess at least a > 0
    if consts is not None and len(vertices) > consts.j:
        return False
    return ex(induced_subgraph(g, vertices), pi, by_blocks=False) == 0


def _rule1(g: Graph, pi: PropertySpec, s: frozenset[int], consts) -> tuple[Graph, frozenset[int], int]:
    applied = 0
    while True:
        bd = block_decomposition(g)
        if len(bd.blocks) < 2:
            return g, s, applied
        for dc in dangling_components(g, bd):
            if _has_zero_excess(g, dc.vertices, pi, consts):
                mapping = survivor_map(g.n, dc.body)
                g = delete_vertices(g, dc.body)
                s = _remap(s, mapping)
                applied += 1
                break
        else:
            return g, s, applied


def rule1_zero_excess_dangling(inst: Instance, s=(), consts: PropertyConstants | None = None
                               ) -> tuple[Instance, frozenset[int], int]:
    """Delete zero-excess dangling components (minus their roots) until none is left.

    Returns the reduced instance, the modulator in new vertex ids and the
    number of applications.  ``k`` is unchanged.
    """
    if consts is None:
        try:
            consts = property_constants(inst.pi)
        except NoDivergenceWitness:
            consts = None
    g, s, applied = _rule1(inst.g, inst.pi, frozenset(s), consts)
    return Instance(g, inst.k, inst.pi), s, applied


# -- reduction rule 2 --------------------------------------------------------------

@dataclass(frozen=True)
class TrianglePath:
    """Two cyclic path triangles ``{v, w1, u1}`` and ``{v, w2, u2}`` meeting in ``v``."""
    v: int
    w1: int
    u1: int
    w2: int
    u2: int


IDENTIFY = "identify"
DECREMENT = "decrement"


def neighbourhood(g: Graph, s) -> frozenset[int]:
    s = frozenset(s)
    return frozenset(w for v in s for w in g.adj[v]) - s


def _check_rule2_property(pi: PropertySpec):
    if pi.lam != HALF or pi.kind != ORIENTED or not pi.hereditary:
        raise PreconditionViolated(f"{pi.name}: triangle-path rule needs a hereditary "
                                   "property of oriented graphs with lambda 1/2")
    if triangle_membership(pi).member("cyclic"):
        raise PreconditionViolated(f"{pi.name} contains the cyclic triangle")


def _pattern_at(g: Graph, bd: BlockDecomposition, ns, v) -> TrianglePath | None:
    if v in ns or v not in bd.cut_vertices:
        return None
    at = bd.blocks_at(v)
    if len(at) != 2:
        return None
    sides = []
    for i in at:
        b = bd.blocks[i]
        if bd.classes[i] != B2 or len(b) != 3 or not is_cyclic_triangle(g, b):
            return None
        inner = bd.interiors[i]
        if len(inner) != 1 or inner & ns:
            return None
        (w,) = inner
        (u,) = b - {v, w}
        sides.append((w, u))
    (w1, u1), (w2, u2) = sides
    return TrianglePath(v, w1, u1, w2, u2)


def find_triangle_path(g: Graph, s, bd: BlockDecomposition | None = None) -> TrianglePath | None:
    bd = classify_blocks(g, s) if bd is None else bd
    ns = neighbourhood(g, s)
    for v in sorted(bd.cut_vertices):
        p = _pattern_at(g, bd, ns, v)
        if p is not None:
            return p
    return None


def apply_triangle_path(g: Graph, k: Fraction, s, p: TrianglePath
                        ) -> tuple[Graph, Fraction, frozenset[int], str]:
    s = frozenset(s)
    bd = classify_blocks(g, s)
    if _pattern_at(g, bd, neighbourhood(g, s), p.v) != p:
        raise PreconditionViolated(f"no cyclic triangle path through {p.v} as given")
    split = len(g.components(ignore=[p.v])) > 1
    mapping = survivor_map(g.n, (p.v, p.w1, p.w2))
    h = delete_vertices(g, (p.v, p.w1, p.w2))
    s = _remap(s, mapping)
    if not split:
        return h, k - QUARTER, s, DECREMENT
    a, b = sorted((mapping[p.u1], mapping[p.u2]))
    merged = survivor_map(h.n, [b])
    merged[b] = merged[a]
    return identify_vertices(h, a, b), k, _remap(s, merged), IDENTIFY


def rule2_triangle_path(inst: Instance, s) -> tuple[Instance, frozenset[int], str | None]:
    """One application of the triangle-path rule, if a pattern exists.

    Returns the new instance, the remapped modulator and ``"identify"``,
    ``"decrement"`` or ``None`` when nothing matched.
    """
    _check_rule2_property(inst.pi)
    s = frozenset(s)
    p = find_triangle_path(inst.g, s)
    if p is None:
        return inst, s, None
    g, k, s, kind = apply_triangle_path(inst.g, inst.k, s, p)
    return Instance(g, k, inst.pi), s, kind


# -- YES checks --------------------------------------------------------------------

@dataclass(frozen=True)
class YesWitness:
    lemma: str
    detail: dict = field(default_factory=dict)


def block_has_positive_excess(g: Graph, block, pi: PropertySpec, consts: PropertyConstants) -> bool:
    if len(block) < 2:
        return False
    if len(block) > consts.j:
        return True
    return ex(induced_subgraph(g, block), pi, by_blocks=False) > 0


@dataclass(frozen=True)
class B2ZeroSets:
    b2_zero: frozenset[int]
    q0: frozenset[int]


def b2_zero_sets(g: Graph, s, bd: BlockDecomposition, pi: PropertySpec,
                 consts: PropertyConstants) -> B2ZeroSets:
    """Zero-excess path blocks with no interior neighbour of ``s`` and the cut
    vertices lying only in such blocks."""
    ns = neighbourhood(g, s)
    zero = frozenset(i for i in bd.of_class(B2)
                     if not bd.interiors[i] & ns
                     and not block_has_positive_excess(g, bd.blocks[i], pi, consts))
    q0 = frozenset(v for v in bd.cut_vertices if all(i in zero for i in bd.blocks_at(v)))
    return B2ZeroSets(zero, q0)


def yes_checks(inst: Instance, s, bd: BlockDecomposition, consts: PropertyConstants,
               oriented_branch: bool = False) -> YesWitness | None:
    """Return a witness for the first counting lemma that proves YES, else ``None``.

    ``inst`` must be reduced by the applicable rules and ``s`` must pass the
    modulator gate for ``inst.k``.
    """
    g, k, pi = inst.g, inst.k, inst.pi
    t = thresholds(consts, k)
    s = frozenset(s)

    dangling = dangling_components(g)
    if len(dangling) >= t.t_dangling:
        return YesWitness(DANGLING, {"count": len(dangling), "roots": sorted(d.root for d in dangling),
                                     "threshold": t.t_dangling})

    total = 0
    for x in sorted(s):
        picked = []
        for i, inner in enumerate(bd.interiors):
            hit = sorted(inner & g.adj[x])
            if hit:
                picked.append(hit[0])
        total += len(picked)
        if len(picked) >= t.t_star:
            return YesWitness(STAR, {"centre": x, "leaves": picked, "threshold": t.t_star})
    if total >= t.t_sneighbor:
        return YesWitness(S_NEIGHBOURS, {"total": total, "threshold": t.t_sneighbor})

    positive = [i for i, b in enumerate(bd.blocks) if block_has_positive_excess(g, b, pi, consts)]
    if len(positive) >= t.t_posblocks:
        return YesWitness(POSITIVE_BLOCKS, {"count": len(positive), "threshold": t.t_posblocks})

    for i, inner in enumerate(bd.interiors):
        if len(inner) >= t.t_interior:
            return YesWitness(INTERIOR, {"block": sorted(bd.blocks[i]), "interior": len(inner),
                                         "threshold": t.t_interior})

    weight = sum(len(b) // consts.j for b in bd.blocks if len(b) >= consts.j)
    if weight >= t.t_cliqueweight:
        return YesWitness(CLIQUE_WEIGHT, {"weight": weight, "threshold": t.t_cliqueweight})

    if oriented_branch:
        q0 = b2_zero_sets(g, s, bd, pi, consts).q0
        for x in sorted(s):
            hit = sorted(q0 & g.adj[x])
            if len(hit) >= t.t_q0:
                return YesWitness(Q0_NEIGHBOURS, {"centre": x, "count": len(hit),
                                                  "threshold": t.t_q0})
    return None


@dataclass(frozen=True)
class B2Partition:
    positive: int
    touched: int
    cut_touched: int
    free: int
    q0_touched: int
    other: int

    def holds(self) -> bool:
        base = self.other + self.positive + self.touched
        return (self.cut_touched <= 2 * (base + self.q0_touched)
                and self.free <= base + self.cut_touched)


def b2_partition(g: Graph, s, bd: BlockDecomposition, pi: PropertySpec,
                 consts: PropertyConstants) -> B2Partition:
    """Split path blocks into positive / interior-touched / cut-touched / free.

    ``other`` counts B1 and B>=3 blocks; ``q0_touched`` is ``|Q0 & N(S)|``.
    """
    ns = neighbourhood(g, s)
    pos = touched = cut_touched = free = 0
    for i in bd.of_class(B2):
        b = bd.blocks[i]
        if block_has_positive_excess(g, b, pi, consts):
            pos += 1
        elif bd.interiors[i] & ns:
            touched += 1
        elif b & ns:
            cut_touched += 1
        else:
            free += 1
    q0 = b2_zero_sets(g, s, bd, pi, consts).q0
    other = len(bd.of_class(B1)) + len(bd.of_class(B3))
    return B2Partition(pos, touched, cut_touched, free, len(q0 & ns), other)


# -- pipeline ----------------------------------------------------------------------

@dataclass
class Yes:
    witness: YesWitness
    stats: dict = field(default_factory=dict)
    tag = "yes"


@dataclass
class Kernel:
    g: Graph
    k: Fraction
    s: frozenset[int]
    bound: int
    case: str
    stats: dict = field(default_factory=dict)
    tag = "kernel"


@dataclass
class Unsupported:
    reason: str
    stats: dict = field(default_factory=dict)
    tag = "unsupported"


@dataclass
class ModulatorTooLarge:
    size: int
    limit: Fraction
    method: str
    stats: dict = field(default_factory=dict)
    tag = "modulator_too_large"


Outcome = Union[Yes, Kernel, Unsupported, ModulatorTooLarge]


def _modulator(g: Graph, k: Fraction, lam: Fraction) -> Modulator:
    try:
        return find_modulator(g, modulator_budget(k, lam))
    except BudgetExceeded:
        return Modulator(greedy_modulator(g), GREEDY, False)


def _guard_modulator(g: Graph, s):
    if not is_forest_of_cliques(g, s):
        raise RuntimeError("modulator no longer leaves a forest of cliques")


def kernelize(inst: Instance) -> Outcome:
    """Reduce ``inst`` to an equivalent kernel or decide it.

    Raises :class:`BoundViolation` if a reduced instance that no counting
    check proves YES is still larger than the kernel bound.
    """
    g, k, pi = inst.g, inst.k, inst.pi
    stats = {"rule1": 0, "rule2_identify": 0, "rule2_decrement": 0}
    if k <= 0:
        return Yes(YesWitness(TRIVIAL, {"k": k}), stats)
    case = dispatch_case(pi)
    stats["case"] = case
    if case == MAXCUT:
        return Unsupported(DELEGATE_REASON, stats)
    if case == UNSUPPORTED:
        return Unsupported(OUTSIDE_REASON, stats)
    try:
        consts = property_constants(pi)
    except NoDivergenceWitness as exc:
        return Unsupported(f"no divergence witness: {exc}", stats)

    mod = _modulator(g, k, pi.lam)
    stats["modulator_size"] = len(mod.s)
    stats["modulator_method"] = mod.method
    limit = 6 * k / (1 - pi.lam)
    if modulator_gate(mod.s, k, pi.lam) != PROCEED:
        return ModulatorTooLarge(len(mod.s), limit, mod.method, stats)
    s = mod.s

    while True:
        g, s, n1 = _rule1(g, pi, s, consts)
        stats["rule1"] += n1
        if n1:
            _guard_modulator(g, s)
        if case != CUBIC:
            break
        p = find_triangle_path(g, s)
        if p is None:
            break
        g, k, s, kind = apply_triangle_path(g, k, s, p)
        stats["rule2_" + kind] += 1
        _guard_modulator(g, s)
        if k <= 0:
            return Yes(YesWitness(TRIVIAL, {"k": k}), stats)

    if modulator_gate(s, k, pi.lam) != PROCEED:
        # k dropped below what the modulator was sized for
        mod = _modulator(g, k, pi.lam)
        stats["modulator_size"] = len(mod.s)
        stats["modulator_method"] = mod.method
        if modulator_gate(mod.s, k, pi.lam) != PROCEED:
            return ModulatorTooLarge(len(mod.s), 6 * k / (1 - pi.lam), mod.method, stats)
        s = mod.s

    reduced = Instance(g, k, pi)
    bd = classify_blocks(g, s)
    witness = yes_checks(reduced, s, bd, consts, oriented_branch=case == CUBIC)
    if witness is not None:
        return Yes(witness, stats)
    bound = kernel_size_bound(consts, k, QUADRATIC if case == QUADRATIC else CUBIC)
    if g.n > bound:
        raise BoundViolation(f"{pi.name}, k={k}: reduced instance has {g.n} vertices "
                             f"but the bound is {bound}")
    return Kernel(g, k, s, bound, case, stats)
