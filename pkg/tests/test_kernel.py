import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from aptkernel.blocks import B2, classify_blocks, is_forest_of_cliques
from aptkernel.graph import Graph, GraphError, complete_graph, oriented
from aptkernel.kernel import (CUBIC, DANGLING, DECREMENT, IDENTIFY, MAXCUT, Q0_NEIGHBOURS,
                              QUADRATIC, TRIVIAL, UNSUPPORTED, BoundViolation, Instance, Kernel,
                              PreconditionViolated, TrianglePath, Unsupported, Yes,
                              apply_triangle_path, b2_partition, b2_zero_sets, bound_constants,
                              dispatch_case, find_triangle_path, kernel_size_bound, kernelize,
                              rule1_zero_excess_dangling, rule2_triangle_path, thresholds,
                              yes_checks)
from aptkernel.oracle import (corpus_graph, dangling_triangle_graph, forest_of_cliques_plus_s,
                              ForestOfCliquesPlusS, solve_apt, triangle_path_graph)
from aptkernel.properties import (acyclic_oriented, balanced_signed, bipartite, ex,
                                  property_constants, qcolourable)

QCOL3 = qcolourable(3)
ACYC = acyclic_oriented()
QCOL3_CONSTS = property_constants(QCOL3)
ACYC_CONSTS = property_constants(ACYC)


# -- instances ---------------------------------------------------------------------

def test_instance_validates_k_and_kind():
    Instance(complete_graph(3), F(3, 4), QCOL3)
    with pytest.raises(ValueError):
        Instance(complete_graph(3), F(1, 3), QCOL3)
    with pytest.raises(ValueError):
        Instance(complete_graph(3), 1, ACYC)
    with pytest.raises(GraphError):
        Instance(Graph(2, []), 1, QCOL3)


def test_nonpositive_k_is_trivially_yes():
    out = kernelize(Instance(complete_graph(3), 0, QCOL3))
    assert isinstance(out, Yes) and out.witness.lemma == TRIVIAL


# -- thresholds and bounds ---------------------------------------------------------

def test_qcol3_thresholds_at_one():
    t = thresholds(QCOL3_CONSTS, 1).as_dict()
    assert t == {"t_dangling": 6, "t_star": 58, "t_sneighbor": 1044, "t_components": 1050,
                 "t_nonpath": 4200, "t_posblocks": 6408, "t_interior": 27,
                 "t_cliqueweight": 2136, "t_q0": 4221}


def test_acyclic_thresholds_at_one():
    t = thresholds(ACYC_CONSTS, 1).as_dict()
    assert t == {"t_dangling": 4, "t_star": 38, "t_sneighbor": 456, "t_components": 460,
                 "t_nonpath": 1840, "t_posblocks": 1888, "t_interior": 20,
                 "t_cliqueweight": 472, "t_q0": 1855}


@pytest.mark.parametrize("k", [F(1, 4), F(1, 2), 1, 2, 3, 5, 10])
def test_q0_threshold_dominates_the_closed_form(k):
    k = F(k)
    inf = ACYC_CONSTS.inf_ak
    closed = ((32 + 2 / inf) * k - 2) * 48 * k - 4 * k / inf + 4 * k
    assert thresholds(ACYC_CONSTS, k).t_q0 >= closed
    if k == 1:
        assert closed == 1812


def test_bound_constants():
    bc = bound_constants(QCOL3_CONSTS)
    assert (bc.c1, bc.c2, bc.c3, bc.leading) == (1080, 6480, 4320, 27000)
    bc = bound_constants(ACYC_CONSTS)
    assert (bc.c1, bc.c2, bc.c3, bc.leading) == (480, 1920, 960, 10080)


def test_kernel_bounds():
    assert [kernel_size_bound(QCOL3_CONSTS, k) for k in (1, 2, 3)] == [27018, 108036, 243054]
    assert [kernel_size_bound(ACYC_CONSTS, k, CUBIC) for k in (1, 2, 3)] == \
        [299132, 2183860, 7128684]
    with pytest.raises(ValueError):
        kernel_size_bound(ACYC_CONSTS, 1, "linear")


@pytest.mark.parametrize("consts", [QCOL3_CONSTS, ACYC_CONSTS, property_constants(qcolourable(4))])
def test_bound_constants_dominate_thresholds(consts):
    bc = bound_constants(consts)
    for q in range(1, 41):
        k = F(q, 4)
        t = thresholds(consts, k)
        assert t.t_components <= bc.c1 * k * k
        assert t.t_posblocks <= bc.c2 * k * k
        assert 2 * t.t_cliqueweight <= bc.c3 * k * k


def test_doubling_k_scales_like_the_degree():
    for k in (1, 2, 4, 8):
        assert kernel_size_bound(QCOL3_CONSTS, 2 * k) <= 4 * kernel_size_bound(QCOL3_CONSTS, k)
        assert kernel_size_bound(ACYC_CONSTS, 2 * k, CUBIC) <= \
            8 * kernel_size_bound(ACYC_CONSTS, k, CUBIC)
    big = kernel_size_bound(QCOL3_CONSTS, 64) / kernel_size_bound(QCOL3_CONSTS, 32)
    assert 3.99 < big <= 4


# -- dispatch ----------------------------------------------------------------------

def test_dispatch():
    assert dispatch_case(QCOL3) == QUADRATIC
    assert dispatch_case(qcolourable(4)) == QUADRATIC
    assert dispatch_case(ACYC) == CUBIC
    assert dispatch_case(bipartite()) == MAXCUT
    assert dispatch_case(balanced_signed()) == UNSUPPORTED


def test_bipartite_is_delegated():
    out = kernelize(Instance(complete_graph(3), 1, bipartite()))
    assert isinstance(out, Unsupported) and out.reason.startswith("delegate")


def test_balanced_signed_is_unsupported():
    g = Graph(3, [(0, 1, 0), (1, 2, 1), (0, 2, 1)], kind="labelled", alphabet=2)
    out = kernelize(Instance(g, 1, balanced_signed()))
    assert isinstance(out, Unsupported) and not out.reason.startswith("delegate")


# -- rule 1 ------------------------------------------------------------------------

def _triangle_on_path():
    # path 0 -> 1 -> 2 with the cyclic triangle 2 -> 3 -> 4 -> 2
    return oriented(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 2)])


def test_rule1_removes_zero_excess_triangle():
    inst = Instance(_triangle_on_path(), 1, ACYC)
    reduced, s, count = rule1_zero_excess_dangling(inst)
    assert count == 1 and reduced.g == oriented(3, [(0, 1), (1, 2)])
    assert reduced.k == 1 and ex(reduced.g, ACYC) == ex(inst.g, ACYC)


def test_rule1_keeps_transitive_triangle_and_edges():
    g = oriented(5, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 4)])
    reduced, _, count = rule1_zero_excess_dangling(Instance(g, 1, ACYC))
    assert count == 0 and reduced.g == g


def test_rule1_never_fires_for_qcol3():
    g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 4)])
    assert rule1_zero_excess_dangling(Instance(g, 1, QCOL3))[2] == 0


def test_rule1_leaves_a_single_block_alone():
    g = oriented(3, [(0, 1), (1, 2), (2, 0)])
    assert rule1_zero_excess_dangling(Instance(g, 1, ACYC))[2] == 0


@pytest.mark.parametrize("seed", range(30))
def test_rule1_preserves_excess_on_planted_triangles(seed):
    g = dangling_triangle_graph(seed)
    reduced, _, count = rule1_zero_excess_dangling(Instance(g, 1, ACYC))
    assert count >= 1
    assert ex(reduced.g, ACYC) == ex(g, ACYC)


# -- rule 2 ------------------------------------------------------------------------

def _two_triangles(extra=()):
    # cyclic triangles 0 -> 1 -> 2 -> 0 and 0 -> 3 -> 4 -> 0, pendants 2 -> 5, 4 -> 6
    arcs = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0), (2, 5), (4, 6)]
    n = 8 if extra else 7
    return oriented(n, arcs + list(extra))


def test_rule2_identify():
    inst = Instance(_two_triangles(), 1, ACYC)
    assert find_triangle_path(inst.g, ()) == TrianglePath(0, 1, 2, 3, 4)
    reduced, s, kind = rule2_triangle_path(inst, ())
    assert kind == IDENTIFY and reduced.k == 1
    assert reduced.g.n == 3 and reduced.g.m == 2
    assert ex(reduced.g, ACYC) == ex(inst.g, ACYC)


def test_rule2_decrement_when_the_pattern_does_not_split():
    g = _two_triangles([(7, 5), (7, 6)])
    reduced, s, kind = rule2_triangle_path(Instance(g, 1, ACYC), {7})
    assert kind == DECREMENT and reduced.k == F(3, 4)
    assert ex(reduced.g, ACYC) == ex(g, ACYC) - F(1, 4)
    assert is_forest_of_cliques(reduced.g, s) and len(s) == 1


def test_rule2_does_not_fire_when_interior_touches_s():
    g = _two_triangles([(7, 5), (7, 6), (7, 1)])
    assert find_triangle_path(g, {7}) is None
    _, _, kind = rule2_triangle_path(Instance(g, 1, ACYC), {7})
    assert kind is None


def test_rule2_rejects_transitive_triangles():
    g = oriented(7, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (4, 0), (2, 5), (4, 6)])
    assert find_triangle_path(g, ()) is None


def test_rule2_precondition_checks():
    with pytest.raises(PreconditionViolated):
        rule2_triangle_path(Instance(complete_graph(3), 1, QCOL3), ())
    with pytest.raises(PreconditionViolated):
        apply_triangle_path(_two_triangles(), F(1), (), TrianglePath(0, 3, 4, 1, 2))


@pytest.mark.parametrize("seed", range(40))
def test_rule2_on_planted_patterns(seed):
    g, s, across = triangle_path_graph(seed)
    reduced, s2, kind = rule2_triangle_path(Instance(g, 1, ACYC), s)
    assert kind == (DECREMENT if across else IDENTIFY)
    drop = F(1, 4) if across else 0
    assert ex(reduced.g, ACYC) == ex(g, ACYC) - drop
    assert reduced.k == 1 - drop
    assert is_forest_of_cliques(reduced.g, s2)


# -- YES checks --------------------------------------------------------------------

def test_star_with_six_leaves_is_yes_by_dangling_count():
    g = Graph(7, [(0, i) for i in range(1, 7)])
    inst = Instance(g, 1, QCOL3)
    out = kernelize(inst)
    assert isinstance(out, Yes) and out.witness.lemma == DANGLING
    assert out.witness.detail["count"] == 6
    assert solve_apt(inst)


def test_star_with_five_leaves_is_a_kernel():
    g = Graph(6, [(0, i) for i in range(1, 6)])
    out = kernelize(Instance(g, 1, QCOL3))
    assert isinstance(out, Kernel) and out.case == QUADRATIC and out.g == g


def _q0_chain(m):
    """Chain of ``m`` cyclic triangles plus a source ``s`` on every shared vertex.

    Triangle ``i`` is ``c(i-1) -> x(i) -> c(i) -> c(i-1)``; ``s`` also points
    to ``x`` of both end triangles.
    """
    c = list(range(m + 1))
    x = list(range(m + 1, 2 * m + 1))
    s = 2 * m + 1
    arcs = []
    for i in range(1, m + 1):
        arcs += [(c[i - 1], x[i - 1]), (x[i - 1], c[i]), (c[i], c[i - 1])]
    arcs += [(s, c[i]) for i in range(1, m)]
    arcs += [(s, x[0]), (s, x[m - 1])]
    return oriented(2 * m + 2, arcs), s, arcs


def test_q0_neighbour_count_proves_yes():
    m = 106
    g, s, arcs = _q0_chain(m)
    k = F(1, 4)
    assert thresholds(ACYC_CONSTS, k).t_q0 == 103
    inst = Instance(g, k, ACYC)
    bd = classify_blocks(g, {s})
    assert len(b2_zero_sets(g, {s}, bd, ACYC, ACYC_CONSTS).q0) == m - 3
    witness = yes_checks(inst, {s}, bd, ACYC_CONSTS, oriented_branch=True)
    assert witness.lemma == Q0_NEIGHBOURS and witness.detail["count"] == 103
    # two arcs per triangle plus every arc out of the source s is acyclic
    keep = [a for a in arcs if not (a[0] <= m and a[1] <= m)]
    assert len(keep) == 2 * m + (m - 1) + 2
    lam_bound = F(1, 2) * g.m + F(1, 4) * (g.n - 1)
    assert len(keep) >= lam_bound + k
    witness_graph = oriented(g.n, keep)
    assert ACYC.membership(witness_graph)


def test_q0_check_needs_the_oriented_branch():
    g, s, _ = _q0_chain(106)
    bd = classify_blocks(g, {s})
    assert yes_checks(Instance(g, F(1, 4), ACYC), {s}, bd, ACYC_CONSTS) is None


def test_q0_vertices_lie_in_two_path_blocks():
    rng = random.Random(5)
    for _ in range(50):
        fam = ForestOfCliquesPlusS([3] * rng.randint(2, 6) + [2] * rng.randint(0, 3), 2, 0.4)
        g, s = forest_of_cliques_plus_s(fam, rng)
        bd = classify_blocks(g, s)
        sets = b2_zero_sets(g, s, bd, QCOL3, QCOL3_CONSTS)
        for v in sets.q0:
            at = bd.blocks_at(v)
            assert len(at) == 2 and all(bd.classes[i] == B2 for i in at)


@pytest.mark.parametrize("pi", [QCOL3, ACYC])
def test_path_block_partition_holds_on_corpus(pi):
    consts = property_constants(pi)
    for seed in range(1, 61):
        g = corpus_graph(seed, pi)
        out = kernelize(Instance(g, 1, pi))
        if isinstance(out, Kernel):
            bd = classify_blocks(out.g, out.s)
            assert b2_partition(out.g, out.s, bd, pi, consts).holds()


# -- pipeline ----------------------------------------------------------------------

@given(st.integers(1, 10 ** 6), st.sampled_from([F(1, 4), F(1, 2), 1, 2]))
def test_kernel_is_equivalent_and_within_bound(seed, k):
    for pi in (QCOL3, ACYC):
        g = corpus_graph(seed, pi, max_vertices=9)
        inst = Instance(g, k, pi)
        out = kernelize(inst)
        answer = solve_apt(inst)
        if isinstance(out, Yes):
            assert answer
        else:
            assert isinstance(out, Kernel)
            assert out.g.n <= out.bound
            assert is_forest_of_cliques(out.g, out.s)
            assert solve_apt(Instance(out.g, out.k, pi)) == answer


def test_bound_violation_is_a_runtime_error():
    assert issubclass(BoundViolation, RuntimeError)


def test_rule2_applications_reported_in_stats():
    out = kernelize(Instance(_two_triangles(), 1, ACYC))
    assert out.stats["rule2_identify"] == 1 and out.stats["rule2_decrement"] == 0
    assert out.stats["case"] == CUBIC
