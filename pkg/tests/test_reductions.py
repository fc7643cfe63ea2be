import numpy as np
import pytest

from stlinkage.graphs import ColoredWeightedGraph, LinkageQuery
from stlinkage.solver import SolverConfig
from stlinkage import oracle, reductions

CFG = SolverConfig(trials_per_length=15, recovery_trials=8, seed=77)


def path_graph(n, **kw):
    return ColoredWeightedGraph.build(n, [(i, i + 1) for i in range(n - 1)], **kw)


def cycle_graph(n, extra=()):
    edges = [(i, (i + 1) % n) for i in range(n)] + list(extra)
    return ColoredWeightedGraph.build(n, edges)


def check_cycle(graph, cyc, through=()):
    assert len(cyc) >= 3 and len(set(cyc)) == len(cyc)
    for u, v in zip(cyc, cyc[1:] + (cyc[0],)):
        assert graph.has_edge(u, v), (cyc, u, v)
    assert set(through) <= set(cyc)


def test_longest_st_path_examples():
    g = ColoredWeightedGraph.build(2, [(0, 1)])
    res = reductions.longest_st_path(g, 0, 1, 2, CFG)
    assert res.feasible and res.paths == ((0, 1),)

    g2 = ColoredWeightedGraph.build(3, [(0, 1), (1, 2), (0, 2)])
    res2 = reductions.longest_st_path(g2, 0, 2, 3, CFG)
    assert res2.feasible and res2.total_length == 3 and res2.paths == ((0, 1, 2),)

    k4 = ColoredWeightedGraph.build(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
    assert not reductions.longest_st_path(k4, 0, 1, 5, CFG).feasible


def test_longest_cycle_examples():
    tri = cycle_graph(3)
    res = reductions.longest_cycle(tri, 3, CFG)
    assert res.feasible and res.total_length == 3
    check_cycle(tri, res.cycles[0])

    c5_chord = cycle_graph(5, extra=[(0, 2)])
    res5 = reductions.longest_cycle(c5_chord, 5, CFG)
    assert res5.feasible and res5.total_length == 5
    check_cycle(c5_chord, res5.cycles[0])

    tree = path_graph(5)
    assert not reductions.longest_cycle(tree, 3, CFG).feasible

    with pytest.raises(ValueError):
        reductions.longest_cycle(tri, 2, CFG)


def test_t_cycle_examples():
    tri = cycle_graph(3)
    res = reductions.t_cycle(tri, [0, 1, 2], CFG)
    assert res.feasible and res.total_length == 3
    check_cycle(tri, res.cycles[0], through=[0, 1, 2])

    c6 = cycle_graph(6)
    res6 = reductions.t_cycle(c6, [0, 3], CFG)
    assert res6.feasible and res6.total_length == 6
    check_cycle(c6, res6.cycles[0], through=[0, 3])

    # two triangles sharing a vertex, one terminal on each non-shared side
    bowtie = ColoredWeightedGraph.build(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    assert not reductions.t_cycle(bowtie, [0, 3], CFG).feasible

    # single terminal: shortest cycle through it
    res1 = reductions.t_cycle(bowtie, [3], CFG)
    assert res1.feasible and res1.total_length == 3
    check_cycle(bowtie, res1.cycles[0], through=[3])


def test_t_cycle_no_degenerate_two_cycle():
    # a path graph has no cycle at all; the twin construction must not let t
    # close a fake length-2 loop through its twin
    g = path_graph(4)
    assert not reductions.t_cycle(g, [1, 2], CFG).feasible


def test_longest_t_cycle_examples():
    c6 = cycle_graph(6)
    # delegation when |T| >= k or k <= 3
    res = reductions.longest_t_cycle(c6, [0, 1, 2], 2, CFG)
    assert res.feasible and res.total_length == 6

    res5 = reductions.longest_t_cycle(c6, [0], 5, CFG)
    assert res5.feasible and res5.total_length == 6
    check_cycle(c6, res5.cycles[0], through=[0])

    # theta graph: terminal on the short branch, k = 5 forces the long way
    theta = ColoredWeightedGraph.build(
        5, [(0, 4), (4, 1), (0, 2), (2, 3), (3, 1), (0, 1)]
    )
    res_t = reductions.longest_t_cycle(theta, [4], 5, CFG)
    assert res_t.feasible and res_t.total_length == 5
    check_cycle(theta, res_t.cycles[0], through=[4])

    small = cycle_graph(4)
    assert not reductions.longest_t_cycle(small, [0], 5, CFG).feasible


def two_triangle_star(depot=0):
    # depot with two triangles hanging off it
    return ColoredWeightedGraph.build(
        5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]
    )


def test_vrp_flower_examples():
    g = two_triangle_star()
    res = reductions.vrp_flower(g, 0, [1], 1, CFG)
    assert res.feasible and res.total_length == 3
    check_cycle(g, res.cycles[0], through=[0, 1])

    res2 = reductions.vrp_flower(g, 0, [1, 3], 2, CFG)
    assert res2.feasible and res2.total_length == 6
    assert len(res2.cycles) == 2
    covered = set()
    for cyc in res2.cycles:
        check_cycle(g, cyc, through=[0])
        covered |= set(cyc)
    assert {1, 3} <= covered
    shared = set(res2.cycles[0]) & set(res2.cycles[1])
    assert shared == {0}

    # depot degree cannot host 3 disjoint petals
    assert not reductions.vrp_flower(g, 0, [1], 3, CFG).feasible


def test_vrp_flower_rejects_degenerate_petals():
    # a depot with one triangle and one pendant edge: only one real petal
    g = ColoredWeightedGraph.build(4, [(0, 1), (0, 2), (1, 2), (0, 3)])
    assert not reductions.vrp_flower(g, 0, [1], 2, CFG).feasible


def test_vrp_profits_examples():
    g = two_triangle_star()
    # profits: vertex weights; single client of profit 1 at vertex 1
    res = reductions.vrp_profits(g, 0, 1, 1, 1, CFG)
    assert res.feasible and res.total_length == 3

    # unattainable total profit
    assert not reductions.vrp_profits(g, 0, 1, 4, 99, CFG).feasible

    g2 = ColoredWeightedGraph.build(
        5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)],
        weights=(1, 2, 1, 3, 1),
    )
    res2 = reductions.vrp_profits(g2, 0, 2, 2, 5, CFG)
    assert res2.feasible
    profits = sorted(g2.weights[v] for v in res2.certificate)
    assert profits == [2, 3]


def test_longest_k_colored_examples():
    tri = ColoredWeightedGraph.build(3, [(0, 1), (1, 2), (0, 2)], colors=(1, 2, 3))
    # p >= l delegates to the plain solve: the chord is the shortest 2-colored path
    res = reductions.longest_k_colored_linkage(tri, [0], [2], 1, 2, 1, CFG)
    assert res.feasible and res.total_length == 2

    g = path_graph(3, colors=(1, 2, 3))
    res2 = reductions.longest_k_colored_linkage(g, [0], [2], 1, 2, 3, CFG)
    assert res2.feasible and res2.total_length == 3 and res2.paths == ((0, 1, 2),)

    # k-colored solutions exist only below the length floor
    g3 = ColoredWeightedGraph.build(3, [(0, 1), (1, 2), (0, 2)], colors=(1, 2, 3))
    res3 = reductions.longest_k_colored_linkage(g3, [0], [2], 1, 2, 4, CFG)
    assert not res3.feasible


def test_subdivision_for_edge_weights():
    g = path_graph(3)
    g1 = reductions.subdivide_for_edge_weights(g, {})
    assert g1.n == 3 + 2  # one dummy per edge at weight 1

    g3 = reductions.subdivide_for_edge_weights(g, {(0, 1): 3})
    assert g3.n == 3 + 3 + 1

    with pytest.raises(ValueError, match=">= 1"):
        reductions.subdivide_for_edge_weights(g, {(0, 1): 0})


def test_edge_weighted_solve_matches_oracle():
    rng = np.random.default_rng(12)
    done = 0
    for seed in range(40):
        r = np.random.default_rng(6000 + seed)
        n = 4
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if r.random() < 0.7]
        if not edges:
            continue
        g = ColoredWeightedGraph.build(
            n, edges, colors=[int(r.integers(1, n + 1)) for _ in range(n)]
        )
        ew = {e: int(r.integers(1, 4)) for e in g.edges}
        k = int(r.integers(1, 3))
        q = LinkageQuery((0,), (n - 1,), 1, k, k)
        res = reductions.solve_with_edge_weights(g, ew, q, CFG)
        best = oracle.min_weighted_colored_path(g, ew, q)
        if best is None:
            assert not res.feasible, (seed,)
        else:
            assert res.feasible, (seed, best)
            assert res.total_length == best[0], (seed, res.total_length, best[0])
        done += 1
        if done >= 12:
            break
    assert done >= 10


def test_reduction_traces_attached():
    g = cycle_graph(3)
    res = reductions.t_cycle(g, [0, 1, 2], CFG)
    assert res.trace is not None and "twin" in res.trace.construction
    assert res.trace.length_offset == -1
