import math

import numpy as np
import pytest

from stlinkage.graphs import ColoredWeightedGraph, LinkageQuery
from stlinkage import oracle
from stlinkage.oracle import LabeledWalkTuple, OracleSizeError


def path_graph(n, **kw):
    return ColoredWeightedGraph.build(n, [(i, i + 1) for i in range(n - 1)], **kw)


def test_enumerate_linkages_edge():
    g = ColoredWeightedGraph.build(2, [(0, 1)])
    out = oracle.enumerate_linkages(g, {0}, {1}, 1)
    assert out == {frozenset({(0, 1)})}


def test_enumerate_linkages_c4_two_routes():
    # cycle s(0) - a(1) - t(2) - b(3), antipodal query
    g = ColoredWeightedGraph.build(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    out = oracle.enumerate_linkages(g, {0}, {2}, 1)
    assert len(out) == 2


def test_enumerate_linkages_infeasible_order():
    g = path_graph(4)
    assert oracle.enumerate_linkages(g, {0, 2}, {1, 3}, 2) == {
        frozenset({(0, 1), (2, 3)})
    }
    # both starts must route through vertex 1: no disjoint pair exists
    assert oracle.enumerate_linkages(g, {0, 1}, {2, 3}, 2) == set()
    g2 = ColoredWeightedGraph.build(3, [(0, 1), (1, 2)])
    assert oracle.enumerate_linkages(g2, {0, 2}, {1}, 2) == set()


def test_guards():
    big = path_graph(13)
    with pytest.raises(OracleSizeError):
        oracle.enumerate_linkages(big, {0}, {1}, 1)
    with pytest.raises(OracleSizeError):
        oracle.enumerate_walk_tuples(path_graph(6), LinkageQuery((0,), (5,), 1, 1, 1), 4)


def test_walk_tuple_classifier_first_principles():
    rng = np.random.default_rng(42)
    g = ColoredWeightedGraph.build(4, [(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)])
    adj = g.adjacency()
    k = 3
    for _ in range(1000):
        p = int(rng.integers(1, 3))
        walks, labels = [], []
        for _ in range(p):
            ln = int(rng.integers(1, 6))
            w = [int(rng.integers(4))]
            for _ in range(ln - 1):
                w.append(int(rng.choice(adj[w[-1]])))
            walks.append(tuple(w))
            labels.append(tuple(int(rng.integers(0, k + 1)) for _ in range(ln)))
        wt = LabeledWalkTuple(tuple(walks), tuple(labels))

        # first-principles re-derivations
        flat = [(i, j, walks[i][j], labels[i][j]) for i in range(p) for j in range(len(walks[i]))]
        used = [r for (_, _, _, r) in flat if r != 0]
        inj = len(used) == len(set(used)) and all(1 <= r <= k for r in used)
        bij = sorted(used) == list(range(1, k + 1))
        digon = any(
            labels[i][j] != 0 and walks[i][j - 1] == walks[i][j + 1]
            for i in range(p)
            for j in range(1, len(walks[i]) - 1)
        )
        ends = [w[-1] for w in walks]
        distinct_ends = len(set(ends)) == len(ends)
        assert wt.labels_injective(k) == inj
        assert wt.labels_bijective(k) == bij
        assert wt.has_labeled_digon() == digon
        assert wt.ends_distinct() == distinct_ends
        assert wt.is_admissible(k) == (inj and not digon and distinct_ends)


def test_family_cardinality_closed_form():
    # straight path, all colors distinct, unit weights: the only walk of
    # length n from one end to the other is the path itself, so the family
    # counts injective label placements: n! / (n-k)!
    for k in (1, 2, 3):
        n = 5
        g = path_graph(n)
        q = LinkageQuery((0,), (n - 1,), 1, k, k)
        fam = oracle.enumerate_walk_tuples(g, q, n)
        assert len(fam) == math.perm(n, k), (k, len(fam))


def test_forced_label_example():
    # s - a - t with weights (2, 1, 2), k = 1, w = 1: only a can be labeled
    g = ColoredWeightedGraph.build(3, [(0, 1), (1, 2)], weights=(2, 1, 2))
    q = LinkageQuery((0,), (2,), 1, 1, 1)
    fam = oracle.enumerate_walk_tuples(g, q, 3)
    assert len(fam) == 1
    # k = 2, w = 1 + 2: label a plus either endpoint; with distinct colors
    # both bijections of the two labels count, per choice of second vertex
    q2 = LinkageQuery((0,), (2,), 1, 2, 3)
    fam2 = oracle.enumerate_walk_tuples(g, q2, 3)
    assert len(fam2) == 4


def test_min_colored_linkage_and_certificates():
    g = ColoredWeightedGraph.build(4, [(0, 1), (1, 2), (2, 3), (0, 3)],
                                   colors=(1, 2, 3, 4))
    q = LinkageQuery((0,), (2,), 1, 3, 3)
    best = oracle.min_colored_linkage(g, q)
    assert best is not None and best[0] == 3
    q4 = LinkageQuery((0,), (2,), 1, 4, 4)
    assert oracle.min_colored_linkage(g, q4) is None


def test_cycle_enumeration():
    tri_plus = ColoredWeightedGraph.build(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    cycles = oracle.enumerate_cycles(tri_plus)
    assert cycles == [(0, 1, 2)]
    assert oracle.min_t_cycle(tri_plus, [0, 1, 2]) == (3, (0, 1, 2))
    assert oracle.min_t_cycle(tri_plus, [3]) is None
