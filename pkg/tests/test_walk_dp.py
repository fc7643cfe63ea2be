import numpy as np
import pytest

from stlinkage.fields import build_core_field
from stlinkage.graphs import ColoredWeightedGraph, LinkageQuery
from stlinkage.walk_dp import (
    VariableAssignment,
    evaluate,
    evaluate_reference,
    polynomial_degree,
)
from stlinkage import dp_kernel, oracle

from conftest import random_instance


def test_polynomial_degree():
    assert polynomial_degree(3, 3, 0) == 0
    assert polynomial_degree(5, 1, 2) == 8
    assert polynomial_degree(7, 2, 3) == 11
    with pytest.raises(ValueError):
        polynomial_degree(1, 2, 0)


def test_single_path_no_labels():
    g = ColoredWeightedGraph.build(3, [(0, 1), (1, 2)])
    q = LinkageQuery((0,), (2,), 1, 0, 0)
    spec = build_core_field(3)
    a = VariableAssignment.random(g, 0, spec, np.random.default_rng(0))
    got = evaluate(g, q, 3, a)
    assert got == spec.mul(a.edge_var(0, 1), a.edge_var(1, 2))


def test_single_path_forced_label():
    g = ColoredWeightedGraph.build(3, [(0, 1), (1, 2)], weights=(2, 1, 2))
    q = LinkageQuery((0,), (2,), 1, 1, 1)
    spec = build_core_field(3)
    a = VariableAssignment.random(g, 1, spec, np.random.default_rng(1))
    want = spec.mul(
        spec.mul(a.edge_var(0, 1), a.edge_var(1, 2)),
        spec.mul(a.vertex_var(1), a.color_var(g.colors[1], 1)),
    )
    assert evaluate(g, q, 3, a) == want


def test_empty_family_evaluates_to_zero():
    # no edge out of the source: every length evaluates to zero
    g = ColoredWeightedGraph.build(3, [(1, 2)])
    q = LinkageQuery((0,), (2,), 1, 0, 0)
    spec = build_core_field(3)
    a = VariableAssignment.random(g, 0, spec, np.random.default_rng(2))
    assert evaluate(g, q, 3, a) == 0


def test_contract_violations():
    g = ColoredWeightedGraph.build(3, [(0, 1), (1, 2)])
    spec = build_core_field(3)
    a = VariableAssignment.random(g, 0, spec, np.random.default_rng(0))
    with pytest.raises(ValueError, match="outside"):
        evaluate(g, LinkageQuery((0,), (2,), 1, 0, 0), 4, a)
    with pytest.raises(ValueError, match="normalize first"):
        evaluate(g, LinkageQuery((0,), (0, 2), 1, 0, 0), 3, a)
    with pytest.raises(ValueError, match="normalize first"):
        evaluate(g, LinkageQuery((0,), (0,), 1, 0, 0), 3, a)


def test_reference_matches_enumeration():
    done = 0
    for seed in range(120):
        drawn = random_instance(100 + seed, n_lo=3, n_hi=6, k_hi=3, max_weight=3)
        if drawn is None:
            continue
        graph, query = drawn
        rng = np.random.default_rng(seed)
        spec = build_core_field(graph.n)
        length = int(rng.integers(max(2, query.p), graph.n + 1))
        assign = VariableAssignment.random(graph, query.k, spec, rng)
        ref = evaluate_reference(graph, query, length, assign)
        fam = oracle.enumerate_walk_tuples(graph, query, length)
        assert ref == oracle.sum_walk_monomials(graph, fam, assign)
        done += 1
        if done >= 35:
            break
    assert done >= 30


def test_kernel_matches_reference():
    done = 0
    for seed in range(120):
        drawn = random_instance(300 + seed, n_lo=3, n_hi=8, k_hi=4, max_weight=4)
        if drawn is None:
            continue
        graph, query = drawn
        rng = np.random.default_rng(seed)
        spec = build_core_field(graph.n)
        assert dp_kernel.usable(spec)
        assign = VariableAssignment.random(graph, query.k, spec, rng)
        vals = dp_kernel.evaluate_lengths(graph, query, graph.n, assign)
        for ell in range(max(2, query.p), graph.n + 1):
            assert vals[ell] == evaluate_reference(graph, query, ell, assign)
        assert dp_kernel.evaluate_fixed(graph, query, graph.n, assign) == vals[graph.n]
        done += 1
        if done >= 25:
            break
    assert done >= 20


def test_kernel_flat_mode_matches_reference():
    # long sweep with small k exercises the streaming layers
    rng = np.random.default_rng(7)
    n = 12
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4]
    g = ColoredWeightedGraph.build(
        n, edges,
        [int(rng.integers(1, 7)) for _ in range(n)],
        [int(rng.integers(1, 3)) for _ in range(n)],
    )
    q = LinkageQuery((0,), (n - 1,), 1, 3, 4)
    spec = build_core_field(n)
    a = VariableAssignment.random(g, 3, spec, rng)
    vals = dp_kernel.evaluate_lengths(g, q, n, a)
    for ell in range(2, n + 1):
        assert vals[ell] == evaluate_reference(g, q, ell, a)


def test_layer_memory_is_two_deep():
    # the packed evaluator keeps exactly one previous state layer (two arrays
    # per labeled flag) plus a three-slot ring of finished-tuple aggregates
    g = ColoredWeightedGraph.build(3, [(0, 1), (1, 2)])
    q = LinkageQuery((0,), (2,), 1, 1, 1)
    spec = build_core_field(3)
    a = VariableAssignment.random(g, 1, spec, np.random.default_rng(0))
    ev = dp_kernel._Evaluator(g, q, a)
    assert ev.d0prev.shape == ev.d0cur.shape
    assert len(ev.cagg_ring) == 3
