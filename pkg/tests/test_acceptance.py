"""Acceptance criteria, one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
The scaling criterion (10) dominates the runtime; expect several minutes on
one core.
"""

import time
from itertools import combinations

import numpy as np
import pytest

from stlinkage.fields import build_core_field, prime_field
from stlinkage.graphs import ColoredWeightedGraph, Digraph, LinkageQuery, validate_solution
from stlinkage.matroids import LinearMatroid, lossy_truncate
from stlinkage.walk_dp import VariableAssignment, evaluate, polynomial_degree
from stlinkage.solver import SolverConfig, solve
from stlinkage.frameworks import solve_ranked
from stlinkage.hashing import perfect_hash_family, separation_family
from stlinkage.det_linkage import solve_longest_linkage, validate_digraph_linkage
from stlinkage.generator import generate_instance
from stlinkage import bench, oracle, reductions

from conftest import random_instance


def report(num: int, ok: bool, detail: str):
    line = f"ACCEPTANCE {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    assert ok, line


def corpus_pairs(dp_corpus):
    """Deterministic (instance, length, assignments) triples shared by the
    polynomial criteria."""
    out = []
    for idx, inst in enumerate(dp_corpus):
        g, q = inst.graph, inst.query
        rng = np.random.default_rng(1000 + idx)
        length = int(rng.integers(2, g.n + 1))
        spec = build_core_field(g.n)
        assigns = [VariableAssignment.random(g, q.k, spec, rng) for _ in range(10)]
        out.append((g, q, length, assigns))
    return out


def test_acceptance_01_dp_matches_enumeration(dp_corpus):
    t0 = time.time()
    checked = 0
    for g, q, length, assigns in corpus_pairs(dp_corpus):
        family = oracle.enumerate_walk_tuples(g, q, length)
        for assign in assigns:
            want = oracle.sum_walk_monomials(g, family, assign)
            got = evaluate(g, q, length, assign)
            assert got == want, (g, q, length)
            checked += 1
    dt = time.time() - t0
    report(1, dt < 60, f"{checked} evaluations equal the enumerated sums exactly ({dt:.1f}s)")


def test_acceptance_02_cancellation(dp_corpus):
    zero_sites = 0
    for g, q, length, assigns in corpus_pairs(dp_corpus):
        best = oracle.min_colored_linkage(g, q)
        if best is not None and best[0] <= length:
            continue
        for assign in assigns:
            assert evaluate(g, q, length, assign) == 0, (g, q, length)
            zero_sites += 1
    report(2, zero_sites > 0, f"{zero_sites} evaluations on certified-empty instances, all exactly zero")


def test_acceptance_03_nonvanishing_rate(dp_corpus):
    t0 = time.time()
    tested = 0
    worst = 1.0
    for idx, inst in enumerate(dp_corpus):
        if tested >= 12:
            break
        g, q = inst.graph, inst.query
        best = oracle.min_colored_linkage(g, q)
        if best is None:
            continue
        length = best[0]
        spec = build_core_field(g.n)
        rng = np.random.default_rng(5000 + idx)
        nonzero = 0
        for _ in range(400):
            assign = VariableAssignment.random(g, q.k, spec, rng)
            if evaluate(g, q, length, assign) != 0:
                nonzero += 1
        rate = nonzero / 400
        worst = min(worst, rate)
        assert rate >= 0.45, (idx, rate)
        tested += 1
    dt = time.time() - t0
    report(3, tested >= 10 and dt < 120,
           f"nonzero rate >= 0.45 on {tested} solvable instances (worst {worst:.3f}, {dt:.1f}s)")


def test_acceptance_04_end_to_end_optimality():
    done = 0
    seed = 0
    while done < 200:
        seed += 1
        drawn = random_instance(40_000 + seed, n_lo=3, n_hi=8, k_hi=4, max_weight=5)
        if drawn is None:
            continue
        graph, query = drawn
        res = solve(graph, query, SolverConfig(trials_per_length=20, recovery_trials=8, seed=seed))
        best = oracle.min_colored_linkage(graph, query)
        if best is None:
            assert res.infeasible, (seed, "solver claims feasible on infeasible instance")
        else:
            assert not res.infeasible, (seed, "solver missed a feasible instance")
            assert res.solution.total_length == best[0], (seed, res.solution.total_length, best[0])
            ok, diags = validate_solution(graph, query, res.solution)
            assert ok, (seed, diags)
        done += 1
    report(4, True, "200/200 random instances match the oracle optimum and validate")


def test_acceptance_05_degree_law(dp_corpus):
    checked = 0
    instances = 0
    for inst in dp_corpus:
        if instances >= 20:
            break
        g, q = inst.graph, inst.query
        length = g.n  # the full-length family is the richest one
        family = oracle.enumerate_walk_tuples(g, q, length)
        if not family:
            continue
        instances += 1
        want = polynomial_degree(length, q.p, q.k)
        for wt in family:
            deg = sum(len(w) - 1 for w in wt.walks) + 2 * sum(
                1 for _ in wt.labeled_positions()
            )
            assert deg == want, (wt, deg, want)
            checked += 1
    report(5, instances >= 20 and checked >= 100,
           f"{checked} enumerated monomials over {instances} instances all have degree l - p + 2k")


def test_acceptance_06_truncation():
    rng = np.random.default_rng(99)
    spec5 = prime_field(5)
    dep_checked = 0
    survival = {1: [0, 0], 2: [0, 0], 3: [0, 0]}  # k -> [hits, trials]
    cases = 0
    while cases < 500 or any(t < 200 for _, t in survival.values()):
        cases += 1
        rows = [[int(rng.integers(5)) for _ in range(5)] for _ in range(3)]
        if cases % 2 == 0:
            # plant dependence: copy or scale one column into another
            src, dst = (int(x) for x in rng.choice(5, size=2, replace=False))
            scale = int(rng.integers(5))
            for r in rows:
                r[dst] = (r[src] * scale) % 5
        m = LinearMatroid(spec5, tuple(tuple(r) for r in rows))
        size = int(rng.integers(1, 4))
        subset = tuple(sorted(int(x) for x in rng.choice(5, size=size, replace=False)))
        indep = m.is_independent(subset)
        trunc = lossy_truncate(m, size, rng)
        got = trunc.is_independent(subset)
        if not indep:
            assert not got, (m, subset)
            dep_checked += 1
        else:
            stats = survival[size]
            if stats[1] < 200:
                stats[0] += int(got)
                stats[1] += 1
        if cases > 20_000:
            break
    rates = {k: h / t for k, (h, t) in survival.items() if t}
    ok = cases >= 500 and dep_checked >= 100 and all(
        t >= 200 for _, t in survival.values()
    ) and all(r >= 0.40 for r in rates.values())
    report(6, ok,
           f"{cases} cases, {dep_checked} dependent sets stayed dependent; survival "
           + ", ".join(f"k={k}: {r:.2f}" for k, r in sorted(rates.items())))


def test_acceptance_07_framework_end_to_end():
    agree = 0
    seed = 0
    while agree < 12:
        seed += 1
        rng = np.random.default_rng(7700 + seed)
        n = int(rng.integers(4, 8))
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5]
        if not edges:
            continue
        g = ColoredWeightedGraph.build(n, edges)
        m = LinearMatroid(
            prime_field(5),
            tuple(tuple(int(rng.integers(5)) for _ in range(n)) for _ in range(3)),
        )
        k = int(rng.integers(1, 4))
        verts = [int(x) for x in rng.permutation(n)]
        q = LinkageQuery((verts[0],), (verts[1],), 1, k, k)
        res = solve_ranked(g, m, q, SolverConfig(trials_per_length=8, recovery_trials=6, seed=seed),
                           rounds=20)
        best = oracle.min_colored_linkage(g, q, matroid=m)
        if best is None:
            assert res.infeasible, (seed,)
        else:
            assert res.solution is not None, (seed, best[0])
            assert res.solution.total_length == best[0], (seed,)
            ok, diags = validate_solution(g, q, res.solution, matroid=m)
            assert ok, (seed, diags)
        agree += 1
    report(7, True, f"{agree} random 3-row frameworks match the rank-oracle optimum (20 rounds)")


def test_acceptance_08_family_coverage():
    for n in range(4, 11):
        for ell in range(1, min(4, n) + 1):
            fam = perfect_hash_family(n, ell)
            for subset in combinations(range(n), ell):
                assert fam.covers(subset), (n, ell, subset)
    combos = [
        (6, (1, 1)), (6, (2, 1)), (6, (2, 2)), (6, (1, 1, 1)), (6, (2, 1, 1)),
        (10, (1, 1)), (10, (2, 1)), (10, (3, 1)), (10, (2, 2)), (10, (1, 1, 1)),
    ]
    for n, sizes in combos:
        fam = separation_family(n, len(sizes), sizes)

        def tuples(remaining, szs):
            if not szs:
                yield ()
                return
            for group in combinations(remaining, szs[0]):
                rest = [x for x in remaining if x not in set(group)]
                for tail in tuples(rest, szs[1:]):
                    yield (list(group),) + tail

        for groups in tuples(list(range(n)), list(sizes)):
            assert fam.separates(groups), (n, sizes, groups)
    report(8, True, "perfect-hash and separation coverage verified exhaustively (n <= 10, l <= 4, q <= 3)")


def test_acceptance_09_deterministic_digraph():
    done = 0
    seed = 0
    while done < 200:
        seed += 1
        rng = np.random.default_rng(90_000 + seed)
        n = int(rng.integers(3, 9))
        arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.3]
        dg = Digraph(n, tuple(arcs))
        p = int(rng.integers(1, 3))
        if n < 2 * p:
            continue
        k = int(rng.integers(0, 6))
        verts = [int(x) for x in rng.permutation(n)]
        S, T = sorted(verts[:p]), sorted(verts[p : 2 * p])
        got = solve_longest_linkage(dg, S, T, p, k)
        best = oracle.longest_linkage_digraph(dg, S, T, p)
        feasible = best is not None and best[0] >= k
        if got is None:
            assert not feasible, (seed, best)
        else:
            ok, diags = validate_digraph_linkage(dg, S, T, p, k, got)
            assert ok and feasible, (seed, diags)
        done += 1
    report(9, True, "200/200 digraphs: feasibility verdicts match the oracle; all linkages validate")


def test_acceptance_10_scaling():
    bench.time_fixed_sweep(12, 5, 6, seed=5)  # warm the JIT before timing
    t14 = bench.time_fixed_sweep(40, 14, 18, seed=5)
    t15 = bench.time_fixed_sweep(40, 15, 18, seed=5)
    ratio = t15 / t14
    assert 1.5 <= ratio <= 3.0, (t14, t15, ratio)

    inst = generate_instance(40, avg_degree=2.1, n_colors=40, p=1, k=16, seed=3)
    t0 = time.time()
    res = solve(inst.graph, inst.query, SolverConfig(trials_per_length=4, recovery_trials=4, seed=123))
    dt = time.time() - t0
    assert res.solution is not None
    ok, diags = validate_solution(inst.graph, inst.query, res.solution)
    assert ok, diags
    assert dt < 300, f"full solve took {dt:.0f}s"
    report(10, True,
           f"k=15/k=14 sweep ratio {ratio:.2f} in [1.5, 3.0]; full n=40 k=16 solve {dt:.0f}s < 300s")


def _draw_graph(rng, n_hi=8, density=0.5, max_weight=1):
    n = int(rng.integers(4, n_hi))
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < density]
    if not edges:
        return None
    weights = [int(rng.integers(1, max_weight + 1)) for _ in range(n)]
    colors = [int(rng.integers(1, n + 1)) for _ in range(n)]
    return ColoredWeightedGraph.build(n, edges, colors, weights)


def test_acceptance_11_reduction_roundtrips():
    cfg = SolverConfig(trials_per_length=20, recovery_trials=8, seed=11)
    counts = {}

    # shortest cycle through all terminals
    done, seed = 0, 0
    while done < 30:
        seed += 1
        rng = np.random.default_rng(111_000 + seed)
        g = _draw_graph(rng)
        if g is None:
            continue
        tsize = int(rng.integers(1, 5))
        T = sorted(int(x) for x in rng.choice(g.n, size=min(tsize, g.n), replace=False))
        res = reductions.t_cycle(g, T, cfg)
        best = oracle.min_t_cycle(g, T)
        if best is None:
            assert not res.feasible, (seed, T)
        else:
            assert res.feasible and res.total_length == best[0], (seed, T, best[0])
        done += 1
    counts["t-cycle"] = done

    # shortest long cycle through terminals
    done, seed = 0, 0
    while done < 30:
        seed += 1
        rng = np.random.default_rng(222_000 + seed)
        g = _draw_graph(rng)
        if g is None:
            continue
        tsize = int(rng.integers(1, 4))
        T = sorted(int(x) for x in rng.choice(g.n, size=min(tsize, g.n), replace=False))
        k = int(rng.integers(3, 6))
        res = reductions.longest_t_cycle(g, T, k, cfg)
        best = oracle.min_long_t_cycle(g, T, k)
        if best is None:
            assert not res.feasible, (seed, T, k)
        else:
            assert res.feasible and res.total_length == best[0], (seed, T, k, best[0])
        done += 1
    counts["longest-t-cycle"] = done

    # depot flowers
    done, seed = 0, 0
    while done < 30:
        seed += 1
        rng = np.random.default_rng(333_000 + seed)
        g = _draw_graph(rng, n_hi=8, density=0.55)
        if g is None:
            continue
        depot = int(rng.integers(g.n))
        others = [v for v in range(g.n) if v != depot]
        tsize = int(rng.integers(1, 4))
        T = sorted(int(x) for x in rng.choice(others, size=min(tsize, len(others)), replace=False))
        p = int(rng.integers(1, 3))
        res = reductions.vrp_flower(g, depot, T, p, cfg)
        best = oracle.min_vrp_flower(g, depot, T, p)
        if best is None:
            assert not res.feasible, (seed, depot, T, p)
        else:
            assert res.feasible and res.total_length == best[0], (
                seed, depot, T, p, res.total_length, best[0],
            )
        done += 1
    counts["vrp-flower"] = done

    # k-colored linkage with a length floor
    done, seed = 0, 0
    while done < 30:
        seed += 1
        rng = np.random.default_rng(444_000 + seed)
        g = _draw_graph(rng)
        if g is None:
            continue
        p = int(rng.integers(1, 3))
        if g.n < 2 * p:
            continue
        verts = [int(x) for x in rng.permutation(g.n)]
        S, T = sorted(verts[:p]), sorted(verts[p : 2 * p])
        k = int(rng.integers(0, 4))
        ell = int(rng.integers(p, 8))
        res = reductions.longest_k_colored_linkage(g, S, T, p, k, ell, cfg)
        best = oracle.min_long_colored_linkage(g, S, T, p, k, ell)
        if best is None:
            assert not res.feasible, (seed, S, T, p, k, ell)
        else:
            assert res.feasible and res.total_length == best[0], (
                seed, S, T, p, k, ell, res.total_length, best[0],
            )
        done += 1
    counts["longest-k-colored"] = done

    detail = ", ".join(f"{k}: {v}/30" for k, v in counts.items())
    report(11, all(v == 30 for v in counts.values()), f"reduction round-trips match brute force ({detail})")
