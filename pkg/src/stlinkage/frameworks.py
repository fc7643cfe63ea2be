"""Ranked linkages: reduce a rank-k matroid constraint to a colored query by
guessing the k column vectors of the witness, with lossy truncation bringing
wide representations down to k rows first."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .graphs import ColoredWeightedGraph, LinkageQuery, LinkageSolution, validate_solution
from .matroids import LinearMatroid, lossy_truncate, transversal_to_linear, rational_to_prime_field
from .solver import SolverConfig, solve

__all__ = ["framework_solve", "solve_ranked", "FrameworkResult"]

DEFAULT_TRUNCATION_ROUNDS = 20


@dataclass
class FrameworkResult:
    solution: LinkageSolution | None
    seed: int
    trials_used: int

    @property
    def infeasible(self) -> bool:
        return self.solution is None


def _pad_sources(graph: ColoredWeightedGraph, S):
    """|S| fresh vertices adjacent to all of S; they get zero columns so no
    guessed basis ever matches a path's first vertex."""
    extra = len(S)
    n2 = graph.n + extra
    pads = tuple(range(graph.n, n2))
    edges = list(graph.edges)
    for q in pads:
        edges.extend((q, u) for u in S)
    colors = graph.colors + tuple(range(graph.n + 1, n2 + 1))[:extra]
    weights = graph.weights + (1,) * extra
    return ColoredWeightedGraph(n2, tuple(edges), colors, weights), pads


def framework_solve(
    graph: ColoredWeightedGraph,
    matroid: LinearMatroid,
    query: LinkageQuery,
    cfg: SolverConfig | None = None,
) -> FrameworkResult:
    """Minimum-length linkage whose vertices contain a weight-w independent
    k-set of the rank-k represented matroid.

    Enumerates independent k-subsets of the distinct column vectors actually
    present (never the abstract vector space), colors vertices by which
    guessed vector they carry plus one leftover color, and runs the colored
    solver with (k + 1, w + 1).
    """
    cfg = cfg or SolverConfig()
    if matroid.nrows != query.k:
        raise ValueError("framework_solve needs a k-row representation; truncate first")
    if matroid.ncols != graph.n:
        raise ValueError("matroid columns must match graph vertices")
    k = query.k
    seed = cfg.resolved_seed()
    if k == 0:
        res = solve(graph, query, cfg)
        return FrameworkResult(res.solution, res.seed, res.trials_used)

    padded, pads = _pad_sources(graph, query.S)
    columns = [matroid.column(j) for j in range(matroid.ncols)]
    distinct = sorted(set(columns))
    value_matroid = LinearMatroid(matroid.spec, tuple(zip(*distinct))) if distinct else None

    # an unconstrained linkage bounds every ranked answer from below, so a
    # guess achieving it ends the search
    from . import flows

    bound = flows.min_cost_disjoint_paths(graph, query.S, query.T, query.p)
    if bound is None:
        return FrameworkResult(None, seed, 0)
    floor = bound[1]

    trials = 0
    best: LinkageSolution | None = None
    guess_seed = np.random.SeedSequence(seed)
    for gi, guess in enumerate(combinations(range(len(distinct)), k)):
        if best is not None and best.total_length <= floor:
            break
        if not value_matroid.is_independent(guess):
            continue
        vec_of = {distinct[g]: i for i, g in enumerate(guess)}
        colors = []
        weights = []
        for v in range(padded.n):
            if v < graph.n and columns[v] in vec_of:
                colors.append(vec_of[columns[v]] + 1)
                weights.append(graph.weights[v])
            else:
                colors.append(k + 1)
                weights.append(1)
        g2 = ColoredWeightedGraph(padded.n, padded.edges, tuple(colors), tuple(weights))
        q2 = LinkageQuery(pads, query.T, query.p, k + 1, query.w + 1)
        (child,) = guess_seed.spawn(1)
        sub_cfg = SolverConfig(
            trials_per_length=cfg.trials_per_length,
            recovery_trials=cfg.recovery_trials,
            seed=int(child.generate_state(1)[0]),
            max_w=cfg.max_w,
            recovery_retries=cfg.recovery_retries,
        )
        res = solve(g2, q2, sub_cfg)
        trials += res.trials_used
        if res.solution is None:
            continue
        pad_set = set(pads)
        paths = tuple(tuple(v for v in p if v not in pad_set) for p in res.solution.paths)
        cert = frozenset(v for v in res.solution.certificate if g2.colors[v] <= k)
        cand = LinkageSolution.build(paths, cert)
        ok, _ = validate_solution(graph, query, cand, matroid=matroid)
        if ok and (best is None or cand.total_length < best.total_length):
            best = cand
    return FrameworkResult(best, seed, trials)


def solve_ranked(
    graph: ColoredWeightedGraph,
    matroid,
    query: LinkageQuery,
    cfg: SolverConfig | None = None,
    rounds: int = DEFAULT_TRUNCATION_ROUNDS,
) -> FrameworkResult:
    """Full pipeline for a wide representation: repeat (lossy truncation,
    guess-and-solve) and keep the best answer that validates against the
    original matroid.  Accepts linear, transversal, or bounded-integer
    representations."""
    cfg = cfg or SolverConfig()
    seed = cfg.resolved_seed()
    k = query.k
    if k == 0:
        res = solve(graph, query, cfg)
        return FrameworkResult(res.solution, res.seed, res.trials_used)
    from . import flows

    bound = flows.min_cost_disjoint_paths(graph, query.S, query.T, query.p)
    if bound is None:
        return FrameworkResult(None, seed, 0)
    floor = bound[1]
    seq = np.random.SeedSequence(seed)
    best: LinkageSolution | None = None
    trials = 0
    for _ in range(rounds):
        if best is not None and best.total_length <= floor:
            break
        (child,) = seq.spawn(1)
        rng = np.random.default_rng(child)
        if isinstance(matroid, LinearMatroid):
            trunc = lossy_truncate(matroid, k, rng) if matroid.nrows != k else matroid
        else:
            # transversal / rational inputs go through a random linear
            # representation first, then the same truncation
            from .matroids import TransversalInstance, RationalMatrixMatroid

            if isinstance(matroid, TransversalInstance):
                lin = transversal_to_linear(matroid, k, rng)
            elif isinstance(matroid, RationalMatrixMatroid):
                lin = rational_to_prime_field(matroid, k, rng)
            else:
                raise TypeError(f"unsupported matroid representation: {type(matroid)!r}")
            trunc = lossy_truncate(lin, k, rng) if lin.nrows != k else lin
        sub_cfg = SolverConfig(
            trials_per_length=cfg.trials_per_length,
            recovery_trials=cfg.recovery_trials,
            seed=int(child.generate_state(1)[0]) ^ 0x5EED,
            max_w=cfg.max_w,
            recovery_retries=cfg.recovery_retries,
        )
        res = framework_solve(graph, trunc, query, sub_cfg)
        trials += res.trials_used
        sol = res.solution
        if sol is None:
            continue
        ok, _ = validate_solution(graph, query, sol, matroid=matroid)
        if ok and (best is None or sol.total_length < best.total_length):
            best = sol
        if isinstance(matroid, LinearMatroid) and matroid.nrows == k:
            break  # no randomness in the reduction; one round is exact
    return FrameworkResult(best, seed, trials)
