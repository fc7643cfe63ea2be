"""The randomized solving pipeline: scan lengths upward evaluating the walk
polynomial at fresh random points, recover a witness linkage by tentative
edge deletion, then extract the certificate set deterministically.

One-sided error: a reported minimum length is never below the true optimum;
it exceeds it with probability at most 2^-trials per length.  Every returned
solution is re-validated before it leaves this module.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass

import numpy as np

from .fields import build_core_field
from .graphs import (
    ColoredWeightedGraph,
    LinkageQuery,
    LinkageSolution,
    normalize,
    validate_solution,
)
from .walk_dp import VariableAssignment, evaluate_reference
from . import dp_kernel, flows

__all__ = [
    "SolverConfig",
    "SolveResult",
    "RecoveryExhausted",
    "solve",
    "min_length",
    "recover",
    "extract_certificate",
]


class RecoveryExhausted(RuntimeError):
    """Recovery kept producing invalid path sets after the retry budget."""


@dataclass(frozen=True)
class SolverConfig:
    trials_per_length: int = 20
    recovery_trials: int | None = None
    seed: int | None = None
    max_w: int = 10**6
    threads: int | None = None
    recovery_retries: int = 3

    def __post_init__(self):
        if self.trials_per_length < 1:
            raise ValueError("trials_per_length must be >= 1")

    def resolved_seed(self) -> int:
        if self.seed is not None:
            return self.seed
        return int.from_bytes(os.urandom(8), "big")

    def recovery_trials_for(self, n_edges: int) -> int:
        if self.recovery_trials is not None:
            return self.recovery_trials
        return self.trials_per_length + max(1, math.ceil(math.log2(max(2, n_edges))))


@dataclass
class SolveResult:
    solution: LinkageSolution | None
    seed: int
    trials_used: int
    min_length_found: int | None = None

    @property
    def infeasible(self) -> bool:
        return self.solution is None


class _RngChain:
    """Deterministic stream of child generators from one seed."""

    def __init__(self, seed: int):
        self.seq = np.random.SeedSequence(seed)
        self.evaluations = 0

    def next_rng(self):
        (child,) = self.seq.spawn(1)
        return np.random.default_rng(child)


def _sweep_values(graph, query, assign, max_length, target=None):
    """Yield (length, value) using the packed kernel when it applies."""
    if dp_kernel.usable(assign.spec):
        yield from dp_kernel.iter_values(graph, query, assign, max_length, target)
    else:
        for ell in range(2, max_length + 1):
            yield ell, evaluate_reference(graph, query, ell, assign)


def _worker_count(cfg: SolverConfig, graph, query) -> int:
    want = cfg.threads if cfg.threads is not None else (os.cpu_count() or 1)
    if want <= 1:
        return 1
    # each concurrent evaluation owns a full set of state planes; keep the
    # combined footprint inside the kernel's budget
    per_eval = dp_kernel.state_bytes_estimate(graph, query)
    if per_eval > 0:
        want = min(want, max(1, dp_kernel._MEMORY_BUDGET // per_eval))
    return max(1, want)


def min_length(graph, query, cfg: SolverConfig, chain: _RngChain | None = None):
    """Smallest length at which any of the per-length evaluations is nonzero,
    scanning upward from 2p, or None when all lengths up to n stay zero.

    Expects a normalized instance (|S| = |T| = p, disjoint).  Trials may run
    concurrently; the answer is the minimum first-nonzero length over the
    trials, which does not depend on scheduling.
    """
    chain = chain or _RngChain(cfg.resolved_seed())
    spec = build_core_field(graph.n)
    floor = 2 * query.p
    r = cfg.trials_per_length
    assigns = []
    for _ in range(r):
        assigns.append(VariableAssignment.random(graph, query.k, spec, chain.next_rng()))
        chain.evaluations += 1

    best_box = [None]
    lock = threading.Lock()

    def one_trial(assign):
        with lock:
            cap = graph.n if best_box[0] is None else best_box[0] - 1
        if cap < floor:
            return
        for ell, value in _sweep_values(graph, query, assign, cap):
            if value != 0 and ell >= floor:
                with lock:
                    if best_box[0] is None or ell < best_box[0]:
                        best_box[0] = ell
                return
            with lock:
                if best_box[0] is not None and ell >= best_box[0] - 1:
                    return

    workers = _worker_count(cfg, graph, query)
    if workers == 1:
        for assign in assigns:
            one_trial(assign)
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(one_trial, assigns))
    return best_box[0]


def _evaluate_once(graph, query, length, assign):
    if dp_kernel.usable(assign.spec):
        return dp_kernel.evaluate_fixed(graph, query, length, assign)
    return evaluate_reference(graph, query, length, assign)


def recover(graph, query, length: int, cfg: SolverConfig, chain: _RngChain | None = None):
    """Delete edges one by one, keeping an edge only when every re-evaluation
    at the target length vanishes without it; decompose the survivors into
    paths.  Returns path tuples or None when the survivors fail to form a
    clean order-p linkage (caller retries with fresh randomness).

    Deleting an edge is always safe when some evaluation stays nonzero, so
    errors only ever leave extra edges behind, never remove needed ones.
    """
    chain = chain or _RngChain(cfg.resolved_seed())
    spec = build_core_field(graph.n)
    trials = cfg.recovery_trials_for(len(graph.edges))
    floor = length - query.p  # p paths of `length` total vertices use exactly this many edges
    workers = _worker_count(cfg, graph, query)
    current = graph
    for edge in graph.edges:  # lexicographic (min id, max id) order
        if len(current.edges) <= floor:
            break  # removing anything more would leave too few edges for any witness
        reduced = current.drop_edge(*edge)
        assigns = []
        for _ in range(trials):
            assigns.append(VariableAssignment.random(reduced, query.k, spec, chain.next_rng()))
            chain.evaluations += 1
        if _any_nonzero(reduced, query, length, assigns, workers):
            current = reduced
    return _decompose_linkage(current, query)


def _any_nonzero(graph, query, length, assigns, workers) -> bool:
    if workers <= 1:
        return any(_evaluate_once(graph, query, length, a) != 0 for a in assigns)
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        for i in range(0, len(assigns), workers):
            wave = assigns[i : i + workers]
            if any(v != 0 for v in pool.map(
                lambda a: _evaluate_once(graph, query, length, a), wave
            )):
                return True
    return False


def _decompose_linkage(graph, query):
    adj = {}
    for u, v in graph.edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    paths = []
    used_edges = 0
    for s in query.S:
        if len(adj.get(s, ())) != 1:
            return None
        path = [s]
        prev = None
        cur = s
        while cur not in query.T:
            nxts = [u for u in adj.get(cur, ()) if u != prev]
            if cur is not s and len(adj.get(cur, ())) != 2:
                return None
            if len(nxts) != 1 or len(path) > graph.n:
                return None
            prev, cur = cur, nxts[0]
            path.append(cur)
            used_edges += 1
        if len(adj.get(cur, ())) != 1:
            return None
        paths.append(tuple(path))
    if used_edges != len(graph.edges):
        return None  # leftover edges not on any source-to-sink path
    verts = [v for p in paths for v in p]
    if len(set(verts)) != len(verts):
        return None
    return tuple(paths)


def extract_certificate(graph, query, paths):
    """Deterministic choice of k distinctly-colored vertices on the paths with
    total weight exactly w, at most one per color class; None if impossible."""
    verts = sorted({v for p in paths for v in p})
    by_color: dict[int, list[int]] = {}
    for v in verts:
        by_color.setdefault(graph.colors[v], []).append(v)
    classes = [by_color[c] for c in sorted(by_color)]
    k, w = query.k, query.w
    # reachable[(count, weight)] -> (class idx, vertex or None) back-pointer
    back: dict[tuple[int, int], tuple[int, int | None]] = {(0, 0): (-1, None)}
    frontier = {(0, 0)}
    for ci, group in enumerate(classes):
        nxt = set(frontier)
        for count, weight in frontier:
            for v in group:
                key = (count + 1, weight + graph.weights[v])
                if key[0] <= k and key[1] <= w and key not in back:
                    back[key] = (ci, v)
                    nxt.add(key)
        for key in nxt - frontier:
            if key not in back:
                back[key] = (-1, None)
        frontier = nxt
    if (k, w) not in back:
        return None
    chosen = []
    key = (k, w)
    while key != (0, 0):
        ci, v = back[key]
        if v is None:
            return None
        chosen.append(v)
        key = (key[0] - 1, key[1] - graph.weights[v])
    return frozenset(chosen)


def _solve_zero_k(graph, query, seed):
    if query.w != 0:
        return SolveResult(None, seed, 0)
    found = flows.min_cost_disjoint_paths(graph, query.S, query.T, query.p)
    if found is None:
        return SolveResult(None, seed, 0)
    paths, _ = found
    sol = LinkageSolution.build(paths, frozenset())
    ok, diags = validate_solution(graph, query, sol)
    if not ok:
        raise RecoveryExhausted(f"flow bypass produced an invalid linkage: {diags}")
    return SolveResult(sol, seed, 0, sol.total_length)


def solve(graph: ColoredWeightedGraph, query: LinkageQuery, cfg: SolverConfig | None = None) -> SolveResult:
    """Normalize, scan for the minimum length, recover a witness, certify it,
    and map back.  The returned solution always passes validate_solution."""
    cfg = cfg or SolverConfig()
    query.check_against(graph)
    seed = cfg.resolved_seed()
    if query.w > cfg.max_w:
        raise ValueError(f"target weight {query.w} exceeds max_w {cfg.max_w}")
    if query.k == 0:
        return _solve_zero_k(graph, query, seed)
    chain = _RngChain(seed)
    norm = normalize(graph, query)
    lstar = min_length(norm.graph, norm.query, cfg, chain)
    if lstar is None:
        return SolveResult(None, seed, chain.evaluations)
    twin_weight = norm.query.w - query.w
    for _attempt in range(cfg.recovery_retries + 1):
        paths_norm = recover(norm.graph, norm.query, lstar, cfg, chain)
        if paths_norm is None:
            continue
        cert_norm = extract_certificate(norm.graph, norm.query, paths_norm)
        if cert_norm is None:
            continue
        heavy = [v for v in cert_norm if norm.graph.weights[v] >= twin_weight]
        if len(heavy) != 1:
            continue
        certificate = frozenset(cert_norm) - {heavy[0]}
        try:
            paths = norm.strip(paths_norm)
        except ValueError:
            continue
        sol = LinkageSolution.build(paths, certificate)
        ok, _diags = validate_solution(graph, query, sol)
        if ok:
            return SolveResult(sol, seed, chain.evaluations, sol.total_length)
    raise RecoveryExhausted(
        f"no valid linkage recovered at length {lstar} after {cfg.recovery_retries + 1} attempts"
    )
