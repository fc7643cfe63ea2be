"""Application layer: each routine builds a colored linkage query out of an
application problem, runs the solver, and maps the answer back.

Every result carries a ReductionTrace describing the construction, the
length offset between the two problems, and how the answer was mapped back.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graphs import ColoredWeightedGraph, LinkageQuery
from .solver import SolverConfig, solve
from . import flows

__all__ = [
    "ReductionTrace",
    "AppResult",
    "longest_st_path",
    "longest_cycle",
    "t_cycle",
    "longest_t_cycle",
    "vrp_flower",
    "vrp_profits",
    "longest_k_colored_linkage",
    "subdivide_for_edge_weights",
    "solve_with_edge_weights",
]


@dataclass(frozen=True)
class ReductionTrace:
    construction: str
    length_offset: int
    back_map: str


@dataclass
class AppResult:
    """paths/cycles at the application level plus the audit trace."""

    feasible: bool
    paths: tuple = ()
    cycles: tuple = ()
    total_length: int | None = None
    certificate: frozenset = frozenset()
    trace: ReductionTrace | None = None
    seed: int | None = None
    trials_used: int = 0


def _recolor_bijective(graph: ColoredWeightedGraph) -> ColoredWeightedGraph:
    return ColoredWeightedGraph(graph.n, graph.edges, tuple(range(1, graph.n + 1)), graph.weights)


def _unit_weights(graph: ColoredWeightedGraph) -> ColoredWeightedGraph:
    return ColoredWeightedGraph(graph.n, graph.edges, graph.colors, (1,) * graph.n)


def longest_st_path(graph: ColoredWeightedGraph, s: int, t: int, k: int, cfg=None) -> AppResult:
    """Minimum-length (s, t)-path among those with at least k vertices.

    With one color per vertex, collecting k colors is exactly having k
    vertices, so the colored solver answers the length-threshold question.
    """
    if s == t:
        raise ValueError("need s != t")
    cfg = cfg or SolverConfig()
    g2 = _unit_weights(_recolor_bijective(graph))
    query = LinkageQuery((s,), (t,), 1, k, k)
    res = solve(g2, query, cfg)
    trace = ReductionTrace(
        construction="bijective recoloring, unit weights, query (k, k)",
        length_offset=0,
        back_map="identity",
    )
    if res.solution is None:
        return AppResult(False, trace=trace, seed=res.seed, trials_used=res.trials_used)
    path = res.solution.paths[0]
    return AppResult(
        True, paths=(path,), total_length=len(path),
        certificate=res.solution.certificate, trace=trace,
        seed=res.seed, trials_used=res.trials_used,
    )


def longest_cycle(graph: ColoredWeightedGraph, k: int, cfg=None) -> AppResult:
    """Shortest cycle with at least k vertices (k >= 3), if any: for every
    edge, ask for a long path between its endpoints with the edge removed."""
    if k < 3:
        raise ValueError("cycles need k >= 3")
    cfg = cfg or SolverConfig()
    best: AppResult | None = None
    trials = 0
    seed = None
    for u, v in graph.edges:
        sub = longest_st_path(graph.drop_edge(u, v), u, v, k, cfg)
        trials += sub.trials_used
        seed = seed if seed is not None else sub.seed
        if sub.feasible and (best is None or sub.total_length < best.total_length):
            best = sub
    trace = ReductionTrace(
        construction="per edge (u, v): long (u, v)-path in G minus the edge, closed by it",
        length_offset=0,
        back_map="path vertices read as the cycle order",
    )
    if best is None:
        return AppResult(False, trace=trace, seed=seed, trials_used=trials)
    return AppResult(
        True, cycles=(best.paths[0],), total_length=best.total_length,
        certificate=best.certificate, trace=trace, seed=best.seed, trials_used=trials,
    )


def _cycle_through_one(graph: ColoredWeightedGraph, t: int):
    """Shortest cycle through a single vertex, by shortest paths between
    neighbor pairs in G - t."""
    adj = graph.adjacency()
    reduced_edges = tuple(e for e in graph.edges if t not in e)
    best = None
    nbrs = adj[t]
    for i, a in enumerate(nbrs):
        dist, par = _bfs(graph.n, reduced_edges, a)
        for b in nbrs[i + 1 :]:
            if dist[b] is None:
                continue
            path = _walk_back(par, b)
            if best is None or len(path) + 1 < best[0]:
                best = (len(path) + 1, (t,) + tuple(path))
    return best


def _bfs(n, edges, start):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    dist = [None] * n
    par = [None] * n
    dist[start] = 0
    queue = [start]
    qi = 0
    while qi < len(queue):
        u = queue[qi]
        qi += 1
        for v in sorted(adj[u]):
            if dist[v] is None:
                dist[v] = dist[u] + 1
                par[v] = u
                queue.append(v)
    return dist, par


def _walk_back(par, v):
    out = [v]
    while par[v] is not None:
        v = par[v]
        out.append(v)
    return list(reversed(out))


def _cycle_through_two(graph: ColoredWeightedGraph, t: int, u: int):
    """Shortest cycle through both t and u: two internally disjoint (t, u)
    paths of minimum total internal vertex count, via min-cost flow."""
    n = graph.n
    net = flows.ArcFlowNetwork(2 * n + 2)
    src, snk = 2 * n, 2 * n + 1
    for v in range(n):
        cap = 2 if v in (t, u) else 1
        net.add_arc(v, n + v, cap, 0 if v in (t, u) else 1)
    for a, b in graph.edges:
        net.add_arc(n + a, b, 1, 0)
        net.add_arc(n + b, a, 1, 0)
    net.add_arc(src, t, 2, 0)
    net.add_arc(n + u, snk, 2, 0)
    flow, cost = net.min_cost_flow(src, snk, 2)
    if flow < 2:
        return None
    paths = flows._decompose_unit_paths(
        net, src, snk, 2, lambda x: x if x < n else (x - n if x < 2 * n else None)
    )
    if paths is None:
        return None
    first, second = paths
    cycle = tuple(first) + tuple(reversed(second))[1:-1]
    return (len(cycle), cycle)


def t_cycle(graph: ColoredWeightedGraph, T, cfg=None) -> AppResult:
    """Shortest cycle passing through every terminal in T.

    For |T| >= 3 a twin s of one terminal t is added, terminals get private
    colors and everything else color 1; a |T|-colored (s, t)-path folds back
    into the cycle.  Short paths cannot carry |T| >= 3 colors, so no
    degenerate two-vertex "cycles" ever certify.  |T| <= 2 is answered
    directly by BFS / flow, where that degeneracy would otherwise bite.
    """
    T = sorted(set(T))
    if not T:
        raise ValueError("need at least one terminal")
    cfg = cfg or SolverConfig()
    if len(T) == 1:
        best = _cycle_through_one(graph, T[0])
        trace = ReductionTrace("single terminal: neighbor-pair BFS in G - t", 0, "direct")
        if best is None:
            return AppResult(False, trace=trace, seed=cfg.resolved_seed())
        return AppResult(True, cycles=(best[1],), total_length=best[0], trace=trace,
                         seed=cfg.resolved_seed())
    if len(T) == 2:
        best = _cycle_through_two(graph, T[0], T[1])
        trace = ReductionTrace("two terminals: min-cost pair of disjoint paths", 0, "direct")
        if best is None:
            return AppResult(False, trace=trace, seed=cfg.resolved_seed())
        return AppResult(True, cycles=(best[1],), total_length=best[0], trace=trace,
                         seed=cfg.resolved_seed())

    t = T[0]
    n2 = graph.n + 1
    s = graph.n
    adj = graph.adjacency()
    edges = list(graph.edges) + [(s, v) for v in adj[t]]
    colors = [1] * n2
    for i, term in enumerate(T[1:], start=2):
        colors[term] = i
    weights = (1,) * n2
    g2 = ColoredWeightedGraph(n2, tuple(edges), tuple(colors), weights)
    query = LinkageQuery((s,), (t,), 1, len(T), len(T))
    res = solve(g2, query, cfg)
    trace = ReductionTrace(
        construction="twin s of t; terminals colored 2..|T|, rest color 1; query (|T|, |T|)",
        length_offset=-1,
        back_map="drop the twin, close the path at t",
    )
    if res.solution is None:
        return AppResult(False, trace=trace, seed=res.seed, trials_used=res.trials_used)
    path = res.solution.paths[0]
    cycle = (t,) + tuple(path[1:-1])
    return AppResult(
        True, cycles=(cycle,), total_length=len(cycle),
        certificate=res.solution.certificate, trace=trace,
        seed=res.seed, trials_used=res.trials_used,
    )


def longest_t_cycle(graph: ColoredWeightedGraph, T, k: int, cfg=None) -> AppResult:
    """Shortest cycle through all of T with at least k vertices.

    When |T| >= k (or k <= 3, where any cycle is long enough) every T-cycle
    qualifies.  Otherwise terminals get weight 3, the twin weight 1, everyone
    else weight 2: a distinct-colored set of k vertices weighing 2k + |T|
    must be the terminals plus k - |T| others, all on the cycle.
    """
    T = sorted(set(T))
    if not T:
        raise ValueError("need at least one terminal")
    cfg = cfg or SolverConfig()
    if len(T) >= k or k <= 3:
        return t_cycle(graph, T, cfg)
    t = T[0]
    n2 = graph.n + 1
    s = graph.n
    adj = graph.adjacency()
    edges = list(graph.edges) + [(s, v) for v in adj[t]]
    colors = [0] * n2
    colors[s] = 1
    colors[t] = 1
    nxt = 2
    for v in range(graph.n):
        if v != t:
            colors[v] = nxt
            nxt += 1
    weights = [2] * n2
    for term in T:
        weights[term] = 3
    weights[s] = 1
    g2 = ColoredWeightedGraph(n2, tuple(edges), tuple(colors), tuple(weights))
    query = LinkageQuery((s,), (t,), 1, k, 2 * k + len(T))
    res = solve(g2, query, cfg)
    trace = ReductionTrace(
        construction="twin s of t; terminals weight 3, twin weight 1, rest weight 2; "
        "query (k, 2k + |T|)",
        length_offset=-1,
        back_map="drop the twin, close the path at t",
    )
    if res.solution is None:
        return AppResult(False, trace=trace, seed=res.seed, trials_used=res.trials_used)
    path = res.solution.paths[0]
    cycle = (t,) + tuple(path[1:-1])
    return AppResult(
        True, cycles=(cycle,), total_length=len(cycle),
        certificate=res.solution.certificate, trace=trace,
        seed=res.seed, trials_used=res.trials_used,
    )


def _flower_construction(graph: ColoredWeightedGraph, depot: int, ports_in, ports_out,
                         colors, weights, twin_color, twin_weight):
    """Remove the depot, attach one private twin per chosen port on each side."""
    p = len(ports_in)
    n2 = graph.n + 2 * p
    ins = tuple(range(graph.n, graph.n + p))
    outs = tuple(range(graph.n + p, n2))
    edges = [e for e in graph.edges if depot not in e]
    for tw, port in zip(ins, ports_in):
        edges.append((tw, port))
    for tw, port in zip(outs, ports_out):
        edges.append((tw, port))
    cols = list(colors) + [twin_color(i) for i in range(2 * p)]
    wts = list(weights) + [twin_weight] * (2 * p)
    return ColoredWeightedGraph(n2, tuple(edges), tuple(cols), tuple(wts)), ins, outs


def _flower_backmap(depot, paths, ins, outs):
    twins = set(ins) | set(outs)
    cycles = []
    for path in paths:
        inner = tuple(v for v in path if v not in twins)
        cycles.append((depot,) + inner)
    return tuple(cycles)


def vrp_flower(graph: ColoredWeightedGraph, depot: int, T, p: int, cfg=None) -> AppResult:
    """p cycles meeting only at the depot, jointly covering T, minimizing the
    sum of cycle lengths (the depot counts once per cycle).

    Petals must be genuine cycles (length >= 3).  Shared depot twins would
    admit two-vertex petals that reuse one depot edge, so instead the depot
    is split into one private twin per chosen port: vertex-disjointness then
    forces every petal through two distinct ports.  The 2p ports and their
    side split are enumerated.
    """
    T = sorted(set(T))
    if depot in T:
        raise ValueError("depot must not be a terminal")
    cfg = cfg or SolverConfig()
    adj = graph.adjacency()
    ports = adj[depot]
    trace = ReductionTrace(
        construction="depot split into private port twins; terminals colored 2..|T|+1; "
        "query (|T|+1, |T|+1) per port guess",
        length_offset=-p,
        back_map="strip twins, prepend the depot to each petal",
    )
    best = None
    trials = 0
    seed = cfg.resolved_seed()
    base_colors = [1] * graph.n
    for i, term in enumerate(T, start=2):
        base_colors[term] = i
    k = len(T) + 1
    guess_idx = 0
    for chosen in combinations(ports, 2 * p):
        if best is not None and best[0] <= 3 * p:
            break
        others = list(chosen[1:])
        for rest in combinations(others, p - 1):
            ins_ports = (chosen[0],) + rest
            outs_ports = tuple(x for x in chosen if x not in set(ins_ports))
            g2, ins, outs = _flower_construction(
                graph, depot, ins_ports, outs_ports, base_colors, (1,) * graph.n,
                lambda i: 1, 1,
            )
            query = LinkageQuery(ins, outs, p, k, k)
            guess_idx += 1
            sub_cfg = SolverConfig(
                trials_per_length=cfg.trials_per_length,
                recovery_trials=cfg.recovery_trials,
                seed=seed + guess_idx,
                max_w=cfg.max_w,
                recovery_retries=cfg.recovery_retries,
            )
            res = solve(g2, query, sub_cfg)
            trials += res.trials_used
            if res.solution is None:
                continue
            total = res.solution.total_length - p
            if best is None or total < best[0]:
                cycles = _flower_backmap(depot, res.solution.paths, ins, outs)
                best = (total, cycles, res.solution.certificate)
    if best is None:
        return AppResult(False, trace=trace, seed=seed, trials_used=trials)
    return AppResult(True, cycles=best[1], total_length=best[0],
                     certificate=best[2], trace=trace, seed=seed, trials_used=trials)


def vrp_profits(graph: ColoredWeightedGraph, depot: int, p: int, k: int, w: int, cfg=None) -> AppResult:
    """p depot cycles collecting exactly k deliveries of total profit exactly
    w (profits are the vertex weights), minimizing total length."""
    cfg = cfg or SolverConfig()
    adj = graph.adjacency()
    ports = adj[depot]
    trace = ReductionTrace(
        construction="depot split into private port twins; bijective colors; twin weight "
        "w + 1 keeps twins out of the certificate; query (k, w)",
        length_offset=-p,
        back_map="strip twins, prepend the depot to each petal",
    )
    best = None
    trials = 0
    seed = cfg.resolved_seed()
    guess_idx = 0
    for chosen in combinations(ports, 2 * p):
        if best is not None and best[0] <= 3 * p:
            break
        others = list(chosen[1:])
        for rest in combinations(others, p - 1):
            ins_ports = (chosen[0],) + rest
            outs_ports = tuple(x for x in chosen if x not in set(ins_ports))
            g2, ins, outs = _flower_construction(
                graph, depot, ins_ports, outs_ports,
                list(range(1, graph.n + 1)), graph.weights,
                lambda i: graph.n + 1 + i, w + 1,
            )
            query = LinkageQuery(ins, outs, p, k, w)
            guess_idx += 1
            sub_cfg = SolverConfig(
                trials_per_length=cfg.trials_per_length,
                recovery_trials=cfg.recovery_trials,
                seed=seed + guess_idx,
                max_w=max(cfg.max_w, w + 1),
                recovery_retries=cfg.recovery_retries,
            )
            res = solve(g2, query, sub_cfg)
            trials += res.trials_used
            if res.solution is None:
                continue
            total = res.solution.total_length - p
            if best is None or total < best[0]:
                cycles = _flower_backmap(depot, res.solution.paths, ins, outs)
                best = (total, cycles, res.solution.certificate)
    if best is None:
        return AppResult(False, trace=trace, seed=seed, trials_used=trials)
    return AppResult(True, cycles=best[1], total_length=best[0],
                     certificate=best[2], trace=trace, seed=seed, trials_used=trials)


def longest_k_colored_linkage(graph: ColoredWeightedGraph, S, T, p: int, k: int,
                              min_length: int, cfg=None) -> AppResult:
    """Minimum-length order-p linkage with at least k colors among its
    vertices and total length at least min_length.

    Each edge is subdivided by a fresh-colored vertex; demanding l - p of
    those (by exact weight) forces l - p edges, hence length >= l.
    """
    cfg = cfg or SolverConfig()
    ell = min_length
    if p >= ell:
        g2 = _unit_weights(graph)
        res = solve(g2, LinkageQuery(tuple(S), tuple(T), p, k, k), cfg)
        trace = ReductionTrace("p >= l: plain k-colored query", 0, "identity")
        if res.solution is None:
            return AppResult(False, trace=trace, seed=res.seed, trials_used=res.trials_used)
        return AppResult(True, paths=res.solution.paths,
                         total_length=res.solution.total_length,
                         certificate=res.solution.certificate, trace=trace,
                         seed=res.seed, trials_used=res.trials_used)
    m = len(graph.edges)
    n2 = graph.n + m
    edges2 = []
    for i, (u, v) in enumerate(graph.edges):
        d = graph.n + i
        edges2.append((u, d))
        edges2.append((d, v))
    if k >= 1:
        colors = list(graph.colors) + [graph.n + 1 + i for i in range(m)]
        weights = [1] * graph.n + [2 * k] * m
        k2 = k + ell - p
        w2 = (ell - p) * 2 * k + k
    else:
        colors = list(graph.colors) + [graph.n + 1 + i for i in range(m)]
        weights = [ell - p + 1] * graph.n + [1] * m
        k2 = ell - p
        w2 = ell - p
    g2 = ColoredWeightedGraph(n2, tuple(edges2), tuple(colors), tuple(weights))
    res = solve(g2, LinkageQuery(tuple(S), tuple(T), p, k2, w2),
                SolverConfig(trials_per_length=cfg.trials_per_length,
                             recovery_trials=cfg.recovery_trials, seed=cfg.resolved_seed(),
                             max_w=max(cfg.max_w, w2), recovery_retries=cfg.recovery_retries))
    trace = ReductionTrace(
        construction="subdivide every edge with a fresh-colored vertex; exact weight "
        "forces l - p subdivision vertices into the certificate",
        length_offset=0,
        back_map="contract subdivision vertices out of the paths",
    )
    if res.solution is None:
        return AppResult(False, trace=trace, seed=res.seed, trials_used=res.trials_used)
    subs = set(range(graph.n, n2))
    paths = tuple(tuple(v for v in path if v not in subs) for path in res.solution.paths)
    cert = frozenset(v for v in res.solution.certificate if v < graph.n)
    return AppResult(True, paths=paths, total_length=sum(len(p) for p in paths),
                     certificate=cert, trace=trace, seed=res.seed,
                     trials_used=res.trials_used)


def subdivide_for_edge_weights(graph: ColoredWeightedGraph, edge_weights: dict) -> ColoredWeightedGraph:
    """Replace each edge by a chain of (its weight) fresh dummy-colored unit
    vertices; queries then add one color for the dummies.  Path length in the
    result equals original vertex count plus traversed edge weight."""
    total_extra = 0
    for e in graph.edges:
        c = edge_weights.get(e, edge_weights.get((e[1], e[0]), 1))
        if c < 1:
            raise ValueError(f"edge weight for {e} must be >= 1")
        total_extra += c
    n2 = graph.n + total_extra
    if total_extra > 50_000:
        raise ValueError("edge weights too large to subdivide")
    dummy_color = graph.n + 1 if graph.n + 1 <= n2 else graph.n
    edges2 = []
    colors = list(graph.colors)
    weights = list(graph.weights)
    nxt = graph.n
    for e in graph.edges:
        c = edge_weights.get(e, edge_weights.get((e[1], e[0]), 1))
        chain = [e[0]] + list(range(nxt, nxt + c)) + [e[1]]
        nxt += c
        for i in range(c):
            colors.append(dummy_color)
            weights.append(1)
        edges2.extend(zip(chain, chain[1:]))
    return ColoredWeightedGraph(n2, tuple(edges2), tuple(colors), tuple(weights))


def solve_with_edge_weights(graph: ColoredWeightedGraph, edge_weights: dict,
                            query: LinkageQuery, cfg=None) -> AppResult:
    """Colored linkage search under the combined metric (vertex count plus
    traversed edge weight); S and T must be disjoint so every path crosses at
    least one edge (and hence meets the dummy color)."""
    if set(query.S) & set(query.T):
        raise ValueError("edge-weighted solving needs disjoint S and T")
    cfg = cfg or SolverConfig()
    g2 = subdivide_for_edge_weights(graph, edge_weights)
    q2 = LinkageQuery(query.S, query.T, query.p, query.k + 1, query.w + 1)
    res = solve(g2, q2, cfg)
    trace = ReductionTrace(
        construction="edge subdivided into weight-many dummy unit vertices, one fresh "
        "dummy color, k + 1 and w + 1",
        length_offset=0,
        back_map="drop dummy vertices; reported length is the combined metric",
    )
    if res.solution is None:
        return AppResult(False, trace=trace, seed=res.seed, trials_used=res.trials_used)
    dummies = set(range(graph.n, g2.n))
    paths = tuple(tuple(v for v in p if v not in dummies) for p in res.solution.paths)
    cert = frozenset(v for v in res.solution.certificate if v < graph.n)
    return AppResult(True, paths=paths, total_length=res.solution.total_length,
                     certificate=cert, trace=trace, seed=res.seed,
                     trials_used=res.trials_used)
