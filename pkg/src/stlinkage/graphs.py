"""Core graph, query and solution types, the source/sink normalization, and
solution validation."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "ColoredWeightedGraph",
    "Digraph",
    "LinkageQuery",
    "LinkageSolution",
    "NormalizedInstance",
    "normalize",
    "validate_solution",
]


def _canon_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class ColoredWeightedGraph:
    """Undirected simple graph with a color in [1, n] and a positive integer
    weight on every vertex.  Vertices are the ids 0..n-1."""

    n: int
    edges: tuple[tuple[int, int], ...]
    colors: tuple[int, ...]
    weights: tuple[int, ...]

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range")
            e = _canon_edge(u, v)
            if e in seen:
                raise ValueError(f"parallel edge {e}")
            seen.add(e)
        if len(self.colors) != self.n or len(self.weights) != self.n:
            raise ValueError("colors/weights must have one entry per vertex")
        if any(not (1 <= c <= self.n) for c in self.colors):
            raise ValueError("vertex color out of range [1, n]")
        if any(w < 1 for w in self.weights):
            raise ValueError("vertex weights must be >= 1")
        object.__setattr__(self, "edges", tuple(sorted(_canon_edge(u, v) for u, v in self.edges)))

    @classmethod
    def build(cls, n, edges, colors=None, weights=None) -> "ColoredWeightedGraph":
        colors = tuple(colors) if colors is not None else tuple(range(1, n + 1))
        weights = tuple(weights) if weights is not None else (1,) * n
        return cls(n, tuple(tuple(e) for e in edges), colors, weights)

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for lst in adj:
            lst.sort()
        return adj

    def has_edge(self, u: int, v: int) -> bool:
        return _canon_edge(u, v) in self.edge_set

    def drop_edge(self, u: int, v: int) -> "ColoredWeightedGraph":
        e = _canon_edge(u, v)
        return ColoredWeightedGraph(
            self.n, tuple(x for x in self.edges if x != e), self.colors, self.weights
        )


@dataclass(frozen=True)
class Digraph:
    """Directed simple graph; arcs are ordered pairs, no self-loops."""

    n: int
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for u, v in self.arcs:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc ({u},{v}) out of range")
            if (u, v) in seen:
                raise ValueError(f"parallel arc ({u},{v})")
            seen.add((u, v))
        object.__setattr__(self, "arcs", tuple(sorted(self.arcs)))

    def out_adj(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            adj[u].append(v)
        for lst in adj:
            lst.sort()
        return adj

    def in_adj(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            adj[v].append(u)
        for lst in adj:
            lst.sort()
        return adj


@dataclass(frozen=True)
class LinkageQuery:
    """Ask for p vertex-disjoint S-to-T paths whose vertices contain a set X of
    k distinctly-colored vertices with total weight exactly w."""

    S: tuple[int, ...]
    T: tuple[int, ...]
    p: int
    k: int
    w: int

    def __post_init__(self):
        object.__setattr__(self, "S", tuple(sorted(set(self.S))))
        object.__setattr__(self, "T", tuple(sorted(set(self.T))))
        if not self.S or not self.T:
            raise ValueError("S and T must be nonempty")
        if self.p < 1:
            raise ValueError("order p must be >= 1")
        if self.k < 0 or self.w < 0:
            raise ValueError("k and w must be nonnegative")
        if self.w < self.k:
            raise ValueError("w < k is infeasible: every certificate vertex weighs >= 1")

    def check_against(self, graph: ColoredWeightedGraph):
        for v in self.S + self.T:
            if not (0 <= v < graph.n):
                raise ValueError(f"query vertex {v} out of range")


@dataclass(frozen=True)
class LinkageSolution:
    """p vertex-disjoint paths plus the witness set X certifying (k, w)."""

    paths: tuple[tuple[int, ...], ...]
    certificate: frozenset
    total_length: int

    @classmethod
    def build(cls, paths, certificate) -> "LinkageSolution":
        paths = tuple(tuple(p) for p in paths)
        return cls(paths, frozenset(certificate), sum(len(p) for p in paths))


@dataclass(frozen=True)
class NormalizedInstance:
    """Instance with p fresh source twins and p fresh sink twins so that
    |S| = |T| = p and S, T are disjoint; solutions map back by stripping the
    twin endpoints."""

    graph: ColoredWeightedGraph
    query: LinkageQuery
    source_twins: tuple[int, ...]
    sink_twins: tuple[int, ...]
    original_query: LinkageQuery

    def strip(self, paths) -> tuple[tuple[int, ...], ...]:
        twins = set(self.source_twins) | set(self.sink_twins)
        out = []
        for p in paths:
            inner = tuple(v for v in p if v not in twins)
            if len(inner) != len(p) - 2:
                raise ValueError("normalized path does not have twin endpoints")
            out.append(inner)
        return tuple(out)


def normalize(graph: ColoredWeightedGraph, query: LinkageQuery) -> NormalizedInstance:
    """Add p source twins adjacent to all of S and p sink twins adjacent to all
    of T, sharing one fresh color and weight k * max_weight + 1; the target
    becomes (k + 1, w + k * max_weight + 1).

    Vertices heavier than w - k + 1 cannot sit in any certificate of the
    original query, but left alone they could stand in for a twin in the
    shifted one (k + 1 originals can reach the shifted weight when the maximum
    weight exceeds w).  They are therefore re-weighted to the twin weight, so
    the only role they can play is the twin's, which the back-map strips.

    Requires k >= 1 (the degenerate k = 0 case is answered by the flow
    bypass upstream).  Minimum solution lengths shift by exactly 2p.
    """
    query.check_against(graph)
    if query.k < 1:
        raise ValueError("normalize requires k >= 1")
    p = query.p
    n2 = graph.n + 2 * p
    max_we = max(graph.weights)
    twin_weight = query.k * max_we + 1
    usable_cap = query.w - query.k + 1
    fresh_color = graph.n + 1
    src = tuple(range(graph.n, graph.n + p))
    snk = tuple(range(graph.n + p, n2))
    edges = list(graph.edges)
    for s2 in src:
        edges.extend((s2, u) for u in query.S)
    for t2 in snk:
        edges.extend((t2, v) for v in query.T)
    colors = graph.colors + (fresh_color,) * (2 * p)
    weights = tuple(w if w <= usable_cap else twin_weight for w in graph.weights)
    weights = weights + (twin_weight,) * (2 * p)
    g2 = ColoredWeightedGraph(n2, tuple(edges), colors, weights)
    q2 = LinkageQuery(src, snk, p, query.k + 1, query.w + twin_weight)
    return NormalizedInstance(g2, q2, src, snk, query)


def validate_solution(graph, query, solution, matroid=None):
    """Check every invariant of a LinkageSolution against graph and query.

    Returns (ok, diagnostics); diagnostics name each violated property.  When
    `matroid` is given the certificate must be independent in it instead of
    using pairwise-distinct colors.
    """
    diags = []
    paths = solution.paths
    if len(paths) != query.p:
        diags.append(f"order: expected {query.p} paths, got {len(paths)}")
    seen = set()
    for i, path in enumerate(paths):
        if not path:
            diags.append(f"path {i}: empty")
            continue
        if path[0] not in query.S:
            diags.append(f"path {i}: does not start in S")
        if path[-1] not in query.T:
            diags.append(f"path {i}: does not end in T")
        if len(set(path)) != len(path):
            diags.append(f"path {i}: repeats a vertex")
        for u, v in zip(path, path[1:]):
            if not graph.has_edge(u, v):
                diags.append(f"path {i}: missing edge ({u},{v})")
        for v in path:
            if v in seen:
                diags.append(f"disjointness: vertex {v} on two paths")
            seen.add(v)
    if solution.total_length != sum(len(p) for p in paths):
        diags.append("total_length: does not match the paths")
    x = solution.certificate
    if len(x) != query.k:
        diags.append(f"certificate size: expected {query.k}, got {len(x)}")
    if not x <= seen:
        diags.append("certificate: not a subset of the path vertices")
    if matroid is None:
        cols = [graph.colors[v] for v in x]
        if len(set(cols)) != len(cols):
            diags.append("certificate colors: not pairwise distinct")
    else:
        if not matroid.is_independent(x):
            diags.append("certificate rank: not independent in the matroid")
    if sum(graph.weights[v] for v in x) != query.w:
        diags.append(f"certificate weight: expected {query.w}")
    return (not diags, diags)
