"""Random instance generation with density, color-count and weight knobs.

The graph is a random backbone path (guaranteeing connectivity) plus random
chords up to the requested edge budget.  For p = 1 the default query runs
between the backbone endpoints, so sparse instances stay feasible for
benchmark-sized k.
"""

from __future__ import annotations

import numpy as np

from .graphs import ColoredWeightedGraph, LinkageQuery
from .io import Instance

__all__ = ["generate_instance", "generate_digraph_instance"]


def generate_instance(
    n: int,
    avg_degree: float = 3.0,
    n_colors: int | None = None,
    weight_range: tuple[int, int] = (1, 1),
    p: int = 1,
    k: int = 3,
    w: int | None = None,
    seed: int = 0,
    endpoints: str = "backbone",
) -> Instance:
    if n < 2 * p:
        raise ValueError("need n >= 2p")
    rng = np.random.default_rng(seed)
    n_colors = n_colors or max(1, n // 2)
    n_colors = min(n_colors, n)
    order = [int(x) for x in rng.permutation(n)]
    edges = {(min(a, b), max(a, b)) for a, b in zip(order, order[1:])}
    target_m = max(n - 1, int(round(avg_degree * n / 2)))
    tries = 0
    while len(edges) < target_m and tries < 50 * target_m:
        u, v = int(rng.integers(n)), int(rng.integers(n))
        tries += 1
        if u != v:
            edges.add((min(u, v), max(u, v)))
    colors = [int(rng.integers(1, n_colors + 1)) for _ in range(n)]
    lo, hi = weight_range
    weights = [int(rng.integers(lo, hi + 1)) for _ in range(n)]
    graph = ColoredWeightedGraph.build(n, sorted(edges), colors, weights)
    if endpoints == "backbone":
        S = sorted(order[:p])
        T = sorted(order[n - p :])
    else:
        verts = [int(x) for x in rng.permutation(n)]
        S, T = sorted(verts[:p]), sorted(verts[p : 2 * p])
    if w is None:
        w = k * lo if k else 0
    query = LinkageQuery(tuple(S), tuple(T), p, k, w)
    return Instance(graph, None, query)


def generate_digraph_instance(
    n: int,
    avg_degree: float = 3.0,
    p: int = 1,
    k: int = 3,
    seed: int = 0,
) -> Instance:
    from .graphs import Digraph

    if n < 2:
        raise ValueError("need n >= 2")
    rng = np.random.default_rng(seed)
    order = [int(x) for x in rng.permutation(n)]
    arcs = set(zip(order, order[1:]))
    target_m = max(n - 1, int(round(avg_degree * n / 2)))
    tries = 0
    while len(arcs) < target_m and tries < 50 * target_m:
        u, v = int(rng.integers(n)), int(rng.integers(n))
        tries += 1
        if u != v:
            arcs.add((u, v))
    dg = Digraph(n, tuple(sorted(arcs)))
    S = sorted(order[:p])
    T = sorted(order[n - p :])
    query = LinkageQuery(tuple(S), tuple(T), p, k, k)
    return Instance(None, dg, query)
