"""Small deterministic flow routines: unit-capacity max flow with vertex
splitting, and min-cost vertex-disjoint path packing.

Flow values here never exceed p + 1, so plain augmenting paths are the right
tool; arc-id order fixes all tie-breaking.
"""

from __future__ import annotations

__all__ = ["ArcFlowNetwork", "min_cost_disjoint_paths", "disjoint_paths_digraph"]


class ArcFlowNetwork:
    """Residual arc-list network; arcs are paired (i, i^1)."""

    def __init__(self, n_nodes: int):
        self.n = n_nodes
        self.head: list[int] = []
        self.cap: list[int] = []
        self.cost: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n_nodes)]

    def add_arc(self, u: int, v: int, cap: int, cost: int = 0) -> int:
        i = len(self.head)
        self.head += [v, u]
        self.cap += [cap, 0]
        self.cost += [cost, -cost]
        self.adj[u].append(i)
        self.adj[v].append(i + 1)
        return i

    def max_flow(self, s: int, t: int, limit: int) -> int:
        flow = 0
        while flow < limit:
            parent = self._bfs(s, t)
            if parent is None:
                break
            i = parent[t]
            while True:
                self.cap[i] -= 1
                self.cap[i ^ 1] += 1
                u = self.head[i ^ 1]
                if u == s:
                    break
                i = parent[u]
            flow += 1
        return flow

    def _bfs(self, s: int, t: int):
        parent = [-1] * self.n
        parent[s] = -2
        queue = [s]
        qi = 0
        while qi < len(queue):
            u = queue[qi]
            qi += 1
            for i in self.adj[u]:
                v = self.head[i]
                if self.cap[i] > 0 and parent[v] == -1:
                    parent[v] = i
                    if v == t:
                        return parent
                    queue.append(v)
        return None

    def min_cost_flow(self, s: int, t: int, limit: int) -> tuple[int, int]:
        """Successive shortest augmenting paths (Bellman-Ford handles the
        negative residual costs); returns (flow, cost)."""
        flow = cost = 0
        while flow < limit:
            dist = [None] * self.n
            parent = [-1] * self.n
            dist[s] = 0
            in_queue = [False] * self.n
            queue = [s]
            in_queue[s] = True
            qi = 0
            while qi < len(queue):
                u = queue[qi]
                qi += 1
                in_queue[u] = False
                for i in self.adj[u]:
                    v = self.head[i]
                    if self.cap[i] > 0 and (dist[v] is None or dist[u] + self.cost[i] < dist[v]):
                        dist[v] = dist[u] + self.cost[i]
                        parent[v] = i
                        if not in_queue[v]:
                            queue.append(v)
                            in_queue[v] = True
            if dist[t] is None:
                break
            i = parent[t]
            while i != -2:
                self.cap[i] -= 1
                self.cap[i ^ 1] += 1
                u = self.head[i ^ 1]
                if u == s:
                    break
                i = parent[u]
            flow += 1
            cost += dist[t]
        return flow, cost

    def flow_on(self, arc: int) -> int:
        return self.cap[arc ^ 1]


def _decompose_unit_paths(net: ArcFlowNetwork, src: int, snk: int, p: int, node_of):
    """Walk flow-carrying arcs from src, smallest arc id first."""
    left = [net.flow_on(i) if i % 2 == 0 else 0 for i in range(len(net.head))]
    paths = []
    for _ in range(p):
        path = []
        u = src
        while u != snk:
            nxt = None
            for i in net.adj[u]:
                if i % 2 == 0 and left[i] > 0:
                    nxt = i
                    break
            if nxt is None:
                return None
            left[nxt] -= 1
            u = net.head[nxt]
            v = node_of(u)
            if v is not None and (not path or path[-1] != v):
                path.append(v)
        paths.append(tuple(path))
    return paths


def min_cost_disjoint_paths(graph, S, T, p: int):
    """p vertex-disjoint S-to-T paths of minimum total vertex count, or None.

    Used as the degenerate k = 0 fast path: a shortest linkage with no
    certificate constraints.
    """
    n = graph.n
    # node layout: 0..n-1 = v_in, n..2n-1 = v_out, 2n = src, 2n+1 = snk
    net = ArcFlowNetwork(2 * n + 2)
    src, snk = 2 * n, 2 * n + 1
    for v in range(n):
        net.add_arc(v, n + v, 1, 1)
    for u, v in graph.edges:
        net.add_arc(n + u, v, 1, 0)
        net.add_arc(n + v, u, 1, 0)
    for s in sorted(S):
        net.add_arc(src, s, 1, 0)
    for t in sorted(T):
        net.add_arc(n + t, snk, 1, 0)
    flow, cost = net.min_cost_flow(src, snk, p)
    if flow < p:
        return None
    paths = _decompose_unit_paths(
        net, src, snk, p, lambda u: u if u < n else (u - n if u < 2 * n else None)
    )
    if paths is None:
        return None
    clean = []
    for path in paths:
        seen = []
        for v in path:
            if not seen or seen[-1] != v:
                seen.append(v)
        clean.append(tuple(seen))
    return tuple(clean), cost


def disjoint_paths_digraph(dg, s: int, end_counts: dict, forbidden, special_end: int | None):
    """Paths from s to the requested ends, internally vertex-disjoint, avoiding
    `forbidden`.  end_counts maps end vertex -> number of paths; the path to
    `special_end` must avoid every other end vertex.

    Returns a list of vertex paths or None.  s and the ends are uncapacitated;
    every other vertex has capacity one.
    """
    n = dg.n
    forbidden = set(forbidden)
    ends = set(end_counts)
    total = sum(end_counts.values())
    net = ArcFlowNetwork(2 * n + 2)
    src, snk = 2 * n, 2 * n + 1
    for v in range(n):
        if v in forbidden:
            continue
        cap = total if (v == s or v in ends) else 1
        net.add_arc(v, n + v, cap, 0)
    for u, v in dg.arcs:
        if u in forbidden or v in forbidden:
            continue
        if u in ends and u != s:
            continue  # nothing routes onward through an end vertex
        net.add_arc(n + u, v, 1, 0)
    net.add_arc(src, s, total, 0)
    for t, cnt in sorted(end_counts.items()):
        net.add_arc(n + t, snk, cnt, 0)
    if net.max_flow(src, snk, total) < total:
        return None
    paths = _decompose_unit_paths(
        net, src, snk, total, lambda u: u if u < n else (u - n if u < 2 * n else None)
    )
    if paths is None:
        return None
    if special_end is not None:
        ordered = [p for p in paths if p[-1] == special_end]
        ordered += [p for p in paths if p[-1] != special_end]
        paths = ordered
    return [tuple(p) for p in paths]
