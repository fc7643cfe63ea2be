"""Brute-force ground truth: exhaustive linkage enumeration, labeled-walk
family enumeration, and exact monomial summation.

Everything here is guarded to desk-scale sizes; the point is an independent
measurement instrument, not speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .graphs import ColoredWeightedGraph, Digraph, LinkageQuery

__all__ = [
    "OracleSizeError",
    "LabeledWalkTuple",
    "enumerate_linkages",
    "min_colored_linkage",
    "enumerate_walk_tuples",
    "sum_walk_monomials",
    "longest_linkage_digraph",
    "best_certificate",
]


class OracleSizeError(ValueError):
    """Instance exceeds the hard size guard of a brute-force routine."""


def _guard(cond: bool, msg: str):
    if not cond:
        raise OracleSizeError(msg)


# -- linkages ----------------------------------------------------------------


def _canon_path(path, S, T):
    rev = tuple(reversed(path))
    fwd_ok = path[0] in S and path[-1] in T
    rev_ok = rev[0] in S and rev[-1] in T
    if fwd_ok and rev_ok:
        return min(path, rev)
    return path if fwd_ok else rev


def enumerate_linkages(graph: ColoredWeightedGraph, S, T, p: int, max_len: int | None = None):
    """All order-p tuples of vertex-disjoint S-to-T paths, as canonical
    frozensets of path tuples.  max_len bounds the total vertex count."""
    _guard(graph.n <= 12, f"linkage enumeration guarded at n <= 12, got {graph.n}")
    S, T = set(S), set(T)
    adj = graph.adjacency()
    cap = max_len if max_len is not None else graph.n
    results = set()

    def paths_from(start, used, budget):
        # all simple paths from `start` avoiding `used`, of length <= budget
        stack = [(start, (start,))]
        while stack:
            v, path = stack.pop()
            if v in T:
                yield path
            if len(path) >= budget:
                continue
            for u in adj[v]:
                if u not in used and u not in path:
                    stack.append((u, path + (u,)))

    def extend(partial, used, budget):
        if len(partial) == p:
            results.add(frozenset(_canon_path(q, S, T) for q in partial))
            return
        remaining = p - len(partial)
        # enforce increasing starts for canonical enumeration
        floor = partial[-1][0] if partial else -1
        for s in sorted(S):
            if s <= floor or s in used:
                continue
            for path in paths_from(s, used, budget - (remaining - 1)):
                extend(partial + [path], used | set(path), budget - len(path) + (remaining - 1))

    extend([], set(), cap)
    return results


def best_certificate(graph: ColoredWeightedGraph, vertices, k: int, w: int, matroid=None):
    """A set X of k vertices from `vertices` with pairwise-distinct colors (or
    matroid-independent) and total weight exactly w, or None.  Exhaustive."""
    verts = sorted(vertices)
    _guard(len(verts) <= 24, "certificate search guarded at 24 vertices")
    from itertools import combinations

    for combo in combinations(verts, k):
        if sum(graph.weights[v] for v in combo) != w:
            continue
        if matroid is None:
            cols = [graph.colors[v] for v in combo]
            if len(set(cols)) != len(cols):
                continue
        elif not matroid.is_independent(combo):
            continue
        return frozenset(combo)
    return None


def min_colored_linkage(graph: ColoredWeightedGraph, query: LinkageQuery, matroid=None):
    """Optimal total length plus every witness linkage of that length, or None
    when no (k, w)-certified linkage of order p exists."""
    _guard(graph.n <= 12, f"oracle solve guarded at n <= 12, got {graph.n}")
    best = None
    witnesses = []
    for linkage in enumerate_linkages(graph, query.S, query.T, query.p):
        total = sum(len(path) for path in linkage)
        if best is not None and total > best:
            continue
        verts = [v for path in linkage for v in path]
        cert = best_certificate(graph, verts, query.k, query.w, matroid)
        if cert is None:
            continue
        if best is None or total < best:
            best, witnesses = total, []
        witnesses.append((linkage, cert))
    if best is None:
        return None
    return best, witnesses


# -- labeled walk families ----------------------------------------------------


@dataclass(frozen=True)
class LabeledWalkTuple:
    """p walks with a parallel label sequence per walk; label 0 = unlabeled."""

    walks: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[int, ...], ...]

    def length(self) -> int:
        return sum(len(w) for w in self.walks)

    def labeled_positions(self):
        for i, (walk, labs) in enumerate(zip(self.walks, self.labels)):
            for j, r in enumerate(labs):
                if r != 0:
                    yield (i, j, walk[j], r)

    def weight(self, graph: ColoredWeightedGraph) -> int:
        return sum(graph.weights[v] for (_, _, v, _) in self.labeled_positions())

    # classification flags

    def labels_injective(self, k: int) -> bool:
        used = [r for (_, _, _, r) in self.labeled_positions()]
        return len(used) == len(set(used)) and all(1 <= r <= k for r in used)

    def labels_bijective(self, k: int) -> bool:
        used = sorted(r for (_, _, _, r) in self.labeled_positions())
        return used == list(range(1, k + 1))

    def has_labeled_digon(self) -> bool:
        for walk, labs in zip(self.walks, self.labels):
            for j in range(1, len(walk) - 1):
                if labs[j] != 0 and walk[j - 1] == walk[j + 1]:
                    return True
        return False

    def ends_distinct(self) -> bool:
        ends = [w[-1] for w in self.walks]
        return len(ends) == len(set(ends))

    def is_ordered(self) -> bool:
        starts = [w[0] for w in self.walks]
        return all(a < b for a, b in zip(starts, starts[1:]))

    def is_admissible(self, k: int) -> bool:
        """Injective labels, no labeled digons, distinct ending vertices: the
        walk tuples the evaluation polynomial sums over."""
        return self.labels_injective(k) and not self.has_labeled_digon() and self.ends_distinct()

    def is_colorful(self, graph: ColoredWeightedGraph, k: int) -> bool:
        """Admissible and all labeled vertices have pairwise distinct colors."""
        if not self.is_admissible(k):
            return False
        cols = [graph.colors[v] for (_, _, v, _) in self.labeled_positions()]
        return len(set(cols)) == len(cols)


def _compositions(total: int, parts: int, minimum: int):
    if parts == 1:
        if total >= minimum:
            yield (total,)
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def enumerate_walk_tuples(graph: ColoredWeightedGraph, query: LinkageQuery, length: int):
    """Every bijective, digon-free, distinct-ended, ordered labeled walk tuple
    of the given total length, with starts ordv(S), ends exactly T, and
    labeled weight exactly w.

    Requires a normalized query: |S| = |T| = p with S and T disjoint.
    """
    _guard(graph.n <= 5, "walk-family enumeration guarded at n <= 5")
    _guard(length <= 8, "walk-family enumeration guarded at length <= 8")
    _guard(query.k <= 3, "walk-family enumeration guarded at k <= 3")
    _guard(query.p <= 2, "walk-family enumeration guarded at p <= 2")
    S, T, p, k, w = query.S, query.T, query.p, query.k, query.w
    if len(S) != p or len(T) != p or set(S) & set(T):
        raise ValueError("walk-family enumeration expects a normalized query")
    adj = graph.adjacency()
    out = []

    def walks_of(start, ln, end_in):
        stack = [(start,)]
        while stack:
            walk = stack.pop()
            if len(walk) == ln:
                if walk[-1] in end_in:
                    yield walk
                continue
            for u in adj[walk[-1]]:
                stack.append(walk + (u,))

    for comp in _compositions(length, p, 1):
        def rec(idx, chosen, used_ends):
            if idx == p:
                yield tuple(chosen)
                return
            for walk in walks_of(S[idx], comp[idx], set(T) - used_ends):
                yield from rec(idx + 1, chosen + [walk], used_ends | {walk[-1]})

        for walks in rec(0, [], set()):
            positions = [(i, j) for i, wk in enumerate(walks) for j in range(len(wk))]
            # place the k labels injectively on positions, bijective over [k]
            for placement in permutations(range(len(positions)), k):
                labels = [[0] * len(wk) for wk in walks]
                ok = True
                weight = 0
                for lab, pos in enumerate(placement, start=1):
                    i, j = positions[pos]
                    labels[i][j] = lab
                    v = walks[i][j]
                    weight += graph.weights[v]
                    if 0 < j < len(walks[i]) - 1 and walks[i][j - 1] == walks[i][j + 1]:
                        ok = False
                        break
                if not ok or weight != w:
                    continue
                out.append(LabeledWalkTuple(walks, tuple(tuple(l) for l in labels)))
    return out


def sum_walk_monomials(graph: ColoredWeightedGraph, family, assign) -> int:
    """Exact field sum of the walk monomials: the product of one edge variable
    per step and (vertex var * color-label var) per labeled position."""
    f = assign.spec
    total = 0
    for wt in family:
        m = 1
        for walk in wt.walks:
            for u, v in zip(walk, walk[1:]):
                m = f.mul(m, assign.edge_var(u, v))
        for (_, _, v, r) in wt.labeled_positions():
            m = f.mul(m, assign.vertex_var(v))
            m = f.mul(m, assign.color_var(graph.colors[v], r))
        total = f.add(total, m)
    return total


# -- digraphs ------------------------------------------------------------------


def longest_linkage_digraph(dg: Digraph, S, T, p: int):
    """Maximum total-vertex-count order-p directed linkage, or None."""
    _guard(dg.n <= 8, f"digraph oracle guarded at n <= 8, got {dg.n}")
    S, T = set(S), set(T)
    adj = dg.out_adj()
    best: list = [None]

    def paths_from(start, used):
        stack = [(start, (start,))]
        while stack:
            v, path = stack.pop()
            if v in T:
                yield path
            for u in adj[v]:
                if u not in used and u not in path:
                    stack.append((u, path + (u,)))

    def extend(partial, used, starts_used):
        if len(partial) == p:
            total = sum(len(q) for q in partial)
            if best[0] is None or total > best[0][0]:
                best[0] = (total, tuple(partial))
            return
        for s in sorted(S - starts_used - used):
            for path in paths_from(s, used):
                extend(partial + [path], used | set(path), starts_used | {s})

    extend([], set(), set())
    return best[0]


# -- application-level ground truths ------------------------------------------


def enumerate_cycles(graph: ColoredWeightedGraph, through=None):
    """All simple cycles (length >= 3), as vertex tuples anchored at their
    smallest vertex; optionally only those containing all of `through`."""
    _guard(graph.n <= 12, "cycle enumeration guarded at n <= 12")
    adj = graph.adjacency()
    need = set(through) if through else set()
    out = []

    def dfs(anchor, path):
        v = path[-1]
        for u in adj[v]:
            if u == anchor and len(path) >= 3:
                if len(path) >= 3 and path[1] < path[-1] and need <= set(path):
                    out.append(tuple(path))
            elif u > anchor and u not in path:
                dfs(anchor, path + [u])

    for a in range(graph.n):
        dfs(a, [a])
    return out


def min_t_cycle(graph: ColoredWeightedGraph, T):
    """Shortest cycle through all of T, or None."""
    best = None
    for cyc in enumerate_cycles(graph, through=T):
        if best is None or len(cyc) < len(best):
            best = cyc
    return (len(best), best) if best is not None else None


def min_long_t_cycle(graph: ColoredWeightedGraph, T, k: int):
    """Shortest cycle through all of T having at least k vertices, or None."""
    best = None
    for cyc in enumerate_cycles(graph, through=T):
        if len(cyc) >= k and (best is None or len(cyc) < len(best)):
            best = cyc
    return (len(best), best) if best is not None else None


def min_vrp_flower(graph: ColoredWeightedGraph, depot: int, T, p: int):
    """Minimum total cycle length of p cycles pairwise meeting only at the
    depot and jointly covering T (depot counted once per cycle), or None."""
    _guard(graph.n <= 10, "flower enumeration guarded at n <= 10")
    petals = [c for c in enumerate_cycles(graph) if depot in c]
    T = set(T)
    best = [None]

    def rec(idx, chosen, used, covered):
        if len(chosen) == p:
            if T <= covered:
                total = sum(len(c) for c in chosen)
                if best[0] is None or total < best[0][0]:
                    best[0] = (total, tuple(chosen))
            return
        for i in range(idx, len(petals)):
            verts = set(petals[i]) - {depot}
            if verts & used:
                continue
            rec(i + 1, chosen + [petals[i]], used | verts, covered | verts)

    rec(0, [], set(), set())
    return best[0]


def min_vrp_profits(graph: ColoredWeightedGraph, depot: int, p: int, k: int, w: int):
    """Minimum total length of a p-flower whose non-depot vertices contain k
    deliveries of total profit exactly w, or None."""
    _guard(graph.n <= 10, "flower enumeration guarded at n <= 10")
    from itertools import combinations

    petals = [c for c in enumerate_cycles(graph) if depot in c]
    best = [None]

    def has_delivery_set(verts):
        verts = sorted(verts)
        for combo in combinations(verts, k):
            if sum(graph.weights[v] for v in combo) == w:
                return True
        return False

    def rec(idx, chosen, used):
        if len(chosen) == p:
            if has_delivery_set(used):
                total = sum(len(c) for c in chosen)
                if best[0] is None or total < best[0][0]:
                    best[0] = (total, tuple(chosen))
            return
        for i in range(idx, len(petals)):
            verts = set(petals[i]) - {depot}
            if verts & used:
                continue
            rec(i + 1, chosen + [petals[i]], used | verts)

    rec(0, [], set())
    return best[0]


def min_long_colored_linkage(graph: ColoredWeightedGraph, S, T, p: int, k: int, min_len: int):
    """Minimum length among order-p linkages with at least k distinct colors
    and total length at least min_len, or None."""
    best = None
    for linkage in enumerate_linkages(graph, S, T, p):
        total = sum(len(path) for path in linkage)
        if total < min_len:
            continue
        colors = {graph.colors[v] for path in linkage for v in path}
        if len(colors) < k:
            continue
        if best is None or total < best[0]:
            best = (total, linkage)
    return best


def min_weighted_colored_path(graph: ColoredWeightedGraph, edge_weights: dict, query: LinkageQuery):
    """Minimum combined metric (vertex count + traversed edge weight) over
    certified linkages; the measuring stick for edge-weight subdivision."""
    best = None
    for linkage in enumerate_linkages(graph, query.S, query.T, query.p):
        verts = [v for path in linkage for v in path]
        if best_certificate(graph, verts, query.k, query.w) is None:
            continue
        total = sum(len(path) for path in linkage)
        for path in linkage:
            for u, v in zip(path, path[1:]):
                e = (u, v) if u < v else (v, u)
                total += edge_weights.get(e, 1)
        if best is None or total < best[0]:
            best = (total, linkage)
    return best
