"""Deterministic longest directed (S, T)-linkage.

Single source/sink normalization, then two cases: when every path of some
witness keeps fewer than 2K internal vertices, separation families isolate
each path's interior and an exact-internal-count path search per class does
the rest; otherwise one path is long, its K-suffix is pinned inside one
class, and a flow completion around a shortest in-class suffix finishes.
Everything is deterministic; the answer is a linkage of total length at
least k or a correct "none".
"""

from __future__ import annotations

from itertools import product

from .graphs import Digraph
from .hashing import perfect_hash_family, separation_family
from .flows import disjoint_paths_digraph

__all__ = [
    "st_normalize",
    "exact_length_path",
    "solve_longest_linkage",
    "validate_digraph_linkage",
]


def st_normalize(dg: Digraph, S, T):
    """Fresh s with arcs onto S and fresh t receiving T; linkages correspond
    with total length shifted by exactly 2 (s and t count once)."""
    s, t = dg.n, dg.n + 1
    arcs = list(dg.arcs)
    arcs.extend((s, u) for u in sorted(set(S)))
    arcs.extend((v, t) for v in sorted(set(T)))
    return Digraph(dg.n + 2, tuple(arcs)), s, t


def _induced_arcs(dg: Digraph, keep) -> list[tuple[int, int]]:
    keep = set(keep)
    return [(u, v) for u, v in dg.arcs if u in keep and v in keep]


def exact_length_path(dg: Digraph, s: int, t: int, internal_count: int):
    """A directed (s, t)-path with exactly `internal_count` internal vertices,
    or None; deterministic via perfect hashing plus a used-color-set walk."""
    if internal_count < 1:
        return (s, t) if (s, t) in set(dg.arcs) else None
    if internal_count > dg.n - 2:
        return None
    out = dg.out_adj()
    phf = perfect_hash_family(dg.n, internal_count)
    full = (1 << internal_count) - 1
    for f in phf.functions:
        # states: (vertex, set of internal colors used); parents for rebuild
        parent = {}
        start_states = []
        for u in out[s]:
            if u in (s, t):
                continue
            st = (u, 1 << f[u])
            if st not in parent:
                parent[st] = None
                start_states.append(st)
        frontier = start_states
        while frontier:
            nxt = []
            for (v, used) in frontier:
                if used == full and t in out[v]:
                    path = [t, v]
                    st = (v, used)
                    while parent[st] is not None:
                        st = parent[st]
                        path.append(st[0])
                    path.append(s)
                    return tuple(reversed(path))
                if used == full:
                    continue
                for u in out[v]:
                    if u in (s, t):
                        continue
                    bit = 1 << f[u]
                    if used & bit:
                        continue
                    st = (u, used | bit)
                    if st not in parent:
                        parent[st] = (v, used)
                        nxt.append(st)
            frontier = nxt
    return None


def _short_case(dg: Digraph, s: int, t: int, p: int, K: int):
    bound = min(2 * K - 1, dg.n - 2)
    if bound < 1:
        return None
    for sizes in product(range(1, bound + 1), repeat=p):
        if sum(sizes) < K - 2 or sum(sizes) > dg.n - 2:
            continue
        family = separation_family(dg.n, p, tuple(sizes))
        for f in family.functions:
            paths = []
            ok = True
            for i in range(p):
                keep = [v for v in range(dg.n) if f[v] == i and v not in (s, t)]
                sub = Digraph(dg.n, tuple(_induced_arcs(dg, keep + [s, t])))
                path = exact_length_path(sub, s, t, sizes[i])
                if path is None:
                    ok = False
                    break
                paths.append(path)
            if ok:
                return tuple(paths)
    return None


def _size_tuples(n: int, p: int, K: int, q_prime: int):
    """Class sizes (suffixes, short-path interiors, reserved head).  The
    uniform 2K padding is used when it fits in the universe; otherwise the
    short interiors' exact sizes are branched (a family separates any sets no
    larger than its declared sizes, so bigger declarations always dominate)."""
    fixed = K * (q_prime + 1)
    shorts = p - q_prime
    if fixed + 2 * K * shorts <= n:
        yield (K,) * q_prime + (2 * K,) * shorts + (K,)
        return
    if shorts == 0:
        if fixed <= n:
            yield (K,) * q_prime + (K,)
        return
    for tup in product(range(1, min(2 * K - 1, n) + 1), repeat=shorts):
        if fixed + sum(tup) <= n:
            yield (K,) * q_prime + tup + (K,)


def _main_case(dg: Digraph, s: int, t: int, p: int, K: int):
    n = dg.n
    for q_prime in range(1, p + 1):
        for sizes in _size_tuples(n, p, K, q_prime):
            found = _main_case_branch(dg, s, t, p, K, sizes)
            if found is not None:
                return found
    return None


def _main_case_branch(dg: Digraph, s: int, t: int, p: int, K: int, sizes):
    n = dg.n
    family = separation_family(n, p + 1, sizes)
    for f in family.functions:
        # class p of the family is the reserved head class; classes 0..p-1
        # host the path suffixes
        for i in range(p):
            class_i = [v for v in range(n) if f[v] == i and v not in (s, t)]
            sub = Digraph(n, tuple(_induced_arcs(dg, class_i + [t])))
            dist = _dist_to(sub, t)
            for v_i in sorted(x for x in class_i if dist.get(x) == K):
                q_path = _shortest_path_to(sub, v_i, t)
                if q_path is None or len(q_path) != K + 1:
                    continue
                forb = set(q_path[1:-1])
                found = disjoint_paths_digraph(
                    dg, s, {t: p - 1, v_i: 1}, forb, special_end=v_i
                )
                if found is None:
                    continue
                head = [pp for pp in found if pp[-1] == v_i]
                rest = [pp for pp in found if pp[-1] != v_i]
                if len(head) != 1 or len(rest) != p - 1:
                    continue
                combined = head[0] + q_path[1:]
                return (combined,) + tuple(rest)
    return None


def _dist_to(dg: Digraph, t: int) -> dict:
    radj = dg.in_adj()
    dist = {t: 0}
    frontier = [t]
    while frontier:
        nxt = []
        for v in frontier:
            for u in radj[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        frontier = sorted(nxt)
    return dist


def _shortest_path_to(dg: Digraph, v: int, t: int):
    out = dg.out_adj()
    parent = {v: None}
    frontier = [v]
    while frontier:
        nxt = []
        for x in frontier:
            for u in out[x]:
                if u not in parent:
                    parent[u] = x
                    if u == t:
                        path = [t]
                        while parent[path[-1]] is not None:
                            path.append(parent[path[-1]])
                        return tuple(reversed(path))
                    nxt.append(u)
        frontier = sorted(nxt)
    return None


def solve_longest_linkage(dg: Digraph, S, T, p: int, k: int):
    """Order-p directed S-to-T linkage of total length at least k, or None
    after both cases exhaust every branch (a correct "none": some witness
    always survives one of the branchings).  Deterministic throughout."""
    S, T = sorted(set(S)), sorted(set(T))
    if p < 1 or not S or not T:
        return None
    norm, s, t = st_normalize(dg, S, T)
    K = k + 2
    if k <= p:
        found = disjoint_paths_digraph(norm, s, {t: p}, set(), None)
        if found is None:
            return None
        return tuple(tuple(path[1:-1]) for path in found)
    res = _short_case(norm, s, t, p, K)
    if res is None:
        res = _main_case(norm, s, t, p, K)
    if res is None:
        return None
    return tuple(tuple(path[1:-1]) for path in res)


def validate_digraph_linkage(dg: Digraph, S, T, p: int, k: int, paths) -> tuple[bool, list]:
    diags = []
    if len(paths) != p:
        diags.append(f"order: expected {p}, got {len(paths)}")
    arcs = set(dg.arcs)
    seen = set()
    for i, path in enumerate(paths):
        if not path:
            diags.append(f"path {i}: empty")
            continue
        if path[0] not in S:
            diags.append(f"path {i}: does not start in S")
        if path[-1] not in T:
            diags.append(f"path {i}: does not end in T")
        for u, v in zip(path, path[1:]):
            if (u, v) not in arcs:
                diags.append(f"path {i}: missing arc ({u},{v})")
        for v in path:
            if v in seen:
                diags.append(f"disjointness: vertex {v} reused")
            seen.add(v)
    if sum(len(p) for p in paths) < k:
        diags.append(f"total length {sum(len(p) for p in paths)} < {k}")
    return (not diags, diags)
