"""Evaluation of the labeled-walk generating polynomial at a point.

The polynomial is the sum, over all bijectively labeled, digon-free,
distinct-ended, ordered walk tuples with the queried starts/ends/length/
weight, of one variable per walk edge and a (vertex, color-label) variable
pair per labeled position.  Over a characteristic-2 field it vanishes
identically when no certified linkage of at most the queried length exists,
and is nonzero when one of exactly that length does, so evaluating at random
points and scanning lengths upward finds the optimum with one-sided error.

Two interchangeable evaluators live here: a dict-based reference that follows
the layer recurrence literally, and a packed-array kernel (dp_kernel) used
automatically when the field fits in table range.  They return identical
values.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import FieldSpec
from .graphs import ColoredWeightedGraph, LinkageQuery

__all__ = [
    "VariableAssignment",
    "polynomial_degree",
    "evaluate",
    "evaluate_reference",
    "evaluate_all_lengths",
]

KERNEL_MAX_DEGREE = 12  # per-color lookup tables stop being L1-friendly above


@dataclass(frozen=True)
class VariableAssignment:
    """A point: one field value per edge, per vertex, and per (color, label)
    pair; |E| + n + n*k variables total, all over one field."""

    spec: FieldSpec
    f_e: dict
    f_v: dict
    f_c: dict
    k: int

    @classmethod
    def random(cls, graph: ColoredWeightedGraph, k: int, spec: FieldSpec, rng) -> "VariableAssignment":
        f_e = {e: spec.sample(rng) for e in graph.edges}
        f_v = {v: spec.sample(rng) for v in range(graph.n)}
        f_c = {(c, r): spec.sample(rng) for c in range(1, graph.n + 1) for r in range(1, k + 1)}
        return cls(spec, f_e, f_v, f_c, k)

    def edge_var(self, u: int, v: int) -> int:
        return self.f_e[(u, v) if u < v else (v, u)]

    def vertex_var(self, v: int) -> int:
        return self.f_v[v]

    def color_var(self, color: int, label: int) -> int:
        return self.f_c[(color, label)]


def polynomial_degree(length: int, p: int, k: int) -> int:
    """Total degree of every monomial: length - p edge variables plus k vertex
    and k color-label variables."""
    if length < p:
        raise ValueError("length must be at least p")
    return length - p + 2 * k


def _check_normalized(graph, query, length):
    if len(query.S) != query.p or len(query.T) != query.p:
        raise ValueError("evaluate requires |S| = |T| = p (normalize first)")
    if set(query.S) & set(query.T):
        raise ValueError("evaluate requires S and T disjoint (normalize first)")
    if length < query.p or length > graph.n:
        raise ValueError(f"length {length} outside [p, n] = [{query.p}, {graph.n}]")


def evaluate(graph: ColoredWeightedGraph, query: LinkageQuery, length: int, assign: VariableAssignment) -> int:
    """Value of the walk polynomial for the given total length at `assign`."""
    _check_normalized(graph, query, length)
    from . import dp_kernel

    if dp_kernel.usable(assign.spec):
        return dp_kernel.evaluate_lengths(graph, query, length, assign)[length]
    return evaluate_reference(graph, query, length, assign)


def evaluate_all_lengths(graph, query, max_length: int, assign) -> list[int]:
    """Values for every total length up to max_length in a single sweep;
    index ell of the result is the value for length ell."""
    _check_normalized(graph, query, max_length)
    from . import dp_kernel

    if dp_kernel.usable(assign.spec):
        return dp_kernel.evaluate_lengths(graph, query, max_length, assign)
    return [
        evaluate_reference(graph, query, ell, assign) if ell >= query.p else 0
        for ell in range(max_length + 1)
    ]


def evaluate_reference(graph, query, length: int, assign) -> int:
    """Literal layer-by-layer recurrence over dict-keyed states.

    A state is (t, L, T', w', x, y, o): t walks so far, label set L, ends of
    finished walks T', labeled weight w', last two vertices (x, y), o = last
    vertex labeled.  Finished-tuple aggregates are keyed (t, T'+last end, L,
    w').  Kept simple on purpose; the packed kernel is the fast path.
    """
    _check_normalized(graph, query, length)
    f = assign.spec
    S = list(query.S)
    T = set(query.T)
    p, k, w = query.p, query.k, query.w
    adj = graph.adjacency()
    colors, weights = graph.colors, graph.weights
    full = (1 << k) - 1

    t_subsets = {size: [frozenset(c) for c in _combos(sorted(T), size)] for size in range(p + 1)}
    # finished-tuple aggregates per layer: cagg[l][(t, frozenset ends, L, w')]
    cagg = {0: {(0, frozenset(), 0, 0): 1}}
    prev: dict = {}

    for l in range(2, length + 1):
        cur: dict = {}
        for t in range(1, p + 1):
            s_t = S[t - 1]
            agg2 = cagg.get(l - 2, {})
            for tp in t_subsets[t - 1]:
                for lmask in range(full + 1):
                    for wp in range(w + 1):
                        for y in range(graph.n):
                            for x in adj[y]:
                                fe = assign.edge_var(x, y)
                                # last vertex unlabeled
                                acc = 0
                                for z in adj[y]:
                                    v0 = prev.get((t, lmask, tp, wp, y, z, 0))
                                    if v0:
                                        acc = f.add(acc, v0)
                                    if z != x:
                                        v1 = prev.get((t, lmask, tp, wp, y, z, 1))
                                        if v1:
                                            acc = f.add(acc, v1)
                                if y == s_t:
                                    c3 = agg2.get((t - 1, tp, lmask, wp))
                                    if c3:
                                        acc = f.add(acc, c3)
                                    for r in _bits(lmask):
                                        c4 = agg2.get((t - 1, tp, lmask & ~(1 << r), wp - weights[y]))
                                        if c4:
                                            term = f.mul(assign.vertex_var(y), assign.color_var(colors[y], r + 1))
                                            acc = f.add(acc, f.mul(term, c4))
                                if acc:
                                    cur[(t, lmask, tp, wp, x, y, 0)] = f.mul(fe, acc)
                                # last vertex labeled with r
                                out = 0
                                for r in _bits(lmask):
                                    lsub = lmask & ~(1 << r)
                                    wsub = wp - weights[x]
                                    if wsub < 0:
                                        continue
                                    acc = 0
                                    for z in adj[y]:
                                        v0 = prev.get((t, lsub, tp, wsub, y, z, 0))
                                        if v0:
                                            acc = f.add(acc, v0)
                                        if z != x:
                                            v1 = prev.get((t, lsub, tp, wsub, y, z, 1))
                                            if v1:
                                                acc = f.add(acc, v1)
                                    if y == s_t:
                                        c3 = agg2.get((t - 1, tp, lsub, wsub))
                                        if c3:
                                            acc = f.add(acc, c3)
                                        for r2 in _bits(lsub):
                                            c4 = agg2.get(
                                                (t - 1, tp, lsub & ~(1 << r2), wsub - weights[y])
                                            )
                                            if c4:
                                                term = f.mul(
                                                    assign.vertex_var(y), assign.color_var(colors[y], r2 + 1)
                                                )
                                                acc = f.add(acc, f.mul(term, c4))
                                    if acc:
                                        term = f.mul(assign.vertex_var(x), assign.color_var(colors[x], r + 1))
                                        out = f.add(out, f.mul(term, acc))
                                if out:
                                    cur[(t, lmask, tp, wp, x, y, 1)] = f.mul(fe, out)
        agg_l: dict = {}
        for (t, lmask, tp, wp, x, y, o), val in cur.items():
            if x in T and x not in tp:
                key = (t, tp | {x}, lmask, wp)
                agg_l[key] = f.add(agg_l.get(key, 0), val)
        cagg[l] = agg_l
        prev = cur

    return cagg.get(length, {}).get((p, frozenset(T), full, w), 0)


def _bits(mask: int):
    r = 0
    while mask:
        if mask & 1:
            yield r
        mask >>= 1
        r += 1


def _combos(items, size):
    from itertools import combinations

    return combinations(items, size)
