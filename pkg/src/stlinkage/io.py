"""Instance and solution documents.

An instance is a single JSON object with fields `n`, `edges`, `colors`,
`weights` and `query` {S, T, p, k, w}; directed instances carry
`directed: true` and `arcs` instead of `edges`.  A matroid block
(`matroid`, `transversal` or `rational`) switches the query to ranked mode.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .fields import prime_field, prime_power_field
from .graphs import ColoredWeightedGraph, Digraph, LinkageQuery
from .matroids import LinearMatroid, TransversalInstance, RationalMatrixMatroid

__all__ = [
    "Instance",
    "InstanceFormatError",
    "InstanceSemanticError",
    "load_instance",
    "loads_instance",
    "save_instance",
    "dumps_instance",
    "solution_document",
]


class InstanceFormatError(ValueError):
    """Malformed document: bad JSON or a missing/ill-typed field."""


class InstanceSemanticError(ValueError):
    """Well-formed document describing an invalid instance."""


@dataclass(frozen=True)
class Instance:
    graph: ColoredWeightedGraph | None
    digraph: Digraph | None
    query: LinkageQuery | None
    matroid: LinearMatroid | None = None
    transversal: TransversalInstance | None = None
    rational: RationalMatrixMatroid | None = None

    @property
    def directed(self) -> bool:
        return self.digraph is not None


def _need(doc: dict, key: str, kind):
    if key not in doc:
        raise InstanceFormatError(f"missing field '{key}'")
    val = doc[key]
    if kind is int and (not isinstance(val, int) or isinstance(val, bool)):
        raise InstanceFormatError(f"field '{key}' must be an integer")
    if kind is list and not isinstance(val, list):
        raise InstanceFormatError(f"field '{key}' must be a list")
    if kind is dict and not isinstance(val, dict):
        raise InstanceFormatError(f"field '{key}' must be an object")
    return val


def _int_pairs(raw, what: str):
    out = []
    for item in raw:
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, int) for x in item)):
            raise InstanceFormatError(f"{what}: entries must be [u, v] integer pairs")
        out.append((item[0], item[1]))
    return tuple(out)


def loads_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"bad JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(doc, dict):
        raise InstanceFormatError("top-level document must be an object")
    return instance_from_dict(doc)


def instance_from_dict(doc: dict) -> Instance:
    n = _need(doc, "n", int)
    query = None
    if "query" in doc:
        q = _need(doc, "query", dict)
        try:
            query = LinkageQuery(
                tuple(_need(q, "S", list)),
                tuple(_need(q, "T", list)),
                _need(q, "p", int),
                _need(q, "k", int),
                _need(q, "w", int),
            )
        except ValueError as exc:
            raise InstanceSemanticError(f"query: {exc}")

    if doc.get("directed"):
        arcs = _int_pairs(_need(doc, "arcs", list), "arcs")
        try:
            dg = Digraph(n, arcs)
        except ValueError as exc:
            raise InstanceSemanticError(f"digraph: {exc}")
        return Instance(None, dg, query)

    edges = _int_pairs(_need(doc, "edges", list), "edges")
    colors = tuple(_need(doc, "colors", list))
    weights = tuple(_need(doc, "weights", list))
    try:
        graph = ColoredWeightedGraph(n, edges, colors, weights)
    except ValueError as exc:
        raise InstanceSemanticError(f"graph: {exc}")

    matroid = transversal = rational = None
    if "matroid" in doc:
        m = _need(doc, "matroid", dict)
        f = _need(m, "field", dict)
        p, deg = _need(f, "p", int), _need(f, "degree", int)
        spec = prime_power_field(p, deg) if deg > 1 else prime_field(p)
        entries = _need(m, "entries", list)
        try:
            matroid = LinearMatroid(spec, tuple(tuple(row) for row in entries))
        except ValueError as exc:
            raise InstanceSemanticError(f"matroid: {exc}")
        if matroid.ncols != n:
            raise InstanceSemanticError("matroid: column count must equal n")
    if "transversal" in doc:
        t = _need(doc, "transversal", dict)
        try:
            transversal = TransversalInstance(
                n, _need(t, "right_size", int), _int_pairs(_need(t, "edges", list), "transversal edges")
            )
        except ValueError as exc:
            raise InstanceSemanticError(f"transversal: {exc}")
    if "rational" in doc:
        r = _need(doc, "rational", dict)
        entries = _need(r, "entries", list)
        try:
            rational = RationalMatrixMatroid(
                tuple(tuple(row) for row in entries), _need(r, "bound_c", int)
            )
        except ValueError as exc:
            raise InstanceSemanticError(f"rational: {exc}")
        if rational.ncols != n:
            raise InstanceSemanticError("rational: column count must equal n")

    return Instance(graph, None, query, matroid, transversal, rational)


def instance_to_dict(inst: Instance) -> dict:
    doc: dict = {}
    if inst.directed:
        doc["n"] = inst.digraph.n
        doc["directed"] = True
        doc["arcs"] = [list(a) for a in inst.digraph.arcs]
    else:
        g = inst.graph
        doc["n"] = g.n
        doc["edges"] = [list(e) for e in g.edges]
        doc["colors"] = list(g.colors)
        doc["weights"] = list(g.weights)
    if inst.query is not None:
        q = inst.query
        doc["query"] = {"S": list(q.S), "T": list(q.T), "p": q.p, "k": q.k, "w": q.w}
    if inst.matroid is not None:
        m = inst.matroid
        doc["matroid"] = {
            "field": {"p": m.spec.characteristic, "degree": m.spec.degree},
            "rows": m.nrows,
            "entries": [list(row) for row in m.matrix],
        }
    if inst.transversal is not None:
        t = inst.transversal
        doc["transversal"] = {"right_size": t.right_size, "edges": [list(e) for e in t.edges]}
    if inst.rational is not None:
        r = inst.rational
        doc["rational"] = {"rows": r.nrows, "entries": [list(row) for row in r.matrix], "bound_c": r.bound_c}
    return doc


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), sort_keys=True, indent=1) + "\n"


def load_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_instance(fh.read())


def save_instance(inst: Instance, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_instance(inst))


def solution_document(result, seed: int) -> dict:
    """Solution document with the replay seed echoed."""
    doc = {"seed": seed}
    if result is None or getattr(result, "solution", None) is None:
        doc["feasible"] = False
        doc["trials_used"] = getattr(result, "trials_used", 0) if result is not None else 0
        return doc
    sol = result.solution
    doc.update(
        feasible=True,
        paths=[list(p) for p in sol.paths],
        certificate=sorted(sol.certificate),
        total_length=sol.total_length,
        trials_used=result.trials_used,
    )
    return doc
