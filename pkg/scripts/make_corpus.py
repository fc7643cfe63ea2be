#!/usr/bin/env python3
"""Regenerate the committed test corpora (deterministic; safe to re-run).

- corpus/dp_NN.json: 50 tiny instances in normalized shape (|S| = |T| = p,
  disjoint) for polynomial-evaluation cross-checks, n <= 5, p <= 2, k <= 3.
- corpus/io_NN.json: 20 mixed documents (undirected, directed, matroid
  blocks) for round-trip checks.
- triangle.json: the classic 3-terminal cycle fixture used by CLI tests.
"""

from __future__ import annotations

import json
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from stlinkage.graphs import ColoredWeightedGraph, LinkageQuery
from stlinkage.io import Instance, dumps_instance

OUT = os.path.join(os.path.dirname(__file__), "..", "tests", "data")


def random_graph(rng, n, density=0.55, max_color=None, max_weight=3):
    while True:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < density]
        if edges:
            break
    colors = [int(rng.integers(1, (max_color or n) + 1)) for _ in range(n)]
    weights = [int(rng.integers(1, max_weight + 1)) for _ in range(n)]
    return ColoredWeightedGraph.build(n, edges, colors, weights)


def make_dp_corpus():
    rng = np.random.default_rng(20240801)
    out = []
    while len(out) < 50:
        n = int(rng.integers(3, 6))
        p = int(rng.integers(1, 3))
        if n < 2 * p:
            continue
        g = random_graph(rng, n)
        k = int(rng.integers(0, 4))
        verts = [int(x) for x in rng.permutation(n)]
        S, T = sorted(verts[:p]), sorted(verts[p:2 * p])
        if k == 0:
            w = 0
        else:
            w = int(rng.integers(k, 3 * k + 1))
        try:
            q = LinkageQuery(tuple(S), tuple(T), p, k, w)
        except ValueError:
            continue
        out.append(Instance(g, None, q))
    return out


def make_io_corpus():
    rng = np.random.default_rng(20240802)
    docs = []
    for i in range(20):
        n = int(rng.integers(3, 8))
        if i % 4 == 3:
            arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.3]
            from stlinkage.graphs import Digraph

            k = int(rng.integers(0, 3))
            q = LinkageQuery((0,), (n - 1,), 1, k, k)
            docs.append(Instance(None, Digraph(n, tuple(arcs)), q))
            continue
        g = random_graph(rng, n)
        k = int(rng.integers(1, 3))
        q = LinkageQuery((0,), (n - 1,), 1, k, int(rng.integers(k, 2 * k + 1)))
        matroid = transversal = rational = None
        if i % 4 == 1:
            from stlinkage.fields import prime_field
            from stlinkage.matroids import LinearMatroid

            spec = prime_field(5)
            rows = tuple(
                tuple(int(rng.integers(0, 5)) for _ in range(n)) for _ in range(3)
            )
            matroid = LinearMatroid(spec, rows)
        elif i % 4 == 2:
            from stlinkage.matroids import TransversalInstance

            m = int(rng.integers(1, 4))
            edges = [
                (a, b) for a in range(n) for b in range(m) if rng.random() < 0.5
            ]
            transversal = TransversalInstance(n, m, tuple(edges))
        docs.append(Instance(g, None, q, matroid, transversal, rational))
    return docs


def main():
    corpus_dir = os.path.join(OUT, "corpus")
    os.makedirs(corpus_dir, exist_ok=True)
    for i, inst in enumerate(make_dp_corpus()):
        with open(os.path.join(corpus_dir, f"dp_{i:02d}.json"), "w") as fh:
            fh.write(dumps_instance(inst))
    for i, inst in enumerate(make_io_corpus()):
        with open(os.path.join(corpus_dir, f"io_{i:02d}.json"), "w") as fh:
            fh.write(dumps_instance(inst))
    triangle = {
        "n": 3,
        "edges": [[0, 1], [0, 2], [1, 2]],
        "colors": [1, 2, 3],
        "weights": [1, 1, 1],
    }
    with open(os.path.join(OUT, "triangle.json"), "w") as fh:
        json.dump(triangle, fh, indent=1)
        fh.write("\n")
    print(f"corpus written under {OUT}")


if __name__ == "__main__":
    main()
