import glob
import json
import os

import numpy as np
import pytest

from stlinkage.graphs import ColoredWeightedGraph, LinkageQuery
from stlinkage.io import load_instance

DATA = os.path.join(os.path.dirname(__file__), "data")


def corpus_paths(prefix):
    return sorted(glob.glob(os.path.join(DATA, "corpus", f"{prefix}_*.json")))


@pytest.fixture(scope="session")
def dp_corpus():
    out = [load_instance(p) for p in corpus_paths("dp")]
    assert len(out) == 50
    return out


@pytest.fixture(scope="session")
def io_corpus_files():
    files = corpus_paths("io")
    assert len(files) == 20
    return files


@pytest.fixture(scope="session")
def triangle_path():
    return os.path.join(DATA, "triangle.json")


def random_instance(seed, n_lo=3, n_hi=8, k_hi=4, w_mult=3, max_weight=5, density=0.5):
    """One random small instance + query, or None when the draw is invalid."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_lo, n_hi))
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < density]
    if not edges:
        return None
    colors = [int(rng.integers(1, n + 1)) for _ in range(n)]
    weights = [int(rng.integers(1, max_weight + 1)) for _ in range(n)]
    graph = ColoredWeightedGraph.build(n, edges, colors, weights)
    p = int(rng.integers(1, 3))
    if n < 2 * p:
        return None
    k = int(rng.integers(0, k_hi + 1))
    verts = [int(x) for x in rng.permutation(n)]
    S, T = sorted(verts[:p]), sorted(verts[p : 2 * p])
    w = int(rng.integers(k, w_mult * k + 1)) if k else 0
    try:
        query = LinkageQuery(tuple(S), tuple(T), p, k, w)
    except ValueError:
        return None
    return graph, query
