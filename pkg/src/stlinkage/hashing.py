"""Deterministic function families: perfect hashing of small subsets, and the
separation families built from them by composing with sized partitions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

__all__ = ["PerfectHashFamily", "SeparationFamily", "perfect_hash_family", "separation_family"]

_DEDICATED_CAP = 20_000  # switch to the two-level construction above this many subsets


@dataclass(frozen=True)
class PerfectHashFamily:
    """Functions [n] -> [range_size]; every subset of size range_size is
    injectively mapped by at least one member."""

    n: int
    range_size: int
    functions: tuple[tuple[int, ...], ...]  # each one a lookup table of length n

    def covers(self, subset) -> bool:
        want = len(set(subset))
        return any(len({f[x] for x in subset}) == want for f in self.functions)


@dataclass(frozen=True)
class SeparationFamily:
    """Functions [n] -> [q]; for disjoint A_1..A_q of the declared sizes some
    member maps each A_i entirely to class i."""

    n: int
    q: int
    sizes: tuple[int, ...]
    functions: tuple[tuple[int, ...], ...]

    def separates(self, groups) -> bool:
        for f in self.functions:
            if all(all(f[x] == i for x in grp) for i, grp in enumerate(groups)):
                return True
        return False


def _comb(n: int, k: int) -> int:
    import math

    return math.comb(n, k)


@lru_cache(maxsize=128)
def perfect_hash_family(n: int, ell: int) -> PerfectHashFamily:
    """Any correct family is acceptable; size only affects runtime.

    Small cases get one dedicated function per ell-subset (trivially correct);
    larger ones use the classic two-level construction: multiplicative hashing
    modulo a prime into ell^2 buckets, composed with a dedicated
    (ell^2, ell) family.
    """
    if not (1 <= ell <= n):
        raise ValueError("need 1 <= ell <= n")
    if ell == 1:
        return PerfectHashFamily(n, 1, ((0,) * n,))
    if _comb(n, ell) <= _DEDICATED_CAP:
        funcs = []
        for subset in combinations(range(n), ell):
            table = [0] * n
            for i, x in enumerate(subset):
                table[x] = i
            funcs.append(tuple(table))
        return PerfectHashFamily(n, ell, tuple(funcs))
    # two-level: for every ell-set some a makes x -> (a*x mod P) mod ell^2
    # injective (fewer than C(ell,2) * 2P/ell^2 < P collisions to dodge)
    m = ell * ell
    P = _least_prime_above(max(n, m))
    inner = perfect_hash_family(m, ell)
    funcs = []
    for a in range(1, P):
        outer = tuple((a * x % P) % m for x in range(n))
        for g in inner.functions:
            funcs.append(tuple(g[o] for o in outer))
    return PerfectHashFamily(n, ell, tuple(funcs))


def _least_prime_above(n: int) -> int:
    cand = n + 1
    while True:
        if cand > 2 and all(cand % d for d in range(2, int(cand ** 0.5) + 1)):
            return cand
        cand += 1


def _sized_partitions(ell: int, sizes):
    """All ordered partitions of [ell] into blocks of the given sizes."""

    def rec(remaining, szs):
        if not szs:
            yield ()
            return
        head = szs[0]
        rem = sorted(remaining)
        for block in combinations(rem, head):
            left = [x for x in rem if x not in set(block)]
            for tail in rec(left, szs[1:]):
                yield (frozenset(block),) + tail

    yield from rec(list(range(ell)), list(sizes))


@lru_cache(maxsize=128)
def separation_family(n: int, q: int, sizes: tuple[int, ...]) -> SeparationFamily:
    """Compose a perfect hash family for ell = sum(sizes) with every ordered
    partition of [ell] into blocks of those sizes: an injective hash sends
    each A_i into its own block for the right partition choice."""
    if len(sizes) != q or any(s < 0 for s in sizes):
        raise ValueError("sizes must list one nonnegative size per class")
    ell = sum(sizes)
    if ell > n:
        raise ValueError("total size exceeds the universe")
    if q == 1:
        return SeparationFamily(n, 1, tuple(sizes), ((0,) * n,))
    if ell == 0:
        return SeparationFamily(n, q, tuple(sizes), ((0,) * n,))
    phf = perfect_hash_family(n, ell)
    funcs = []
    for partition in _sized_partitions(ell, tuple(sizes)):
        lookup = [0] * ell
        for cls, block in enumerate(partition):
            for x in block:
                lookup[x] = cls
        for h in phf.functions:
            funcs.append(tuple(lookup[h[x]] for x in range(n)))
    return SeparationFamily(n, q, tuple(sizes), tuple(funcs))
