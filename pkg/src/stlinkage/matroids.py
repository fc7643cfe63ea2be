"""Linear matroids over finite fields: independence testing by elimination,
lossy rank-k truncation, and conversions from transversal and bounded-integer
representations."""

from __future__ import annotations

from dataclasses import dataclass

from .fields import FieldSpec, prime_field, extend_field, embedding

__all__ = [
    "LinearMatroid",
    "TransversalInstance",
    "RationalMatrixMatroid",
    "lossy_truncate",
    "transversal_to_linear",
    "rational_to_prime_field",
    "least_prime_at_least",
    "first_primes",
]


@dataclass(frozen=True)
class LinearMatroid:
    """r x n matrix over `spec`; column j is ground element j."""

    spec: FieldSpec
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.matrix:
            raise ValueError("matrix needs at least one row")
        width = len(self.matrix[0])
        if any(len(row) != width for row in self.matrix):
            raise ValueError("ragged matrix")
        order = self.spec.order
        if any(not (0 <= x < order) for row in self.matrix for x in row):
            raise ValueError("entry out of field range")

    @property
    def nrows(self) -> int:
        return len(self.matrix)

    @property
    def ncols(self) -> int:
        return len(self.matrix[0])

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.matrix)

    def rank_of(self, cols) -> int:
        """Rank of the given column set, by Gaussian elimination (no
        determinants, so characteristic never matters)."""
        f = self.spec
        rows = [[self.matrix[i][j] for j in cols] for i in range(self.nrows)]
        rank = 0
        ncols = len(cols)
        for c in range(ncols):
            pivot = next((r for r in range(rank, self.nrows) if rows[r][c] != 0), None)
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            inv = f.inv(rows[rank][c])
            rows[rank] = [f.mul(inv, x) for x in rows[rank]]
            for r in range(self.nrows):
                if r != rank and rows[r][c] != 0:
                    factor = rows[r][c]
                    rows[r] = [f.sub(x, f.mul(factor, y)) for x, y in zip(rows[r], rows[rank])]
            rank += 1
            if rank == self.nrows:
                break
        return rank

    def is_independent(self, cols) -> bool:
        cols = sorted(cols)
        if len(set(cols)) != len(cols):
            raise ValueError("duplicate column indices")
        if not cols:
            return True
        if len(cols) > self.nrows:
            return False
        return self.rank_of(cols) == len(cols)


@dataclass(frozen=True)
class TransversalInstance:
    """Bipartite incidence (ground side A = [0, ground_size), right side B);
    a set is independent when it is matchable into B."""

    ground_size: int
    right_size: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for a, b in self.edges:
            if not (0 <= a < self.ground_size and 0 <= b < self.right_size):
                raise ValueError(f"transversal edge ({a},{b}) out of range")

    def is_independent(self, subset) -> bool:
        """Hopcroft-Karp is overkill at this scale; augmenting paths suffice."""
        subset = sorted(set(subset))
        adj = {a: [] for a in subset}
        for a, b in self.edges:
            if a in adj:
                adj[a].append(b)
        match_b: dict[int, int] = {}

        def augment(a, seen):
            for b in adj[a]:
                if b in seen:
                    continue
                seen.add(b)
                if b not in match_b or augment(match_b[b], seen):
                    match_b[b] = a
                    return True
            return False

        return all(augment(a, set()) for a in subset)


@dataclass(frozen=True)
class RationalMatrixMatroid:
    """Integer matrix with |entries| <= n^(c*k), declared via bound_c and
    validated against the actual entries at query time."""

    matrix: tuple[tuple[int, ...], ...]
    bound_c: int

    def __post_init__(self):
        if not self.matrix:
            raise ValueError("matrix needs at least one row")
        width = len(self.matrix[0])
        if any(len(row) != width for row in self.matrix):
            raise ValueError("ragged matrix")
        if self.bound_c < 1:
            raise ValueError("bound_c must be >= 1")

    @property
    def nrows(self) -> int:
        return len(self.matrix)

    @property
    def ncols(self) -> int:
        return len(self.matrix[0])

    def check_bound(self, k: int):
        bound = max(self.ncols, 2) ** (self.bound_c * k)
        worst = max((abs(x) for row in self.matrix for x in row), default=0)
        if worst > bound:
            raise ValueError(
                f"declared bound n^(c*k) = {bound} is below actual entry magnitude {worst}"
            )

    def is_independent(self, cols) -> bool:
        """Exact rank over the rationals via fractions-free elimination."""
        from fractions import Fraction

        cols = sorted(set(cols))
        if not cols:
            return True
        if len(cols) > self.nrows:
            return False
        rows = [[Fraction(self.matrix[i][j]) for j in cols] for i in range(self.nrows)]
        rank = 0
        for c in range(len(cols)):
            pivot = next((r for r in range(rank, self.nrows) if rows[r][c] != 0), None)
            if pivot is None:
                return False
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            inv = 1 / rows[rank][c]
            rows[rank] = [inv * x for x in rows[rank]]
            for r in range(rank + 1, self.nrows):
                if rows[r][c] != 0:
                    factor = rows[r][c]
                    rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
            rank += 1
        return rank == len(cols)


def lossy_truncate(matroid: LinearMatroid, k: int, rng) -> LinearMatroid:
    """Multiply by a random k x r matrix over a field of order >= 2k.

    Dependent sets stay dependent always; each independent k-set stays
    independent with probability at least 1/2 per call.
    """
    if k < 1:
        raise ValueError("truncation rank must be >= 1")
    spec = extend_field(matroid.spec, 2 * k)
    if spec is matroid.spec or spec == matroid.spec:
        lifted = matroid.matrix
    else:
        emb = embedding(matroid.spec, spec)
        lifted = tuple(tuple(emb(x) for x in row) for row in matroid.matrix)
    r, n = matroid.nrows, matroid.ncols
    rand = [[spec.sample(rng) for _ in range(r)] for _ in range(k)]
    out = []
    for i in range(k):
        row = []
        for j in range(n):
            acc = 0
            for t in range(r):
                acc = spec.add(acc, spec.mul(rand[i][t], lifted[t][j]))
            row.append(acc)
        out.append(tuple(row))
    return LinearMatroid(spec, tuple(out))


def _sieve_upto(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(limit ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = b"\x00" * len(sieve[i * i :: i])
    return [i for i, v in enumerate(sieve) if v]


def first_primes(count: int) -> list[int]:
    if count < 1:
        raise ValueError("need count >= 1")
    if count > 2_000_000:
        raise ValueError(f"prime sieve capped; {count} primes requested")
    import math

    limit = 16
    if count >= 6:
        x = count * (math.log(count) + math.log(math.log(count)))
        limit = int(x) + 10
    while True:
        primes = _sieve_upto(limit)
        if len(primes) >= count:
            return primes[:count]
        limit *= 2


def least_prime_at_least(n: int) -> int:
    cand = max(n, 2)
    while True:
        if all(cand % d for d in range(2, int(cand ** 0.5) + 1)):
            return cand
        cand += 1


def transversal_to_linear(tr: TransversalInstance, k: int, rng) -> LinearMatroid:
    """|B| x |A| matrix over GF(least prime >= 2k): random entry on each edge,
    zero elsewhere.  Dependence is preserved always; independent k-sets
    survive with probability >= 1/2."""
    spec = prime_field(least_prime_at_least(2 * k))
    rows = [[0] * tr.ground_size for _ in range(tr.right_size)]
    for a, b in sorted(tr.edges):
        rows[b][a] = spec.sample(rng)
    if tr.right_size == 0:
        rows = [[0] * tr.ground_size]
    return LinearMatroid(spec, tuple(tuple(r) for r in rows))


def rational_to_prime_field(mat: RationalMatrixMatroid, k: int, rng) -> LinearMatroid:
    """Reduce mod a random prime among the first 2*log2(k! * n^(c*k^2));
    a k x k determinant is nonzero mod most of those primes."""
    import math

    mat.check_bound(k)
    n = max(mat.ncols, 2)
    log2_bound = math.lgamma(k + 1) / math.log(2) + mat.bound_c * k * k * math.log2(n)
    count = max(2, int(2 * log2_bound) + 1)
    primes = first_primes(count)
    p = primes[int(rng.integers(0, len(primes)))]
    spec = prime_field(p)
    rows = tuple(tuple(x % p for x in row) for row in mat.matrix)
    return LinearMatroid(spec, rows)
