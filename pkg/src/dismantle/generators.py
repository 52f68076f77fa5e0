"""Seeded, reproducible graph generators.

All randomness flows through :func:`rng_for`, which maps a 64-bit seed
plus a stream index to an independent PCG64 generator. Replicate ``r``
of an experiment always uses stream ``r``, so any single replicate can
be regenerated in isolation, bit for bit, on the same build.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph

DEFAULT_REJECTION_CAP = 10_000


class SamplingBudgetError(RuntimeError):
    """Rejection sampling exhausted its attempt budget."""


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    """Deterministic generator for ``(seed, stream)``.

    Streams are derived through ``SeedSequence`` spawn keys, so distinct
    streams are statistically independent and reproducible.
    """
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if stream < 0:
        raise ValueError(f"stream index must be >= 0, got {stream}")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(stream,))
    return np.random.Generator(np.random.PCG64(ss))


def gnp(n: int, c: float, seed: int, stream: int = 0) -> Graph:
    """Binomial random graph: each pair kept independently with probability ``c/n``.

    Sampling skips between successes geometrically over the ``C(n, 2)``
    pair sequence, so the cost is proportional to the number of edges
    rather than to ``n**2``.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not 0 <= c <= n:
        raise ValueError(f"mean-degree parameter out of range: c={c}, n={n}")
    p = c / n
    total = n * (n - 1) // 2
    if p == 0.0 or total == 0:
        return Graph(n)
    if p >= 1.0:
        return Graph(n, ((u, v) for u in range(n) for v in range(u + 1, n)))

    rng = rng_for(seed, stream)
    positions: list[int] = []
    cur = -1
    block = max(1024, int(p * total * 1.1) + 16)
    while True:
        skips = rng.geometric(p, size=block)
        cum = cur + np.cumsum(skips, dtype=np.int64)
        if cum[-1] >= total:
            positions.extend(int(x) for x in cum[cum < total])
            break
        positions.extend(int(x) for x in cum)
        cur = int(cum[-1])

    # Decode ascending linear indices to pairs (u, v), u < v, in row order:
    # row u covers indices [row_start, row_start + n - 1 - u).
    edges = []
    u = 0
    row_start = 0
    row_end = n - 1
    for idx in positions:
        while idx >= row_end:
            u += 1
            row_start = row_end
            row_end += n - 1 - u
        edges.append((u, u + 1 + idx - row_start))
    return Graph(n, edges)


def random_regular(
    n: int,
    d: int,
    seed: int,
    stream: int = 0,
    max_attempts: int = DEFAULT_REJECTION_CAP,
) -> Graph:
    """Uniform simple ``d``-regular graph via the configuration model.

    Pairs ``n*d`` half-edges by a uniform matching and rejects the whole
    sample whenever a loop or repeated edge appears, which makes the
    accepted outcomes uniform over simple ``d``-regular graphs. For fixed
    ``d`` the acceptance probability is bounded away from zero, so the
    attempt cap only triggers on misuse (e.g. large ``d`` at small ``n``).
    """
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    if n <= d:
        raise ValueError(f"need n > d, got n={n}, d={d}")
    if (n * d) % 2 != 0:
        raise ValueError(f"n*d must be even, got n={n}, d={d}")
    rng = rng_for(seed, stream)
    half = n * d
    for _ in range(max_attempts):
        perm = rng.permutation(half)
        a = perm[0::2] // d
        b = perm[1::2] // d
        if np.any(a == b):
            continue
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        key = lo.astype(np.int64) * n + hi
        if np.unique(key).size != key.size:
            continue
        return Graph(n, zip(lo.tolist(), hi.tolist()))
    raise SamplingBudgetError(
        f"no simple {d}-regular graph found in {max_attempts} attempts"
    )


def random_tree(n: int, seed: int, stream: int = 0) -> Graph:
    """Uniform random labelled tree (Pruefer-sequence decoding)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n == 1:
        return Graph(1)
    if n == 2:
        return Graph(2, [(0, 1)])
    seq = rng_for(seed, stream).integers(0, n, size=n - 2)
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    for v in seq:
        v = int(v)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1 and v < ptr:
            leaf = v
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    edges.append((leaf, n - 1))
    return Graph(n, edges)


def path(n: int) -> Graph:
    """Path on vertices ``0..n-1`` with edges ``(i, i+1)``."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return Graph(n, ((i, i + 1) for i in range(n - 1)))
