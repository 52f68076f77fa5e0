"""Numeric calculus for sparse-graph fragmentation guarantees.

Covers the supercritical giant-component fixed point, the Chernoff
upper tail used to bound edge counts of small vertex sets, the search
for an admissible set-size fraction ``delta``, and an exhaustive scanner
for connected sets that are denser than ``(1 + eps/3)`` edges per vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Tuple

from .graph import Graph, as_vertex_tuple, components


class EnumerationBudgetError(RuntimeError):
    """The connected-set scan exceeded its examined-set budget."""


def giant_fraction_limit(c: float) -> float:
    """Limiting giant-component fraction of a binomial random graph.

    For mean degree ``c > 1`` this is the unique positive solution of
    ``x = 1 - exp(-c*x)``; at or below the critical point it is 0. The
    returned value satisfies the defining equation with residual at most
    1e-10 (fixed-point iteration from 0.5, bisection as a fallback when
    the contraction is slow near criticality).
    """
    if c <= 0:
        raise ValueError(f"mean degree must be positive, got {c}")
    if c <= 1:
        return 0.0
    x = 0.5
    for _ in range(100_000):
        nx = 1.0 - math.exp(-c * x)
        if abs(nx - x) <= 1e-13:
            return nx
        x = nx
    lo, hi = 5e-324, 1.0  # f(lo) < 0 < f(hi) for c > 1, f(x) = x - 1 + exp(-c*x)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid - 1.0 + math.exp(-c * mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def chernoff_upper_tail(mean: float, threshold: float) -> float:
    """Upper bound on ``P(X >= threshold)`` for ``X`` with binomial mean ``mean``.

    Uses the rate ``log(m) - 1 + 1/m`` with ``m = threshold / mean``;
    only meaningful (and only accepted) above the mean, where the rate
    is strictly positive.
    """
    if mean <= 0:
        raise ValueError(f"mean must be positive, got {mean}")
    if threshold <= mean:
        raise ValueError(
            f"threshold {threshold} must exceed the mean {mean} (bound is vacuous)"
        )
    m = threshold / mean
    rate = math.log(m) - 1.0 + 1.0 / m
    return min(1.0, math.exp(-rate * threshold))


@dataclass(frozen=True)
class TailBound:
    """Union bound on the probability that some ``t``-set spans many edges.

    ``mean`` is the binomial edge-count mean for one set, ``threshold``
    the edge count deemed 'dense', ``rate`` the Chernoff rate, ``bound``
    the clamped probability bound and ``log_bound`` its unclamped
    logarithm. ``simplified_exponent`` is the closed-form exponent
    ``-eps * t * log(tau) / 8`` when its side conditions hold at this
    ``tau``, else ``None``.
    """

    t: int
    tau: float
    mean: float
    threshold: float
    rate: Optional[float]
    bound: float
    log_bound: float
    simplified_exponent: Optional[float]


def dense_set_probability_bound(t: int, n: int, c: float, eps: float) -> TailBound:
    """Bound the probability that some ``t``-set spans more than ``(1+eps/4)t`` edges.

    Multiplies the per-set Chernoff tail by the ``(e*tau)**t`` bound on
    the number of ``t``-sets (``tau = n/t``). Evaluated in log space, so
    astronomically large intermediate factors stay finite; the reported
    ``bound`` is clamped into ``[0, 1]``.
    """
    if not 1 <= t <= n:
        raise ValueError(f"set size must satisfy 1 <= t <= n, got t={t}, n={n}")
    if c <= 1:
        raise ValueError(f"mean degree must exceed 1, got {c}")
    if not 0 < eps < 1:
        raise ValueError(f"tolerance must lie strictly in (0, 1), got {eps}")
    tau = n / t
    threshold = (1.0 + eps / 4.0) * t
    if t == 1:
        return TailBound(1, tau, 0.0, threshold, None, 0.0, -math.inf, None)
    mean = c * t * (t - 1) / (2.0 * n)
    m = threshold / mean
    if m <= 1.0:
        raise ValueError(
            f"side condition failed: threshold/mean = {m:.6g} <= 1 "
            f"(t too large relative to 2n/c)"
        )
    rate = math.log(m) - 1.0 + 1.0 / m
    log_tau = math.log(tau)
    log_bound = t * (1.0 + log_tau) - rate * threshold
    if log_bound >= 0.0:
        bound = 1.0
    elif log_bound < -745.0:
        bound = 0.0
    else:
        bound = math.exp(log_bound)
    simplified = None
    if _exponent_inequality_holds(c, eps, log_tau):
        simplified = -eps * t * log_tau / 8.0
    return TailBound(t, tau, mean, threshold, rate, bound, log_bound, simplified)


def _exponent_inequality_holds(c: float, eps: float, log_tau: float) -> bool:
    """Whether the per-vertex exponent collapses to ``-eps*log(tau)/8``."""
    a = log_tau - 1.0 - math.log(c)
    if a <= 0:
        return False
    return (1.0 + log_tau) - (1.0 + eps / 4.0) * a <= -eps * log_tau / 8.0


@dataclass(frozen=True)
class DeltaSweepRow:
    step: int
    delta: float
    log_tau: float
    lhs: float
    rhs: float
    admissible: bool


def delta_sweep(c: float, eps: float, max_steps: int = 200_000) -> list[DeltaSweepRow]:
    """Geometric grid search for an admissible ``delta``.

    Starting from ``min(2/c, eps/3)`` and halving, each candidate is
    tested at ``tau = 1/delta`` for a positive Chernoff rate margin and
    for the exponent inequality (``lhs <= rhs`` per unit of ``t``). The
    sweep stops at the first admissible candidate, which is therefore the
    largest admissible grid point.
    """
    if c <= 1:
        raise ValueError(f"mean degree must exceed 1, got {c}")
    if not 0 < eps < 1:
        raise ValueError(f"tolerance must lie strictly in (0, 1), got {eps}")
    log_anchor = math.log(min(2.0 / c, eps / 3.0))
    ln2 = math.log(2.0)
    log_c = math.log(c)
    rows = []
    for j in range(1, max_steps + 1):
        log_tau = j * ln2 - log_anchor  # candidate delta = anchor / 2**j
        a = log_tau - 1.0 - log_c
        lhs = (1.0 + log_tau) - (1.0 + eps / 4.0) * a
        rhs = -eps * log_tau / 8.0
        ok = a > 0 and lhs <= rhs
        rows.append(DeltaSweepRow(j, math.exp(-log_tau), log_tau, lhs, rhs, ok))
        if ok:
            return rows
    raise RuntimeError(
        f"no admissible delta within {max_steps} halvings for c={c}, eps={eps}"
    )


def admissible_delta(c: float, eps: float) -> float:
    """Largest grid ``delta`` whose tail exponent is certified at ``tau = 1/delta``.

    The result is strictly below both ``eps/3`` and ``2/c``. It shrinks
    like ``exp(-K/eps)`` and underflows double precision for very small
    tolerances (around ``eps < 0.06`` at ``c = 2``), which is rejected
    rather than silently returned as zero.
    """
    delta = delta_sweep(c, eps)[-1].delta
    if delta <= 0.0:
        raise ValueError(
            f"admissible delta underflows double precision for c={c}, eps={eps}"
        )
    return delta


# ---------------------------------------------------------------------------
# Dense connected sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityReport:
    """Outcome of a dense-set scan.

    ``violations`` lists every connected set of at most ``t_max``
    vertices spanning more than ``(1 + eps/3)`` times its size in edges,
    as ``(sorted vertex tuple, edge count)`` pairs in enumeration order.
    """

    eps: float
    t_max: int
    violations: Tuple[Tuple[Tuple[int, ...], int], ...]
    sets_examined: int


def _enumerate_connected(
    vertices: Iterable[int],
    adj,
    adj_mask: list[int],
    t_max: int,
    visit: Callable[[list[int], int], None],
) -> None:
    """Visit every connected set within ``vertices`` exactly once.

    Standard rooted enumeration: sets are grouped by their smallest
    vertex, and each extension candidate is considered once (taken or
    excluded for the whole branch), which guarantees uniqueness without
    storing previously seen sets. ``visit`` receives the set as a
    scratch list plus its induced edge count.
    """

    for root in sorted(vertices):
        s_list = [root]
        visit(s_list, 0)
        if t_max == 1:
            continue
        ext0 = [u for u in adj[root] if u > root]
        seen0 = 1 << root
        for u in ext0:
            seen0 |= 1 << u

        def rec(s_mask: int, e_count: int, ext: list[int], seen: int) -> None:
            while ext:
                w = ext.pop()
                e2 = e_count + (adj_mask[w] & s_mask).bit_count()
                s_list.append(w)
                visit(s_list, e2)
                if len(s_list) < t_max:
                    new_seen = seen
                    new_ext = ext.copy()
                    for u in adj[w]:
                        if u > root and not (new_seen >> u) & 1:
                            new_seen |= 1 << u
                            new_ext.append(u)
                    rec(s_mask | (1 << w), e2, new_ext, new_seen)
                s_list.pop()

        rec(1 << root, 0, ext0, seen0)


def connected_vertex_sets(g: Graph, t_max: int) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """Yield every connected vertex set of size <= ``t_max`` with its edge count."""
    if t_max < 1:
        raise ValueError(f"size cap must be >= 1, got {t_max}")
    adj_mask = [sum(1 << u for u in nbrs) for nbrs in g.adj]
    out: list[Tuple[Tuple[int, ...], int]] = []

    def visit(s_list: list[int], e_count: int) -> None:
        out.append((tuple(sorted(s_list)), e_count))

    _enumerate_connected(range(g.n), g.adj, adj_mask, t_max, visit)
    return iter(out)


def density_scan(
    g: Graph, t_max: int, eps: float, budget: int = 10_000_000
) -> DensityReport:
    """Find all connected sets of size <= ``t_max`` denser than ``(1+eps/3)``.

    A violating set spans at least one more edge than it has vertices, so
    components of the graph with excess at most 1 provably contain no
    violator and are skipped wholesale; ``sets_examined`` counts only
    the sets actually enumerated. Exceeding ``budget`` examined sets
    raises :class:`EnumerationBudgetError`.
    """
    if t_max < 1:
        raise ValueError(f"size cap must be >= 1, got {t_max}")
    if eps < 0:
        raise ValueError(f"tolerance must be >= 0, got {eps}")
    factor = 1.0 + eps / 3.0
    adj = g.adj
    adj_mask = [sum(1 << u for u in nbrs) for nbrs in adj]
    violations: list[Tuple[Tuple[int, ...], int]] = []
    examined = 0

    def visit(s_list: list[int], e_count: int) -> None:
        nonlocal examined
        examined += 1
        if examined > budget:
            raise EnumerationBudgetError(
                f"examined more than {budget} connected sets"
            )
        if e_count > factor * len(s_list):
            violations.append((tuple(sorted(s_list)), e_count))

    for comp in components(g).members():
        twice_edges = sum(len(adj[v]) for v in comp)
        if twice_edges // 2 - len(comp) + 1 <= 1:
            continue  # excess <= 1: every connected subset has e(T) <= |T|
        _enumerate_connected(comp, adj, adj_mask, t_max, visit)

    return DensityReport(eps, t_max, tuple(violations), examined)


def components_pass_density(g: Graph, s: Iterable[int], eps: float) -> bool:
    """Whether every component of ``G[S]`` spans at most ``(1+eps/3)`` times its size."""
    s_t = as_vertex_tuple(g, s)
    alive = bytearray(g.n)
    for v in s_t:
        alive[v] = 1
    seen = bytearray(g.n)
    factor = 1.0 + eps / 3.0
    for root in s_t:
        if seen[root]:
            continue
        seen[root] = 1
        size = 1
        twice_edges = 0
        stack = [root]
        while stack:
            v = stack.pop()
            for u in g.adj[v]:
                if alive[u]:
                    twice_edges += 1
                    if not seen[u]:
                        seen[u] = 1
                        size += 1
                        stack.append(u)
        if twice_edges // 2 > factor * size + 1e-12:
            return False
    return True


def giant_component_fraction(g: Graph) -> float:
    """Size of the largest component divided by the vertex count."""
    if g.n == 0:
        return 0.0
    return components(g).largest / g.n
