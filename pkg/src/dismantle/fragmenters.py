"""Fragmentation procedures producing certified vertex removals.

Every operation returns a :class:`FragmentationResult` whose kept and
removed sets partition the vertex range and whose feasibility (largest
surviving component) is recomputed from the graph rather than trusted.

Deterministic tie-breaking rule used throughout: among candidate
vertices, prefer maximum current degree, then the smallest id. This
keeps results independent of hash or iteration order.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Tuple

from .analysis import components_pass_density
from .graph import Graph, as_vertex_tuple, components, excess


class PipelineBudgetError(RuntimeError):
    """Density check passed but the pipeline exceeded its removal budget."""


@dataclass(frozen=True)
class FragmentationResult:
    """Outcome of a fragmentation run.

    ``kept`` and ``removed`` partition ``0..n-1``; ``max_component`` is
    the largest component of the subgraph induced by ``kept``; ``nu`` is
    the kept fraction ``len(kept) / n``. ``component_count`` is carried
    as a descriptive statistic of the surviving subgraph.
    """

    kept: Tuple[int, ...]
    removed: Tuple[int, ...]
    max_component: int
    method: str
    nu: float
    component_count: int = 0


def max_component_size(g: Graph, kept: Iterable[int]) -> int:
    """Largest connected component of the subgraph induced by ``kept``."""
    member = set(kept)
    best = 0
    seen: set[int] = set()
    adj = g.adj
    for s in member:
        if s in seen:
            continue
        size = 1
        seen.add(s)
        stack = [s]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u in member and u not in seen:
                    seen.add(u)
                    size += 1
                    stack.append(u)
        if size > best:
            best = size
    return best


def _make_result(g: Graph, kept: Iterable[int], method: str) -> FragmentationResult:
    kept_t = as_vertex_tuple(g, kept)
    member = set(kept_t)
    removed = tuple(v for v in range(g.n) if v not in member)
    nu = 1.0 if g.n == 0 else len(kept_t) / g.n
    largest = 0
    count = 0
    seen: set[int] = set()
    adj = g.adj
    for s in member:
        if s in seen:
            continue
        count += 1
        size = 1
        seen.add(s)
        stack = [s]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u in member and u not in seen:
                    seen.add(u)
                    size += 1
                    stack.append(u)
        if size > largest:
            largest = size
    return FragmentationResult(kept_t, removed, largest, method, nu, count)


def component_cap(eps: float) -> int:
    """Smallest integer >= 3/eps (guarded against float noise)."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"tolerance must lie strictly in (0, 1), got {eps}")
    return math.ceil(round(3.0 / eps, 9))


# ---------------------------------------------------------------------------
# Forest fragmentation
# ---------------------------------------------------------------------------


def _tree_orientation_sink(current: list[int], parent: dict, order: list[int],
                           sz: dict) -> int:
    """Sink of the orientation 'edge points at its larger side'.

    Ties are oriented toward the endpoint with the smaller id. A sink
    (all incident edges pointing at it) exists for any orientation of a
    tree; removing it leaves only the strictly-smaller far sides.
    """
    nt = len(current)
    outdeg = dict.fromkeys(current, 0)
    for c in order[1:]:
        p = parent[c]
        a = sz[c]
        b = nt - a
        if a > b:
            outdeg[p] += 1
        elif b > a:
            outdeg[c] += 1
        elif p < c:
            outdeg[c] += 1
        else:
            outdeg[p] += 1
    return min(v for v in current if outdeg[v] == 0)


def _fragment_forest_removals(g: Graph, verts: Iterable[int], k: int) -> list[int]:
    """Removals making every component of the induced forest have <= k vertices.

    The region induced by ``verts`` must be acyclic. Per tree of size
    above ``k``: compute both side sizes of every edge in one subtree
    pass; edges whose two sides both exceed ``k`` are 'heavy'. With no
    heavy edge, one sink removal finishes the tree. Otherwise the heavy
    edges form a subtree; removing a leaf of that subtree detaches only
    components of size <= k plus one surviving tree of size <= n-k-1,
    which bounds total removals per tree by floor(n / (k+1)).
    """
    adj = g.adj
    alive = bytearray(g.n)
    verts = list(verts)
    for v in verts:
        alive[v] = 1

    removed: list[int] = []
    seen = bytearray(g.n)
    trees: list[list[int]] = []
    for s in verts:
        if seen[s]:
            continue
        seen[s] = 1
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if alive[u] and not seen[u]:
                    seen[u] = 1
                    comp.append(u)
                    stack.append(u)
        if len(comp) > k:
            trees.append(comp)

    for tree in trees:
        current = tree
        while len(current) > k:
            root = min(current)
            parent: dict[int, int] = {root: -1}
            order = [root]
            stack = [root]
            while stack:
                v = stack.pop()
                for u in adj[v]:
                    if alive[u] and u not in parent:
                        parent[u] = v
                        order.append(u)
                        stack.append(u)
            sz = dict.fromkeys(order, 1)
            for v in reversed(order[1:]):
                sz[parent[v]] += sz[v]

            nt = len(current)
            heavy_deg = dict.fromkeys(current, 0)
            heavy_nbr: dict[int, int] = {}
            heavy = False
            for c in order[1:]:
                a = sz[c]
                if a > k and nt - a > k:
                    heavy = True
                    p = parent[c]
                    heavy_deg[p] += 1
                    heavy_deg[c] += 1
                    heavy_nbr[p] = c
                    heavy_nbr[c] = p

            if not heavy:
                sink = _tree_orientation_sink(current, parent, order, sz)
                alive[sink] = 0
                removed.append(sink)
                break  # every detached side has <= k vertices

            leaf = min(v for v in current if heavy_deg[v] == 1)
            far = heavy_nbr[leaf]
            alive[leaf] = 0
            removed.append(leaf)
            # Continue with the far side of the leaf's heavy edge; every
            # other detached component has <= k vertices already.
            comp = [far]
            stack = [far]
            local_seen = {far}
            while stack:
                v = stack.pop()
                for u in adj[v]:
                    if alive[u] and u not in local_seen and u in sz:
                        local_seen.add(u)
                        comp.append(u)
                        stack.append(u)
            current = comp
    return removed


def fragment_forest(f: Graph, k: int) -> FragmentationResult:
    """Fragment a forest into components of at most ``k`` vertices.

    Guarantees at most ``floor(n / (k+1))`` removals in total, which is
    tight on paths whose length is a multiple of ``k+1``. Trees with at
    most ``k`` vertices are left untouched; a tree with exactly ``k+1``
    vertices costs one removal (its own component would otherwise exceed
    the cap).
    """
    if k < 1:
        raise ValueError(f"component cap must be >= 1, got {k}")
    if excess(f) != 0:
        raise ValueError("input graph is not a forest")
    removed = _fragment_forest_removals(f, range(f.n), k)
    gone = set(removed)
    return _make_result(f, (v for v in range(f.n) if v not in gone), "forest")


# ---------------------------------------------------------------------------
# Greedy component-capping
# ---------------------------------------------------------------------------


def _split_regions(v: int, nbrs: list[int], alive: bytearray, label: list[int],
                   token: int, adj) -> list[list[int]]:
    """Confirmed components created by deleting ``v`` from its component.

    Runs one breadth-first search per neighbor of ``v`` in round-robin,
    merging searches on contact. All searches that exhaust are complete
    components and are returned; the last still-active search is the
    (usually largest) remainder and is left unexplored, so the common
    no-split case costs only the few steps until the searches meet.
    """
    kgroups = len(nbrs)
    parent = list(range(kgroups))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    queues = [deque([u]) for u in nbrs]
    members: list[list[int] | None] = [[u] for u in nbrs]
    owner = {u: i for i, u in enumerate(nbrs)}
    active = set(range(kgroups))
    exhausted: list[int] = []

    while len(active) > 1:
        for r in sorted(active):
            if r not in active:
                continue
            q = queues[r]
            if not q:
                active.discard(r)
                exhausted.append(r)
            else:
                x = q.popleft()
                for w in adj[x]:
                    if not alive[w] or label[w] != token:
                        continue
                    o = owner.get(w)
                    if o is None:
                        owner[w] = r
                        members[r].append(w)  # type: ignore[union-attr]
                        q.append(w)
                    else:
                        ro = find(o)
                        if ro != r:
                            parent[ro] = r
                            queues[r].extend(queues[ro])
                            queues[ro] = deque()
                            members[r].extend(members[ro])  # type: ignore[arg-type]
                            members[ro] = None
                            active.discard(ro)
                if not q:
                    active.discard(r)
                    exhausted.append(r)
            if len(active) <= 1:
                break
    return [members[r] for r in exhausted]  # type: ignore[misc]


def greedy_fragment(g: Graph, cap: int) -> FragmentationResult:
    """Cap component sizes by repeated maximum-degree removals.

    While some component exceeds ``cap``, its highest-degree vertex
    (smallest id on ties) is removed. Components never interact, so the
    result equals the naive global iteration at a fraction of the cost:
    component bookkeeping is lazy (per-component heaps with stale-entry
    skipping) and split detection explores little beyond the detached
    parts.
    """
    if cap < 1:
        raise ValueError(f"component cap must be >= 1, got {cap}")
    n = g.n
    adj = g.adj
    alive = bytearray([1]) * n
    deg = [len(a) for a in adj]
    label = [-1] * n  # -1 settled kept, -2 removed, else component token
    comps: dict[int, list] = {}  # token -> [size, heap]
    token = 0

    seen = bytearray(n)
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = 1
        members = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = 1
                    members.append(u)
                    stack.append(u)
        if len(members) > cap:
            for v in members:
                label[v] = token
            heap = [(-deg[v], v) for v in members]
            heapq.heapify(heap)
            comps[token] = [len(members), heap]
            token += 1

    removed = []
    work = list(range(token))
    while work:
        t = work.pop()
        entry = comps.pop(t)
        size, heap = entry
        while size > cap:
            while True:
                dneg, v = heapq.heappop(heap)
                if alive[v] and label[v] == t and deg[v] == -dneg:
                    break
            alive[v] = 0
            label[v] = -2
            removed.append(v)
            size -= 1
            nbrs = [u for u in adj[v] if alive[u]]
            for u in nbrs:
                deg[u] -= 1
            if len(nbrs) >= 2:
                for region in _split_regions(v, nbrs, alive, label, t, adj):
                    size -= len(region)
                    if len(region) > cap:
                        for u in region:
                            label[u] = token
                        h2 = [(-deg[u], u) for u in region]
                        heapq.heapify(h2)
                        comps[token] = [len(region), h2]
                        work.append(token)
                        token += 1
                    else:
                        for u in region:
                            label[u] = -1
            for u in nbrs:
                if label[u] == t:
                    heapq.heappush(heap, (-deg[u], u))

    return _make_result(g, (v for v in range(n) if alive[v]), "greedy")


# ---------------------------------------------------------------------------
# Decycling
# ---------------------------------------------------------------------------


def _peel(core: set[int], coredeg: dict[int, int], adj, seeds: Iterable[int]) -> None:
    """Strip vertices of core-degree <= 1 starting from ``seeds`` (cascading)."""
    queue = list(seeds)
    while queue:
        v = queue.pop()
        if v not in core or coredeg[v] > 1:
            continue
        core.discard(v)
        for u in adj[v]:
            if u in core:
                coredeg[u] -= 1
                if coredeg[u] <= 1:
                    queue.append(u)


def _cycle_vertices(core: set[int], adj) -> set[int]:
    """Vertices of ``core`` incident to a non-bridge edge, i.e. on some cycle.

    Only edges with both endpoints in ``core`` count; in a 2-core that
    covers every cycle of the original region.
    """
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    on: set[int] = set()
    timer = 0
    for root in core:
        if root in disc:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, par, it = stack[-1]
            advanced = False
            for u in it:
                if u == par or u not in core:
                    continue
                if u not in disc:
                    disc[u] = low[u] = timer
                    timer += 1
                    stack.append((u, v, iter(adj[u])))
                    advanced = True
                    break
                if disc[u] < disc[v]:  # back edge: lies on a cycle
                    on.add(u)
                    on.add(v)
                    if disc[u] < low[v]:
                        low[v] = disc[u]
            if not advanced:
                stack.pop()
                if stack:
                    pv = stack[-1][0]
                    if low[v] < low[pv]:
                        low[pv] = low[v]
                    if low[v] <= disc[pv]:  # tree edge on a cycle
                        on.add(pv)
                        on.add(v)
    return on


def _decycle_removals(g: Graph, verts: Iterable[int]) -> list[int]:
    """Greedy removals making the region induced by ``verts`` acyclic.

    While some component still has a cycle, the maximum-degree vertex
    lying on a cycle (smallest id on ties) loses its place; components
    never interact, so this global greedy equals independent
    per-component processing. Each removal lowers the excess of its
    component by at least one, so a component loses at most ``excess``
    vertices. Candidates are tracked through the 2-core, which is peeled
    incrementally instead of being recomputed per removal.
    """
    adj = g.adj
    alive = bytearray(g.n)
    verts = list(verts)
    for v in verts:
        alive[v] = 1

    coredeg = {v: sum(alive[u] for u in adj[v]) for v in verts}
    core = set(verts)
    _peel(core, coredeg, adj, [v for v in verts if coredeg[v] <= 1])

    removed: list[int] = []
    while core:
        cyc = _cycle_vertices(core, adj)
        victim = max(cyc, key=lambda v: (sum(alive[u] for u in adj[v]), -v))
        alive[victim] = 0
        removed.append(victim)
        core.discard(victim)
        seeds = []
        for u in adj[victim]:
            if u in core:
                coredeg[u] -= 1
                if coredeg[u] <= 1:
                    seeds.append(u)
        _peel(core, coredeg, adj, seeds)
    return removed


def decycle_heuristic(g: Graph) -> FragmentationResult:
    """Remove cycle vertices greedily until the whole graph is a forest."""
    removed = set(_decycle_removals(g, range(g.n)))
    return _make_result(g, (v for v in range(g.n) if v not in removed), "decycle")


# ---------------------------------------------------------------------------
# Pipeline, trimming, cycle stripping
# ---------------------------------------------------------------------------


def pipeline_fragment(g: Graph, s: Iterable[int], eps: float) -> FragmentationResult:
    """Two-stage fragmentation of ``G[S]`` at component cap ``ceil(3/eps)``.

    Stage one removes cycle vertices until every component of ``G[S]``
    is acyclic (at most ``excess`` removals per component); stage two
    applies :func:`fragment_forest` to the surviving forest. When every
    component of ``G[S]`` spans at most ``(1 + eps/3)`` times its size in
    edges, the total number of removals is certified to stay within
    ``eps * n`` and a violation raises :class:`PipelineBudgetError`.
    """
    cap = component_cap(eps)
    s_t = as_vertex_tuple(g, s)
    decycled = _decycle_removals(g, s_t)
    gone = set(decycled)
    survivors = [v for v in s_t if v not in gone]
    gone.update(_fragment_forest_removals(g, survivors, cap))
    kept = [v for v in s_t if v not in gone]
    result = _make_result(g, kept, "pipeline")
    if result.max_component > cap:
        raise RuntimeError(
            f"internal error: component of size {result.max_component} exceeds cap {cap}"
        )
    removed_from_s = len(s_t) - len(kept)
    if components_pass_density(g, s_t, eps) and removed_from_s > eps * g.n + 1e-9:
        raise PipelineBudgetError(
            f"removed {removed_from_s} of {len(s_t)} vertices, over budget "
            f"{eps * g.n:.1f} despite the density check passing"
        )
    return result


def trim_components(g: Graph, s: Iterable[int], target: int) -> FragmentationResult:
    """Shrink every oversized component of ``G[S]`` to exactly ``target`` vertices.

    A component of size ``t > target`` loses exactly ``t - target``
    vertices (maximum degree first, smaller id on ties); smaller
    components are untouched.
    """
    if target < 1:
        raise ValueError(f"target size must be >= 1, got {target}")
    s_t = as_vertex_tuple(g, s)
    adj = g.adj
    alive = bytearray(g.n)
    for v in s_t:
        alive[v] = 1

    seen = bytearray(g.n)
    removed: list[int] = []
    for root in s_t:
        if seen[root]:
            continue
        seen[root] = 1
        comp = [root]
        stack = [root]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if alive[u] and not seen[u]:
                    seen[u] = 1
                    comp.append(u)
                    stack.append(u)
        if len(comp) <= target:
            continue
        deg = {v: sum(alive[u] for u in adj[v]) for v in comp}
        heap = [(-d, v) for v, d in deg.items()]
        heapq.heapify(heap)
        dead: set[int] = set()
        for _ in range(len(comp) - target):
            while True:
                dneg, v = heapq.heappop(heap)
                if v not in dead and deg[v] == -dneg:
                    break
            dead.add(v)
            alive[v] = 0
            removed.append(v)
            for u in adj[v]:
                if alive[u] and u in deg and u not in dead:
                    deg[u] -= 1
                    heapq.heappush(heap, (-deg[u], u))

    gone = set(removed)
    return _make_result(g, (v for v in s_t if v not in gone), "trim")


def strip_short_cycles(g: Graph, s: Iterable[int], k: int) -> FragmentationResult:
    """Make ``G[S]`` acyclic when all its components have at most ``k`` vertices.

    Every cycle of ``G[S]`` then has length at most ``k``, and the greedy
    decycling removes at most one vertex per such cycle.
    """
    s_t = as_vertex_tuple(g, s)
    sizes = _component_sizes_within(g, s_t)
    if sizes and max(sizes) > k:
        raise ValueError(
            f"component of size {max(sizes)} exceeds the cap {k}"
        )
    removed = set(_decycle_removals(g, s_t))
    return _make_result(g, (v for v in s_t if v not in removed), "strip")


def _component_sizes_within(g: Graph, verts: Tuple[int, ...]) -> list[int]:
    alive = bytearray(g.n)
    for v in verts:
        alive[v] = 1
    seen = bytearray(g.n)
    sizes = []
    for s in verts:
        if seen[s]:
            continue
        seen[s] = 1
        size = 1
        stack = [s]
        while stack:
            v = stack.pop()
            for u in g.adj[v]:
                if alive[u] and not seen[u]:
                    seen[u] = 1
                    size += 1
                    stack.append(u)
        sizes.append(size)
    return sizes


def edge_decycling_count(g: Graph) -> int:
    """Minimum number of edge deletions leaving a spanning forest."""
    return g.m - (g.n - components(g).count)
