"""Immutable simple undirected graphs and basic structure queries.

Vertices are dense integer ids ``0..n-1``. Graphs are never mutated:
removal of vertices is always expressed as a vertex set, so results stay
auditable and graphs can be shared freely across concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Tuple


class EdgeListFormatError(ValueError):
    """An edge-list file violates the expected text format."""


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``edges`` is a sorted tuple of ``(u, v)`` pairs with ``u < v``;
    ``adj`` is a tuple of sorted neighbor tuples. Both are fixed at
    construction time.
    """

    __slots__ = ("n", "m", "edges", "adj")

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]] = ()):
        if n < 0:
            raise ValueError(f"vertex count must be >= 0, got {n}")
        seen = set()
        norm = []
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge endpoint out of range: ({u}, {v}) with n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise ValueError(f"duplicate edge ({e[0]}, {e[1]})")
            seen.add(e)
            norm.append(e)
        norm.sort()
        adj: list[list[int]] = [[] for _ in range(n)]
        # Scanning sorted (u, v) pairs appends every adjacency list in
        # ascending order: all (x, v) with x < v precede all (v, y).
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)
        self.n = n
        self.m = len(norm)
        self.edges: Tuple[Tuple[int, int], ...] = tuple(norm)
        self.adj: Tuple[Tuple[int, ...], ...] = tuple(tuple(a) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(n: int, edges: Iterable[Tuple[int, int]]) -> Graph:
    """Validate and build a graph from an explicit edge list.

    Rejects out-of-range endpoints, self-loops and duplicate edges,
    each with its own message.
    """
    return Graph(n, edges)


@dataclass(frozen=True)
class ComponentDecomposition:
    """Connected components of a graph.

    ``labels[v]`` is the component id of vertex ``v``; ids are assigned
    in order of each component's smallest vertex. ``sizes[i]`` is the
    size of component ``i``.
    """

    labels: Tuple[int, ...]
    sizes: Tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.sizes)

    @property
    def largest(self) -> int:
        return max(self.sizes, default=0)

    def members(self) -> list[list[int]]:
        """Vertex lists per component, each ascending."""
        out: list[list[int]] = [[] for _ in self.sizes]
        for v, c in enumerate(self.labels):
            out[c].append(v)
        return out


def components(g: Graph) -> ComponentDecomposition:
    """Decompose ``g`` into connected components (iterative DFS)."""
    labels = [-1] * g.n
    sizes: list[int] = []
    adj = g.adj
    for s in range(g.n):
        if labels[s] >= 0:
            continue
        cid = len(sizes)
        labels[s] = cid
        count = 1
        stack = [s]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if labels[u] < 0:
                    labels[u] = cid
                    count += 1
                    stack.append(u)
        sizes.append(count)
    return ComponentDecomposition(tuple(labels), tuple(sizes))


def as_vertex_tuple(g: Graph, s: Iterable[int]) -> Tuple[int, ...]:
    """Normalize a vertex set to a sorted tuple, checking the id range."""
    ids = sorted(set(s))
    if ids and (ids[0] < 0 or ids[-1] >= g.n):
        bad = ids[0] if ids[0] < 0 else ids[-1]
        raise ValueError(f"invalid vertex id {bad} for graph with n={g.n}")
    return tuple(ids)


def induced_subgraph(g: Graph, s: Iterable[int]) -> Tuple[Graph, dict]:
    """Subgraph induced by ``s`` plus the old->new index map.

    New ids follow the sorted order of ``s``, so the map is the unique
    order-preserving bijection onto ``0..len(s)-1``.
    """
    ids = as_vertex_tuple(g, s)
    index = {v: i for i, v in enumerate(ids)}
    member = set(ids)
    edges = []
    for v in ids:
        iv = index[v]
        for u in g.adj[v]:
            if u > v and u in member:
                edges.append((iv, index[u]))
    return Graph(len(ids), edges), index


def excess(g: Graph) -> int:
    """Edges minus vertices plus components; 0 exactly for forests."""
    return g.m - g.n + components(g).count


def count_short_cycles(g: Graph, k: int) -> int:
    """Number of distinct simple cycles of length at most ``k``.

    Cycles are counted once each (unrooted, undirected): the DFS only
    emits the representative that starts at the cycle's smallest vertex
    and continues toward its smaller neighbor. Enumeration cost grows
    with the number of cycles; intended for desk-scale graphs.
    """
    if k < 3:
        raise ValueError(f"cycle length bound must be >= 3, got {k}")
    adj = g.adj
    n = g.n
    count = 0
    on_path = bytearray(n)
    for s in range(n):
        path = [s]
        on_path[s] = 1
        iters: list[Iterator[int]] = [iter(adj[s])]
        while iters:
            advanced = False
            for u in iters[-1]:
                if u == s:
                    if len(path) >= 3 and path[1] < path[-1]:
                        count += 1
                elif u > s and not on_path[u] and len(path) < k:
                    path.append(u)
                    on_path[u] = 1
                    iters.append(iter(adj[u]))
                    advanced = True
                    break
            if not advanced:
                on_path[path.pop()] = 0
                iters.pop()
    return count


def write_edgelist(g: Graph, path) -> None:
    """Write ``g`` as text: first line ``n m``, then one ``u v`` line per edge."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")


def read_edgelist(path) -> Graph:
    """Parse the edge-list format written by :func:`write_edgelist`.

    Blank lines and lines starting with ``#`` are ignored. Any deviation
    from the format raises :class:`EdgeListFormatError` with the
    offending line number.
    """
    header = None
    edges = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if header is None:
                if len(parts) != 2:
                    raise EdgeListFormatError(f"line {lineno}: expected header 'n m'")
                try:
                    header = (int(parts[0]), int(parts[1]))
                except ValueError:
                    raise EdgeListFormatError(
                        f"line {lineno}: non-integer header fields"
                    ) from None
                continue
            if len(parts) != 2:
                raise EdgeListFormatError(f"line {lineno}: expected edge 'u v'")
            try:
                edges.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise EdgeListFormatError(
                    f"line {lineno}: non-integer edge endpoints"
                ) from None
    if header is None:
        raise EdgeListFormatError("line 1: missing header 'n m'")
    n, m = header
    if len(edges) != m:
        raise EdgeListFormatError(
            f"header declares {m} edges but file contains {len(edges)}"
        )
    try:
        return Graph(n, edges)
    except ValueError as exc:
        raise EdgeListFormatError(str(exc)) from None
