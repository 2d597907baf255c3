"""Connected simple graphs, contraction into capacitated networks, and edge-list I/O.

Vertices are dense integers 0..n-1 in memory; the text format is 1-based.
Contraction collapses groups of vertices into super-vertices and stores
parallel edges as integer capacities, which is all the flow code needs.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Sequence

__all__ = [
    "SimpleGraph",
    "FlowNetwork",
    "AugmentedSubgraph",
    "GraphParseError",
    "DisconnectedGraphError",
    "load_graph",
    "dump_graph",
    "contract",
    "identity_network",
    "augment",
]


class GraphParseError(ValueError):
    """Malformed edge-list document; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class DisconnectedGraphError(ValueError):
    def __init__(self, components: int):
        super().__init__(f"graph is disconnected: {components} components")
        self.components = components


class SimpleGraph:
    """Immutable connected simple graph.

    Construction validates simplicity (no self-loops, no parallel edges) and
    connectivity. Instances are safe to share across threads; nothing mutates
    them after ``__init__``.
    """

    __slots__ = ("n", "edges", "adj", "deg", "_edge_set")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 1:
            raise ValueError("vertex count must be positive")
        adj: list[list[int]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"vertex id out of range: ({u}, {v})")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            a, b = (u, v) if u < v else (v, u)
            if (a, b) in seen:
                raise ValueError(f"duplicate edge ({a}, {b})")
            seen.add((a, b))
            adj[a].append(b)
            adj[b].append(a)
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(seen))
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(nb)) for nb in adj)
        self.deg: tuple[int, ...] = tuple(len(nb) for nb in self.adj)
        self._edge_set = seen
        components = _component_count(n, self.adj)
        if components != 1:
            raise DisconnectedGraphError(components)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return self.deg[v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        a, b = (u, v) if u < v else (v, u)
        return (a, b) in self._edge_set

    def volume(self, vertices: Iterable[int]) -> int:
        """Sum of degrees over the given vertex set."""
        total = 0
        for v in set(vertices):
            self._check_vertex(v)
            total += self.deg[v]
        return total

    def boundary(self, vertices: Iterable[int]) -> int:
        """Number of edges with exactly one endpoint in the given set."""
        inside = set(vertices)
        for v in inside:
            self._check_vertex(v)
        count = 0
        for v in inside:
            for w in self.adj[v]:
                if w not in inside:
                    count += 1
        return count

    def _check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise ValueError(f"unknown vertex id: {v!r}")

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, m={self.m})"


def _component_count(n: int, adj: Sequence[Sequence[int]]) -> int:
    seen = [False] * n
    components = 0
    for start in range(n):
        if seen[start]:
            continue
        components += 1
        seen[start] = True
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    return components


def _components(n: int, adj_pairs: Iterable[tuple[int, int]]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in adj_pairs:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        out.append(sorted(comp))
    return out


class FlowNetwork:
    """Capacitated contraction of a SimpleGraph.

    Each super-vertex carries the set of original vertices it absorbed;
    capacities count original edges between the underlying sets. Immutable
    after construction.
    """

    __slots__ = ("origin", "members", "adj", "super_of", "_cap")

    def __init__(
        self,
        origin: SimpleGraph,
        members: Sequence[Sequence[int]],
        caps: dict[tuple[int, int], int],
    ):
        self.origin = origin
        self.members: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(g)) for g in members
        )
        super_of: dict[int, int] = {}
        for idx, group in enumerate(self.members):
            for v in group:
                if v in super_of:
                    raise ValueError(f"vertex {v} appears in two super-vertices")
                super_of[v] = idx
        self.super_of = super_of
        adj: list[list[tuple[int, int]]] = [[] for _ in self.members]
        for (a, b), c in caps.items():
            adj[a].append((b, c))
            adj[b].append((a, c))
        self.adj = tuple(tuple(sorted(nb)) for nb in adj)
        self._cap = {k: v for k, v in caps.items()}

    @property
    def n_super(self) -> int:
        return len(self.members)

    @property
    def edge_pairs(self) -> int:
        return len(self._cap)

    @property
    def total_capacity(self) -> int:
        return sum(self._cap.values())

    def capacity(self, x: int, y: int) -> int:
        a, b = (x, y) if x < y else (y, x)
        return self._cap.get((a, b), 0)

    def weighted_degree(self, x: int) -> int:
        return sum(c for _, c in self.adj[x])

    def cut_value(self, side: Iterable[int]) -> int:
        inside = set(side)
        total = 0
        for x in inside:
            for y, c in self.adj[x]:
                if y not in inside:
                    total += c
        return total

    def original_side(self, side: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for x in side:
            out.update(self.members[x])
        return frozenset(out)

    def __repr__(self) -> str:
        return f"FlowNetwork(n_super={self.n_super}, edge_pairs={self.edge_pairs})"


def contract(
    g: SimpleGraph,
    keep: Iterable[int],
    groups: Sequence[Iterable[int]],
) -> FlowNetwork:
    """Contract each group into one super-vertex; kept vertices stay singletons.

    ``keep`` and ``groups`` must partition the vertex set. Parallel edges
    created by contraction are aggregated into capacities; edges internal to a
    group vanish.
    """
    keep_sorted = sorted(set(keep))
    assigned = [-1] * g.n
    members: list[tuple[int, ...]] = []
    for v in keep_sorted:
        g._check_vertex(v)
        if assigned[v] != -1:
            raise ValueError(f"vertex {v} assigned twice")
        assigned[v] = len(members)
        members.append((v,))
    for group in groups:
        group_sorted = tuple(sorted(set(group)))
        if not group_sorted:
            raise ValueError("empty contraction group")
        idx = len(members)
        for v in group_sorted:
            g._check_vertex(v)
            if assigned[v] != -1:
                raise ValueError(f"vertex {v} assigned twice (overlapping groups)")
            assigned[v] = idx
        members.append(group_sorted)
    uncovered = [v for v in range(g.n) if assigned[v] == -1]
    if uncovered:
        raise ValueError(f"vertices not covered by keep/groups: {uncovered[:8]}")
    caps: dict[tuple[int, int], int] = {}
    for u, v in g.edges:
        a, b = assigned[u], assigned[v]
        if a == b:
            continue
        key = (a, b) if a < b else (b, a)
        caps[key] = caps.get(key, 0) + 1
    return FlowNetwork(g, members, caps)


def identity_network(g: SimpleGraph) -> FlowNetwork:
    """The trivial contraction: every vertex its own super-vertex, capacities 1."""
    return contract(g, range(g.n), [])


class AugmentedSubgraph:
    """Induced subgraph with integer self-loop weight added per boundary edge.

    For multiplier ``x``, every vertex gains ceil(x) units of loop weight per
    edge it has leaving the subgraph. Loop weight contributes to volumes but
    never to cut values.
    """

    __slots__ = ("vertices", "x", "n", "edges", "adj", "deg_internal", "loop_weight")

    def __init__(self, g: SimpleGraph, subset: Iterable[int], x) -> None:
        vertices = sorted(set(subset))
        if not vertices:
            raise ValueError("subset must be nonempty")
        for v in vertices:
            g._check_vertex(v)
        if x <= 0:
            raise ValueError("loop multiplier must be positive")
        index = {v: i for i, v in enumerate(vertices)}
        n = len(vertices)
        adj: list[list[int]] = [[] for _ in range(n)]
        loops = [0] * n
        edges = []
        per_edge = math.ceil(x)
        for v in vertices:
            i = index[v]
            for w in g.adj[v]:
                j = index.get(w)
                if j is None:
                    loops[i] += per_edge
                elif i < j:
                    edges.append((i, j))
                    adj[i].append(j)
                    adj[j].append(i)
        self.vertices = tuple(vertices)
        self.x = x
        self.n = n
        self.edges = tuple(sorted(edges))
        self.adj = tuple(tuple(sorted(nb)) for nb in adj)
        self.deg_internal = tuple(len(nb) for nb in self.adj)
        self.loop_weight = tuple(loops)

    def volume_of(self, local: int) -> int:
        return self.deg_internal[local] + self.loop_weight[local]

    @property
    def total_volume(self) -> int:
        return sum(self.deg_internal) + sum(self.loop_weight)

    def loop_weight_of_vertex(self, original: int) -> int:
        return self.loop_weight[self.vertices.index(original)]

    def __repr__(self) -> str:
        return f"AugmentedSubgraph(n={self.n}, x={self.x})"


def augment(g: SimpleGraph, subset: Iterable[int], x) -> AugmentedSubgraph:
    """Induced subgraph of ``subset`` with ceil(x) loop units per boundary edge."""
    return AugmentedSubgraph(g, subset, x)


def load_graph(text: str, largest_component: bool = False) -> SimpleGraph:
    """Parse an edge-list document into a SimpleGraph.

    Format: optional ``c`` comment lines, one ``p <n> <m>`` line, then m lines
    ``e <u> <v>`` with 1-based endpoints. Disconnected input is rejected unless
    ``largest_component`` is set, in which case the largest component is kept
    and its vertices are renumbered in ascending order.
    """
    n, edges = _parse_edge_list(text)
    if largest_component:
        comps = _components(n, edges)
        best = max(comps, key=lambda c: (len(c), -c[0]))
        if len(best) < n:
            remap = {v: i for i, v in enumerate(best)}
            kept = set(best)
            edges = [
                (remap[u], remap[v]) for u, v in edges if u in kept and v in kept
            ]
            n = len(best)
    return SimpleGraph(n, edges)


def _parse_edge_list(text: str) -> tuple[int, list[tuple[int, int]]]:
    n: int | None = None
    m: int | None = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise GraphParseError("duplicate problem line", lineno)
            if len(parts) != 3:
                raise GraphParseError("problem line must be 'p <n> <m>'", lineno)
            try:
                n, m = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphParseError("problem line has non-integer fields", lineno)
            if n < 1 or m < 0:
                raise GraphParseError("problem line out of range", lineno)
        elif parts[0] == "e":
            if n is None:
                raise GraphParseError("edge line before problem line", lineno)
            if len(parts) != 3:
                raise GraphParseError("edge line must be 'e <u> <v>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphParseError("edge line has non-integer fields", lineno)
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphParseError(f"edge endpoint out of range: {u} {v}", lineno)
            if u == v:
                raise GraphParseError(f"self-loop at vertex {u}", lineno)
            a, b = (u - 1, v - 1) if u < v else (v - 1, u - 1)
            if (a, b) in seen:
                raise GraphParseError(f"duplicate edge {a + 1} {b + 1}", lineno)
            seen.add((a, b))
            edges.append((a, b))
        else:
            raise GraphParseError(f"unrecognized line kind {parts[0]!r}", lineno)
    if n is None:
        raise GraphParseError("missing problem line")
    if m is not None and len(edges) != m:
        raise GraphParseError(f"problem line promises {m} edges, found {len(edges)}")
    return n, edges


def dump_graph(g: SimpleGraph) -> str:
    lines = [f"p {g.n} {g.m}"]
    for u, v in g.edges:
        lines.append(f"e {u + 1} {v + 1}")
    return "\n".join(lines) + "\n"
