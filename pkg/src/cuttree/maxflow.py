"""Unit-capacity max-flow via blocking flows, with latest min-cut extraction.

The "latest" minimum (s,t)-cut is the unique minimum cut whose s-side has
minimum cardinality; it equals the set of vertices reachable from s in the
residual network after any maximum flow. Adjacency is iterated in a fixed
order, so identical inputs produce identical flows and cuts.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graph import FlowNetwork, SimpleGraph, identity_network

__all__ = [
    "Cut",
    "FlowCounters",
    "NetworkSolver",
    "max_flow",
    "latest_min_cut",
    "min_cut_value_matrix",
    "multiway_split_cut",
    "restricted_latest_cut",
]


@dataclass(frozen=True)
class Cut:
    """One side of a network bipartition: super-vertex ids, value, original ids."""

    side: frozenset[int]
    value: int
    original_side: frozenset[int]


@dataclass
class FlowCounters:
    """Tally of flow instances solved and their total size in capacity pairs."""

    calls: int = 0
    edge_volume: int = 0

    def record(self, edges: int) -> None:
        self.calls += 1
        self.edge_volume += edges


class _Dinic:
    """Arc-array blocking-flow solver. Undirected edges become paired arcs that
    serve as each other's residual."""

    __slots__ = ("n", "to", "cap", "adj", "_cap0")

    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self._cap0: list[int] | None = None

    def add_undirected(self, u: int, v: int, c: int) -> None:
        i = len(self.to)
        self.to.append(v)
        self.to.append(u)
        self.cap.append(c)
        self.cap.append(c)
        self.adj[u].append(i)
        self.adj[v].append(i + 1)

    def add_directed(self, u: int, v: int, c: int) -> None:
        i = len(self.to)
        self.to.append(v)
        self.to.append(u)
        self.cap.append(c)
        self.cap.append(0)
        self.adj[u].append(i)
        self.adj[v].append(i + 1)

    def freeze(self) -> None:
        self._cap0 = list(self.cap)

    def reset(self) -> None:
        assert self._cap0 is not None
        self.cap[:] = self._cap0

    def max_flow(self, s: int, t: int) -> int:
        to, cap, adj = self.to, self.cap, self.adj
        n = self.n
        total = 0
        while True:
            level = [-1] * n
            level[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                lu = level[u]
                for e in adj[u]:
                    if cap[e] > 0:
                        w = to[e]
                        if level[w] < 0:
                            level[w] = lu + 1
                            queue.append(w)
            if level[t] < 0:
                return total
            it = [0] * n
            # Augment along shortest paths until the level graph is exhausted.
            path: list[int] = []
            v = s
            while True:
                if v == t:
                    bottleneck = min(cap[e] for e in path)
                    for e in path:
                        cap[e] -= bottleneck
                        cap[e ^ 1] += bottleneck
                    total += bottleneck
                    # Retreat to the first saturated arc on the path.
                    v = s
                    kept: list[int] = []
                    for e in path:
                        if cap[e] == 0:
                            break
                        kept.append(e)
                        v = to[e]
                    path = kept
                    continue
                arcs = adj[v]
                i = it[v]
                lv = level[v]
                chosen = -1
                while i < len(arcs):
                    e = arcs[i]
                    if cap[e] > 0 and level[to[e]] == lv + 1:
                        chosen = e
                        break
                    i += 1
                it[v] = i
                if chosen >= 0:
                    path.append(chosen)
                    v = to[chosen]
                    continue
                level[v] = -1  # dead end within this phase
                if not path:
                    break
                e = path.pop()
                v = to[e ^ 1]

    def residual_reachable(self, s: int) -> frozenset[int]:
        to, cap, adj = self.to, self.cap, self.adj
        seen = [False] * self.n
        seen[s] = True
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in adj[u]:
                if cap[e] > 0:
                    w = to[e]
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
        return frozenset(i for i, f in enumerate(seen) if f)


class NetworkSolver:
    """Reusable solver bound to one FlowNetwork; capacities reset per query.

    The residual state of the most recent query is kept, so cut extraction is
    a single BFS on top of the flow computation.
    """

    def __init__(self, net: FlowNetwork):
        self.net = net
        dinic = _Dinic(net.n_super)
        for x in range(net.n_super):
            for y, c in net.adj[x]:
                if y > x:
                    dinic.add_undirected(x, y, c)
        dinic.freeze()
        self._dinic = dinic

    def _check_pair(self, s: int, t: int) -> None:
        n = self.net.n_super
        if not (0 <= s < n and 0 <= t < n):
            raise ValueError(f"terminal out of range: {s}, {t}")
        if s == t:
            raise ValueError("source and sink must differ")

    def max_flow(self, s: int, t: int, counters: FlowCounters | None = None) -> int:
        self._check_pair(s, t)
        self._dinic.reset()
        value = self._dinic.max_flow(s, t)
        if counters is not None:
            counters.record(self.net.edge_pairs)
        return value

    def latest_min_cut(
        self, s: int, t: int, counters: FlowCounters | None = None
    ) -> Cut:
        value = self.max_flow(s, t, counters)
        side = self._dinic.residual_reachable(s)
        return Cut(side, value, self.net.original_side(side))


def max_flow(
    net: FlowNetwork, s: int, t: int, counters: FlowCounters | None = None
) -> int:
    """Maximum (s,t)-flow value between two super-vertices of the network."""
    return NetworkSolver(net).max_flow(s, t, counters)


def latest_min_cut(
    net: FlowNetwork, s: int, t: int, counters: FlowCounters | None = None
) -> Cut:
    """The minimum (s,t)-cut whose s-side has minimum cardinality."""
    return NetworkSolver(net).latest_min_cut(s, t, counters)


def min_cut_value_matrix(
    g: SimpleGraph, counters: FlowCounters | None = None
) -> np.ndarray:
    """All-pairs min-cut values on the uncontracted network; diagonal zero."""
    net = identity_network(g)
    solver = NetworkSolver(net)
    n = g.n
    matrix = np.zeros((n, n), dtype=np.int64)
    for s in range(n):
        for t in range(s + 1, n):
            value = solver.max_flow(s, t, counters)
            matrix[s, t] = value
            matrix[t, s] = value
    return matrix


def multiway_split_cut(
    net: FlowNetwork,
    sources: Iterable[int],
    sinks: Iterable[int],
    counters: FlowCounters | None = None,
) -> tuple[int, frozenset[int]]:
    """Min cut separating two disjoint super-vertex groups.

    Implemented with a temporary super-source/super-sink wired at capacity
    one above the network total, which no finite cut can use. Returns the cut
    value and the source-side super-vertices (residual-reachable set).
    """
    src = sorted(set(sources))
    snk = sorted(set(sinks))
    if not src or not snk:
        raise ValueError("sources and sinks must be nonempty")
    if set(src) & set(snk):
        raise ValueError("sources and sinks overlap")
    n = net.n_super
    big = net.total_capacity + 1
    dinic = _Dinic(n + 2)
    s_node, t_node = n, n + 1
    for x in range(n):
        for y, c in net.adj[x]:
            if y > x:
                dinic.add_undirected(x, y, c)
    for x in src:
        dinic.add_directed(s_node, x, big)
    for x in snk:
        dinic.add_directed(x, t_node, big)
    value = dinic.max_flow(s_node, t_node)
    if counters is not None:
        counters.record(net.edge_pairs + len(src) + len(snk))
    side = frozenset(x for x in dinic.residual_reachable(s_node) if x < n)
    return value, side


def restricted_latest_cut(
    net: FlowNetwork,
    source: int,
    region: Iterable[int],
    counters: FlowCounters | None = None,
) -> Cut:
    """Latest min cut between ``source`` and everything outside ``region``.

    All super-vertices outside the region act as one contracted sink. The
    returned cut side is expressed in the network's own super-vertex ids and
    always stays within the region.
    """
    region_sorted = sorted(set(region))
    if source not in set(region_sorted):
        raise ValueError("source must belong to the region")
    if len(region_sorted) >= net.n_super:
        raise ValueError("region must exclude at least one super-vertex")
    local = {x: i for i, x in enumerate(region_sorted)}
    sink = len(region_sorted)
    dinic = _Dinic(sink + 1)
    edges = 0
    outward: dict[int, int] = {}
    for x in region_sorted:
        i = local[x]
        for y, c in net.adj[x]:
            j = local.get(y)
            if j is None:
                outward[i] = outward.get(i, 0) + c
            elif i < j:
                dinic.add_undirected(i, j, c)
                edges += 1
    for i, c in sorted(outward.items()):
        dinic.add_directed(i, sink, c)
        edges += 1
    value = dinic.max_flow(local[source], sink)
    if counters is not None:
        counters.record(edges)
    reach = dinic.residual_reachable(local[source])
    side = frozenset(region_sorted[i] for i in reach if i < sink)
    return Cut(side, value, net.original_side(side))
