"""Partition trees and Gomory-Hu construction steps.

A partition tree's nodes are disjoint vertex sets covering V, joined by
weighted edges. Splitting a node along a minimum cut of its auxiliary graph
(the graph with every other branch contracted) is the basic step; repeating
it until all nodes are singletons yields a cut-equivalent tree.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

import numpy as np

from .graph import FlowNetwork, SimpleGraph, contract
from .maxflow import Cut, FlowCounters, latest_min_cut

__all__ = [
    "PartitionTree",
    "auxiliary_graph",
    "gh_step",
    "refine",
    "classic_gomory_hu",
    "k_partial_tree",
    "tree_min_cut_query",
    "tree_edge_sides",
    "all_pairs_tree_values",
    "serialize_tree",
    "parse_tree",
]


class PartitionTree:
    """Mutable tree over disjoint vertex subsets of a graph.

    ``nodes`` maps node id to its vertex set, ``edge_weights`` holds the tree
    adjacency, ``node_of`` maps vertices to their node. Pivot vertices are
    bookkeeping set by refinement and travel with their vertex on splits.
    """

    def __init__(self, n: int, node_sets: Iterable[Iterable[int]]):
        self.n = n
        self.nodes: dict[int, set[int]] = {}
        self.edge_weights: dict[int, dict[int, int]] = {}
        self.node_of: list[int] = [-1] * n
        self.pivot: dict[int, int] = {}
        self._next_id = 0
        for vertices in node_sets:
            self._add_node(set(vertices))
        covered = sum(len(s) for s in self.nodes.values())
        if covered != n or any(i == -1 for i in self.node_of):
            raise ValueError("node sets must partition the vertex set")

    @classmethod
    def single_node(cls, g: SimpleGraph) -> "PartitionTree":
        return cls(g.n, [range(g.n)])

    def _add_node(self, vertices: set[int]) -> int:
        if not vertices:
            raise ValueError("empty tree node")
        nid = self._next_id
        self._next_id += 1
        self.nodes[nid] = vertices
        self.edge_weights[nid] = {}
        for v in vertices:
            if not (0 <= v < self.n):
                raise ValueError(f"vertex id out of range: {v}")
            self.node_of[v] = nid
        return nid

    def node_ids(self) -> list[int]:
        return sorted(self.nodes)

    def vertices_of(self, nid: int) -> frozenset[int]:
        return frozenset(self.nodes[nid])

    def neighbors(self, nid: int) -> list[int]:
        return sorted(self.edge_weights[nid])

    def weight(self, a: int, b: int) -> int:
        return self.edge_weights[a][b]

    def tree_edges(self) -> list[tuple[int, int, int]]:
        out = []
        for a in sorted(self.edge_weights):
            for b, w in self.edge_weights[a].items():
                if a < b:
                    out.append((a, b, w))
        return sorted(out)

    def is_fully_refined(self) -> bool:
        return all(len(s) == 1 for s in self.nodes.values())

    def branch_sets(self, nid: int) -> list[set[int]]:
        """Vertex sets of the components of the tree with ``nid`` removed,
        one per neighbor, ordered by the neighbor's node id."""
        out = []
        for start in self.neighbors(nid):
            comp: set[int] = set()
            queue = deque([start])
            seen = {nid, start}
            while queue:
                cur = queue.popleft()
                comp.update(self.nodes[cur])
                for nxt in self.edge_weights[cur]:
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
            out.append(comp)
        return out

    def split_node_by_side(
        self, nid: int, original_side: frozenset[int], weight: int
    ) -> int:
        """Split ``nid`` along a cut given by its original-vertex source side.

        The side's vertices within the node move to a new node; former
        neighbors whose whole branch lies inside the side move with it. The
        side must not cross any neighboring branch.
        """
        node_set = self.nodes[nid]
        moving = node_set & original_side
        if not moving or moving == node_set:
            raise ValueError("cut side must split the node properly")
        node_set -= moving
        new_id = self._add_node(set(moving))
        for nbr in list(self.edge_weights[nid]):
            rep = next(iter(self.nodes[nbr]))
            if rep in original_side:
                w = self.edge_weights[nid].pop(nbr)
                self.edge_weights[nbr].pop(nid)
                self.edge_weights[nbr][new_id] = w
                self.edge_weights[new_id][nbr] = w
        self.edge_weights[nid][new_id] = weight
        self.edge_weights[new_id][nid] = weight
        piv = self.pivot.get(nid)
        if piv is not None and piv in moving:
            del self.pivot[nid]
            self.pivot[new_id] = piv
        return new_id

    def __repr__(self) -> str:
        return f"PartitionTree(nodes={len(self.nodes)}, n={self.n})"


def auxiliary_graph(g: SimpleGraph, tree: PartitionTree, nid: int) -> FlowNetwork:
    """Network for one node: every other branch of the tree contracted."""
    keep = sorted(tree.nodes[nid])
    groups = sorted(tree.branch_sets(nid), key=min)
    return contract(g, keep, [sorted(b) for b in groups])


def gh_step(
    g: SimpleGraph,
    tree: PartitionTree,
    nid: int,
    s: int,
    t: int,
    counters: FlowCounters | None = None,
) -> tuple[int, Cut]:
    """Split ``nid`` along the latest minimum (s,t)-cut of its auxiliary graph.

    Returns the id of the new node (the one holding ``s``) and the cut used.
    """
    node_set = tree.nodes[nid]
    if s not in node_set or t not in node_set:
        raise ValueError("both split vertices must lie in the node")
    net = auxiliary_graph(g, tree, nid)
    cut = latest_min_cut(net, net.super_of[s], net.super_of[t], counters)
    new_id = tree.split_node_by_side(nid, cut.original_side, cut.value)
    return new_id, cut


def refine(
    g: SimpleGraph,
    tree: PartitionTree,
    nid: int,
    pivots: Iterable[int],
    counters: FlowCounters | None = None,
) -> list[int]:
    """Split ``nid`` until no node holds two of the given pivot vertices.

    Afterwards each affected node holds exactly one pivot, recorded in
    ``tree.pivot``. Returns the ids of the nodes holding pivots, sorted.
    """
    pivot_list = sorted(set(pivots))
    node_set = tree.nodes[nid]
    for r in pivot_list:
        if r not in node_set:
            raise ValueError(f"pivot {r} not in node {nid}")
    while True:
        by_node: dict[int, list[int]] = {}
        for r in pivot_list:
            by_node.setdefault(tree.node_of[r], []).append(r)
        pair = None
        for _, members in sorted(by_node.items(), key=lambda kv: kv[1][0]):
            if len(members) >= 2:
                cand = (members[0], members[1])
                if pair is None or cand < pair:
                    pair = cand
        if pair is None:
            break
        s, t = pair
        gh_step(g, tree, tree.node_of[s], s, t, counters)
    holders = []
    for r in pivot_list:
        holder = tree.node_of[r]
        tree.pivot[holder] = r
        holders.append(holder)
    return sorted(set(holders))


def classic_gomory_hu(
    g: SimpleGraph, counters: FlowCounters | None = None
) -> PartitionTree:
    """Full construction by repeated splitting; exactly n-1 flow computations."""
    tree = PartitionTree.single_node(g)
    while True:
        target = None
        for nid in tree.node_ids():
            if len(tree.nodes[nid]) >= 2:
                target = nid
                break
        if target is None:
            return tree
        members = sorted(tree.nodes[target])
        gh_step(g, tree, target, members[0], members[1], counters)


def k_partial_tree(
    g: SimpleGraph,
    tree: PartitionTree,
    nid: int,
    k: int,
    counters: FlowCounters | None = None,
) -> None:
    """Refine ``nid`` until every vertex of degree at most ``k`` is a singleton.

    Refines with respect to the low-degree vertices plus one high-degree
    anchor, then peels remaining companions off each low-degree vertex with
    further latest-cut steps.
    """
    node_set = sorted(tree.nodes[nid])
    low = [v for v in node_set if g.deg[v] <= k]
    if not low:
        return
    high = [v for v in node_set if g.deg[v] > k]
    anchors = []
    if high:
        anchors = [max(high, key=lambda v: (g.deg[v], -v))]
    refine(g, tree, nid, low + anchors, counters)
    for v in low:
        while len(tree.nodes[tree.node_of[v]]) > 1:
            holder = tree.node_of[v]
            other = min(u for u in tree.nodes[holder] if u != v)
            gh_step(g, tree, holder, v, other, counters)


def _tree_path(tree: PartitionTree, a_node: int, b_node: int) -> list[int]:
    parent: dict[int, int] = {a_node: -1}
    queue = deque([a_node])
    while queue:
        cur = queue.popleft()
        if cur == b_node:
            break
        for nxt in tree.edge_weights[cur]:
            if nxt not in parent:
                parent[nxt] = cur
                queue.append(nxt)
    path = [b_node]
    while path[-1] != a_node:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def tree_min_cut_query(
    tree: PartitionTree, a: int, b: int
) -> tuple[int, tuple[int, int]]:
    """Minimum-weight edge on the tree path between the nodes of a and b.

    Returns the weight and the edge as a node-id pair oriented away from
    ``a``; ties resolve to the edge closest to ``a``.
    """
    a_node = tree.node_of[a]
    b_node = tree.node_of[b]
    if a_node == b_node:
        raise ValueError("vertices share a tree node; refine further to query")
    path = _tree_path(tree, a_node, b_node)
    best_w = None
    best_edge = None
    for x, y in zip(path, path[1:]):
        w = tree.edge_weights[x][y]
        if best_w is None or w < best_w:
            best_w = w
            best_edge = (x, y)
    assert best_w is not None and best_edge is not None
    return best_w, best_edge


def tree_edge_sides(tree: PartitionTree, a_node: int, b_node: int) -> frozenset[int]:
    """Original vertices on the ``a_node`` side after deleting edge (a,b)."""
    side: set[int] = set()
    queue = deque([a_node])
    seen = {a_node, b_node}
    while queue:
        cur = queue.popleft()
        side.update(tree.nodes[cur])
        for nxt in tree.edge_weights[cur]:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return frozenset(side)


def all_pairs_tree_values(tree: PartitionTree) -> np.ndarray:
    """Path-minimum weights between every vertex pair of a fully refined tree."""
    if not tree.is_fully_refined():
        raise ValueError("tree must be fully refined")
    n = tree.n
    values = np.zeros((n, n), dtype=np.int64)
    rep = {nid: next(iter(vs)) for nid, vs in tree.nodes.items()}
    for start_id in tree.node_ids():
        start_v = rep[start_id]
        best: dict[int, int] = {start_id: 0}
        queue = deque([start_id])
        while queue:
            cur = queue.popleft()
            for nxt, w in tree.edge_weights[cur].items():
                if nxt not in best:
                    running = w if best[cur] == 0 else min(best[cur], w)
                    best[nxt] = running
                    queue.append(nxt)
        for nid, val in best.items():
            if nid != start_id:
                values[start_v, rep[nid]] = val
    return values


def serialize_tree(tree: PartitionTree) -> str:
    """Canonical text form: node lines then edge lines, 1-based vertex ids."""
    lines = []
    for nid in tree.node_ids():
        vs = " ".join(str(v + 1) for v in sorted(tree.nodes[nid]))
        lines.append(f"n {nid} {vs}")
    for a, b, w in tree.tree_edges():
        lines.append(f"t {a} {b} {w}")
    return "\n".join(lines) + "\n"


def parse_tree(text: str) -> PartitionTree:
    node_lines: list[tuple[int, list[int]]] = []
    edge_lines: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) < 3:
                raise ValueError(f"line {lineno}: node line needs id and vertices")
            node_lines.append((int(parts[1]), [int(p) - 1 for p in parts[2:]]))
        elif parts[0] == "t":
            if len(parts) != 4:
                raise ValueError(f"line {lineno}: edge line must be 't <a> <b> <w>'")
            edge_lines.append((int(parts[1]), int(parts[2]), int(parts[3])))
        else:
            raise ValueError(f"line {lineno}: unrecognized line kind {parts[0]!r}")
    if not node_lines:
        raise ValueError("tree document has no nodes")
    n = sum(len(vs) for _, vs in node_lines)
    tree = PartitionTree.__new__(PartitionTree)
    tree.n = n
    tree.nodes = {}
    tree.edge_weights = {}
    tree.node_of = [-1] * n
    tree.pivot = {}
    for nid, vs in node_lines:
        if nid in tree.nodes:
            raise ValueError(f"duplicate node id {nid}")
        if not vs:
            raise ValueError(f"empty node {nid}")
        tree.nodes[nid] = set()
        tree.edge_weights[nid] = {}
        for v in vs:
            if not (0 <= v < n) or tree.node_of[v] != -1:
                raise ValueError(f"node sets must partition 1..{n}")
            tree.node_of[v] = nid
            tree.nodes[nid].add(v)
    tree._next_id = max(tree.nodes) + 1
    for a, b, w in edge_lines:
        if a not in tree.nodes or b not in tree.nodes:
            raise ValueError(f"edge references unknown node: {a} {b}")
        tree.edge_weights[a][b] = w
        tree.edge_weights[b][a] = w
    if len(edge_lines) != len(node_lines) - 1:
        raise ValueError("edge count must be node count minus one")
    # reject cycles / disconnected forests
    seen = {node_lines[0][0]}
    queue = deque(seen)
    while queue:
        cur = queue.popleft()
        for nxt in tree.edge_weights[cur]:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    if len(seen) != len(tree.nodes):
        raise ValueError("tree edges do not connect all nodes")
    return tree
