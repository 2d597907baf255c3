"""Correctness oracles, tree verification, and benchmark counters."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .fastgh import AlgoParams, RunManifest, cond_gomory_hu, uncond_gomory_hu
from .ghtree import (
    PartitionTree,
    classic_gomory_hu,
    tree_edge_sides,
    tree_min_cut_query,
)
from .graph import SimpleGraph, identity_network
from .maxflow import FlowCounters, NetworkSolver

__all__ = [
    "BruteForceOracle",
    "brute_force_all_cuts",
    "VerificationReport",
    "verify_tree",
    "BenchResult",
    "bench",
]

BRUTE_FORCE_LIMIT = 14


class BruteForceOracle:
    """All-pairs min cuts by enumerating every bipartition (n <= 14).

    Provides the value matrix, and per ordered pair the minimal-source-side
    minimum cut together with all minimum cut sides, for auditing latest-cut
    semantics.
    """

    def __init__(self, g: SimpleGraph):
        if g.n > BRUTE_FORCE_LIMIT:
            raise ValueError(f"graph too large for enumeration: n={g.n}")
        self.g = g
        n = g.n
        count = 1 << n
        masks = np.arange(count, dtype=np.uint32)
        shifts = np.arange(n, dtype=np.uint32)
        self._bits = ((masks[None, :] >> shifts[:, None]) & 1).astype(np.uint8)
        cut = np.zeros(count, dtype=np.int64)
        for u, v in g.edges:
            cut += self._bits[u] ^ self._bits[v]
        self._cut = cut
        self._pop = self._bits.sum(axis=0).astype(np.int64)
        values = np.zeros((n, n), dtype=np.int64)
        for s in range(n):
            for t in range(s + 1, n):
                feasible = (self._bits[s] == 1) & (self._bits[t] == 0)
                best = int(cut[feasible].min())
                values[s, t] = best
                values[t, s] = best
        self.values = values

    def min_value(self, s: int, t: int) -> int:
        return int(self.values[s, t])

    def _feasible_min(self, s: int, t: int) -> np.ndarray:
        feasible = (self._bits[s] == 1) & (self._bits[t] == 0)
        best = self._cut[feasible].min()
        return np.flatnonzero(feasible & (self._cut == best))

    def min_sides(self, s: int, t: int) -> list[frozenset[int]]:
        """All minimum (s,t)-cut source sides."""
        out = []
        for mask in self._feasible_min(s, t):
            out.append(frozenset(v for v in range(self.g.n) if (int(mask) >> v) & 1))
        return out

    def latest_side(self, s: int, t: int) -> frozenset[int]:
        """The minimum (s,t)-cut source side of minimum cardinality."""
        cands = self._feasible_min(s, t)
        pops = self._pop[cands]
        smallest = cands[pops == pops.min()]
        mask = int(smallest[0])
        return frozenset(v for v in range(self.g.n) if (mask >> v) & 1)

    def latest_side_is_unique(self, s: int, t: int) -> bool:
        cands = self._feasible_min(s, t)
        pops = self._pop[cands]
        return int((pops == pops.min()).sum()) == 1


def brute_force_all_cuts(g: SimpleGraph) -> BruteForceOracle:
    """Ground-truth oracle beneath the flow solver; n <= 14 only."""
    return BruteForceOracle(g)


@dataclass
class VerificationReport:
    pairs_checked: int
    mismatches: list[tuple[int, int, int, int]]  # (a, b, tree value, graph value)
    cut_side_valid: bool
    elapsed: float

    @property
    def accepted(self) -> bool:
        return not self.mismatches and self.cut_side_valid


def verify_tree(
    g: SimpleGraph,
    tree: PartitionTree,
    mode: str = "all-pairs",
    sample_k: int = 2000,
    seed: int = 0,
) -> VerificationReport:
    """Check tree path-minima against direct max-flow values.

    Also validates, for each minimum path edge encountered, that deleting it
    splits the vertex set into a bipartition whose boundary in the graph
    equals the edge weight.
    """
    if not tree.is_fully_refined():
        raise ValueError("tree must be fully refined before verification")
    start = time.perf_counter()
    n = g.n
    all_pairs = [(s, t) for s in range(n) for t in range(s + 1, n)]
    if mode == "all-pairs":
        pairs = all_pairs
    elif mode == "sampled":
        import random as _random

        rng = _random.Random(seed)
        k = min(sample_k, len(all_pairs))
        pairs = sorted(rng.sample(all_pairs, k))
    else:
        raise ValueError(f"unknown mode {mode!r}")

    solver = NetworkSolver(identity_network(g))
    mismatches = []
    side_cache: dict[tuple[int, int], bool] = {}
    cut_side_valid = True
    for s, t in pairs:
        tree_value, (x, y) = tree_min_cut_query(tree, s, t)
        flow = solver.max_flow(s, t)
        if flow != tree_value:
            mismatches.append((s, t, tree_value, flow))
        key = (x, y) if x < y else (y, x)
        if key not in side_cache:
            side = tree_edge_sides(tree, x, y)
            side_cache[key] = g.boundary(side) == tree.edge_weights[x][y]
        cut_side_valid = cut_side_valid and side_cache[key]
    elapsed = time.perf_counter() - start
    return VerificationReport(len(pairs), mismatches, cut_side_valid, elapsed)


@dataclass
class BenchResult:
    algo: str
    counters: FlowCounters
    manifest: RunManifest | None
    tree: PartitionTree
    elapsed: float

    def summary(self) -> str:
        lines = [
            f"algo: {self.algo}",
            f"max-flow calls: {self.counters.calls}",
            f"flow-instance volume: {self.counters.edge_volume}",
        ]
        if self.manifest is not None:
            lines.append(f"rounds: {len(self.manifest.rounds)}")
            lines.append(f"splits: {self.manifest.total_splits}")
            lines.append(f"verify-rejected: {self.manifest.verify_rejected}")
        lines.append(f"elapsed: {self.elapsed:.3f}s")
        return "\n".join(lines)


def bench(
    g: SimpleGraph, algo: str, params: AlgoParams | None = None
) -> BenchResult:
    """Run one builder and collect its counters and manifest."""
    counters = FlowCounters()
    start = time.perf_counter()
    if algo == "classic":
        tree = classic_gomory_hu(g, counters)
        manifest = None
    elif algo == "cond":
        manifest = RunManifest()
        tree = cond_gomory_hu(g, params, counters, manifest)
    elif algo == "uncond":
        manifest = RunManifest()
        tree = uncond_gomory_hu(g, params, counters, manifest)
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    elapsed = time.perf_counter() - start
    return BenchResult(algo, counters, manifest, tree, elapsed)
