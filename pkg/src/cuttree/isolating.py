"""Simultaneous candidate min-cuts for a terminal set against a pivot.

Every element of terminals-plus-pivot gets a distinct binary code; one
bipartition flow per code bit carves the network into regions, and one small
flow per terminal inside its region produces a candidate cut. The candidate
sides are pairwise disjoint and exclude the pivot. Whenever a terminal's true
latest cut against the pivot contains no other terminal, the candidate equals
that latest cut exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graph import FlowNetwork
from .maxflow import Cut, FlowCounters, multiway_split_cut, restricted_latest_cut

__all__ = ["IsolatingResult", "isolating_cuts"]


@dataclass(frozen=True)
class IsolatingResult:
    pivot: int
    terminals: tuple[int, ...]
    cuts: dict[int, Cut]

    def side_of(self, terminal: int) -> frozenset[int]:
        return self.cuts[terminal].side


def isolating_cuts(
    net: FlowNetwork,
    pivot: int,
    terminals: Iterable[int],
    counters: FlowCounters | None = None,
) -> IsolatingResult:
    """Candidate latest min-cuts separating each terminal from the pivot.

    Includes the pivot among the coded elements, which forces it out of every
    region; ceil(log2(|T|+1)) bipartition flows plus one region flow per
    terminal.
    """
    term = sorted(set(terminals))
    if not term:
        raise ValueError("terminal set must be nonempty")
    n = net.n_super
    for x in term + [pivot]:
        if not (0 <= x < n):
            raise ValueError(f"terminal out of range: {x}")
    if pivot in term:
        raise ValueError("pivot must not be a terminal")

    coded = sorted(term + [pivot])
    rank = {x: i for i, x in enumerate(coded)}
    bits = max(1, (len(coded) - 1).bit_length())

    # region[u] = super-vertices agreeing with u's side for every bit cut
    region: dict[int, set[int]] = {u: set(range(n)) for u in term}
    for b in range(bits):
        ones = [x for x in coded if (rank[x] >> b) & 1]
        zeros = [x for x in coded if not (rank[x] >> b) & 1]
        if not ones or not zeros:
            continue
        _, side = multiway_split_cut(net, ones, zeros, counters)
        for u in term:
            if (rank[u] >> b) & 1:
                region[u] &= side
            else:
                region[u] -= side

    cuts: dict[int, Cut] = {}
    for u in term:
        cuts[u] = restricted_latest_cut(net, u, region[u], counters)
    return IsolatingResult(pivot, tuple(term), cuts)
