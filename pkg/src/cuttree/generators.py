"""Seed-deterministic generators for connected simple test graphs."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .graph import SimpleGraph, _components

__all__ = ["GeneratorSpec", "generate", "FAMILIES"]

FAMILIES = (
    "gnp",
    "clique",
    "star",
    "path",
    "cycle",
    "barbell",
    "planted-expanders",
    "powerlaw",
)


@dataclass
class GeneratorSpec:
    family: str
    n: int
    seed: int = 0
    params: dict = field(default_factory=dict)


def _bridge_components(n: int, edges: set[tuple[int, int]], rng: random.Random) -> None:
    """Add edges between components until connected."""
    while True:
        comps = _components(n, edges)
        if len(comps) == 1:
            return
        a = rng.choice(comps[0])
        b = rng.choice(comps[1])
        edge = (a, b) if a < b else (b, a)
        edges.add(edge)


def _gnp(n: int, p: float, rng: random.Random) -> SimpleGraph:
    if not (0 <= p <= 1):
        raise ValueError("edge probability must lie in [0, 1]")
    edges = set()
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.add((u, v))
    _bridge_components(n, edges, rng)
    return SimpleGraph(n, sorted(edges))


def _clique(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def _star(n: int) -> SimpleGraph:
    if n < 2:
        raise ValueError("star needs at least 2 vertices")
    return SimpleGraph(n, [(0, v) for v in range(1, n)])


def _path(n: int) -> SimpleGraph:
    if n < 2:
        raise ValueError("path needs at least 2 vertices")
    return SimpleGraph(n, [(v, v + 1) for v in range(n - 1)])


def _cycle(n: int) -> SimpleGraph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return SimpleGraph(n, [(v, (v + 1) % n) for v in range(n)])


def _barbell(a: int, b: int) -> SimpleGraph:
    if a < 1 or b < 1 or a + b < 2:
        raise ValueError("barbell sides must be nonempty")
    edges = [(u, v) for u in range(a) for v in range(u + 1, a)]
    edges += [(a + u, a + v) for u in range(b) for v in range(u + 1, b)]
    edges.append((a - 1, a))
    return SimpleGraph(a + b, edges)


def _planted(clusters: int, size: int, p_in: float, inter: int, rng: random.Random) -> SimpleGraph:
    if clusters < 1 or size < 2:
        raise ValueError("need clusters of size at least 2")
    n = clusters * size
    edges: set[tuple[int, int]] = set()
    for c in range(clusters):
        base = c * size
        local: set[tuple[int, int]] = set()
        for i in range(size):
            for j in range(i + 1, size):
                if rng.random() < p_in:
                    local.add((i, j))
        _bridge_components(size, local, rng)
        edges.update((base + i, base + j) for i, j in local)
    for c in range(clusters - 1):
        placed = 0
        attempts = 0
        while placed < inter and attempts < 50 * inter:
            attempts += 1
            u = c * size + rng.randrange(size)
            v = (c + 1) * size + rng.randrange(size)
            e = (u, v) if u < v else (v, u)
            if e not in edges:
                edges.add(e)
                placed += 1
        if placed == 0:
            raise ValueError("could not place inter-cluster edges")
    _bridge_components(n, edges, rng)
    return SimpleGraph(n, sorted(edges))


def _powerlaw(n: int, attach: int, rng: random.Random) -> SimpleGraph:
    if n < 2:
        raise ValueError("powerlaw needs at least 2 vertices")
    attach = max(1, min(attach, n - 1))
    seed_size = attach + 1
    edges = [(u, v) for u in range(seed_size) for v in range(u + 1, seed_size)]
    stubs: list[int] = []
    for u, v in edges:
        stubs.append(u)
        stubs.append(v)
    for v in range(seed_size, n):
        chosen: set[int] = set()
        while len(chosen) < attach:
            chosen.add(rng.choice(stubs) if stubs else rng.randrange(v))
        for u in sorted(chosen):
            edges.append((u, v))
            stubs.append(u)
            stubs.append(v)
    return SimpleGraph(n, edges)


def generate(spec: GeneratorSpec) -> SimpleGraph:
    """Build the requested family; output is connected, simple, and
    reproducible from (family, n, seed, params)."""
    rng = random.Random(spec.seed)
    fam = spec.family
    p = spec.params
    if fam == "gnp":
        return _gnp(spec.n, p.get("p", 0.3), rng)
    if fam == "clique":
        return _clique(spec.n)
    if fam == "star":
        return _star(spec.n)
    if fam == "path":
        return _path(spec.n)
    if fam == "cycle":
        return _cycle(spec.n)
    if fam == "barbell":
        a = p.get("a", spec.n // 2)
        b = p.get("b", spec.n - a)
        return _barbell(a, b)
    if fam == "planted-expanders":
        clusters = p.get("clusters", 2)
        size = p.get("size", max(2, spec.n // max(1, clusters)))
        return _planted(clusters, size, p.get("p_in", 0.7), p.get("inter", 1), rng)
    if fam == "powerlaw":
        return _powerlaw(spec.n, p.get("attach", 2), rng)
    raise ValueError(f"unknown family {fam!r}; choose one of {FAMILIES}")
