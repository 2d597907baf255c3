"""Shared builders for the test suite: graphs, planted cluster instances,
hypothesis strategies."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from cuttree import AlgoParams, GeneratorSpec, SimpleGraph, generate


def clique_edges(offset: int, size: int) -> list[tuple[int, int]]:
    return [
        (offset + u, offset + v) for u in range(size) for v in range(u + 1, size)
    ]


def barbell_k8() -> SimpleGraph:
    edges = clique_edges(0, 8) + clique_edges(8, 8) + [(7, 8)]
    return SimpleGraph(16, edges)


def two_triangles_bridge() -> SimpleGraph:
    return generate(GeneratorSpec("barbell", 6, params={"a": 3, "b": 3}))


def block_matching_graph(
    blocks: int, size: int, matchings: int, seed: int
) -> SimpleGraph:
    """Cliques joined by random matchings: moderate degrees, small clusters,
    lopsided pivot cuts. Lands in the partial-tree branch of the
    unconditional builder."""
    rng = random.Random(seed)
    n = blocks * size
    edges = set(
        e for b in range(blocks) for e in clique_edges(b * size, size)
    )
    for _ in range(matchings):
        order = list(range(n))
        rng.shuffle(order)
        for i in range(0, n - 1, 2):
            u, v = order[i], order[i + 1]
            e = (u, v) if u < v else (v, u)
            edges.add(e)
    return SimpleGraph(n, sorted(edges))


@st.composite
def connected_graphs(draw, min_n: int = 2, max_n: int = 10):
    """Random connected simple graph: random recursive tree plus extras."""
    n = draw(st.integers(min_n, max_n))
    edges = set()
    for child in range(1, n):
        parent = draw(st.integers(0, child - 1))
        edges.add((parent, child))
    extras = draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
            max_size=2 * n,
        )
    )
    for u, v in extras:
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return SimpleGraph(n, sorted(edges))


@st.composite
def vertex_subsets(draw, g: SimpleGraph):
    picks = draw(st.lists(st.integers(0, g.n - 1), max_size=g.n))
    return sorted(set(picks))


def mixed_spec(index: int, lo: int, hi: int) -> GeneratorSpec:
    """Deterministic rotation over all generator families with bounded cost."""
    rng = random.Random(981_001 + index)
    n = rng.randint(lo, hi)
    family = [
        "gnp",
        "gnp",
        "powerlaw",
        "planted-expanders",
        "cycle",
        "path",
        "star",
        "barbell",
        "clique",
        "gnp",
    ][index % 10]
    params: dict = {}
    if family == "gnp":
        params["p"] = rng.choice([0.1, 0.18, 0.3, 0.45])
    elif family == "powerlaw":
        params["attach"] = rng.randint(2, 5)
    elif family == "planted-expanders":
        clusters = rng.randint(2, 4)
        size = max(2, n // clusters)
        n = clusters * size
        params = {"clusters": clusters, "size": size, "p_in": 0.7, "inter": 2}
    elif family == "barbell":
        a = max(1, n // 2)
        params = {"a": a, "b": max(1, n - a)}
    elif family == "clique":
        n = min(n, 32)
    return GeneratorSpec(family, n, seed=rng.randrange(1 << 30), params=params)


def planted_cluster_instance(seed: int) -> dict:
    """One planted instance for auditing the cluster exploration.

    Three shapes keyed by seed: hub-tethered clique where every latest cut is
    a singleton (``all-small``), a clique behind one bridge where every latest
    cut covers the whole cluster (``single-large``), and a clique plus a
    strongly-outward satellite giving two nested dominant cuts
    (``nested-large``).
    """
    rng = random.Random(seed)
    kind = ("all-small", "single-large", "nested-large")[seed % 3]
    hub = 5
    if kind == "all-small":
        core = rng.randint(10, 14)
        # hub outweighs the core so no cut isolating the pivot can compete
        hub = core + 2
        edges = clique_edges(0, core) + clique_edges(core, hub)
        for u in range(core):
            edges.append((u, core + u % (hub - 1)))
        g = SimpleGraph(core + hub, edges)
        targets = list(range(core))
        pivot = core + hub - 1
        params = AlgoParams.desk(seed=seed)
    elif kind == "single-large":
        core = rng.randint(9, 13)
        edges = clique_edges(0, core) + clique_edges(core, hub)
        edges.append((0, core))
        g = SimpleGraph(core + hub, edges)
        targets = list(range(core))
        pivot = core + 1
        # starve the preparation so candidates stay singletons
        params = AlgoParams.desk(seed=seed, phi=1e-9, prep_rounds=2)
    else:
        core = rng.randint(9, 12)
        sat = core  # satellite vertex
        hub_base = core + 1
        edges = clique_edges(0, core) + clique_edges(hub_base, hub)
        edges += [(0, sat), (1, sat)]
        edges += [(sat, hub_base), (sat, hub_base + 1), (sat, hub_base + 2)]
        edges.append((2, hub_base))
        g = SimpleGraph(core + 1 + hub, edges)
        targets = list(range(core + 1))
        pivot = hub_base + 4
        params = AlgoParams.desk(seed=seed, phi=1e-9, prep_rounds=2)
    return {
        "kind": kind,
        "g": g,
        "targets": targets,
        "pivot": pivot,
        "params": params,
        "seed": seed,
    }
