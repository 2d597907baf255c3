"""Cut-equivalent tree construction guided by an expander decomposition.

Each round refines every large tree node with degree-proportional random
pivots, then, inside the fragment holding most of the parent volume, runs a
cluster exploration that finds latest min-cuts for many vertices of one
degree class at once. Split sides are volume-bounded, so large nodes shrink
geometrically. Remaining nodes are finished with generic latest-cut steps,
which keeps the output correct regardless of how the randomized phases fare.

The unconditional variant swaps the cluster exploration for a partial-tree
refinement (isolating every vertex of degree at most twice the chosen class)
whenever the degree/size-class branch test says cluster work would be too
fragmented to pay off.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

from .expander import ExpanderDecomposition, decompose
from .ghtree import (
    PartitionTree,
    auxiliary_graph,
    gh_step,
    k_partial_tree,
    refine,
)
from .graph import FlowNetwork, SimpleGraph
from .isolating import isolating_cuts
from .maxflow import Cut, FlowCounters, NetworkSolver

__all__ = [
    "AlgoParams",
    "NodeContext",
    "ExploreOutcome",
    "ExploreTrace",
    "ExploreError",
    "PrepAbort",
    "DichotomyViolation",
    "ExploreInvariantError",
    "RunManifest",
    "RoundRecord",
    "degree_classes",
    "degree_class_of",
    "degree_weighted_draws",
    "sample_pivots",
    "classify_vertex",
    "explore_prepare",
    "explore_tree",
    "cond_gomory_hu",
    "uncond_gomory_hu",
]


class ExploreError(RuntimeError):
    """Recoverable failure of the randomized cluster exploration."""


class PrepAbort(ExploreError):
    """A prepared candidate cut spans too much of its cluster; retryable."""


class DichotomyViolation(ExploreError):
    """A latest cut is neither almost-inside nor almost-outside its cluster;
    signals a broken expander certificate or a wrong cut."""


class ExploreInvariantError(ExploreError):
    """An exploration loop invariant failed; the caller falls back to direct
    flows for the cluster."""


@dataclass
class AlgoParams:
    """Tunable knobs for the decomposition-guided builders.

    The desk preset uses small constants so that every code path executes on
    graphs that fit on a desk; the paper-asymptotic preset derives the fields
    from their poly-log formulas for documentation and large-n experiments.
    """

    phi: float = 0.25
    alpha: float | None = None
    pivot_samples: int = 2
    size_threshold: int = 8
    prep_rounds: int = 8
    small_large_cap: int = 4
    min_cluster_work: int = 4
    branch_exp: float = 0.75
    round_cap: int = 64
    seed: int = 0
    preset: str = "desk"
    use_log_budgets: bool = True
    b1: float = 4.0
    b2: float = 8.0
    paper_const: int = 1

    def __post_init__(self) -> None:
        if self.alpha is None:
            self.alpha = self.phi
        if not (self.phi > 0):
            raise ValueError("phi must be positive")
        for name in (
            "pivot_samples",
            "size_threshold",
            "prep_rounds",
            "min_cluster_work",
            "round_cap",
        ):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.small_large_cap < 1:
            raise ValueError("small_large_cap must be at least 1")
        if not (0 < self.branch_exp < 1):
            raise ValueError("branch_exp must lie in (0, 1)")

    @classmethod
    def desk(cls, seed: int = 0, **overrides) -> "AlgoParams":
        return cls(seed=seed, preset="desk", **overrides)

    @classmethod
    def paper_asymptotic(cls, n: int, seed: int = 0, const: int = 1) -> "AlgoParams":
        if n < 2:
            raise ValueError("need at least two vertices")
        log_n = math.log2(n) if n > 2 else 1.0
        phi = 1.0 / (10.0 * log_n ** (const + 10))
        r = math.ceil(10 * log_n**5)
        return cls(
            phi=phi,
            pivot_samples=r,
            size_threshold=20 * r,
            prep_rounds=math.ceil(10 * log_n / phi),
            small_large_cap=math.ceil(2 / phi),
            min_cluster_work=math.ceil(10 / phi**2),
            seed=seed,
            preset="paper-asymptotic",
            paper_const=const,
        )


@dataclass(frozen=True)
class NodeContext:
    """Per-node selections for one round: pivot, degree class, size class."""

    node: int
    parent_volume: int
    pivot: int
    deg_class: int
    class_members: frozenset[int]
    size_class: int
    counts: dict[int, int]


def degree_classes(n: int) -> tuple[int, ...]:
    """Geometric degree thresholds: sqrt(n) doubled up to n, halved down to 1."""
    base = math.isqrt(n)
    if base * base < n:
        base += 1
    ks = {base}
    k = base
    while k * 2 <= n:
        k *= 2
        ks.add(k)
    k = base
    while k > 1:
        k = -(-k // 2)
        ks.add(k)
    return tuple(sorted(ks))


def degree_class_of(classes: tuple[int, ...], deg: int) -> int:
    """Largest class threshold not exceeding the degree."""
    best = None
    for k in classes:
        if k <= deg:
            best = k
        else:
            break
    if best is None:
        raise ValueError(f"degree {deg} below the smallest class")
    return best


def degree_weighted_draws(
    g: SimpleGraph, vertices: Iterable[int], k: int, rng: random.Random
) -> list[int]:
    pop = sorted(set(vertices))
    weights = [g.deg[v] for v in pop]
    return rng.choices(pop, weights=weights, k=k)


def sample_pivots(
    g: SimpleGraph, node_vertices: Iterable[int], pivot_samples: int, rng: random.Random
) -> list[int]:
    """Distinct results of 10*pivot_samples degree-proportional draws."""
    draws = degree_weighted_draws(g, node_vertices, 10 * pivot_samples, rng)
    return sorted(set(draws))


def _classify_sizes(inside: int, outside: int, cap: int) -> str:
    if outside <= cap:
        return "large"
    if inside <= cap:
        return "small"
    raise DichotomyViolation(
        f"cut keeps {inside} and drops {outside} cluster vertices, both above {cap}"
    )


def classify_vertex(
    u: int,
    latest_cut: Cut,
    cluster: Iterable[int],
    class_members: Iterable[int],
    cap: int,
) -> str:
    """Label a vertex large or small by how much of its cluster's relevant
    vertices its latest cut side covers; raises DichotomyViolation otherwise."""
    targets = frozenset(cluster) & frozenset(class_members)
    if u not in targets:
        raise ValueError(f"vertex {u} not in the cluster's degree class")
    inside = len(latest_cut.original_side & targets)
    return _classify_sizes(inside, len(targets) - inside, cap)


def explore_prepare(
    net: FlowNetwork,
    pivot: int,
    targets: Iterable[int],
    params: AlgoParams,
    rng: random.Random,
    counters: FlowCounters | None = None,
) -> dict[int, tuple[Cut, int]]:
    """Candidate cuts per target from repeated sampled isolating-cut rounds.

    Each round samples targets independently with probability phi and runs one
    isolating-cuts batch; unsampled rounds contribute the singleton cut. The
    kept candidate minimizes (value, side size). Raises PrepAbort when any
    candidate side covers more than the classification cap of the cluster.
    """
    target_list = sorted(set(targets))
    sp = net.super_of
    best: dict[int, tuple[int, int, Cut]] = {}
    for u in target_list:
        su = sp[u]
        side = frozenset([su])
        cut = Cut(side, net.weighted_degree(su), net.original_side(side))
        best[u] = (cut.value, 1, cut)
    for _ in range(params.prep_rounds):
        chosen = [u for u in target_list if rng.random() < params.phi]
        if not chosen:
            continue
        result = isolating_cuts(net, sp[pivot], [sp[u] for u in chosen], counters)
        for u in chosen:
            cut = result.cuts[sp[u]]
            key = (cut.value, len(cut.side))
            if key < best[u][:2]:
                best[u] = (cut.value, len(cut.side), cut)
    tset = frozenset(target_list)
    out: dict[int, tuple[Cut, int]] = {}
    for u in target_list:
        value, _, cut = best[u]
        if len(cut.original_side & tset) > params.small_large_cap:
            raise PrepAbort(f"candidate for vertex {u} spans too much of the cluster")
        out[u] = (cut, value)
    return out


@dataclass
class ExploreOutcome:
    selected: list[tuple[int, Cut, bool]]  # (vertex, cut, certified-minimum)
    case: str  # "direct" | "all-small" | "lowest-large"
    loop_flows: int
    prep_aborts: int


class ExploreTrace:
    """Loop-head snapshots for invariant auditing in tests."""

    def __init__(self) -> None:
        self.heads: list[tuple[frozenset[int], tuple[int, ...]]] = []
        self.steps: list[tuple[int, str, int, int]] = []  # (u, label, latest, cand)
        self.case: str | None = None
        self.final_region: frozenset[int] = frozenset()
        self.final_matched: dict[int, Cut] = {}
        self.candidates: dict[int, tuple[Cut, int]] = {}


def _volume_ok(
    g: SimpleGraph, cut: Cut, node_vertices: frozenset[int], parent_volume: int
) -> bool:
    return 2 * g.volume(cut.original_side & node_vertices) <= parent_volume


def _direct_outcome(
    net: FlowNetwork,
    pivot: int,
    targets: list[int],
    node_vertices: frozenset[int],
    parent_volume: int,
    counters: FlowCounters | None,
    prep_aborts: int = 0,
) -> ExploreOutcome:
    g = net.origin
    solver = NetworkSolver(net)
    sp = net.super_of
    selected = []
    for u in targets:
        cut = solver.latest_min_cut(sp[u], sp[pivot], counters)
        if _volume_ok(g, cut, node_vertices, parent_volume):
            selected.append((u, cut, True))
    return ExploreOutcome(selected, "direct", len(targets), prep_aborts)


def explore_tree(
    net: FlowNetwork,
    pivot: int,
    targets: Iterable[int],
    node_vertices: Iterable[int],
    parent_volume: int,
    params: AlgoParams,
    rng: random.Random,
    *,
    counters: FlowCounters | None = None,
    trace: ExploreTrace | None = None,
) -> ExploreOutcome:
    """Latest min-cuts for a volume-bounded subset of one cluster's vertices.

    Walks down the laminar family of latest cuts against the pivot: repeatedly
    computes the latest cut of the highest-candidate-value unresolved vertex,
    shrinking the active region on large cuts and discarding resolved
    vertices on small ones. Terminates once enough cluster vertices fall
    outside the region or enough vertices pin the region exactly.

    Candidate-backed results are not certified minimum cuts; callers must
    verify them (flagged False in the outcome). Raises subclasses of
    ExploreError when the randomized preparation fails twice or an invariant
    breaks; the caller is expected to fall back to direct flows.
    """
    target_list = sorted(set(targets))
    node_set = frozenset(node_vertices)
    if pivot in target_list:
        raise ValueError("pivot cannot be a target")
    g = net.origin
    cap = params.small_large_cap

    if len(target_list) < params.min_cluster_work:
        return _direct_outcome(
            net, pivot, target_list, node_set, parent_volume, counters
        )

    prep_aborts = 0
    candidates: dict[int, tuple[Cut, int]] | None = None
    for _ in range(2):
        try:
            candidates = explore_prepare(net, pivot, target_list, params, rng, counters)
            break
        except PrepAbort:
            prep_aborts += 1
    if candidates is None:
        return _direct_outcome(
            net, pivot, target_list, node_set, parent_volume, counters, prep_aborts
        )
    if trace is not None:
        trace.candidates = dict(candidates)

    solver = NetworkSolver(net)
    sp = net.super_of
    tset = frozenset(target_list)
    region: set[int] = set(target_list)
    matched: list[tuple[int, Cut]] = []  # vertices whose latest side pins region
    flows = 0

    while max(len(tset) - len(region), len(matched)) <= cap:
        matched_verts = {w for w, _ in matched}
        for w, wcut in matched:
            if wcut.original_side & tset != region:
                raise ExploreInvariantError(
                    f"pinned vertex {w} no longer matches the active region"
                )
        if trace is not None:
            trace.heads.append((frozenset(region), tuple(sorted(matched_verts))))
        pool = [v for v in region if v not in matched_verts]
        if not pool:
            break  # tiny cluster: every active vertex already pins the region
        u = max(pool, key=lambda v: (candidates[v][1], -v))
        progress_before = (len(tset) - len(region)) + len(matched)
        cut = solver.latest_min_cut(sp[u], sp[pivot], counters)
        flows += 1
        if flows > 2 * cap + 2:
            raise ExploreInvariantError("exploration exceeded its flow budget")
        inter = cut.original_side & tset
        label = _classify_sizes(len(inter), len(tset) - len(inter), cap)
        if trace is not None:
            trace.steps.append((u, label, cut.value, candidates[u][1]))
        if label == "small":
            region.difference_update(inter)
            region.difference_update(matched_verts)
            matched = []
        else:
            if len(tset) > 2 * cap and not cut.value < candidates[u][1]:
                raise ExploreInvariantError(
                    f"vertex {u} dominates its cluster but its candidate is tight"
                )
            if inter == region:
                matched.append((u, cut))
            else:
                if not inter < region:
                    raise ExploreInvariantError(
                        f"latest cut of {u} reaches outside the active region"
                    )
                region = set(inter)
                matched = [(u, cut)]
        progress_after = (len(tset) - len(region)) + len(matched)
        if progress_after <= progress_before:
            raise ExploreInvariantError("exploration made no progress")

    if trace is not None:
        trace.final_region = frozenset(region)
        trace.final_matched = dict(matched)
    scattered = (len(tset) - len(region)) > cap
    if scattered or not matched:
        case = "all-small"
        selected = []
        for u in sorted(region):
            cut, _ = candidates[u]
            if _volume_ok(g, cut, node_set, parent_volume):
                selected.append((u, cut, False))
    else:
        case = "lowest-large"
        rep = min(w for w, _ in matched)
        rep_cut = dict(matched)[rep]
        kappa = rep_cut.value
        selected = []
        for u in sorted(region):
            if candidates[u][1] > kappa:
                continue  # candidate provably not a minimum cut here
            if u == rep:
                continue
            cut, _ = candidates[u]
            if _volume_ok(g, cut, node_set, parent_volume):
                selected.append((u, cut, False))
        if _volume_ok(g, rep_cut, node_set, parent_volume):
            selected.append((rep, rep_cut, True))
        selected.sort(key=lambda item: item[0])
    if trace is not None:
        trace.case = case
    return ExploreOutcome(selected, case, flows, prep_aborts)


@dataclass
class RoundRecord:
    index: int
    nodes_processed: int = 0
    flow_calls: int = 0
    flow_edges: int = 0
    splits: int = 0
    expander_branches: int = 0
    kpartial_branches: int = 0
    explore_calls: int = 0
    direct_fallbacks: int = 0
    prep_aborts: int = 0
    verify_rejected: int = 0
    max_split_volume_ratio: float = 0.0
    contraction_ratios: list[float] = field(default_factory=list)
    branches: list[list] = field(default_factory=list)  # [node, branch, d, s]


@dataclass
class RunManifest:
    """Deterministic structured record of one build; serializes to JSON text."""

    algo: str = ""
    n: int = 0
    m: int = 0
    seed: int = 0
    params: dict = field(default_factory=dict)
    decomposition_clusters: int = 0
    init_flow_calls: int = 0
    init_flow_edges: int = 0
    rounds: list[RoundRecord] = field(default_factory=list)
    tail_flow_calls: int = 0
    tail_flow_edges: int = 0
    total_flow_calls: int = 0
    total_flow_edges: int = 0
    total_splits: int = 0
    verify_rejected: int = 0

    def as_dict(self) -> dict:
        out = asdict(self)
        return out

    def to_text(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"


def _node_context(
    g: SimpleGraph,
    decomp: ExpanderDecomposition,
    nid: int,
    node_vertices: frozenset[int],
    parent_volume: int,
    pivot: int,
) -> NodeContext:
    classes = degree_classes(g.n)
    groups: dict[int, list[int]] = {}
    for u in sorted(node_vertices):
        groups.setdefault(degree_class_of(classes, g.deg[u]), []).append(u)
    deg_class = max(groups, key=lambda k: (k * len(groups[k]), -k))
    members = groups[deg_class]
    counts: dict[int, int] = {}
    for u in members:
        i = decomp.size_class_of(decomp.cluster_of[u])
        counts[i] = counts.get(i, 0) + 1
    size_class = max(counts, key=lambda i: (counts[i], -i))
    return NodeContext(
        node=nid,
        parent_volume=parent_volume,
        pivot=pivot,
        deg_class=deg_class,
        class_members=frozenset(members),
        size_class=size_class,
        counts=counts,
    )


def _select_disjoint_maximal(
    candidates: list[tuple[int, Cut, bool]],
) -> list[tuple[int, Cut, bool]]:
    maximal = []
    for item in candidates:
        _, cut, _ = item
        if any(cut.original_side < other.original_side for _, other, _ in candidates):
            continue
        maximal.append(item)
    maximal.sort(key=lambda item: (-len(item[1].original_side), item[0]))
    chosen: list[tuple[int, Cut, bool]] = []
    taken: set[int] = set()
    for item in maximal:
        side = item[1].original_side
        if side & taken:
            continue
        taken |= side
        chosen.append(item)
    return chosen


def _engine(
    g: SimpleGraph,
    params: AlgoParams,
    kpartial_branch: bool,
    counters: FlowCounters | None,
    manifest: RunManifest | None,
    observer: Callable | None,
) -> PartitionTree:
    rng = random.Random(params.seed)
    if counters is None:
        counters = FlowCounters()
    tree = PartitionTree.single_node(g)

    calls0, edges0 = counters.calls, counters.edge_volume
    if g.n >= 2:
        init_k = math.isqrt(g.n)
        if init_k * init_k < g.n:
            init_k += 1
        k_partial_tree(g, tree, 0, init_k, counters)
    decomp = decompose(
        g,
        params.alpha,
        params.phi,
        b1=params.b1,
        b2=params.b2,
        use_log_budgets=params.use_log_budgets,
    )
    if manifest is not None:
        manifest.n = g.n
        manifest.m = g.m
        manifest.seed = params.seed
        manifest.params = asdict(params)
        manifest.decomposition_clusters = len(decomp.clusters)
        manifest.init_flow_calls = counters.calls - calls0
        manifest.init_flow_edges = counters.edge_volume - edges0

    branch_floor = float(g.n) ** params.branch_exp
    rounds = 0
    while rounds < params.round_cap:
        big = [
            nid
            for nid in tree.node_ids()
            if len(tree.nodes[nid]) >= params.size_threshold
        ]
        if not big:
            break
        rounds += 1
        rec = RoundRecord(rounds)
        calls_at, edges_at = counters.calls, counters.edge_volume
        for nid in big:
            node_set = frozenset(tree.nodes[nid])
            parent_volume = g.volume(node_set)
            rec.nodes_processed += 1
            pivots = sample_pivots(g, node_set, params.pivot_samples, rng)
            fragments = refine(g, tree, nid, pivots, counters)
            heavy = None
            for fid in fragments:
                if 2 * g.volume(tree.nodes[fid]) > parent_volume:
                    heavy = fid
                    break
            if heavy is None or len(tree.nodes[heavy]) < 2:
                continue
            node_vertices = frozenset(tree.nodes[heavy])
            ctx = _node_context(
                g, decomp, heavy, node_vertices, parent_volume, tree.pivot[heavy]
            )
            s_value = 2**ctx.size_class
            use_expander = True
            if kpartial_branch:
                use_expander = (
                    ctx.deg_class >= branch_floor
                    or s_value > branch_floor / math.sqrt(ctx.deg_class)
                )
            rec.branches.append(
                [heavy, "expander" if use_expander else "kpartial", ctx.deg_class, s_value]
            )
            if observer is not None:
                observer(g, tree, ctx)
            volume_before = g.volume(node_vertices)
            if not use_expander:
                rec.kpartial_branches += 1
                nodes_before = len(tree.nodes)
                k_partial_tree(g, tree, heavy, 2 * ctx.deg_class, counters)
                rec.splits += len(tree.nodes) - nodes_before
            else:
                rec.expander_branches += 1
                net = auxiliary_graph(g, tree, heavy)
                sp = net.super_of
                gathered: list[tuple[int, Cut, bool]] = []
                for ci in decomp.size_classes().get(ctx.size_class, []):
                    cluster = decomp.clusters[ci]
                    targets = sorted(
                        (set(cluster) & ctx.class_members) - {ctx.pivot}
                    )
                    if not targets:
                        continue
                    rec.explore_calls += 1
                    try:
                        outcome = explore_tree(
                            net,
                            ctx.pivot,
                            targets,
                            node_vertices,
                            parent_volume,
                            params,
                            rng,
                            counters=counters,
                        )
                        rec.prep_aborts += outcome.prep_aborts
                    except ExploreError:
                        rec.direct_fallbacks += 1
                        outcome = _direct_outcome(
                            net,
                            ctx.pivot,
                            targets,
                            node_vertices,
                            parent_volume,
                            counters,
                        )
                    gathered.extend(outcome.selected)
                solver = None
                for u, cut, certified in _select_disjoint_maximal(gathered):
                    if not certified:
                        if solver is None:
                            solver = NetworkSolver(net)
                        flow = solver.max_flow(sp[u], sp[ctx.pivot], counters)
                        if flow != cut.value:
                            rec.verify_rejected += 1
                            continue
                    side_volume = g.volume(cut.original_side & node_vertices)
                    assert 2 * side_volume <= parent_volume
                    rec.max_split_volume_ratio = max(
                        rec.max_split_volume_ratio, side_volume / parent_volume
                    )
                    tree.split_node_by_side(heavy, cut.original_side, cut.value)
                    rec.splits += 1
            if volume_before:
                remaining = g.volume(tree.nodes[heavy])
                rec.contraction_ratios.append(remaining / volume_before)
        rec.flow_calls = counters.calls - calls_at
        rec.flow_edges = counters.edge_volume - edges_at
        if manifest is not None:
            manifest.rounds.append(rec)

    calls_at, edges_at = counters.calls, counters.edge_volume
    while True:
        pending = None
        for nid in tree.node_ids():
            if len(tree.nodes[nid]) >= 2:
                pending = nid
                break
        if pending is None:
            break
        members = sorted(tree.nodes[pending])
        gh_step(g, tree, pending, members[0], members[1], counters)
    if manifest is not None:
        manifest.tail_flow_calls = counters.calls - calls_at
        manifest.tail_flow_edges = counters.edge_volume - edges_at
        manifest.total_flow_calls = counters.calls
        manifest.total_flow_edges = counters.edge_volume
        manifest.total_splits = len(tree.nodes) - 1
        manifest.verify_rejected = sum(r.verify_rejected for r in manifest.rounds)
    assert tree.is_fully_refined()
    return tree


def cond_gomory_hu(
    g: SimpleGraph,
    params: AlgoParams | None = None,
    counters: FlowCounters | None = None,
    manifest: RunManifest | None = None,
    observer: Callable | None = None,
) -> PartitionTree:
    """Expander-guided construction; every node takes the cluster-search path."""
    params = params if params is not None else AlgoParams.desk()
    if manifest is not None:
        manifest.algo = "cond"
    return _engine(g, params, False, counters, manifest, observer)


def uncond_gomory_hu(
    g: SimpleGraph,
    params: AlgoParams | None = None,
    counters: FlowCounters | None = None,
    manifest: RunManifest | None = None,
    observer: Callable | None = None,
) -> PartitionTree:
    """Branching construction: cluster search on dense/large classes, partial
    trees (degree-bounded isolation) otherwise."""
    params = params if params is not None else AlgoParams.desk()
    if manifest is not None:
        manifest.algo = "uncond"
    return _engine(g, params, True, counters, manifest, observer)
