"""Conductance certificates and certified expander decompositions.

A decomposition partitions the vertex set into clusters such that (1) the
total cluster boundary is small, (2) every cluster, after self-loop
augmentation proportional to its boundary, has conductance at least phi, and
(3) each cluster's own boundary is small relative to its volume. Properties
are certified post hoc: exactly by enumeration on small clusters, by the
normalized-Laplacian spectral bound plus a sweep cut on larger ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .graph import AugmentedSubgraph, SimpleGraph, augment

__all__ = [
    "ConductanceCertificate",
    "CertificationError",
    "ExpanderDecomposition",
    "conductance",
    "decompose",
    "size_class_of",
    "serialize_decomposition",
    "parse_decomposition",
    "EXACT_CONDUCTANCE_LIMIT",
]

EXACT_CONDUCTANCE_LIMIT = 20


class CertificationError(RuntimeError):
    """A produced decomposition failed one of its certified properties."""


@dataclass(frozen=True)
class ConductanceCertificate:
    """Bounds on a graph's conductance with a witness cut for the upper bound.

    ``lower == upper`` holds in exact mode; otherwise ``lower`` is a spectral
    bound and ``upper`` comes from the best sweep cut. The witness lists the
    cut side in the host graph's own vertex ids.
    """

    lower: object
    upper: object
    exact: bool
    witness: tuple[int, ...]

    @property
    def value(self):
        if not self.exact:
            raise ValueError("certificate is not exact")
        return self.lower


def _shape_of(h) -> tuple[int, tuple[tuple[int, int], ...], list[int], list[int]]:
    if isinstance(h, SimpleGraph):
        return h.n, h.edges, list(h.deg), list(range(h.n))
    if isinstance(h, AugmentedSubgraph):
        vols = [h.volume_of(i) for i in range(h.n)]
        return h.n, h.edges, vols, list(h.vertices)
    raise TypeError(f"cannot measure conductance of {type(h).__name__}")


def _exact_conductance(
    n: int, edges: Sequence[tuple[int, int]], vols: Sequence[int]
) -> tuple[Fraction, tuple[int, ...]]:
    total = sum(vols)
    count = 1 << (n - 1)
    masks = np.arange(count, dtype=np.uint32)
    shifts = np.arange(n - 1, dtype=np.uint32)
    bits = ((masks[None, :] >> shifts[:, None]) & 1).astype(np.uint8)
    zero = np.zeros(count, dtype=np.uint8)

    def bit(v: int) -> np.ndarray:
        return bits[v - 1] if v > 0 else zero

    cut = np.zeros(count, dtype=np.int64)
    for u, v in edges:
        cut += bit(u) ^ bit(v)
    vol = np.zeros(count, dtype=np.int64)
    for v in range(1, n):
        vol += bits[v - 1].astype(np.int64) * vols[v]
    denom = np.minimum(vol, total - vol)
    ratio = np.full(count, np.inf)
    valid = masks != 0
    ratio[valid] = cut[valid] / denom[valid]
    best = int(np.argmin(ratio))
    value = Fraction(int(cut[best]), int(denom[best]))
    witness = tuple(v for v in range(1, n) if (best >> (v - 1)) & 1)
    return value, witness


def _spectral_conductance(
    n: int, edges: Sequence[tuple[int, int]], vols: Sequence[int]
) -> tuple[float, float, tuple[int, ...]]:
    d = np.asarray(vols, dtype=float)
    A = np.zeros((n, n))
    for u, v in edges:
        A[u, v] += 1.0
        A[v, u] += 1.0
    loops = d - A.sum(axis=1)
    A[np.arange(n), np.arange(n)] += loops
    dinv = 1.0 / np.sqrt(d)
    lap = np.eye(n) - A * dinv[:, None] * dinv[None, :]
    eigvals, eigvecs = np.linalg.eigh(lap)
    lam2 = float(eigvals[1])
    lower = max(0.0, 0.5 * lam2 - 1e-9)

    f = eigvecs[:, 1] * dinv
    for x in f:
        if abs(x) > 1e-12:
            if x < 0:
                f = -f
            break
    order = np.argsort(f, kind="stable")
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    total = float(d.sum())
    inside = np.zeros(n, dtype=bool)
    cut = 0.0
    vol_in = 0.0
    best_phi = math.inf
    best_k = 1
    for k, v in enumerate(order[:-1], start=1):
        gained = sum(1 for w in adj[v] if inside[w])
        cut += len(adj[v]) - 2 * gained
        vol_in += d[v]
        inside[v] = True
        phi_k = cut / min(vol_in, total - vol_in)
        if phi_k < best_phi:
            best_phi = phi_k
            best_k = k
    witness = tuple(sorted(int(v) for v in order[:best_k]))
    return lower, float(best_phi), witness


def conductance(h) -> ConductanceCertificate:
    """Conductance of a graph or loop-augmented subgraph.

    Exact (enumerated over all bipartitions) up to EXACT_CONDUCTANCE_LIMIT
    vertices; otherwise a certified spectral lower bound and a sweep-cut
    upper bound. The witness is the best cut side found, in host vertex ids.
    """
    n, edges, vols, verts = _shape_of(h)
    if n < 2:
        raise ValueError("conductance requires at least 2 vertices")
    if n <= EXACT_CONDUCTANCE_LIMIT:
        value, witness_local = _exact_conductance(n, edges, vols)
        witness = tuple(verts[i] for i in witness_local)
        return ConductanceCertificate(value, value, True, witness)
    lower, upper, witness_local = _spectral_conductance(n, edges, vols)
    witness = tuple(verts[i] for i in witness_local)
    return ConductanceCertificate(lower, upper, False, witness)


class ExpanderDecomposition:
    """Certified partition of a graph into loop-augmented expanders."""

    def __init__(
        self,
        g: SimpleGraph,
        clusters: Sequence[Sequence[int]],
        phi: float,
        alpha: float,
        b1: float,
        b2: float,
        use_log_budgets: bool,
        out_counts: Sequence[int],
        volumes: Sequence[int],
        certificates: Sequence[ConductanceCertificate | None],
        flagged: Sequence[bool],
    ):
        self.n = g.n
        self.m = g.m
        self.clusters: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(c)) for c in clusters
        )
        self.phi = phi
        self.alpha = alpha
        self.b1 = b1
        self.b2 = b2
        self.use_log_budgets = use_log_budgets
        self.out_counts = tuple(out_counts)
        self.volumes = tuple(volumes)
        self.certificates = tuple(certificates)
        self.flagged = tuple(flagged)
        self.best_effort = any(flagged)
        self.cluster_of: dict[int, int] = {}
        for idx, cluster in enumerate(self.clusters):
            for v in cluster:
                self.cluster_of[v] = idx

    def total_boundary_limit(self) -> float:
        factor = math.log2(self.n) ** 4 if self.use_log_budgets else self.b1
        return factor * self.phi * self.m

    def cluster_boundary_limit(self, idx: int) -> float:
        factor = math.log2(self.n) ** 7 if self.use_log_budgets else self.b2
        return factor * self.phi * self.volumes[idx]

    def cluster_index(self, cluster) -> int:
        if isinstance(cluster, int):
            if not (0 <= cluster < len(self.clusters)):
                raise ValueError(f"unknown cluster index {cluster}")
            return cluster
        key = tuple(sorted(cluster))
        for idx, c in enumerate(self.clusters):
            if c == key:
                return idx
        raise ValueError(f"unknown cluster {key!r}")

    def size_class_of(self, cluster) -> int:
        idx = self.cluster_index(cluster)
        return len(self.clusters[idx]).bit_length() - 1

    def size_classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for idx in range(len(self.clusters)):
            out.setdefault(self.size_class_of(idx), []).append(idx)
        return out

    @classmethod
    def from_partition(
        cls,
        g: SimpleGraph,
        clusters: Sequence[Sequence[int]],
        phi: float,
        alpha: float,
        b1: float = 4.0,
        b2: float = 8.0,
        use_log_budgets: bool = False,
    ) -> "ExpanderDecomposition":
        """Build and certify; raises CertificationError on a hard violation.

        Singleton clusters that cannot meet the per-cluster boundary budget
        are admitted but flagged, making the decomposition best-effort.
        """
        ordered = sorted((tuple(sorted(c)) for c in clusters), key=lambda c: c[0])
        seen: set[int] = set()
        for c in ordered:
            if not c:
                raise ValueError("empty cluster")
            for v in c:
                if v in seen:
                    raise ValueError(f"vertex {v} in two clusters")
                seen.add(v)
        if seen != set(range(g.n)):
            raise ValueError("clusters must partition the vertex set")

        x = alpha / phi
        out_counts = []
        volumes = []
        certificates: list[ConductanceCertificate | None] = []
        flagged = []
        for c in ordered:
            out_counts.append(g.boundary(c))
            volumes.append(g.volume(c))
            if len(c) >= 2:
                cert = conductance(augment(g, c, x))
                if not cert.lower >= phi:
                    raise CertificationError(
                        f"cluster {c[:6]}... has conductance bound {cert.lower} < {phi}"
                    )
                certificates.append(cert)
            else:
                certificates.append(None)
        dec = cls(
            g,
            ordered,
            float(phi),
            float(alpha),
            float(b1),
            float(b2),
            use_log_budgets,
            out_counts,
            volumes,
            certificates,
            [False] * len(ordered),
        )
        flagged = []
        for idx, c in enumerate(ordered):
            if dec.out_counts[idx] > dec.cluster_boundary_limit(idx):
                if len(c) == 1:
                    flagged.append(True)
                    continue
                raise CertificationError(
                    f"cluster {c[:6]}... exceeds its boundary budget"
                )
            flagged.append(False)
        dec.flagged = tuple(flagged)
        dec.best_effort = any(flagged)
        if sum(dec.out_counts) > dec.total_boundary_limit():
            raise CertificationError(
                f"total boundary {sum(dec.out_counts)} exceeds budget "
                f"{dec.total_boundary_limit():.2f}"
            )
        return dec

    def __repr__(self) -> str:
        return (
            f"ExpanderDecomposition(clusters={len(self.clusters)}, "
            f"phi={self.phi}, alpha={self.alpha})"
        )


def decompose(
    g: SimpleGraph,
    alpha: float,
    phi: float,
    *,
    b1: float = 4.0,
    b2: float = 8.0,
    use_log_budgets: bool = False,
    alpha_cap: float = 1.0,
) -> ExpanderDecomposition:
    """Recursive spectral/exact partitioning into certified expanders.

    Clusters failing certification split along the best cut the certificate
    found (exact minimum on small clusters, sweep cut otherwise); clusters
    violating the per-cluster boundary budget are re-split down to singletons,
    which are flagged rather than rejected.
    """
    if not (0 < phi <= 1):
        raise ValueError("phi must lie in (0, 1]")
    if not (0 < alpha <= alpha_cap):
        raise ValueError(f"alpha must lie in (0, {alpha_cap}]")
    x = alpha / phi
    work: list[tuple[int, ...]] = [tuple(range(g.n))]
    final: list[tuple[int, ...]] = []
    steps = 0
    budget = 8 * g.n + 64
    while work:
        steps += 1
        if steps > budget:
            raise CertificationError("decomposition recursion budget exhausted")
        cluster = work.pop()
        if len(cluster) == 1:
            final.append(cluster)
            continue
        aug = augment(g, cluster, x)
        cert = conductance(aug)
        needs_split = not cert.lower >= phi
        if not needs_split:
            out = g.boundary(cluster)
            vol = g.volume(cluster)
            factor = math.log2(g.n) ** 7 if use_log_budgets else b2
            if out > factor * phi * vol:
                needs_split = True
        if not needs_split:
            final.append(cluster)
            continue
        side = set(cert.witness)
        rest = tuple(v for v in cluster if v not in side)
        side_t = tuple(sorted(side))
        if not side_t or not rest:
            raise CertificationError("degenerate split witness")
        work.append(max(side_t, rest, key=len))
        work.append(min(rest, side_t, key=len))
    final.sort(key=lambda c: c[0])
    return ExpanderDecomposition.from_partition(
        g, final, phi, alpha, b1=b1, b2=b2, use_log_budgets=use_log_budgets
    )


def size_class_of(dec: ExpanderDecomposition, cluster) -> int:
    """Index i such that the cluster size lies in [2**i, 2**(i+1))."""
    return dec.size_class_of(cluster)


def serialize_decomposition(dec: ExpanderDecomposition) -> str:
    lines = [
        "p "
        f"{dec.phi!r} {dec.alpha!r} {dec.b1!r} {dec.b2!r} "
        f"{1 if dec.use_log_budgets else 0}"
    ]
    for idx, cluster in enumerate(dec.clusters):
        vs = " ".join(str(v + 1) for v in cluster)
        lines.append(f"C {idx} {vs}")
    return "\n".join(lines) + "\n"


def parse_decomposition(text: str, g: SimpleGraph) -> ExpanderDecomposition:
    phi = alpha = b1 = b2 = None
    use_log = False
    clusters: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c "):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 6:
                raise ValueError(f"line {lineno}: bad parameter line")
            phi, alpha, b1, b2 = (float(p) for p in parts[1:5])
            use_log = parts[5] == "1"
        elif parts[0] == "C":
            clusters.append([int(p) - 1 for p in parts[2:]])
        else:
            raise ValueError(f"line {lineno}: unrecognized line kind {parts[0]!r}")
    if phi is None:
        raise ValueError("decomposition document missing parameter line")
    return ExpanderDecomposition.from_partition(
        g, clusters, phi, alpha, b1=b1, b2=b2, use_log_budgets=use_log
    )
