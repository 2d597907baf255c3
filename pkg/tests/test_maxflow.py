import random

import numpy as np
import pytest
from hypothesis import given, settings

from cuttree import (
    GeneratorSpec,
    NetworkSolver,
    SimpleGraph,
    brute_force_all_cuts,
    generate,
    identity_network,
    latest_min_cut,
    max_flow,
    min_cut_value_matrix,
)

from .util import connected_graphs, two_triangles_bridge


def k4_net():
    g = generate(GeneratorSpec("clique", 4))
    return identity_network(g)


class TestMaxFlow:
    def test_k4_all_pairs(self):
        net = k4_net()
        for s in range(4):
            for t in range(4):
                if s != t:
                    assert max_flow(net, s, t) == 3

    def test_path_endpoints(self):
        g = generate(GeneratorSpec("path", 3))
        assert max_flow(identity_network(g), 0, 2) == 1

    def test_same_terminal_rejected(self):
        with pytest.raises(ValueError):
            max_flow(k4_net(), 1, 1)

    @settings(max_examples=50, deadline=None)
    @given(connected_graphs(min_n=2, max_n=9))
    def test_matches_brute_force(self, g):
        oracle = brute_force_all_cuts(g)
        net = identity_network(g)
        solver = NetworkSolver(net)
        for s in range(g.n):
            for t in range(s + 1, g.n):
                assert solver.max_flow(s, t) == oracle.min_value(s, t)


class TestLatestMinCut:
    def test_k4_latest_is_singleton(self):
        cut = latest_min_cut(k4_net(), 2, 0)
        assert cut.side == frozenset([2]) and cut.value == 3

    def test_path_latest(self):
        g = generate(GeneratorSpec("path", 3))
        cut = latest_min_cut(identity_network(g), 0, 2)
        assert cut.side == frozenset([0]) and cut.value == 1

    def test_barbell_latest_side_is_triangle(self):
        g = two_triangles_bridge()
        cut = latest_min_cut(identity_network(g), 0, 4)
        assert cut.side == frozenset([0, 1, 2]) and cut.value == 1

    def test_duality_and_side_value(self):
        g = generate(GeneratorSpec("gnp", 10, seed=5, params={"p": 0.4}))
        net = identity_network(g)
        solver = NetworkSolver(net)
        for s, t in [(0, 9), (3, 7), (2, 4)]:
            cut = solver.latest_min_cut(s, t)
            assert cut.value == solver.max_flow(s, t)
            assert net.cut_value(cut.side) == cut.value

    @settings(max_examples=40, deadline=None)
    @given(connected_graphs(min_n=2, max_n=8))
    def test_minimal_side_and_uniqueness(self, g):
        oracle = brute_force_all_cuts(g)
        solver = NetworkSolver(identity_network(g))
        for s in range(g.n):
            for t in range(g.n):
                if s == t:
                    continue
                cut = solver.latest_min_cut(s, t)
                assert cut.side == oracle.latest_side(s, t)
                assert oracle.latest_side_is_unique(s, t)
                sizes = [len(side) for side in oracle.min_sides(s, t)]
                assert len(cut.side) == min(sizes)

    def test_deterministic_repeat(self):
        g = generate(GeneratorSpec("gnp", 12, seed=8, params={"p": 0.3}))
        net = identity_network(g)
        a = latest_min_cut(net, 0, 11)
        b = latest_min_cut(net, 0, 11)
        assert a == b


class TestCutAlgebra:
    """Closure of min cuts for a shared pivot under union and difference."""

    def _triples(self, g, rng, count=12):
        out = []
        for _ in range(count):
            a, b, p = rng.sample(range(g.n), 3)
            out.append((a, b, p))
        return out

    def test_union_with_contained_vertex(self):
        rng = random.Random(55)
        for seed in range(12):
            g = generate(GeneratorSpec("gnp", 9, seed=seed, params={"p": 0.4}))
            solver = NetworkSolver(identity_network(g))
            for a, b, p in self._triples(g, rng):
                A = solver.latest_min_cut(a, p)
                B = solver.latest_min_cut(b, p)
                if b in A.side:
                    union = A.side | B.side
                    if p in union:
                        continue
                    net = identity_network(g)
                    assert net.cut_value(union) == A.value

    def test_difference_when_separated(self):
        rng = random.Random(56)
        for seed in range(12):
            g = generate(GeneratorSpec("gnp", 9, seed=seed, params={"p": 0.4}))
            net = identity_network(g)
            solver = NetworkSolver(net)
            for a, b, p in self._triples(g, rng):
                A = solver.latest_min_cut(a, p)
                B = solver.latest_min_cut(b, p)
                if a not in B.side and b not in A.side:
                    diff = A.side - B.side
                    assert a in diff
                    assert net.cut_value(diff) == A.value


class TestMatrix:
    def test_k4_matrix(self):
        g = generate(GeneratorSpec("clique", 4))
        matrix = min_cut_value_matrix(g)
        off = matrix[~np.eye(4, dtype=bool)]
        assert (off == 3).all()

    def test_star_matrix(self):
        g = generate(GeneratorSpec("star", 5))
        matrix = min_cut_value_matrix(g)
        off = matrix[~np.eye(5, dtype=bool)]
        assert (off == 1).all()

    def test_random_matches_brute_force(self):
        for seed in range(8):
            g = generate(GeneratorSpec("gnp", 10, seed=seed, params={"p": 0.35}))
            assert (min_cut_value_matrix(g) == brute_force_all_cuts(g).values).all()

    def test_symmetry_zero_diagonal(self):
        g = generate(GeneratorSpec("powerlaw", 12, seed=2, params={"attach": 2}))
        matrix = min_cut_value_matrix(g)
        assert (matrix == matrix.T).all()
        assert (np.diag(matrix) == 0).all()
