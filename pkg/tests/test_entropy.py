"""Tests for separated sets and entropy estimates."""

import math

import networkx as nx
import numpy as np
import pytest

from src.core.errors import PreconditionError
from src.entropy import (
    EXACT_LIMIT,
    bowen_ball_size,
    entropy_estimate,
    entropy_expansivity_check,
    entropy_trend,
    fit_slope,
    lattice_separated_bound,
    max_separated,
    maximum_clique,
)
from src.spaces import build_system

CAT_ENTROPY = math.log((3 + math.sqrt(5)) / 2)


@pytest.fixture(scope="module")
def cat():
    return build_system("cat")


def random_points(system, count, seed=0):
    rng = np.random.default_rng(seed)
    return [system.random_point(rng) for _ in range(count)]


class TestMaximumClique:
    """Tests for the branch and bound clique search."""

    def test_empty_graph(self):
        """Test that no vertices give an empty clique."""
        assert maximum_clique(np.zeros((0, 0), dtype=bool)) == []

    def test_beats_greedy_order(self):
        """Test a graph where the first vertex is not in the maximum clique."""
        adj = np.zeros((4, 4), dtype=bool)
        for i, j in [(0, 1), (1, 2), (1, 3), (2, 3)]:
            adj[i, j] = adj[j, i] = True

        assert maximum_clique(adj) == [1, 2, 3]

    def test_complete_graph(self):
        """Test that a complete graph is its own clique."""
        adj = ~np.eye(5, dtype=bool)

        assert maximum_clique(adj) == [0, 1, 2, 3, 4]

    def test_matches_networkx(self):
        """Test the clique size against networkx on a random graph."""
        rng = np.random.default_rng(5)
        upper = np.triu(rng.random((14, 14)) < 0.5, k=1)
        adj = upper | upper.T
        _, size = nx.max_weight_clique(nx.from_numpy_array(adj.astype(int)), weight=None)
        clique = maximum_clique(adj)

        assert len(clique) == size
        assert all(adj[i, j] for i in clique for j in clique if i != j)


class TestMaxSeparated:
    """Tests for (n, delta)-separated subsets."""

    def test_exact_dominates_greedy(self, cat):
        """Test that the exact count bounds the greedy one and both verify."""
        result = max_separated(cat, random_points(cat, 12), 3, 0.1, mode="exact")

        assert result.count_exact >= result.count_greedy
        assert result.count == result.count_exact
        assert result.verified

    def test_greedy_below_exact_on_seeded_instances(self, cat):
        """Test greedy <= exact on 100 seeded 20-point instances."""
        for seed in range(100):
            points = random_points(cat, 20, seed=seed)
            result = max_separated(cat, points, 3, 0.1, mode="exact")

            assert result.count_greedy <= result.count_exact, seed
            assert result.verified, seed

    def test_separation_grows_with_n(self, cat):
        """Test that more iterates separate at least as many points."""
        points = random_points(cat, 40, seed=1)
        short = max_separated(cat, points, 1, 0.2)
        long = max_separated(cat, points, 5, 0.2)

        assert long.count_greedy >= short.count_greedy

    def test_exact_limit(self, cat):
        """Test that exact mode refuses large sets."""
        with pytest.raises(PreconditionError, match="at most"):
            max_separated(cat, random_points(cat, EXACT_LIMIT + 1), 2, 0.1, mode="exact")

    def test_rejects_bad_n(self, cat):
        """Test the n precondition."""
        with pytest.raises(PreconditionError, match="n must be"):
            max_separated(cat, random_points(cat, 3), 0, 0.1)

    def test_rejects_empty_set(self, cat):
        """Test that an empty point set is rejected."""
        with pytest.raises(PreconditionError, match="empty"):
            max_separated(cat, [], 2, 0.1)


class TestFitSlope:
    """Tests for the top-half slope fit."""

    def test_linear_data(self):
        """Test the slope of exactly linear data."""
        ns = list(range(1, 9))

        assert fit_slope(ns, [0.5 * n + 1 for n in ns]) == pytest.approx(0.5)

    def test_negative_slope_clamped(self):
        """Test that decreasing data reports zero."""
        assert fit_slope([1, 2, 3, 4], [4.0, 3.0, 2.0, 1.0]) == 0.0

    def test_too_few_points(self):
        """Test that one point has no slope."""
        assert fit_slope([3], [1.0]) == 0.0


class TestLattice:
    """Tests for exact Bowen ball counting on the grid group."""

    def test_bowen_ball_shrinks(self, cat):
        """Test that Bowen balls shrink as n grows."""
        sizes = [bowen_ball_size(cat.matrix, 1000, n, 0.05) for n in range(1, 6)]

        assert sizes == sorted(sizes, reverse=True)
        assert sizes[-1] >= 1

    def test_bound_covers_grid(self, cat):
        """Test that the bound times the ball covers Q^2."""
        bound, ball = lattice_separated_bound(cat.matrix, 4, 0.05, modulus=1000)

        assert bound * ball >= 1000 * 1000

    def test_cat_entropy_within_tolerance(self, cat):
        """Test the lattice slope against log of the golden ratio squared."""
        est = entropy_estimate(cat, None, 0.05, range(1, 17), method="lattice")

        assert est.slope == pytest.approx(CAT_ENTROPY, rel=0.15)
        assert est.saturated

    @pytest.mark.parametrize("name", ["sphere", "shift2"])
    def test_lattice_needs_torus(self, name):
        """Test that the lattice method is refused off the torus."""
        with pytest.raises(PreconditionError, match="torus automorphism"):
            entropy_estimate(build_system(name), None, 0.05, [1, 2], method="lattice")


class TestGreedyEstimate:
    """Tests for greedy entropy slopes on point sets."""

    def test_bad_range(self, cat):
        """Test that a descending n range is rejected."""
        with pytest.raises(PreconditionError, match="ascending"):
            entropy_estimate(cat, random_points(cat, 5), 0.1, [3, 2])

    def test_needs_points(self, cat):
        """Test that greedy counting needs a point set."""
        with pytest.raises(PreconditionError, match="point set"):
            entropy_estimate(cat, None, 0.1, [1, 2])

    def test_identity_has_zero_entropy(self):
        """Test that the Cantor identity never separates more points."""
        system = build_system("cantor-id")
        est = entropy_estimate(
            system, random_points(system, 30), 0.1, range(1, 7), saturation=False
        )

        assert est.slope == 0.0
        assert len(set(est.counts)) == 1

    def test_trend_floors_smaller_delta(self, cat):
        """Test that counts at a smaller delta are at least those at a larger one."""
        trend = entropy_trend(cat, cat.grid_points(0.1), range(1, 5))
        by_delta = {e.delta: e.counts for e in trend.estimates}

        assert set(trend.slopes) == {0.1, 0.05, 0.025}
        assert all(a >= b for a, b in zip(by_delta[0.05], by_delta[0.1], strict=True))
        assert len(trend.rows()) == 12


class TestEntropyExpansivity:
    """Tests for entropy of dynamical balls."""

    def test_cat_is_h_expansive(self, cat):
        """Test that trivial cat balls carry no entropy."""
        report = entropy_expansivity_check(
            cat, 0.05, random_points(cat, 2, seed=3), [0.01], range(1, 5), horizon=40
        )

        assert report.h_expansive
        assert report.max_slope == 0.0
        assert len(report.rows) == 2

    def test_one_ball_per_center(self, cat):
        """Test that mismatched precomputed balls are rejected."""
        with pytest.raises(PreconditionError, match="One ball per center"):
            entropy_expansivity_check(
                cat, 0.05, random_points(cat, 2), [0.01], [1, 2], balls=[]
            )
