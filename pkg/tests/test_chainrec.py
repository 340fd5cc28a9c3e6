"""Tests for chain graphs and orbit density."""

import numpy as np
import pytest

from src.chainrec import (
    chain_graph,
    chain_path_shadowing,
    class_count_series,
    default_chain_cloud,
    nonwandering_estimate,
    seed_points,
    transitivity_check,
)
from src.core.errors import PreconditionError
from src.orbits import PseudoOrbit, linear_shadow, verify_pseudo_orbit
from src.spaces import IdealPoint, build_system


@pytest.fixture(scope="module")
def cat():
    return build_system("cat")


@pytest.fixture(scope="module")
def cat_graph(cat):
    return chain_graph(cat, default_chain_cloud(cat, 0.02), 0.02)


class TestChainGraph:
    """Tests for delta-chain graphs and their recurrent classes."""

    def test_fixed_point_self_loop(self, cat):
        """Test that a fixed point is a recurrent class on its own."""
        graph = chain_graph(cat, [np.zeros(2)], 0.01)

        assert graph.graph.has_edge(0, 0)
        assert graph.classes == [[0]]

    def test_cat_grid_is_one_class(self, cat_graph):
        """Test that the cat map grid is chain transitive."""
        assert cat_graph.n_nodes == 10000
        assert cat_graph.class_sizes == [10000]
        assert cat_graph.summary()["omega_fraction"] == 1.0

    def test_nonwandering_is_a_copy(self, cat_graph):
        """Test that the estimate cannot alter the graph."""
        omega = nonwandering_estimate(cat_graph)
        omega[:] = -1

        assert cat_graph.omega_estimate[0] == 0

    def test_identity_classes_are_cylinders(self):
        """Test that the Cantor identity splits into pairs sharing a 4-bit prefix."""
        system = build_system("cantor-id")
        graph = chain_graph(system, default_chain_cloud(system, 0.1), 0.1)

        assert graph.n_nodes == 32
        assert graph.class_sizes == [2] * 16

    def test_rows_label_every_node(self, cat):
        """Test the CSV view of node classes."""
        graph = chain_graph(cat, [np.zeros(2), np.array([0.5, 0.5])], 0.01)

        assert graph.rows() == [{"node": 0, "class": 0}, {"node": 1, "class": -1}]

    def test_delta_must_be_positive(self, cat):
        """Test the delta precondition."""
        with pytest.raises(PreconditionError, match="delta > 0"):
            chain_graph(cat, [np.zeros(2)], 0.0)


class TestClassCounts:
    """Tests for Example 1 singleton classes."""

    def test_singleton_ideal_classes_double(self):
        """Test that halving delta doubles the isolated ideal points."""
        rows = class_count_series(build_system("example1"))

        assert [r.singleton_ideal_classes for r in rows] == [5, 10, 20]
        assert rows[0].as_row()["delta"] == 0.2

    def test_needs_example1(self, cat):
        """Test that other systems are rejected."""
        with pytest.raises(PreconditionError, match="example1"):
            class_count_series(cat)


class TestChainPathShadowing:
    """Tests for shadowing random edge paths."""

    def test_cat_paths_within_bound(self, cat_graph):
        """Test that edge paths are shadowed within sqrt(5)·delta."""
        report = chain_path_shadowing(cat_graph, length=50, n_paths=3, seed=1)

        assert report.ok
        assert len(report.paths) == 3
        assert report.max_epsilon <= report.bound * (1 + 1e-6)

    def test_sphere_has_no_constant(self):
        """Test that the sphere quotient is refused."""
        sphere = build_system("sphere")
        graph = chain_graph(sphere, [np.zeros(2)], 0.01)

        with pytest.raises(PreconditionError, match="No shadow constant"):
            chain_path_shadowing(graph)


class TestTransitivity:
    """Tests for the orbit density surrogate."""

    def test_cat_seed_is_transitive(self, cat):
        """Test that an irrational seed fills a coarse grid."""
        report = transitivity_check(cat, seed_points(1)[0], 20000, grid=20)

        assert report.transitive
        assert report.forward_density_gap <= 0.01

    def test_identity_has_maximal_gap(self):
        """Test that an identity orbit stays in its own cell."""
        system = build_system("cantor-id")
        x = system.random_point(np.random.default_rng(0))
        report = transitivity_check(system, x, 100, grid=8)

        assert report.forward.visited == 1
        assert not report.transitive

    def test_ideal_point_visits_one_cell(self):
        """Test that a fixed ideal point is not transitive."""
        report = transitivity_check(build_system("example1"), IdealPoint(5), 50, grid=10)

        assert report.forward.visited == 1
        assert report.backward.visited == 1

    def test_coverage_curve_monotone(self, cat):
        """Test that coverage never shrinks along the orbit."""
        report = transitivity_check(cat, seed_points(2)[1], 5000, grid=30)
        coverage = [c for _, c in report.forward.curve]

        assert coverage == sorted(coverage)
        assert len(report.omega_sample) >= 1

    def test_float_orbit_is_shadowed(self, cat):
        """Test that the float torus orbit is a rounding pseudo-orbit of a genuine orbit."""
        points = cat.orbit_array(seed_points(1)[0], 2000)
        po = PseudoOrbit(cat, list(points), 1e-12)
        result = linear_shadow(cat.matrix, po)

        assert verify_pseudo_orbit(po).valid
        assert result.epsilon_achieved <= 1e-9
        assert result.iterate_error <= 1e-9

    def test_horizon_must_be_positive(self, cat):
        """Test the horizon precondition."""
        with pytest.raises(PreconditionError, match="horizon"):
            transitivity_check(cat, np.array([0.1, 0.2]), 0)

    def test_seed_points_in_unit_square(self):
        """Test the irrational seed sequence."""
        points = seed_points(5)

        assert points.shape == (5, 2)
        assert ((points >= 0) & (points < 1)).all()
