"""Tests for dynamical balls and their classification."""

import numpy as np
import pytest

from src.balls import (
    LevelMembers,
    Structure,
    asymptotic_ball,
    ball_from_profiles,
    ball_profile,
    classify_structure,
    cw_intersection_count,
    dynamical_ball,
    expansive_points_scan,
    expansivity_profile,
    expansivity_radius,
    greedy_separated,
    local_unstable,
    radius_ladder,
    stable_inclusion_check,
)
from src.core.errors import PreconditionError
from src.spaces import ANCHOR, build_system, is_ideal


def line_level(positions, resolution=1e-3, previous=None):
    """Members at the given positions on a line."""
    pos = np.asarray(positions, dtype=float)
    to_previous = None
    if previous is not None:
        to_previous = np.abs(pos[:, None] - np.asarray(previous, dtype=float)[None, :])
    return LevelMembers(resolution, np.abs(pos[:, None] - pos[None, :]), to_previous)


@pytest.fixture(scope="module")
def cat():
    return build_system("cat")


@pytest.fixture(scope="module")
def example1():
    return build_system("example1")


class TestClassifyStructure:
    """Tests for the refinement-level classification rule."""

    def test_single_level_inconclusive(self):
        """Test that one level cannot be classified."""
        result = classify_structure([line_level([0.0])], sep_delta=0.5)

        assert result.structure == Structure.INCONCLUSIVE

    def test_trivial(self):
        """Test that a lone member is trivial."""
        result = classify_structure([line_level([0.0]), line_level([0.0])], sep_delta=0.5)

        assert result.structure == Structure.TRIVIAL
        assert result.label == "trivial"

    def test_cantor_like(self):
        """Test that doubling separated counts are cantor-like."""
        levels = [line_level(range(n)) for n in (2, 4, 8)]
        result = classify_structure(levels, sep_delta=0.5)

        assert result.structure == Structure.CANTOR
        assert result.separated_counts == [2, 4, 8]

    def test_finite(self):
        """Test that stable counts give a finite set."""
        levels = [line_level([0, 5, 9]), line_level([0, 5, 9])]
        result = classify_structure(levels, sep_delta=0.5)

        assert result.structure == Structure.FINITE
        assert result.label == "finite(3)"

    def test_countable_like(self):
        """Test that new members accumulating on old ones are countable-like."""
        coarse = [0.0, 10.0]
        levels = [line_level(coarse), line_level([0.0, 10.0, 10.3], previous=coarse)]
        result = classify_structure(levels, sep_delta=0.5)

        assert result.structure == Structure.COUNTABLE
        assert result.raw_counts == [2, 3]

    def test_decreasing_counts_inconclusive(self):
        """Test that shrinking separated counts are inconclusive."""
        levels = [line_level([0, 5, 9]), line_level([0, 5])]
        result = classify_structure(levels, sep_delta=0.5)

        assert result.structure == Structure.INCONCLUSIVE
        assert "decrease" in result.reason

    def test_greedy_separated(self):
        """Test the greedy scan keeps the first of close pairs."""
        pos = np.array([0.0, 0.1, 1.0, 1.05, 2.0])
        kept = greedy_separated(np.abs(pos[:, None] - pos[None, :]) > 0.5)

        assert kept.tolist() == [0, 2, 4]


class TestDynamicalBall:
    """Tests for Gamma_c^N on the bundled systems."""

    def test_cat_ball_trivial(self, cat):
        """Test that balls of the cat map are trivial."""
        x = cat.random_point(np.random.default_rng(0))
        ball = dynamical_ball(cat, x, 0.05, 60)

        assert ball.classification.structure == Structure.TRIVIAL
        assert len(ball.members_gamma) == 1

    def test_center_in_every_level(self, cat):
        """Test that the center is a member at each refinement level."""
        ball = dynamical_ball(cat, np.array([0.3, 0.4]), 0.05, 30)

        assert all(level.gamma[0] for level in ball.levels)
        assert len(ball.levels) == 3

    def test_example1_ideal_members(self, example1):
        """Test that Gamma_0.1(p0) holds exactly the ideal points p_k with k >= 10."""
        ball = dynamical_ball(example1, ANCHOR.copy(), 0.1, 60)
        ideal = sorted(p.index for p in ball.members_gamma if is_ideal(p))

        assert ideal == list(range(10, ideal[-1] + 1))
        assert ideal[-1] >= 100

    def test_example1_not_finite_expansive(self, example1):
        """Test that Gamma_0.05(p0) has at least 20 ideal members."""
        ball = dynamical_ball(example1, ANCHOR.copy(), 0.05, 60)

        assert sum(1 for p in ball.members_gamma if is_ideal(p)) >= 20

    @pytest.mark.parametrize("name", ["cat", "example1"])
    def test_members_grow_with_radius(self, name):
        """Test that Gamma_c^N at a fixed N only gains members as c grows."""
        system = build_system(name)
        x = ANCHOR.copy() if name == "example1" else np.array([0.27, 0.61])
        profiles = ball_profile(system, x, 40)
        balls = [ball_from_profiles(system, x, c, profiles) for c in (0.025, 0.05, 0.1, 0.2)]

        for small, large in zip(balls, balls[1:], strict=False):
            for a, b in zip(small.levels, large.levels, strict=True):
                assert not (a.gamma & ~b.gamma).any()
        sizes = [len(ball.members_gamma) for ball in balls]
        assert sizes == sorted(sizes)

    def test_radius_must_be_positive(self, cat):
        """Test the radius precondition."""
        with pytest.raises(PreconditionError, match="Radius"):
            dynamical_ball(cat, np.array([0.1, 0.2]), 0.0, 10)

    def test_summary_and_rows(self, cat):
        """Test the report views."""
        ball = dynamical_ball(cat, np.array([0.3, 0.4]), 0.05, 20)

        assert ball.summary()["classification"] == "trivial"
        assert ball.rows() == [{"set": "gamma", "x": 0.3, "y": 0.4}]


class TestAsymptoticBall:
    """Tests for V^s_c ∩ V^u_c."""

    @pytest.mark.parametrize("name", ["cat", "example1"])
    def test_asymptotic_ball_is_center(self, name):
        """Test that only the center converges in both directions."""
        system = build_system(name)
        x = ANCHOR.copy() if name == "example1" else np.array([0.21, 0.63])

        assert len(asymptotic_ball(system, x, 0.05, 60)) == 1

    def test_threshold_below_radius(self, cat):
        """Test that the convergence threshold must be below c."""
        with pytest.raises(PreconditionError, match="threshold"):
            asymptotic_ball(cat, np.array([0.1, 0.1]), 0.05, 10, convergence_threshold=0.05)

    def test_stable_inclusion(self, cat):
        """Test that local stable members converge on the cat map."""
        report = stable_inclusion_check(cat, np.array([0.37, 0.52]), 0.05, 30)

        assert report.ok
        assert report.members >= 1


class TestExpansivity:
    """Tests for expansivity surrogates."""

    def test_cat_expansive(self, cat):
        """Test that the cat map classifies expansive at c = 0.05."""
        rng = np.random.default_rng(1)
        centers = [cat.random_point(rng) for _ in range(3)]
        profile = expansivity_profile(cat, centers, 0.05, 40)

        assert profile.expansive
        assert profile.countably_expansive
        assert profile.n_expansive == 1

    def test_cantor_identity_has_no_expansive_points(self):
        """Test that no radius gives a trivial ball for the identity."""
        system = build_system("cantor-id")
        rng = np.random.default_rng(2)
        points = [system.random_point(rng) for _ in range(3)]
        report = expansive_points_scan(system, points, [0.025, 0.05, 0.1], 10)

        assert not report.expansive.any()
        assert report.density_fraction == 0.0

    def test_scan_needs_points(self, cat):
        """Test that an empty scan is rejected."""
        with pytest.raises(PreconditionError, match="No points"):
            expansive_points_scan(cat, [], [0.05])

    def test_radius_ladder(self):
        """Test the halving ladder below the largest radius."""
        assert radius_ladder(0.2) == [0.025, 0.05, 0.1, 0.2]
        assert radius_ladder(0.1, steps=1) == [0.1]

    def test_cat_radius_is_ladder_top(self, cat):
        """Test that every ladder radius up to 0.05 is countable on the cat map."""
        rng = np.random.default_rng(1)
        centers = [cat.random_point(rng) for _ in range(3)]
        detected = expansivity_radius(cat, centers, radius_ladder(0.05), 40)

        assert detected.radius == 0.05
        assert detected.ladder == sorted(detected.ladder)
        assert detected.profile.expansive
        assert detected.summary()["countable"] == [True] * 4
        assert len(detected.rows()) == 4

    def test_radius_needs_ladder(self, cat):
        """Test that an empty ladder is rejected."""
        with pytest.raises(PreconditionError, match="ladder"):
            expansivity_radius(cat, [np.array([0.1, 0.2])], [])


class TestLocalSets:
    """Tests for c-stable and c-unstable sets and their intersections."""

    def test_local_unstable_starts_with_center(self, cat):
        """Test that the center leads the member list."""
        x = np.array([0.42, 0.17])
        members = local_unstable(cat, x, 0.05, 30)

        assert members
        assert cat.same_point(members[0], x)

    def test_cw_count_on_torus(self, cat):
        """Test that stable and unstable segments through a point meet once."""
        report = cw_intersection_count(cat, [np.array([0.3, 0.6])], 0.05)

        assert report.pairs == 1
        assert report.max_count == 1

    def test_cw_count_near_singular_point(self):
        """Test that the sphere quotient doubles the intersection near (1/2, 0)."""
        sphere = build_system("sphere")
        report = cw_intersection_count(sphere, [np.array([0.51, 0.005])], 0.05)

        assert report.max_count == 2

    def test_cw_needs_splitting(self):
        """Test that symbolic systems are refused."""
        with pytest.raises(PreconditionError, match="No stable and unstable"):
            cw_intersection_count(build_system("shift2"), [], 0.05)
