"""Tests for pseudo-orbits and constructive shadowing."""

import math

import numpy as np
import pytest

from src.core.errors import PreconditionError, SeamViolationError
from src.orbits import (
    PseudoOrbit,
    concatenate_segments,
    linear_shadow,
    perturbed_pseudo_orbit,
    shadow,
    tightening_slope,
    verify_pseudo_orbit,
)
from src.spaces import IdealPoint, build_system

SQRT5 = math.sqrt(5)


@pytest.fixture
def cat():
    return build_system("cat")


class TestPseudoOrbits:
    """Tests for seeded perturbed pseudo-orbits."""

    @pytest.mark.parametrize("name", ["cat", "sphere", "example1", "shift2", "cantor-id"])
    def test_jumps_below_delta(self, name):
        """Test that every jump of a perturbed pseudo-orbit is below delta."""
        system = build_system(name)
        x0 = system.random_point(np.random.default_rng(0))
        po = perturbed_pseudo_orbit(system, x0, 0.01, 60, seed=1)
        check = verify_pseudo_orbit(po)

        assert check.valid
        assert check.max_jump < 0.01
        assert len(po) == 60

    def test_zero_delta_is_true_orbit(self, cat):
        """Test that delta = 0 reproduces the genuine orbit."""
        po = perturbed_pseudo_orbit(cat, np.array([0.2, 0.3]), 0.0, 20, seed=0)

        assert float(np.max(po.jumps())) < 1e-9

    def test_same_seed_same_pseudo_orbit(self, cat):
        """Test determinism for a fixed seed."""
        x0 = np.array([0.4, 0.1])
        a = perturbed_pseudo_orbit(cat, x0, 1e-3, 30, seed=5)
        b = perturbed_pseudo_orbit(cat, x0, 1e-3, 30, seed=5)

        np.testing.assert_array_equal(a.batch(), b.batch())

    def test_negative_delta_rejected(self, cat):
        """Test the delta precondition."""
        with pytest.raises(PreconditionError, match="delta"):
            perturbed_pseudo_orbit(cat, np.array([0.1, 0.1]), -1.0, 10, seed=0)

    def test_empty_length_rejected(self, cat):
        """Test the length precondition."""
        with pytest.raises(PreconditionError, match="length"):
            perturbed_pseudo_orbit(cat, np.array([0.1, 0.1]), 0.01, 0, seed=0)


class TestConcatenation:
    """Tests for gluing pseudo-orbit segments."""

    def test_glues_true_orbits(self, cat):
        """Test that a continuing segment glues with no seam jump."""
        x = np.array([0.3, 0.6])
        first = perturbed_pseudo_orbit(cat, x, 0.0, 10, seed=0)
        second = perturbed_pseudo_orbit(cat, cat.iterate(x, 10), 0.0, 10, seed=0)
        glued = concatenate_segments([first, second], 1e-6)

        assert len(glued) == 20
        assert verify_pseudo_orbit(glued).valid

    def test_seam_violation(self, cat):
        """Test that a distant second segment is rejected at seam 0."""
        first = perturbed_pseudo_orbit(cat, np.array([0.3, 0.6]), 0.0, 5, seed=0)
        second = perturbed_pseudo_orbit(cat, np.array([0.8, 0.1]), 0.0, 5, seed=0)

        with pytest.raises(SeamViolationError) as excinfo:
            concatenate_segments([first, second], 1e-3)
        assert excinfo.value.seam_index == 0

    def test_nothing_to_concatenate(self):
        """Test that an empty list is rejected."""
        with pytest.raises(PreconditionError, match="Nothing"):
            concatenate_segments([], 0.1)


class TestShadowing:
    """Tests for the constructive shadows."""

    def test_cat_within_constant(self, cat):
        """Test epsilon <= sqrt(5)·delta and a genuine shadow orbit on the cat map."""
        delta = 1e-4
        po = perturbed_pseudo_orbit(cat, np.array([0.31, 0.77]), delta, 500, seed=3)
        result = linear_shadow(cat.matrix, po)

        assert result.epsilon_achieved <= SQRT5 * delta * (1 + 1e-6)
        assert result.iterate_error <= 1e-9

    def test_sphere_within_constant(self):
        """Test the quotient shadow against the same constant."""
        sphere = build_system("sphere")
        delta = 1e-4
        x0 = sphere.random_point(np.random.default_rng(4))
        result = shadow(perturbed_pseudo_orbit(sphere, x0, delta, 300, seed=4))

        assert result.epsilon_achieved <= SQRT5 * delta * (1 + 1e-6)

    def test_periodic_window_closes(self, cat):
        """Test that a fixed-point pseudo-orbit is shadowed periodically by the fixed point."""
        po = PseudoOrbit(cat, [np.array([0.0, 0.0])] * 8, 1e-3)
        result = shadow(po)

        assert result.periodic
        assert result.epsilon_achieved < 1e-12

    def test_example1_ideal_points_switch_to_anchor(self):
        """Test that a pseudo-orbit resting at p_k is shadowed within 1/k."""
        system = build_system("example1")
        po = perturbed_pseudo_orbit(system, IdealPoint(20), 1e-3, 30, seed=0)
        result = shadow(po)

        assert result.epsilon_achieved == pytest.approx(1 / 20)

    def test_shift_shadow_within_delta(self):
        """Test that the symbol-reading shadow stays within delta."""
        system = build_system("shift2")
        x0 = system.random_point(np.random.default_rng(7))
        delta = 0.01
        result = shadow(perturbed_pseudo_orbit(system, x0, delta, 50, seed=7))

        assert result.epsilon_achieved < delta

    def test_identity_shadow_within_delta(self):
        """Test the constant shadow of the Cantor identity."""
        system = build_system("cantor-id")
        x0 = system.random_point(np.random.default_rng(8))
        delta = 0.01
        result = shadow(perturbed_pseudo_orbit(system, x0, delta, 40, seed=8))

        assert result.epsilon_achieved < delta

    def test_tightening_ratio_bounded(self, cat):
        """Test that epsilon/delta stays below sqrt(5) as delta shrinks."""
        report = tightening_slope(cat, np.array([0.12, 0.34]), [1e-2, 1e-3, 1e-4], 300, seed=0)

        assert report.max_ratio <= SQRT5 * (1 + 1e-6)
        assert [row["delta"] for row in report.rows()] == [1e-2, 1e-3, 1e-4]


@pytest.mark.slow
class TestShadowingAtScale:
    """Shadowing over many long pseudo-orbits."""

    @pytest.mark.parametrize("name", ["cat", "sphere"])
    def test_hundred_long_orbits(self, name):
        """Test 100 pseudo-orbits of length 2000 against sqrt(5)·delta."""
        system = build_system(name)
        rng = np.random.default_rng(21)
        delta = 1e-4
        worst, worst_iterate = 0.0, 0.0
        for i in range(100):
            po = perturbed_pseudo_orbit(system, system.random_point(rng), delta, 2000, seed=i)
            result = shadow(po)
            worst = max(worst, result.epsilon_achieved)
            worst_iterate = max(worst_iterate, result.iterate_error)

        assert worst <= SQRT5 * delta * (1 + 1e-6)
        assert worst_iterate <= 1e-9
