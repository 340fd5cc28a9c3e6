"""Tests for the bundled systems and their metrics."""

import math
from fractions import Fraction

import numpy as np
import pytest

from src.core.errors import SystemConfigError, WindowExhaustedError
from src.spaces import (
    ANCHOR,
    SYSTEM_IDS,
    IdealPoint,
    SphereSystem,
    TorusSystem,
    build_system,
    canonical_many,
    cantor_dist,
    example1_apply,
    check_forward_inverse,
    check_inverse,
    check_metric_axioms,
    check_quotient_well_defined,
    example1_dist,
    example1_ideal_fraction,
    make_shift_point,
    shift_apply,
    shift_dist,
    sphere_dist,
    torus_apply,
    torus_dist,
)
from src.spaces.symbolic import tail_index

CAT = [[2, 1], [1, 1]]


@pytest.fixture
def cat():
    return TorusSystem()


class TestTorus:
    """Tests for hyperbolic toral automorphisms."""

    def test_apply_cat_map(self):
        """Test A·x mod 1 on a rational point."""
        result = torus_apply(CAT, np.array([0.5, 0.5]))

        np.testing.assert_allclose(result, [0.5, 0.0])

    def test_backward_inverts_forward(self):
        """Test that the integer inverse undoes the map."""
        x = np.array([0.123, 0.456])
        back = torus_apply(CAT, torus_apply(CAT, x), "backward")

        assert torus_dist(back, x) < 1e-12

    def test_rejects_non_hyperbolic(self):
        """Test that trace 2 is rejected."""
        with pytest.raises(SystemConfigError, match="not hyperbolic"):
            TorusSystem([[1, 1], [0, 1]])

    def test_rejects_non_unimodular(self):
        """Test that det != ±1 is rejected."""
        with pytest.raises(SystemConfigError, match="not unimodular"):
            TorusSystem([[3, 1], [1, 1]])

    def test_rejects_wrong_size(self):
        """Test that a matrix needs four entries."""
        with pytest.raises(SystemConfigError, match="four entries"):
            TorusSystem([2, 1, 1])

    def test_distance_wraps(self):
        """Test that the flat metric uses the nearest translate."""
        assert torus_dist(np.array([0.05, 0.0]), np.array([0.95, 0.0])) == pytest.approx(0.1)
        assert torus_dist(np.array([0.0, 0.0]), np.array([0.5, 0.5])) == pytest.approx(
            math.sqrt(2) / 2
        )

    def test_splitting_of_cat_map(self, cat):
        """Test eigenvalues, entropy and shadow constant of the cat map."""
        split = cat.splitting
        golden = (3 + math.sqrt(5)) / 2

        assert abs(split.lambda_u) == pytest.approx(golden)
        assert abs(split.lambda_s) == pytest.approx(1 / golden)
        assert split.entropy == pytest.approx(math.log(golden))
        assert split.shadow_constant == pytest.approx(math.sqrt(5))

    def test_periodic_points(self, cat):
        """Test the count and periodicity of period-2 points."""
        points = cat.periodic_points(2)

        assert len(points) == 5
        for p in points:
            assert torus_dist(cat.iterate(p, 2), p) < 1e-9

    def test_fixed_point_is_origin(self, cat):
        """Test that the cat map fixes only the origin."""
        np.testing.assert_allclose(cat.periodic_points(1), [[0.0, 0.0]])

    def test_grid_points(self, cat):
        """Test the grid enumeration."""
        grid = cat.grid_points(0.25)

        assert grid.shape == (16, 2)
        assert grid.min() == 0.0
        assert grid.max() == 0.75

    def test_orbit_array_matches_iterate(self, cat):
        """Test the vectorised orbit against repeated application."""
        x = np.array([0.3, 0.7])
        orbit = cat.orbit_array(x, 6)

        assert torus_dist(orbit[5], cat.iterate(x, 5)) < 1e-9


class TestSphere:
    """Tests for the antipodal sphere quotient."""

    def test_canonical_representative(self):
        """Test that the lexicographically smaller lift is kept."""
        np.testing.assert_allclose(canonical_many(np.array([0.7, 0.2])), [0.3, 0.8])

    def test_antipodes_are_identified(self):
        """Test that x and -x are the same class."""
        x = np.array([0.2, 0.35])

        assert sphere_dist(x, np.mod(-x, 1.0)) == pytest.approx(0.0, abs=1e-12)

    def test_quotient_map_well_defined(self):
        """Test that both lifts of a class have the same image."""
        assert check_quotient_well_defined(SphereSystem(), 500, seed=1) < 1e-9

    def test_periodic_points_are_canonical(self):
        """Test that periodic classes are stored canonically and deduplicated."""
        sphere = SphereSystem()
        points = sphere.periodic_points(2)

        np.testing.assert_allclose(points, canonical_many(points))
        assert len(points) == len(np.unique(points, axis=0))


class TestExample1:
    """Tests for the Example 1 metric."""

    def test_apply_builds_no_system(self, monkeypatch):
        """Test that applying the map reuses the prebuilt base."""
        system = build_system("example1")

        def refuse(*args, **kwargs):
            raise AssertionError("TorusSystem constructed per call")

        monkeypatch.setattr("src.spaces.example1.TorusSystem", refuse)
        x = np.array([0.5, 0.5])

        np.testing.assert_allclose(example1_apply(x), [0.5, 0.0])
        np.testing.assert_allclose(system.apply(x), [0.5, 0.0])
        assert example1_apply(IdealPoint(4)) == IdealPoint(4)

    def test_apply_with_given_base(self):
        """Test that a supplied base matrix is used."""
        base = TorusSystem([[3, 2], [1, 1]])
        image = example1_apply(np.array([0.25, 0.5]), base=base)

        np.testing.assert_allclose(image, [0.75, 0.75])

    def test_ideal_to_ideal(self):
        """Test d(p_m, p_k) = 1/m + 1/k."""
        assert example1_dist(IdealPoint(2), IdealPoint(4)) == pytest.approx(0.75)
        assert example1_dist(IdealPoint(3), IdealPoint(3)) == 0.0

    def test_ideal_to_base(self):
        """Test d(p_k, x) = 1/k + d0(x, p0)."""
        x = np.array([0.1, 0.0])

        assert example1_dist(IdealPoint(10), x) == pytest.approx(0.2)
        assert example1_dist(x, IdealPoint(10)) == pytest.approx(0.2)

    def test_exact_fraction(self):
        """Test exact rational distances between ideal points."""
        assert example1_ideal_fraction(3, 6) == Fraction(1, 2)
        assert example1_ideal_fraction(5, 5) == 0

    def test_ideal_points_fixed(self):
        """Test that ideal points are fixed and base points move by g."""
        system = build_system("example1")

        assert system.apply(IdealPoint(7)) == IdealPoint(7)
        assert system.same_point(system.apply(ANCHOR), ANCHOR)

    def test_ideal_index_positive(self):
        """Test that p_0 is not an ideal point."""
        with pytest.raises(SystemConfigError, match=">= 1"):
            IdealPoint(0)


class TestSymbolic:
    """Tests for the shift and the Cantor identity."""

    def test_shift_moves_origin(self):
        """Test sigma(x)_0 = x_1."""
        x = make_shift_point([0, 1, 1, 0, 1], origin=2)

        assert shift_apply(x).at(0) == x.at(1) == 0
        assert shift_apply(x, "backward").at(0) == 1
        assert shift_apply(shift_apply(x), "backward") == x

    def test_shift_window_exhausted(self):
        """Test that shifting past the stored window raises."""
        x = make_shift_point([0, 1], origin=1)

        with pytest.raises(WindowExhaustedError):
            shift_apply(x)

    def test_shift_distance(self):
        """Test 2^-j at the least disagreeing |i|."""
        x = make_shift_point([0] * 9, origin=4)

        assert shift_dist(x, x.replace(3, 1)) == 2.0**-3
        assert shift_dist(x, x.replace(-1, 1)) == 0.5
        assert shift_dist(x, x) == 0.0

    def test_cantor_distance(self):
        """Test 2^-(common prefix length)."""
        assert cantor_dist("0110", "0100") == 0.25
        assert cantor_dist("1010", "1010") == 0.0

    def test_cantor_lengths_must_match(self):
        """Test that prefixes of different lengths are rejected."""
        with pytest.raises(WindowExhaustedError, match="differ"):
            cantor_dist("01", "010")

    def test_tail_index(self):
        """Test the smallest j with 2^-j < delta."""
        assert tail_index(0.1) == 4
        assert tail_index(0.25) == 3


class TestRegistry:
    """Tests for building systems from string ids."""

    def test_all_ids_build(self):
        """Test that every registered id builds with its name."""
        for name in SYSTEM_IDS:
            assert build_system(name).handle.name == name

    def test_matrix_override(self):
        """Test four integers in row order."""
        system = build_system("cat", [3, 2, 1, 1])

        assert system.handle.params["matrix"] == [[3, 2], [1, 1]]

    def test_unknown_id(self):
        """Test that an unknown id raises."""
        with pytest.raises(SystemConfigError, match="Unknown system"):
            build_system("baker")

    def test_symbolic_rejects_matrix(self):
        """Test that symbolic systems take no matrix."""
        with pytest.raises(SystemConfigError, match="does not take a matrix"):
            build_system("shift2", [2, 1, 1, 1])


class TestAudits:
    """Property checks run on every system."""

    @pytest.mark.parametrize("name", SYSTEM_IDS)
    def test_metric_axioms(self, name):
        """Test identity, symmetry and the triangle inequality on random triples."""
        report = check_metric_axioms(build_system(name), 2000, seed=0)

        assert report.ok, report.summary()

    def test_example1_exact_triples(self):
        """Test that all-ideal triples are also checked exactly."""
        report = check_metric_axioms(build_system("example1"), 4000, seed=3)

        assert report.exact_triples > 0
        assert report.exact_violations == 0

    @pytest.mark.parametrize("name", ["cat", "sphere", "example1", "shift2", "cantor-id"])
    def test_inverse_round_trip(self, name):
        """Test f^-1(f(x)) = x."""
        assert check_inverse(build_system(name), 500, seed=2) <= 1e-9


@pytest.mark.slow
class TestAuditsAtScale:
    """Property checks at full sample sizes."""

    @pytest.mark.parametrize("name", SYSTEM_IDS)
    def test_metric_axioms_on_1e5_triples(self, name):
        """Test the metric axioms on 10^5 random triples."""
        report = check_metric_axioms(build_system(name), 100_000, seed=11)

        assert report.ok, report.summary()
        assert report.exact_violations == 0

    @pytest.mark.parametrize("name", SYSTEM_IDS)
    def test_inverse_on_1e4_points(self, name):
        """Test both inverse round trips on 10^4 random points."""
        system = build_system(name)

        assert check_inverse(system, 10_000, seed=12) <= 1e-9
        assert check_forward_inverse(system, 10_000, seed=13) <= 1e-9

    def test_quotient_well_defined_on_1e4_points(self):
        """Test that both lifts of 10^4 sphere classes map to one class."""
        assert check_quotient_well_defined(SphereSystem(), 10_000, seed=14) < 1e-9
