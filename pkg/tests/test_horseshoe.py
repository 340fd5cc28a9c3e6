"""Tests for link detection and horseshoe certificates."""

import math

import numpy as np
import pytest

from src.core.errors import PreconditionError
from src.horseshoe import (
    MAX_DEPTH,
    Link,
    ball_cantor_witness,
    build_certificate,
    certificate_entropy,
    detect_return_separation,
    periodic_anchors,
    scan_links,
    word_pseudo_orbit,
)
from src.spaces import build_system


@pytest.fixture(scope="module")
def cat():
    return build_system("cat")


@pytest.fixture
def fixed_link(cat):
    """A hand-made link record anchored at the fixed point of the cat map."""
    return Link(
        system=cat,
        x=np.zeros(2),
        y=np.array([1e-4, 0.0]),
        n=3,
        delta=5e-4,
        gamma=0.03,
        epsilon=0.02,
        k_star=2,
        closure=0.0,
        distances=np.zeros(4),
    )


@pytest.fixture(scope="module")
def sphere_scan():
    sphere = build_system("sphere")
    return scan_links(
        sphere, periodic_anchors(sphere, 12), 0.02, 5e-4, 12, stop_at_first=True
    )


class TestReturnSeparation:
    """Tests for close-separate-close windows."""

    def test_windows(self):
        """Test that both qualifying windows are found."""
        d = [1e-4, 0.01, 0.05, 0.01, 2e-4, 0.03, 1e-4]
        windows = detect_return_separation(d, delta=1e-3, epsilon=0.02)

        assert [(w.start, w.end, w.peak_index) for w in windows] == [(0, 4, 2), (4, 6, 5)]

    def test_gamma_cap(self):
        """Test that peaks above gamma_max are dropped."""
        d = [1e-4, 0.01, 0.05, 0.01, 2e-4, 0.03, 1e-4]
        windows = detect_return_separation(d, delta=1e-3, epsilon=0.02, gamma_max=0.04)

        assert [w.peak for w in windows] == [0.03]


class TestScanPreconditions:
    """Tests for link scan arguments."""

    def test_delta_below_epsilon(self, cat):
        """Test that delta must be below epsilon."""
        with pytest.raises(PreconditionError, match="below epsilon"):
            scan_links(cat, [np.zeros(2)], 0.01, 0.01, 4)

    def test_n_max_positive(self, cat):
        """Test that n_max must be at least 1."""
        with pytest.raises(PreconditionError, match="n_max"):
            scan_links(cat, [np.zeros(2)], 0.02, 0.001, 0)

    def test_anchors_need_exact_periodic_points(self):
        """Test that symbolic systems have no exact anchors."""
        with pytest.raises(PreconditionError, match="No exact periodic points"):
            periodic_anchors(build_system("shift2"), 4)


class TestCertificateBasics:
    """Tests for certificate preconditions."""

    def test_depth_zero_is_the_anchor(self, cat, fixed_link):
        """Test that depth 0 certifies only the anchor."""
        cert = build_certificate(cat, fixed_link, 0)

        assert cert.words == [""]
        assert cert.verified
        assert cert.entropy_bound == pytest.approx(math.log(2) / 3)
        np.testing.assert_array_equal(cert.points, [[0.0, 0.0]])

    def test_depth_bound(self, cat, fixed_link):
        """Test that depth above the maximum is rejected."""
        with pytest.raises(PreconditionError, match="Depth"):
            build_certificate(cat, fixed_link, MAX_DEPTH + 1)

    def test_entropy_needs_orbits(self, cat, fixed_link):
        """Test that a depth 0 certificate has nothing to count."""
        with pytest.raises(PreconditionError, match="no orbits"):
            certificate_entropy(build_certificate(cat, fixed_link, 0))

    def test_words_must_be_binary(self, fixed_link):
        """Test the word alphabet."""
        with pytest.raises(PreconditionError, match="binary"):
            word_pseudo_orbit(fixed_link, "012")

    def test_symbolic_systems_rejected(self, fixed_link):
        """Test that certificates need torus lifts."""
        with pytest.raises(PreconditionError, match="torus lifts"):
            build_certificate(build_system("shift2"), fixed_link, 2)

    def test_witness_without_depth_keeps_ball(self, cat):
        """Test that depth 0 leaves the ball unchanged."""
        result = ball_cantor_witness(cat, np.array([0.3, 0.4]), 0.05, 0, horizon=30)

        assert not result.upgraded
        assert result.certificate is None
        assert result.ball.classification.label == "trivial"

    def test_far_certificate_is_dropped(self, cat, fixed_link):
        """Test that a certificate anchored beyond c leaves the center's ball alone."""
        cert = build_certificate(cat, fixed_link, 0)
        center = np.array([0.5, 0.5])
        result = ball_cantor_witness(cat, center, 0.05, 2, horizon=30, certificate=cert)

        assert result.certificate is None
        assert not result.upgraded
        np.testing.assert_array_equal(result.ball.center, center)
        assert result.summary()["ball_center"] == {"x": 0.5, "y": 0.5}

    def test_near_certificate_is_kept(self, cat, fixed_link):
        """Test that a certificate anchored within c of the center is used."""
        cert = build_certificate(cat, fixed_link, 0)
        result = ball_cantor_witness(
            cat, np.array([0.01, 0.0]), 0.05, 2, horizon=30, certificate=cert
        )

        assert result.certificate is cert


@pytest.mark.slow
class TestSphereHorseshoe:
    """Tests for horseshoes of the sphere quotient."""

    def test_links_found(self, sphere_scan):
        """Test that reflected partners give valid links."""
        assert sphere_scan.links
        for link in sphere_scan.links[:5]:
            assert link.check()
            assert link.delta < link.epsilon < link.gamma

    def test_certificate_verifies(self, sphere_scan):
        """Test that a depth 3 certificate reads back every word."""
        link = sphere_scan.links[0]
        cert = build_certificate(link.system, link, 3)

        assert cert.verified
        assert cert.readout_ok
        assert len(cert.rows()) == 8
        assert cert.separation > link.epsilon - 2 * cert.shadow_epsilon

    def test_certificate_entropy_is_positive(self, sphere_scan):
        """Test that word counts grow with the number of blocks."""
        link = sphere_scan.links[0]
        est = certificate_entropy(build_certificate(link.system, link, 3))

        assert est.counts[0] >= 2
        assert est.counts == sorted(est.counts)
        assert est.counts[-1] > est.counts[0]

    def test_witness_anchor_near_center(self):
        """Test that a scanned witness is anchored within c of the center."""
        sphere = build_system("sphere")
        center = np.array([0.1, 0.37])
        result = ball_cantor_witness(sphere, center, 0.2, 2, horizon=30)

        if result.certificate is not None:
            assert sphere.dist(center, result.certificate.link.x) <= 0.2
            assert result.anchor_distance <= 0.2
        else:
            assert not result.upgraded
            np.testing.assert_array_equal(result.ball.center, sphere.canonical(center))
