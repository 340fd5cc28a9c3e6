"""
Horseshoe certificates.

Every binary word w of length m selects a pseudo-orbit made of the x-block
(letter 0) and the y-block (letter 1) of a link. The word pseudo-orbit is
closed periodically and shadowed; the shadow points form the certificate.
A point is read back to its word by comparing its orbit, at the designated
iterate of each block, with the x and y orbits.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.balls.classify import Classification, LevelMembers, Structure, classify_structure
from src.balls.sets import BallReport, dynamical_ball
from src.core.errors import IndistinguishableWordsError, PreconditionError, ShadowingError
from src.entropy.estimate import EntropyEstimate, entropy_estimate
from src.entropy.separated import bowen_distances
from src.horseshoe.links import Link, periodic_anchors, scan_links
from src.orbits.pseudo import PseudoOrbit, concatenate_segments, point_fields
from src.orbits.shadow import shadow
from src.spaces.base import DynamicalSystem
from src.spaces.samples import StoredOrbitSample
from src.spaces.torus import TorusSystem

logger = logging.getLogger(__name__)

MAX_DEPTH = 12
WITNESS_DEPTHS = (2, 4, 6)
# Pairwise diameters are measured directly up to this many points
DIAMETER_POINTS = 256


@dataclass
class HorseshoeCertificate:
    """
    Shadowed word pseudo-orbits of a link.

    Attributes:
        link: The link
        depth: Word length m
        period: Block length N
        words: All 2^m words, in binary order
        sample: Stored periodic shadow orbits, one row per word
        shadow_epsilon: Largest shadow error over all words
        separation: Min over word pairs of the distance at the designated
            iterate of their first differing block
        tube_radius: Max distance of any shadow orbit from the anchor orbit
        diameter_bound: 2 x tube_radius
        diameter_measured: Max pairwise distance over the window (small certificates)
        entropy_bound: log(2) / N
        readout_ok: Every point reads back to its own word
        ambiguous: Block readouts within the margin
        verified: Stored orbits re-checked against their pseudo-orbits
    """

    link: Link
    depth: int
    period: int
    words: list[str]
    sample: StoredOrbitSample | None
    shadow_epsilon: float
    separation: float
    tube_radius: float
    diameter_bound: float
    diameter_measured: float | None
    entropy_bound: float
    readout_ok: bool = True
    ambiguous: int = 0
    verified: bool = False
    details: dict[str, float] = field(default_factory=dict)

    @property
    def points(self) -> np.ndarray:
        if self.sample is None:
            return np.atleast_2d(np.asarray(self.link.x, dtype=float))
        return self.sample.points_at(0)

    def point_map(self) -> dict[str, list[float]]:
        return {w: p.tolist() for w, p in zip(self.words, self.points, strict=True)}

    def summary(self) -> dict[str, Any]:
        return {
            "link": self.link.summary(),
            "depth": self.depth,
            "period": self.period,
            "points": len(self.words),
            "shadow_epsilon": self.shadow_epsilon,
            "separation": self.separation,
            "separation_floor": self.link.epsilon - 2.0 * self.shadow_epsilon,
            "tube_radius": self.tube_radius,
            "diameter_bound": self.diameter_bound,
            "diameter_measured": self.diameter_measured,
            "entropy_bound": self.entropy_bound,
            "readout_ok": self.readout_ok,
            "ambiguous": self.ambiguous,
            "verified": self.verified,
        }

    def rows(self) -> list[dict[str, Any]]:
        return [
            {"word": w, "x": float(p[0]), "y": float(p[1])}
            for w, p in zip(self.words, self.points, strict=True)
        ]


def word_pseudo_orbit(link: Link, word: str) -> PseudoOrbit:
    """
    Concatenate the x-block (letter 0) and y-block (letter 1) of a link.

    The jump bound is 2·delta: a seam after a y-block lands within
    d(f^n y, f^n x) + d(f^n x, x) of the next x-block.

    Raises:
        PreconditionError: If the word is empty or not binary
        SeamViolationError: If the link does not glue (invalid link)
    """
    if not word or set(word) - {"0", "1"}:
        raise PreconditionError(f"Word must be a non-empty binary string, got {word!r}")
    system = link.system
    bound = 2.0 * link.delta
    blocks = {
        "0": PseudoOrbit(system, system.orbit(link.x, link.n), bound),
        "1": PseudoOrbit(system, system.orbit(link.y, link.n), bound),
    }
    return concatenate_segments([blocks[letter] for letter in word], bound)


def readout(
    system: DynamicalSystem,
    orbit: Any,
    link: Link,
    blocks: int,
    margin: float,
) -> tuple[str, int]:
    """
    Recover a word from a shadow orbit.

    Returns:
        (word, number of blocks whose two distances differ by at most margin)
    """
    fx = system.iterate(link.x, link.k_star)
    fy = system.iterate(link.y, link.k_star)
    letters, ambiguous = [], 0
    for b in range(blocks):
        z = system.unstack(system.take(orbit, [b * link.n + link.k_star]))[0]
        d0, d1 = system.dist(z, fx), system.dist(z, fy)
        letters.append("0" if d0 < d1 else "1")
        if abs(d0 - d1) <= margin:
            ambiguous += 1
    return "".join(letters), ambiguous


def _stored_lifts(result: Any, length: int) -> np.ndarray:
    lifts = np.asarray(result.lifts, dtype=float)
    return lifts if len(lifts) == 2 * length else np.vstack([lifts, lifts])


def _separation(sample: StoredOrbitSample, link: Link, depth: int) -> float:
    system = sample.system
    size = len(sample)
    sep = math.inf
    for b in range(depth):
        batch = sample.points_at(b * link.n + link.k_star)
        group = 2 ** (depth - b)
        half = group // 2
        for g in range(0, size, group):
            left = system.take(batch, np.arange(g, g + half))
            right = system.take(batch, np.arange(g + half, g + group))
            sep = min(sep, float(np.min(system.cross(left, right))))
    return sep


def build_certificate(system: DynamicalSystem, link: Link, depth: int) -> HorseshoeCertificate:
    """
    Shadow all 2^m word pseudo-orbits of a link and certify the result.

    Args:
        system: Torus or sphere system the link lives in
        link: A valid link
        depth: Word length m (0 <= m <= 12)

    Returns:
        HorseshoeCertificate

    Raises:
        PreconditionError: If depth is out of range or the system has no torus lifts
        IndistinguishableWordsError: If shadow_epsilon >= (epsilon - epsilon/4) / 2
        ShadowingError: If a word pseudo-orbit does not close periodically
    """
    if not 0 <= depth <= MAX_DEPTH:
        raise PreconditionError(f"Depth must be in [0, {MAX_DEPTH}], got {depth}")
    if not isinstance(system, TorusSystem):
        raise PreconditionError(f"Certificates need torus lifts, got {system.name}")
    entropy_bound = math.log(2.0) / link.n
    if depth == 0:
        return HorseshoeCertificate(
            link=link, depth=0, period=link.n, words=[""], sample=None, shadow_epsilon=0.0,
            separation=math.inf, tube_radius=0.0, diameter_bound=0.0, diameter_measured=0.0,
            entropy_bound=entropy_bound, verified=True,
        )

    margin = link.epsilon / 4.0
    limit = (link.epsilon - margin) / 2.0
    length = link.n * depth
    words = ["".join(bits) for bits in itertools.product("01", repeat=depth)]
    lifts, shadow_eps, iterate_err = [], 0.0, 0.0
    for word in words:
        result = shadow(word_pseudo_orbit(link, word))
        if not result.periodic:
            raise ShadowingError(f"Word {word} did not close periodically")
        shadow_eps = max(shadow_eps, result.epsilon_achieved)
        iterate_err = max(iterate_err, result.iterate_error)
        if shadow_eps >= limit:
            raise IndistinguishableWordsError(
                f"Shadow epsilon {shadow_eps:.3e} >= {limit:.3e}; words cannot be read back"
            )
        lifts.append(_stored_lifts(result, length))
    sample = StoredOrbitSample(system, np.stack(lifts), resolution=shadow_eps)

    readout_ok, ambiguous = True, 0
    for i, word in enumerate(words):
        orbit = sample.subset([i])
        got, amb = readout(system, _orbit_batch(orbit, length), link, depth, margin)
        ambiguous += amb
        if got != word:
            readout_ok = False
            logger.warning(f"Word {word} read back as {got}")

    x_orbit = system.stack(system.orbit(link.x, link.n))
    tube = 0.0
    for k in range(length):
        tube = max(tube, float(np.max(system.dist_to(sample.points_at(k), x_orbit[k % link.n]))))
    measured = None
    if len(words) <= DIAMETER_POINTS:
        measured = float(np.max(bowen_distances(sample, length)))

    cert = HorseshoeCertificate(
        link=link,
        depth=depth,
        period=link.n,
        words=words,
        sample=sample,
        shadow_epsilon=shadow_eps,
        separation=_separation(sample, link, depth),
        tube_radius=tube,
        diameter_bound=2.0 * tube,
        diameter_measured=measured,
        entropy_bound=entropy_bound,
        readout_ok=readout_ok,
        ambiguous=ambiguous,
        details={"iterate_error": iterate_err},
    )
    cert.verified = verify_certificate(cert)
    logger.info(
        f"Certificate depth {depth} on {system.name}: {len(words)} points, "
        f"shadow eps {shadow_eps:.2e}, separation {cert.separation:.4f}, tube {tube:.4f}"
    )
    return cert


def _orbit_batch(sample: Any, length: int) -> np.ndarray:
    return np.vstack([sample.points_at(k) for k in range(length)])


def verify_certificate(cert: HorseshoeCertificate) -> bool:
    """
    Re-check a certificate from its stored orbits.

    Each orbit must track its word pseudo-orbit within shadow_epsilon, be a
    genuine orbit to 1e-9, keep distinct words apart by more than
    epsilon - 2·shadow_epsilon, and stay inside 2·gamma + 2·shadow_epsilon.
    """
    if cert.sample is None:
        return True
    system = cert.sample.system
    link = cert.link
    length = link.n * cert.depth
    tol = system.float_tol
    for i, word in enumerate(cert.words):
        po = word_pseudo_orbit(link, word)
        orbit = _orbit_batch(cert.sample.subset([i]), length)
        if np.max(system.dist_rows(orbit, po.batch())) > cert.shadow_epsilon + tol:
            return False
        images = system.apply_batch(orbit[:-1])
        if np.max(system.dist_rows(images, orbit[1:])) > 1e-9:
            return False
    if cert.separation <= link.epsilon - 2.0 * cert.shadow_epsilon:
        return False
    return cert.diameter_bound <= 2.0 * link.gamma + 2.0 * cert.shadow_epsilon + tol


def certificate_entropy(cert: HorseshoeCertificate, delta: float | None = None) -> EntropyEstimate:
    """
    Greedy entropy slope of the certificate at n = N, 2N, ..., mN.

    Words sharing their first j blocks stay within 2·shadow_epsilon over jN
    steps and all others separate, so the counts are 2^j at delta = epsilon/2.
    """
    if cert.sample is None or cert.depth < 1:
        raise PreconditionError("Certificate has no orbits to count")
    delta = cert.link.epsilon / 2.0 if delta is None else delta
    n_range = [cert.period * j for j in range(1, cert.depth + 1)]
    return entropy_estimate(cert.sample.system, cert.sample, delta, n_range, saturation=False)


@dataclass
class WitnessResult:
    """
    A dynamical ball augmented with horseshoe witnesses.

    Attributes:
        ball: The ball at the link anchor (witnesses injected when certified)
        certificate: The certificate used, if any
        upgraded: Whether the classification was replaced by the witness one
        grid_classification: Classification from the sample clouds alone
        anchor_distance: Distance from the requested center to the anchor
    """

    ball: BallReport
    certificate: HorseshoeCertificate | None
    upgraded: bool
    grid_classification: Classification
    anchor_distance: float = 0.0

    def summary(self) -> dict[str, Any]:
        return {
            "classification": self.ball.classification.label,
            "grid_classification": self.grid_classification.label,
            "upgraded": self.upgraded,
            "witnesses": len(self.ball.witnesses),
            "anchor_distance": self.anchor_distance,
            "ball_center": point_fields(self.ball.center),
        }


def witness_classification(cert: HorseshoeCertificate) -> Classification:
    """Classify sub-certificates of depths 2, 4, 6 under the Bowen metric."""
    sample = cert.sample
    depths = [j for j in WITNESS_DEPTHS if j <= cert.depth]
    levels = []
    for j in depths:
        indices = np.arange(0, len(sample), 2 ** (cert.depth - j))
        distances = bowen_distances(sample.subset(indices), j * cert.period)
        levels.append(LevelMembers(resolution=cert.shadow_epsilon, distances=distances))
    return classify_structure(levels, sep_delta=cert.link.epsilon / 2.0)


def ball_cantor_witness(
    system: DynamicalSystem,
    center: Any,
    c: float,
    depth: int,
    horizon: int | None = None,
    certificate: HorseshoeCertificate | None = None,
    epsilon: float | None = None,
    delta: float = 5e-4,
    n_max: int = 12,
) -> WitnessResult:
    """
    Inject a horseshoe into a dynamical ball of radius c.

    Without a certificate, links with 2·gamma <= c are scanned from the
    periodic anchors within c of the center and the one nearest the center
    is certified. The ball is taken at the link anchor; certificate points
    whose orbits stay within c of the anchor orbit become witnesses, and the
    classification is replaced by the witness classification when that is
    cantor-like. A certificate anchored farther than c from the center
    leaves the center's own ball unchanged.

    Returns:
        WitnessResult (the center's ball unchanged when no nearby link exists)
    """
    if not 0 <= depth <= MAX_DEPTH:
        raise PreconditionError(f"Depth must be in [0, {MAX_DEPTH}], got {depth}")
    epsilon = c / 5.0 if epsilon is None else epsilon

    if certificate is None and depth > 0 and isinstance(system, TorusSystem):
        anchors = periodic_anchors(system, n_max)
        anchors = anchors[system.dist_to(anchors, center) <= c]
        if len(anchors):
            scan = scan_links(
                system, anchors, epsilon, delta, n_max, gamma_max=c / 2.0, stop_at_first=True,
            )
            if scan.links:
                found = system.stack([lk.x for lk in scan.links])
                link = scan.links[int(np.argmin(system.dist_to(found, center)))]
                certificate = build_certificate(system, link, depth)
        else:
            logger.info(f"No periodic anchor within {c} of the center on {system.name}")

    if certificate is not None and system.dist(center, certificate.link.x) > c:
        logger.warning(
            f"Certificate anchor lies {system.dist(center, certificate.link.x):.4f} from the "
            f"center, beyond c = {c}"
        )
        certificate = None

    if certificate is None or certificate.sample is None:
        ball = dynamical_ball(system, center, c, horizon)
        return WitnessResult(ball, certificate, False, ball.classification)

    anchor = certificate.link.x
    ball = dynamical_ball(system, anchor, c, horizon)
    grid = ball.classification
    result = WitnessResult(ball, certificate, False, grid, system.dist(center, anchor))
    if certificate.tube_radius > c:
        logger.warning(f"Certificate tube {certificate.tube_radius:.4f} exceeds c = {c}")
        return result

    ball.witnesses = system.unstack(certificate.points)
    ball.witness_sample = certificate.sample
    witnessed = witness_classification(certificate)
    if witnessed.structure == Structure.CANTOR:
        witnessed.reason = f"{len(ball.witnesses)} certified witnesses; {witnessed.reason}"
        ball.classification = witnessed
        result.upgraded = True
    return result
