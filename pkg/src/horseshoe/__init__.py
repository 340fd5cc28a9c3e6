"""
Horseshoes from links.

- links: link detection, sphere reflection partners, return/separation windows
- certificate: word pseudo-orbits, shadowed certificates, ball witnesses
"""

from src.horseshoe.certificate import (
    MAX_DEPTH,
    HorseshoeCertificate,
    WitnessResult,
    ball_cantor_witness,
    build_certificate,
    certificate_entropy,
    readout,
    verify_certificate,
    witness_classification,
    word_pseudo_orbit,
)
from src.horseshoe.links import (
    Link,
    LinkScan,
    ReturnWindow,
    delta_cloud,
    detect_return_separation,
    find_link,
    link_distances,
    orbit_distances,
    periodic_anchors,
    reflection_partners,
    scan_links,
)

__all__ = [
    "MAX_DEPTH",
    "HorseshoeCertificate",
    "Link",
    "LinkScan",
    "ReturnWindow",
    "WitnessResult",
    "ball_cantor_witness",
    "build_certificate",
    "certificate_entropy",
    "delta_cloud",
    "detect_return_separation",
    "find_link",
    "link_distances",
    "orbit_distances",
    "periodic_anchors",
    "readout",
    "reflection_partners",
    "scan_links",
    "verify_certificate",
    "witness_classification",
    "word_pseudo_orbit",
]
