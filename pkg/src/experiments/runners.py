"""
Named experiments.

Each runner checks one group of claims and returns a Report whose clauses
cite the acceptance criterion they trace to. Runners take the run
configuration and an ExperimentService supplying systems and memoized
intermediates; unset configuration fields fall back to the defaults below.
"""

import logging
import math
from typing import TYPE_CHECKING, Any

import numpy as np

from src.balls import (
    Structure,
    asymptotic_ball,
    ball_from_profiles,
    ball_profile,
    dynamical_ball,
    expansive_points_scan,
    expansivity_radius,
    radius_ladder,
    stable_inclusion_check,
)
from src.chainrec import (
    CLASS_DELTAS,
    DEFAULT_GRID,
    chain_graph,
    chain_path_shadowing,
    class_count_series,
    default_chain_cloud,
    nonwandering_estimate,
    transitivity_check,
)
from src.core.config import ExperimentConfig
from src.core.errors import ConfigError, IndistinguishableWordsError, ShadowingError
from src.core.models import ClauseResult, Report, Verdict
from src.core.output import jsonable
from src.entropy import entropy_estimate, entropy_expansivity_check
from src.horseshoe import (
    HorseshoeCertificate,
    LinkScan,
    WitnessResult,
    ball_cantor_witness,
    build_certificate,
    certificate_entropy,
    periodic_anchors,
    scan_links,
    verify_certificate,
)
from src.orbits import perturbed_pseudo_orbit, shadow, tightening_slope, verify_pseudo_orbit
from src.orbits.pseudo import point_fields
from src.spaces import (
    ANCHOR,
    CantorSystem,
    DynamicalSystem,
    Example1System,
    ShiftSystem,
    SphereSystem,
    TorusSystem,
    check_metric_axioms,
    is_ideal,
)

if TYPE_CHECKING:
    from src.core.service import ExperimentService

logger = logging.getLogger(__name__)

BALL_HORIZON = 60

THEOREM_A_RADIUS = 0.05
THEOREM_A_SAMPLES = 50
TRANSITIVITY_HORIZON = 100_000
GENERIC_TRANSITIVITY = (5_000, 10)
CONTROL_RADIUS = 0.1
WITNESS_DEPTH = 6

THEOREM_B_RADIUS = 0.2
THEOREM_B_SAMPLES = 5
THEOREM_B_NS = (2, 4, 6, 8, 10, 12)

HORSESHOE_EPSILON = 0.02
HORSESHOE_DELTA = 5e-4
HORSESHOE_N_MAX = 12
HORSESHOE_DEPTH = 8

SHADOW_DELTA = 1e-4
SHADOW_LENGTH = 2000
SHADOW_ORBITS = 100
SHADOW_SLACK = 1e-6
ITERATE_TOL = 1e-9
TIGHTENING_DELTAS = (1e-2, 1e-3, 1e-4, 1e-5)

ENTROPY_DELTA = 0.05
ENTROPY_N = 16
ENTROPY_GRID_STEP = 0.02
ENTROPY_TOLERANCE = 0.15

ASYMPTOTIC_RADIUS = 0.05
ASYMPTOTIC_SAMPLES = 10
ASYMPTOTIC_SYSTEMS = ("cat", "example1")

EXAMPLE1_TRIPLES = 100_000
CHAIN_PATH_LENGTH = 200


# Helpers


def _service(service: "ExperimentService | None") -> "ExperimentService":
    if service is None:
        from src.core.service import ExperimentService

        return ExperimentService()
    return service


def new_report(
    experiment: str, config: ExperimentConfig, system: DynamicalSystem | None = None
) -> Report:
    return Report(
        experiment=config.experiment or experiment,
        system=system.handle if system is not None else None,
        config=config.echo(),
    )


def clause(
    criterion: int,
    name: str,
    outcome: bool | Verdict,
    measured: dict[str, Any] | None = None,
    detail: str | None = None,
) -> ClauseResult:
    verdict = outcome if isinstance(outcome, Verdict) else Verdict.of(bool(outcome))
    return ClauseResult(
        criterion=criterion,
        name=name,
        verdict=verdict,
        measured=jsonable(measured or {}),
        detail=detail,
    )


def sample_points(system: DynamicalSystem, n: int, seed: int) -> list[Any]:
    rng = np.random.default_rng(seed)
    return [system.random_point(rng) for _ in range(n)]


def centers_for(system: DynamicalSystem, n: int, seed: int) -> list[Any]:
    """Seeded ball centers; Example 1 always starts with p0."""
    if isinstance(system, Example1System):
        return [ANCHOR.copy()] + sample_points(system, n - 1, seed)
    return sample_points(system, n, seed)


def shadow_constant(system: DynamicalSystem) -> float | None:
    """C with epsilon <= C·delta for constructive shadows, None off the torus."""
    if isinstance(system, Example1System):
        return system.base.splitting.shadow_constant
    if isinstance(system, TorusSystem):
        return system.splitting.shadow_constant
    return None


def ideal_gap(points: list[Any]) -> float:
    """Largest 1/k over ideal points p_k among the points, 0 without any."""
    return max((1.0 / p.index for p in points if is_ideal(p)), default=0.0)


def system_key(system: DynamicalSystem) -> tuple:
    return (system.name, repr(sorted(system.params().items())))


def cached_link_scan(
    service: "ExperimentService",
    system: DynamicalSystem,
    epsilon: float,
    delta: float,
    n_max: int,
) -> LinkScan:
    key = ("links", *system_key(system), epsilon, delta, n_max)
    return service.memo(
        key, lambda: scan_links(system, periodic_anchors(system, n_max), epsilon, delta, n_max)
    )


def cached_certificate(
    service: "ExperimentService", system: DynamicalSystem, scan_key: tuple, link: Any, depth: int
) -> HorseshoeCertificate:
    key = ("certificate", *system_key(system), *scan_key, depth)
    return service.memo(key, lambda: build_certificate(system, link, depth))


def cached_witness(
    service: "ExperimentService",
    system: DynamicalSystem,
    center: Any,
    c: float,
    depth: int,
    horizon: int,
) -> WitnessResult:
    key = ("witness", *system_key(system), repr(point_fields(center)), c, depth, horizon)
    return service.memo(key, lambda: ball_cantor_witness(system, center, c, depth, horizon))


def transitivity_params(system: DynamicalSystem) -> tuple[int, int]:
    """(horizon, grid) of the transitivity surrogate for a system."""
    if isinstance(system, TorusSystem):
        return TRANSITIVITY_HORIZON, DEFAULT_GRID
    if isinstance(system, ShiftSystem):
        return system.half_window, 2
    return GENERIC_TRANSITIVITY


# Criterion 1


def run_shadowing(config: ExperimentConfig, service: "ExperimentService | None" = None) -> Report:
    """
    Shadow seeded perturbed pseudo-orbits and compare with C·delta.

    Defaults: cat map, 100 pseudo-orbits of length 2000 at delta = 1e-4.
    """
    service = _service(service)
    system = service.system(config, "cat")
    delta = config.get("delta", SHADOW_DELTA)
    length = config.get("horizon", SHADOW_LENGTH)
    n_orbits = config.get("samples", SHADOW_ORBITS)
    report = new_report("shadowing", config, system)
    constant = shadow_constant(system)

    starts = sample_points(system, n_orbits, config.seed)
    rows = []
    all_valid, within, worst_iterate, worst_ratio = True, True, 0.0, 0.0
    for i, x0 in enumerate(starts):
        po = perturbed_pseudo_orbit(system, x0, delta, length, seed=config.seed + i)
        check = verify_pseudo_orbit(po)
        result = shadow(po)
        all_valid &= check.valid
        ratio = result.epsilon_achieved / delta
        worst_ratio = max(worst_ratio, ratio)
        worst_iterate = max(worst_iterate, result.iterate_error)
        bound = None
        if constant is not None:
            bound = (constant * delta + ideal_gap(po.points)) * (1 + SHADOW_SLACK)
            within &= result.epsilon_achieved <= bound
        rows.append(
            {
                "orbit": i,
                "max_jump": check.max_jump,
                "epsilon": result.epsilon_achieved,
                "ratio": ratio,
                "bound": bound if bound is not None else "",
                "iterate_error": result.iterate_error,
                "periodic": result.periodic,
            }
        )
    report.series["orbits"] = rows

    report.add_clause(
        clause(1, "pseudo-orbits-valid", all_valid, {"orbits": n_orbits, "delta": delta})
    )
    measured = {"worst_ratio": worst_ratio, "shadow_constant": constant, "delta": delta}
    if constant is None:
        report.add_clause(
            clause(1, "shadow-within-bound", Verdict.INCONCLUSIVE, measured,
                   f"No shadow constant for {system.name}")
        )
    else:
        report.add_clause(clause(1, "shadow-within-bound", within, measured))
    report.add_clause(
        clause(1, "shadow-orbits-genuine", worst_iterate <= ITERATE_TOL,
               {"worst_iterate_error": worst_iterate, "tolerance": ITERATE_TOL})
    )

    tightening = tightening_slope(
        system, starts[0], list(TIGHTENING_DELTAS), min(length, 500), config.seed
    )
    report.series["tightening"] = tightening.rows()
    report.results["tightening_max_ratio"] = float(tightening.max_ratio)
    report.results["worst_ratio"] = float(worst_ratio)
    return report


# Criterion 2


def run_entropy(config: ExperimentConfig, service: "ExperimentService | None" = None) -> Report:
    """
    Entropy of the whole system against log|lambda_u|.

    The cat map is measured with the lattice estimator; every system also
    gets a greedy estimate on a grid cloud, which saturates and is reported
    as measured.
    """
    service = _service(service)
    system = service.system(config, "cat")
    delta = config.get("delta", ENTROPY_DELTA)
    ns = list(range(1, config.get("horizon", ENTROPY_N) + 1))
    step = config.get("grid_step", ENTROPY_GRID_STEP)
    report = new_report("entropy", config, system)

    oracle = None
    if isinstance(system, Example1System):
        oracle = system.base.splitting.entropy
    elif isinstance(system, TorusSystem):
        oracle = system.splitting.entropy
    report.results["oracle"] = jsonable(oracle)

    greedy = entropy_estimate(system, default_chain_cloud(system, delta, step), delta, ns)
    report.results["greedy"] = jsonable(greedy.summary())
    report.series["greedy"] = greedy.rows()

    if isinstance(system, TorusSystem) and not isinstance(system, SphereSystem):
        lattice = entropy_estimate(system, None, delta, ns, method="lattice")
        report.results["lattice"] = jsonable(lattice.summary())
        report.series["lattice"] = lattice.rows()
        error = abs(lattice.slope - oracle) / oracle
        report.add_clause(
            clause(2, "entropy-within-tolerance", error <= ENTROPY_TOLERANCE,
                   {"slope": lattice.slope, "oracle": oracle, "relative_error": error})
        )
    else:
        report.add_clause(
            clause(2, "entropy-within-tolerance", Verdict.INCONCLUSIVE,
                   {"slope": greedy.slope, "oracle": oracle},
                   "Only the saturating greedy estimate is available for this system")
        )
    return report


# Criterion 4


def run_theorem_a(config: ExperimentConfig, service: "ExperimentService | None" = None) -> Report:
    """
    Dynamical balls at transitive points of a transitive system with shadowing.

    Sample points must pass the transitivity surrogate; their balls at
    epsilon must classify trivial and their local stable members must
    converge. On the cat map a sphere control run must show a cantor-like
    ball; run on the sphere itself the triviality clause fails.
    """
    service = _service(service)
    system = service.system(config, "cat")
    c = config.get("epsilon", THEOREM_A_RADIUS)
    horizon = config.get("horizon", BALL_HORIZON)
    n = config.get("samples", THEOREM_A_SAMPLES)
    depth = config.get("depth", WITNESS_DEPTH)
    report = new_report("theorem-a", config, system)

    if c > system.diameter / 2.0:
        report.add_clause(
            clause(4, "radius-not-vacuous", Verdict.INCONCLUSIVE,
                   {"epsilon": c, "diameter": system.diameter},
                   "epsilon exceeds half the diameter; the ball claims are vacuous")
        )
        return report

    points = sample_points(system, n, config.seed)
    t_horizon, t_grid = transitivity_params(system)
    gaps, transitive = [], []
    for x in points:
        t = transitivity_check(system, x, t_horizon, t_grid)
        gaps.append({"forward": t.forward_density_gap, "backward": t.backward_density_gap})
        if t.transitive:
            transitive.append(x)
    report.results["transitivity"] = jsonable({"horizon": t_horizon, "grid": t_grid, "gaps": gaps})
    report.add_clause(
        clause(4, "sample-points-transitive",
               Verdict.PASS if len(transitive) == n else Verdict.INCONCLUSIVE,
               {"transitive": len(transitive), "sampled": n})
    )
    if not transitive:
        return report

    labels, inclusion_ok, worst = [], True, 0.0
    for x in transitive:
        ball = dynamical_ball(system, x, c, horizon)
        labels.append(ball.classification.label)
        inclusion = stable_inclusion_check(system, x, c, horizon)
        inclusion_ok &= inclusion.ok
        worst = max(worst, inclusion.worst_distance)
    if isinstance(system, SphereSystem):
        witness = cached_witness(service, system, transitive[0], c, depth, horizon)
        labels[0] = witness.ball.classification.label
        report.results["witness"] = jsonable(witness.summary())

    counts = {label: labels.count(label) for label in sorted(set(labels))}
    report.results["classifications"] = counts
    report.series["balls"] = [
        {"index": i, **point_fields(x), "classification": label}
        for i, (x, label) in enumerate(zip(transitive, labels, strict=True))
    ]
    report.add_clause(
        clause(4, "all-balls-trivial", all(label == Structure.TRIVIAL.value for label in labels),
               {"epsilon": c, "horizon": horizon, "classifications": counts})
    )
    report.add_clause(
        clause(4, "stable-inclusion", inclusion_ok,
               {"threshold": c / 100.0, "worst_distance_at_horizon": worst})
    )

    if isinstance(system, TorusSystem) and not isinstance(system, SphereSystem):
        sphere = service.build("sphere", config.matrix)
        center = sphere.canonical(np.asarray(transitive[0], dtype=float))
        witness = cached_witness(service, sphere, center, CONTROL_RADIUS, depth, horizon)
        cantor = witness.ball.classification.structure == Structure.CANTOR
        report.results["sphere_control"] = jsonable(witness.summary())
        report.add_clause(
            clause(4, "sphere-control-cantor", Verdict.PASS if cantor else Verdict.INCONCLUSIVE,
                   {"radius": CONTROL_RADIUS, **witness.summary()},
                   None if cantor else "No certified horseshoe in the control ball")
        )
    return report


# Criteria 6 and 8


def run_theorem_b_cycle(
    config: ExperimentConfig, service: "ExperimentService | None" = None
) -> Report:
    """
    Countable expansivity at c against entropy expansivity at c/2.

    c is detected on the ladder epsilon/8, ..., epsilon as the largest radius
    at which every center's ball is countable or smaller. Cat and Example 1
    pass both; the sphere fails both through a certified horseshoe; the
    identity on the Cantor set has no expansive points yet passes the
    entropy check.
    """
    service = _service(service)
    system = service.system(config, "cat")
    c = config.get("epsilon", THEOREM_B_RADIUS)
    horizon = config.get("horizon", BALL_HORIZON)
    n = config.get("samples", THEOREM_B_SAMPLES)
    depth = config.get("depth", WITNESS_DEPTH)
    report = new_report("theorem-b", config, system)
    centers = centers_for(system, n, config.seed)

    if isinstance(system, SphereSystem):
        countable, h_expansive = _theorem_b_sphere(
            service, system, report, centers[0], c, depth, horizon
        )
    elif isinstance(system, CantorSystem):
        scan = expansive_points_scan(system, centers, [c / 4.0, c / 2.0, c], horizon)
        report.results["expansive_scan"] = jsonable(scan.summary())
        report.series["expansive_points"] = scan.rows()
        countable = bool(scan.expansive.any())
        report.add_clause(
            clause(8, "expansive-points-empty", not countable, scan.summary())
        )
        check = entropy_expansivity_check(
            system, c / 2.0, centers, [c / 4.0], THEOREM_B_NS, horizon
        )
        h_expansive = check.h_expansive
        report.series["entropy_rows"] = check.rows
        report.add_clause(clause(8, "entropy-expansive-at-half-c", h_expansive, check.summary()))
    else:
        detected = expansivity_radius(system, centers, radius_ladder(c), horizon)
        countable = detected.radius is not None
        report.results["expansivity_radius"] = jsonable(detected.summary())
        report.series["expansivity_ladder"] = detected.rows()
        if detected.profile is not None:
            report.results["expansivity"] = jsonable(detected.profile.summary())
        report.add_clause(clause(6, "countably-expansive", countable, detected.summary()))
        c_half = (detected.radius if countable else detected.ladder[0]) / 2.0
        check = entropy_expansivity_check(
            system, c_half, centers, [c_half / 2.0, c_half / 4.0], THEOREM_B_NS, horizon
        )
        h_expansive = check.h_expansive
        report.series["entropy_rows"] = check.rows
        report.add_clause(
            clause(6, "entropy-expansive-at-half-c",
                   h_expansive if countable else Verdict.INCONCLUSIVE,
                   {**check.summary(), "detected_radius": detected.radius},
                   None if countable else "No expansivity radius on the ladder; "
                   "checked at half its smallest radius")
        )

    report.results["equivalence"] = {
        "countably_expansive": bool(countable),
        "h_expansive": bool(h_expansive),
        "consistent": bool(countable) == bool(h_expansive),
    }
    return report


def _theorem_b_sphere(
    service: "ExperimentService",
    system: SphereSystem,
    report: Report,
    center: Any,
    c: float,
    depth: int,
    horizon: int,
) -> tuple[bool, bool]:
    """A witnessed ball at c/2 also lies in the ball at c, so one horseshoe serves both checks."""
    witness = cached_witness(service, system, center, c / 2.0, depth, horizon)
    report.results["witness"] = jsonable(witness.summary())
    cantor = witness.ball.classification.structure == Structure.CANTOR
    report.add_clause(
        clause(6, "countably-expansive", Verdict.of(not cantor) if witness.upgraded
               else Verdict.INCONCLUSIVE, witness.summary())
    )
    cert = witness.certificate
    if not witness.upgraded or cert is None:
        report.add_clause(
            clause(6, "entropy-expansive-at-half-c", Verdict.INCONCLUSIVE,
                   detail="No certified horseshoe near the center")
        )
        return True, True

    ns = [cert.period * j for j in range(1, cert.depth + 1)]
    check = entropy_expansivity_check(
        system, c / 2.0, [witness.ball.center], [cert.link.epsilon / 2.0], ns,
        balls=[witness.ball],
    )
    floor = 0.5 * math.log(2.0) / cert.period
    report.series["entropy_rows"] = check.rows
    report.add_clause(
        clause(6, "entropy-expansive-at-half-c", check.max_slope < floor,
               {**check.summary(), "horseshoe_floor": floor})
    )
    return False, check.max_slope < floor


# Criterion 5


def run_example1(config: ExperimentConfig, service: "ExperimentService | None" = None) -> Report:
    """
    Example 1 suite: metric axioms, ball membership, chain classes, chain shadowing.

    Raises:
        ConfigError: If a system other than example1 is configured
    """
    service = _service(service)
    system = service.system(config, "example1")
    if not isinstance(system, Example1System):
        raise ConfigError(f"The example1 experiment needs the example1 system, got {system.name}")
    horizon = config.get("horizon", BALL_HORIZON)
    report = new_report("example1", config, system)

    axioms = check_metric_axioms(system, config.get("samples", EXAMPLE1_TRIPLES), config.seed)
    report.add_clause(clause(5, "metric-axioms", axioms.ok, axioms.summary()))

    profiles = ball_profile(system, ANCHOR.copy(), horizon)
    largest = int(profiles[-1].sample.ideal_indices.max())
    wide = ball_from_profiles(system, ANCHOR.copy(), 0.1, profiles)
    ideal = sorted(p.index for p in wide.members_gamma if is_ideal(p))
    expected = list(range(10, largest + 1))
    report.results["gamma_ball"] = jsonable(wide.summary())
    report.add_clause(
        clause(5, "gamma-ideal-members", ideal == expected,
               {"radius": 0.1, "members": len(ideal), "smallest": ideal[0] if ideal else None,
                "largest_in_cloud": largest})
    )
    narrow = ball_from_profiles(system, ANCHOR.copy(), 0.05, profiles)
    n_ideal = sum(1 for p in narrow.members_gamma if is_ideal(p))
    report.add_clause(
        clause(5, "finite-expansivity-fails", n_ideal >= 20,
               {"radius": 0.05, "ideal_members": n_ideal})
    )

    rows = class_count_series(system, CLASS_DELTAS)
    counts = [r.singleton_ideal_classes for r in rows]
    oracle = [math.floor(1.0 / r.delta + 1e-9) for r in rows]
    doubling = all(b >= 2 * a - 2 for a, b in zip(counts, counts[1:], strict=False))
    report.series["class_counts"] = [r.as_row() for r in rows]
    report.add_clause(
        clause(5, "singleton-ideal-classes",
               doubling and all(abs(a - b) <= 2 for a, b in zip(counts, oracle, strict=True)),
               {"deltas": list(CLASS_DELTAS), "counts": counts, "oracle": oracle,
                "doubling": doubling})
    )

    delta = CLASS_DELTAS[-1]
    graph = service.memo(
        ("chains", *system_key(system), delta),
        lambda: chain_graph(system, system.chain_cloud(delta), delta),
    )
    omega = nonwandering_estimate(graph)
    report.add_clause(
        clause(5, "nonwandering-covers-cloud", len(omega) == graph.n_nodes, graph.summary())
    )
    paths = chain_path_shadowing(graph, CHAIN_PATH_LENGTH, seed=config.seed)
    report.series["chain_paths"] = paths.paths
    report.add_clause(clause(5, "chain-paths-shadowed", paths.ok, paths.summary()))
    return report


# Criterion 3


def run_horseshoe(config: ExperimentConfig, service: "ExperimentService | None" = None) -> Report:
    """
    Link detection and depth-m certification on the sphere quotient.

    Raises:
        ConfigError: If the system has no torus lifts
    """
    service = _service(service)
    system = service.system(config, "sphere")
    if not isinstance(system, TorusSystem):
        raise ConfigError(
            f"Horseshoe certificates need the cat or sphere system, got {system.name}"
        )
    epsilon = config.get("epsilon", HORSESHOE_EPSILON)
    delta = config.get("delta", HORSESHOE_DELTA)
    n_max = config.get("n_max", HORSESHOE_N_MAX)
    depth = config.get("depth", HORSESHOE_DEPTH)
    report = new_report("horseshoe", config, system)

    scan = cached_link_scan(service, system, epsilon, delta, n_max)
    report.results["link_scan"] = jsonable(scan.summary())
    if not scan.links:
        report.add_clause(clause(3, "link-found", False, scan.summary()))
        return report
    link = scan.links[0]
    report.add_clause(clause(3, "link-found", True, link.summary()))
    report.series["link"] = [{"k": k, "distance": float(d)} for k, d in enumerate(link.distances)]

    try:
        cert = cached_certificate(service, system, (epsilon, delta, n_max), link, depth)
    except (IndistinguishableWordsError, ShadowingError) as e:
        report.add_clause(clause(3, "certificate-built", False, detail=str(e)))
        return report

    report.results["certificate"] = jsonable(cert.summary())
    report.series["certificate"] = cert.rows()
    distinct = len(np.unique(np.round(cert.points, 12), axis=0))
    report.add_clause(
        clause(3, "distinct-points", distinct == 2**depth,
               {"points": distinct, "expected": 2**depth})
    )
    report.add_clause(
        clause(3, "word-readout", cert.readout_ok,
               {"ambiguous": cert.ambiguous, "separation": cert.separation,
                "shadow_epsilon": cert.shadow_epsilon})
    )
    report.add_clause(
        clause(3, "orbit-tube", verify_certificate(cert),
               {"tube_radius": cert.tube_radius, "diameter_bound": cert.diameter_bound,
                "bound": 2.0 * link.gamma + 2.0 * cert.shadow_epsilon})
    )
    if depth >= 1:
        estimate = certificate_entropy(cert)
        floor = 0.5 * math.log(2.0) / cert.period
        report.series["certificate_entropy"] = estimate.rows()
        report.add_clause(
            clause(3, "certificate-entropy", estimate.slope >= floor,
                   {"slope": estimate.slope, "floor": floor, "entropy_bound": cert.entropy_bound})
        )
    return report


# Criterion 7


def run_asymptotic(config: ExperimentConfig, service: "ExperimentService | None" = None) -> Report:
    """
    Asymptotic balls V^s_c ∩ V^u_c at sampled points, for cat and Example 1.

    A configured system restricts the run to that system.
    """
    service = _service(service)
    c = config.get("epsilon", ASYMPTOTIC_RADIUS)
    horizon = config.get("horizon", BALL_HORIZON)
    n = config.get("samples", ASYMPTOTIC_SAMPLES)
    threshold = c / 100.0
    names = [config.system] if config.system else list(ASYMPTOTIC_SYSTEMS)
    report = new_report(
        "asymptotic", config, service.build(names[0], config.matrix) if len(names) == 1 else None
    )

    rows = []
    for name in names:
        system = service.build(name, config.matrix)
        sizes = []
        for i, x in enumerate(centers_for(system, n, config.seed)):
            members = asymptotic_ball(system, x, c, horizon, threshold)
            sizes.append(len(members))
            rows.append({"system": name, "index": i, **point_fields(x), "members": len(members)})
        report.results[name] = {"sizes": sizes}
        report.add_clause(
            clause(7, f"asymptotic-balls-trivial-{name}", all(s == 1 for s in sizes),
                   {"radius": c, "threshold": threshold, "horizon": horizon,
                    "max_size": max(sizes)})
        )
    report.series["asymptotic"] = rows
    return report
