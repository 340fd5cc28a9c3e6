"""
Single-operation subcommands: ball, shadow, horseshoe, entropy, chains.
"""

import logging
from typing import TYPE_CHECKING

from src.balls import Structure, dynamical_ball
from src.chainrec import (
    CLASS_DELTAS,
    DEFAULT_GRID,
    chain_graph,
    chain_path_shadowing,
    class_count_series,
    default_chain_cloud,
    nonwandering_estimate,
    seed_points,
    transitivity_check,
)
from src.core.config import ExperimentConfig
from src.core.models import Report, Verdict
from src.core.output import jsonable
from src.experiments.runners import (
    BALL_HORIZON,
    CHAIN_PATH_LENGTH,
    THEOREM_A_RADIUS,
    TRANSITIVITY_HORIZON,
    WITNESS_DEPTH,
    _service,
    cached_witness,
    centers_for,
    clause,
    new_report,
    run_shadowing,
    system_key,
)
from src.orbits.pseudo import point_fields
from src.spaces import Example1System, SphereSystem, TorusSystem

if TYPE_CHECKING:
    from src.core.service import ExperimentService

logger = logging.getLogger(__name__)

CHAINS_DELTA = 0.05


def run_ball(config: ExperimentConfig, service: "ExperimentService | None" = None) -> Report:
    """
    Compute and classify Gamma_c^N at one seeded center.

    On the sphere the grid classification is upgraded through a certified
    horseshoe when one is found near the center.
    """
    service = _service(service)
    system = service.system(config, "cat")
    c = config.get("epsilon", THEOREM_A_RADIUS)
    horizon = config.get("horizon", BALL_HORIZON)
    report = new_report("ball", config, system)
    center = centers_for(system, 1, config.seed)[0]

    if isinstance(system, SphereSystem):
        witness = cached_witness(
            service, system, center, c, config.get("depth", WITNESS_DEPTH), horizon
        )
        ball = witness.ball
        report.results["witness"] = jsonable(witness.summary())
    else:
        ball = dynamical_ball(system, center, c, horizon)

    report.results["ball"] = jsonable(ball.summary())
    report.series["members"] = ball.rows()
    structure = ball.classification.structure
    report.add_clause(
        clause(
            4,
            "ball-classified",
            Verdict.INCONCLUSIVE if structure == Structure.INCONCLUSIVE else Verdict.PASS,
            {"center": point_fields(center), "radius": c, "horizon": horizon,
             "classification": ball.classification.label},
            ball.classification.reason or None,
        )
    )
    return report


def run_shadow(config: ExperimentConfig, service: "ExperimentService | None" = None) -> Report:
    """Shadow one seeded pseudo-orbit (the shadowing experiment with a single orbit)."""
    if config.samples is None:
        config = config.model_copy(update={"samples": 1})
    return run_shadowing(config, service)


def run_chains(config: ExperimentConfig, service: "ExperimentService | None" = None) -> Report:
    """
    Chain graph, chain classes and nonwandering estimate at one delta.

    Example 1 also reports the singleton class counts over the standard
    deltas; cat and Example 1 shadow random chain paths, and torus systems
    check transitivity of an irrational seed.
    """
    service = _service(service)
    system = service.system(config, "cat")
    delta = config.get("delta", CHAINS_DELTA)
    report = new_report("chains", config, system)

    graph = service.memo(
        ("chains", *system_key(system), delta, config.grid_step),
        lambda: chain_graph(system, default_chain_cloud(system, delta, config.grid_step), delta),
    )
    omega = nonwandering_estimate(graph)
    logger.info(
        f"Chain graph {system.name} delta={delta}: {graph.n_nodes} nodes, "
        f"{len(graph.classes)} recurrent classes, {len(omega)} nonwandering"
    )
    report.results["graph"] = jsonable(graph.summary())
    report.series["classes"] = graph.rows()
    report.add_clause(
        clause(5, "nonwandering-covers-cloud", len(omega) == graph.n_nodes,
               {"nodes": graph.n_nodes, "nonwandering": len(omega),
                "classes": len(graph.classes)})
    )

    if isinstance(system, Example1System):
        rows = class_count_series(system, CLASS_DELTAS)
        report.series["class_counts"] = [r.as_row() for r in rows]
        report.results["class_counts"] = jsonable(
            {str(r.delta): r.singleton_ideal_classes for r in rows}
        )

    if isinstance(system, Example1System) or (
        isinstance(system, TorusSystem) and not isinstance(system, SphereSystem)
    ):
        paths = chain_path_shadowing(
            graph, config.get("horizon", CHAIN_PATH_LENGTH), seed=config.seed
        )
        report.series["chain_paths"] = paths.paths
        report.add_clause(clause(1, "chain-paths-shadowed", paths.ok, paths.summary()))

    if isinstance(system, TorusSystem):
        seed = system.canonical(seed_points(1)[0])
        t = transitivity_check(system, seed, TRANSITIVITY_HORIZON, DEFAULT_GRID)
        report.series["transitivity"] = t.rows()
        report.add_clause(clause(4, "seed-transitive", t.transitive, t.summary()))
    return report
