"""
Chain recurrence and transitivity.

- graph: delta-chain graphs, recurrent classes, nonwandering estimates, class counts
- transitivity: forward and backward orbit density on a grid of cells
"""

from src.chainrec.graph import (
    CLASS_DELTAS,
    ChainGraph,
    ChainShadowReport,
    ClassCountRow,
    chain_edges,
    chain_graph,
    chain_path_shadowing,
    class_count_series,
    default_chain_cloud,
    nonwandering_estimate,
    random_edge_path,
    singleton_ideal_classes,
)
from src.chainrec.transitivity import (
    DEFAULT_GRID,
    GAP_TOLERANCE,
    IRRATIONAL_SEED,
    DensityProfile,
    TransitivityReport,
    density_profile,
    omega_sample,
    orbit_cells,
    seed_points,
    transitivity_check,
)

__all__ = [
    "CLASS_DELTAS",
    "DEFAULT_GRID",
    "GAP_TOLERANCE",
    "IRRATIONAL_SEED",
    "ChainGraph",
    "ChainShadowReport",
    "ClassCountRow",
    "DensityProfile",
    "TransitivityReport",
    "chain_edges",
    "chain_graph",
    "chain_path_shadowing",
    "class_count_series",
    "default_chain_cloud",
    "density_profile",
    "nonwandering_estimate",
    "omega_sample",
    "orbit_cells",
    "random_edge_path",
    "seed_points",
    "transitivity_check",
]
