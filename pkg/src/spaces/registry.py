"""
System registry.

Maps the string ids used by the CLI and config files to system
constructors. Torus-based systems accept a matrix override given as four
integers in row order.
"""

import logging
from collections.abc import Callable, Sequence

from src.core.errors import SystemConfigError
from src.spaces.base import DynamicalSystem
from src.spaces.example1 import Example1System
from src.spaces.sphere import SphereSystem
from src.spaces.symbolic import CantorSystem, ShiftSystem
from src.spaces.torus import CAT_MATRIX, TorusSystem

logger = logging.getLogger(__name__)

MATRIX_SYSTEMS: dict[str, Callable[..., DynamicalSystem]] = {
    "cat": TorusSystem,
    "sphere": SphereSystem,
    "example1": Example1System,
}

SYMBOLIC_SYSTEMS: dict[str, Callable[[], DynamicalSystem]] = {
    "shift2": lambda: ShiftSystem(alphabet=2),
    "cantor-id": CantorSystem,
}

SYSTEM_IDS = tuple(MATRIX_SYSTEMS) + tuple(SYMBOLIC_SYSTEMS)


def build_system(name: str, matrix: Sequence[int] | None = None) -> DynamicalSystem:
    """
    Build a system from its string id.

    Args:
        name: One of "cat", "sphere", "example1", "shift2", "cantor-id"
        matrix: Optional four integers overriding the cat matrix

    Returns:
        The constructed system

    Raises:
        SystemConfigError: Unknown id, matrix given for a symbolic system, or
            a matrix that is not hyperbolic and unimodular
    """
    if name in MATRIX_SYSTEMS:
        system = MATRIX_SYSTEMS[name](matrix if matrix is not None else CAT_MATRIX)
    elif name in SYMBOLIC_SYSTEMS:
        if matrix is not None:
            raise SystemConfigError(f"System {name!r} does not take a matrix")
        system = SYMBOLIC_SYSTEMS[name]()
    else:
        raise SystemConfigError(
            f"Unknown system {name!r}; expected one of {', '.join(SYSTEM_IDS)}"
        )
    logger.debug(f"Built system {system!r}")
    return system
