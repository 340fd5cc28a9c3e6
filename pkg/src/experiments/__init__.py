"""
Experiments and subcommands.

Modules:
- runners: Named experiments (theorem-a, theorem-b, example1, horseshoe,
  asymptotic, shadowing, entropy), each returning a Report of checked clauses
- commands: Single-operation subcommands (ball, shadow, chains)
"""

from src.experiments.commands import run_ball, run_chains, run_shadow
from src.experiments.runners import (
    run_asymptotic,
    run_entropy,
    run_example1,
    run_horseshoe,
    run_shadowing,
    run_theorem_a,
    run_theorem_b_cycle,
)

EXPERIMENTS = {
    "theorem-a": run_theorem_a,
    "theorem-b": run_theorem_b_cycle,
    "example1": run_example1,
    "horseshoe": run_horseshoe,
    "asymptotic": run_asymptotic,
    "shadowing": run_shadowing,
    "entropy": run_entropy,
}

COMMANDS = {
    "ball": run_ball,
    "shadow": run_shadow,
    "horseshoe": run_horseshoe,
    "entropy": run_entropy,
    "chains": run_chains,
}

__all__ = [
    "COMMANDS",
    "EXPERIMENTS",
    "run_asymptotic",
    "run_ball",
    "run_chains",
    "run_entropy",
    "run_example1",
    "run_horseshoe",
    "run_shadow",
    "run_shadowing",
    "run_theorem_a",
    "run_theorem_b_cycle",
]
