"""
Pydantic models for systems, experiment results and reports.

These models define the JSON layout of everything the laboratory emits,
so a reader can re-judge any verdict from the recorded numbers.
"""

from enum import Enum
from typing import Any, Literal

from pydantic import BaseModel, Field

PointKind = Literal["torus2", "sphere_quotient", "example1", "shift", "cantor"]


class SystemHandle(BaseModel):
    """
    A compact metric space with a distance and an invertible map.

    The handle is the serializable identity of a system; the numerics live
    in the matching DynamicalSystem implementation.
    """

    name: str = Field(
        ...,
        description="System identifier",
        examples=["cat"],
    )
    point_kind: PointKind = Field(
        ...,
        description="Kind of points the system acts on",
        examples=["torus2"],
    )
    params: dict[str, Any] = Field(
        default_factory=dict,
        description="System-specific parameters (matrix, alphabet size, anchor)",
        examples=[{"matrix": [[2, 1], [1, 1]]}],
    )


class Verdict(str, Enum):
    """Outcome of an acceptance clause or a whole experiment."""

    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"

    @property
    def exit_code(self) -> int:
        """Process exit code for this verdict."""
        return {Verdict.PASS: 0, Verdict.FAIL: 2, Verdict.INCONCLUSIVE: 3}[self]

    @classmethod
    def combine(cls, verdicts: list["Verdict"]) -> "Verdict":
        """Any failure fails; otherwise any inconclusive clause makes the whole inconclusive."""
        if any(v == cls.FAIL for v in verdicts):
            return cls.FAIL
        if any(v == cls.INCONCLUSIVE for v in verdicts):
            return cls.INCONCLUSIVE
        return cls.PASS

    @classmethod
    def of(cls, ok: bool) -> "Verdict":
        return cls.PASS if ok else cls.FAIL


class ClauseResult(BaseModel):
    """
    One checked clause of an experiment.

    Attributes:
        criterion: Number of the acceptance criterion the clause traces to
        name: Short clause name
        verdict: Clause outcome
        measured: The numbers the verdict was derived from
        detail: Human-readable explanation
    """

    criterion: int = Field(..., ge=1, le=9, description="Acceptance criterion number")
    name: str = Field(..., description="Clause name", examples=["all-balls-trivial"])
    verdict: Verdict = Field(..., description="Clause verdict")
    measured: dict[str, Any] = Field(
        default_factory=dict,
        description="Recorded numbers behind the verdict",
    )
    detail: str | None = Field(default=None, description="Explanation")


class Report(BaseModel):
    """
    Result of one experiment or subcommand run.

    The payload (everything except wall time) is deterministic for a
    fixed configuration and seed.
    """

    experiment: str = Field(..., description="Experiment id", examples=["theorem-a"])
    system: SystemHandle | None = Field(default=None, description="System the run used")
    config: dict[str, Any] = Field(default_factory=dict, description="Configuration echo")
    results: dict[str, Any] = Field(default_factory=dict, description="Per-operation results")
    clauses: list[ClauseResult] = Field(default_factory=list, description="Checked clauses")
    verdict: Verdict = Field(default=Verdict.INCONCLUSIVE, description="Overall verdict")
    wall_time_seconds: float = Field(default=0.0, description="Elapsed wall time")
    series: dict[str, list[dict[str, Any]]] = Field(
        default_factory=dict,
        description="Plot-ready row series, written as CSV on request",
        exclude=True,
    )

    def add_clause(self, clause: ClauseResult) -> None:
        self.clauses.append(clause)
        self.verdict = Verdict.combine([c.verdict for c in self.clauses])

    def payload(self) -> dict[str, Any]:
        """Report content that must be identical across reruns."""
        return self.model_dump(mode="json", exclude={"wall_time_seconds"})
