"""
Exception hierarchy for the laboratory.

Every failure an operation can report derives from LabError so the CLI
can map it to a single exit code.
"""


class LabError(Exception):
    """Base class for all laboratory errors."""

    pass


class SystemConfigError(LabError):
    """Raised when a system cannot be built (bad matrix, unknown id, bad point)."""

    pass


class PreconditionError(LabError):
    """Raised when an operation's precondition fails."""

    pass


class WindowExhaustedError(LabError):
    """Raised when a symbolic point is asked for symbols beyond its stored window."""

    pass


class SeamViolationError(LabError):
    """
    Raised when concatenated segments do not glue within the jump bound.

    Attributes:
        seam_index: Index of the offending seam (between segment i and i+1)
        jump: Measured seam jump
    """

    def __init__(self, seam_index: int, jump: float, delta: float):
        self.seam_index = seam_index
        self.jump = jump
        self.delta = delta
        super().__init__(
            f"Seam {seam_index} jump {jump:.3e} is not below delta {delta:.3e}"
        )


class ShadowingError(LabError):
    """Raised when constructive shadowing is unavailable for the input."""

    pass


class IndistinguishableWordsError(LabError):
    """Raised when shadow accuracy is too coarse to read words back."""

    pass


class ConfigError(LabError):
    """Raised when experiment configuration is invalid."""

    pass
