"""Exception hierarchy for Multiway DoF."""


class MultiwayDofError(ValueError):
    """Base class for all library errors."""


class ConfigValidationError(MultiwayDofError):
    """Network or sweep configuration is malformed."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ShapeError(MultiwayDofError):
    """Configuration shape does not match the requested catalog."""


class AlignmentDimensionError(MultiwayDofError):
    """More aligned directions requested than the shared subspace holds."""


class DegenerateChannelError(MultiwayDofError):
    """Channel matrices are numerically rank deficient."""


class PlanError(MultiwayDofError):
    """A strategy descriptor cannot be turned into a transmission scheme."""


class IllConditionedError(PlanError):
    """A stacked relay matrix is too ill-conditioned to invert; resample channels."""

    def __init__(self, name: str, condition: float):
        self.name = name
        self.condition = condition
        super().__init__(
            f"{name} has condition number {condition:.3e}; resample the channels"
        )


class VerificationError(MultiwayDofError):
    """Noiseless decoding did not reproduce the transmitted symbols."""

    def __init__(self, residuals: dict[int, float]):
        self.residuals = residuals
        worst = ", ".join(f"stream {s}: {r:.2e}" for s, r in sorted(residuals.items()))
        super().__init__(f"decode mismatch on {len(residuals)} stream(s): {worst}")


class PreconditionError(MultiwayDofError):
    """Numeric argument violates an operation precondition."""


class SweepTooLargeError(MultiwayDofError):
    """Sweep grid exceeds the cell limit."""
