"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid scenario parameter (non-positive value, unsupported option, ...)."""


class DimensionError(ValueError):
    """Array shapes inconsistent with the configured scenario."""


class SingularMatrixError(RuntimeError):
    """A linear system was too ill-conditioned to solve reliably."""

    def __init__(self, message, cond=None):
        if cond is not None:
            message = f"{message} (condition number {cond:.3e})"
        super().__init__(message)
        self.cond = cond


class NotPositiveDefiniteError(RuntimeError):
    """A covariance matrix required to be positive definite was not."""


class NumericalInconsistencyError(RuntimeError):
    """A quantity that must be real carried a non-negligible imaginary part."""
