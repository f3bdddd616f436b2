"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


class DivergentPointError(ArithmeticError):
    """Evaluation exactly on a real pole (undamped mode); the value diverges."""


class SingularMatrixError(ArithmeticError):
    """Response matrix is singular at the requested (k, omega)."""


class DegenerateModesError(ValueError):
    """Eigenvalue branches coalesce (exceptional point); closed form unavailable."""


class EvanescentRegionError(ValueError):
    """Frequency below the light cone: no propagating environment modes."""


class KernelAccuracyError(ValueError):
    """Principal-value pole too close to a quadrature window endpoint."""


class RecurrenceLimitError(ValueError):
    """Requested times exceed the Poincare recurrence guard of a discretized bath."""
