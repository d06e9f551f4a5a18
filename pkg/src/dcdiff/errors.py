"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A requested configuration is inconsistent (e.g. truncation beyond quadrature)."""


class DomainError(ValueError):
    """Physical parameters outside the admitted range (e.g. |Z| >= sqrt(3)/2)."""


class PrecisionError(RuntimeError):
    """A grid or tolerance check shows the requested quantity is unresolved."""


class NumericalError(RuntimeError):
    """An internal solver failed (factorization breakdown, non-convergence)."""
