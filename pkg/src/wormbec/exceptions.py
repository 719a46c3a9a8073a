"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole (resonance field, metric
    singularity, or unreachable background value)."""


class ConvergenceError(RuntimeError):
    """A quadrature or nonlinear solve failed to reach its tolerance."""


class ConfigError(ValueError):
    """A run configuration is missing, malformed, or violates a
    precondition of the pipeline it configures."""
