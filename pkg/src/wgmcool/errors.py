"""Package exceptions.

All domain errors subclass ValueError so callers (and the CLI) can treat
bad physics inputs uniformly; each carries the diagnostic the caller needs
to act on (last term magnitude, peaks seen, violated bound, ...).
"""


class DomainError(ValueError):
    """Invalid physical input (negative power, non-finite value, ...)."""


class SeriesConvergenceError(DomainError):
    """Mie series too short: trailing coefficients not yet negligible."""

    def __init__(self, message: str, last_term: float):
        super().__init__(message)
        self.last_term = last_term


class ResonanceNotFoundError(DomainError):
    """Requested resonance order not present in the search bracket."""

    def __init__(self, message: str, peaks_seen: list):
        super().__init__(message)
        self.peaks_seen = peaks_seen


class FitConvergenceError(DomainError):
    """Least-squares fit did not converge."""

    def __init__(self, message: str, residual_norm: float = float("nan")):
        super().__init__(message)
        self.residual_norm = residual_norm


class SampleBudgetError(DomainError):
    """Scan would exceed the configured sample budget."""

    def __init__(self, message: str, budget: int, requested: int):
        super().__init__(message)
        self.budget = budget
        self.requested = requested


class TimestepError(DomainError):
    """Integrator timestep violates a stability bound."""

    def __init__(self, message: str, bound: float):
        super().__init__(message)
        self.bound = bound
