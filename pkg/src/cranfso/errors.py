class ConfigError(ValueError):
    """Invalid configuration value or unsupported problem size."""


class DomainError(ValueError):
    """Matrix argument outside the domain of a rate expression (not PSD, singular, ...)."""


class InfeasibleError(RuntimeError):
    """No strictly feasible distortion exists (or none was found) at the requested alpha0."""


class ConsistencyError(RuntimeError):
    """Feasibility check and time-allocation recovery disagree."""


class ProbeError(RuntimeError):
    """An inner solve failed while the outer search probed ``alpha0``."""

    def __init__(self, alpha0, cause):
        super().__init__(f"inner solve failed at alpha0={alpha0:.6g}: {cause}")
        self.alpha0 = alpha0
        self.cause = cause
