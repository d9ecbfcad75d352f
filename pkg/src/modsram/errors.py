"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(ValueError):
    """Simulator geometry or run configuration cannot host the request."""


class SimulatorFault(RuntimeError):
    """Illegal hardware action, e.g. activating a wordline twice in one read."""


class UnsupportedModel(ValueError):
    """A cycle model was asked for a bitwidth it has no figure for."""
