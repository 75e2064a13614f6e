"""Exception and warning types shared across the package."""


class DesignError(Exception):
    """Base class for model failures.

    ``design`` carries the design vector being evaluated when the error was
    raised, if known.
    """

    def __init__(self, message, design=None):
        super().__init__(message)
        self.design = design


class InvalidCaseError(DesignError, ValueError):
    pass


class TemperatureCrossError(DesignError, ValueError):
    pass


class InfeasibleConfigurationError(DesignError, ValueError):
    pass


class InfeasibleGeometryError(DesignError, ValueError):
    pass


class DivergedError(DesignError, RuntimeError):
    def __init__(self, message, design=None, last=None):
        super().__init__(message, design)
        self.last = last


class InvalidStateError(ValueError):
    """Sampler asked to move from a point outside the target's support."""


class InsufficientDataError(ValueError):
    pass


class DegenerateEllipseError(ValueError):
    pass


class NoFeasibleDesignError(RuntimeError):
    pass


class ConfigError(ValueError):
    pass


class ModelWarning(UserWarning):
    """A correlation was used outside its fitted range."""


class TargetEvaluationError(RuntimeError):
    """The target density raised while evaluating ``point``."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point
