"""Shell-and-tube heat exchanger design by delayed-rejection adaptive
Metropolis sampling."""

from .cost import CostBreakdown, CostParams, cost_of
from .dram import Chain, DramConfig, run_chain
from .errors import (
    ConfigError,
    DegenerateEllipseError,
    DesignError,
    DivergedError,
    InfeasibleConfigurationError,
    InfeasibleGeometryError,
    InsufficientDataError,
    InvalidCaseError,
    InvalidStateError,
    ModelWarning,
    NoFeasibleDesignError,
    TemperatureCrossError,
)
from .posterior import DesignPosterior, PriorBox, TargetSpec
from .thermo import CaseSpec, DesignVector, LayoutConfig, SizingResult, StreamSpec, size_exchanger

__version__ = "0.1.0"
