"""Posterior over the seven design variables.

A flat prior on the design box times independent Gaussian penalties on the
distance of the required area and the pumping power from their targets.
Designs the sizing model cannot realise get zero density.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DesignError
from .thermo import (
    BOUNDS,
    CaseSpec,
    DesignVector,
    LayoutConfig,
    SizingResult,
    bounds_for,
    pumping_power,
    size_exchanger,
)


@dataclass(frozen=True)
class TargetSpec:
    target_area: float
    target_power: float
    sigma_area: float | None = None
    sigma_power: float | None = None

    def __post_init__(self):
        if not (self.target_area > 0 and self.target_power > 0):
            raise ValueError("targets must be positive")
        if self.sigma_area is None:
            object.__setattr__(self, "sigma_area", 0.05 * self.target_area)
        if self.sigma_power is None:
            object.__setattr__(self, "sigma_power", 0.05 * self.target_power)
        if not (self.sigma_area > 0 and self.sigma_power > 0):
            raise ValueError("target widths must be positive")

    @classmethod
    def from_pressure_drops(cls, area: float, dp_tube: float, dp_shell: float,
                            case: CaseSpec, **kw) -> "TargetSpec":
        """Target power implied by reference tube/shell pressure drops."""
        return cls(area, pumping_power(dp_tube, dp_shell, case), **kw)


@dataclass(frozen=True)
class PriorBox:
    """Uniform box; the clearance bounds are fractions of the sampled d_o."""

    bounds: dict = field(default_factory=lambda: dict(BOUNDS))

    def __post_init__(self):
        for name in DesignVector.NAMES:
            lo, hi = self.bounds[name]
            if not lo < hi:
                raise ValueError(f"empty prior range for {name}: [{lo}, {hi}]")

    def resolve(self, d_o: float) -> tuple[np.ndarray, np.ndarray]:
        lo = np.array([self.bounds[n][0] for n in DesignVector.NAMES])
        hi = np.array([self.bounds[n][1] for n in DesignVector.NAMES])
        lo[2] *= d_o
        hi[2] *= d_o
        return lo, hi

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        lo, hi = self.resolve(x[5])
        return bool(np.all(x >= lo) and np.all(x <= hi))

    def midpoint(self) -> np.ndarray:
        lo_do, hi_do = self.bounds["do"]
        lo, hi = self.resolve(0.5 * (lo_do + hi_do))
        return 0.5 * (lo + hi)

    def sigmas(self) -> np.ndarray:
        lo_do, hi_do = self.bounds["do"]
        lo, hi = self.resolve(0.5 * (lo_do + hi_do))
        return (hi - lo) / 4.0


def log_prior(x, prior: PriorBox | None = None) -> float:
    if isinstance(x, DesignVector):
        x = x.as_array()
    prior = prior or PriorBox()
    return 0.0 if prior.contains(x) else -math.inf


def log_likelihood(result: SizingResult, t: TargetSpec) -> float:
    za = (result.A_o - t.target_area) / t.sigma_area
    zp = (result.P_st - t.target_power) / t.sigma_power
    return -0.5 * (za * za + zp * zp)


def initial_state(prior: PriorBox | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Start at the box midpoint; proposal std = a quarter of each range."""
    prior = prior or PriorBox()
    sig = prior.sigmas()
    if np.any(sig <= 0):
        raise ValueError("degenerate prior range: cannot form a positive sigma")
    return prior.midpoint(), np.diag(sig ** 2)


class DesignPosterior:
    """Callable log posterior for the sampler.

    Returns ``(logp, (A_o, P_st))``; the blob is ``None`` when the design is
    outside the box or could not be sized.  ``n_evaluations``,
    ``n_outside`` and ``n_infeasible`` count what happened.
    """

    def __init__(self, case: CaseSpec, layout: LayoutConfig, target: TargetSpec,
                 prior: PriorBox | None = None):
        self.case = case
        self.layout = layout
        self.target = target
        self.prior = prior or PriorBox()
        self.n_evaluations = 0
        self.n_outside = 0
        self.n_infeasible = 0
        self.failures: dict[str, int] = {}

    def log_posterior(self, x) -> tuple[float, SizingResult | None]:
        arr = x.as_array() if isinstance(x, DesignVector) else np.asarray(x, dtype=float)
        self.n_evaluations += 1
        if not self.prior.contains(arr):
            self.n_outside += 1
            return -math.inf, None
        design = DesignVector.from_array(arr)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                result = size_exchanger(design, self.case, self.layout)
        except DesignError as exc:
            self.n_infeasible += 1
            kind = type(exc).__name__
            self.failures[kind] = self.failures.get(kind, 0) + 1
            return -math.inf, None
        return log_likelihood(result, self.target), result

    def __call__(self, x):
        logp, result = self.log_posterior(x)
        if result is None:
            return logp, None
        return logp, (result.A_o, result.P_st)
