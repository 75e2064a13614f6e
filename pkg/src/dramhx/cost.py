"""Capital and operating cost of a sized exchanger.

Purchase cost follows the usual log-quadratic area correlation, scaled to
bare-module cost with pressure and material factors.  Pumping power is
charged at an electricity price for a fixed number of operating hours, and
the capital is spread over the service life as an equal annuity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

ATMOSPHERE_PA = 101325.0

# Material factor by (shell, tube) material.  Carbon steel on both sides is
# the reference the purchase-cost correlation was fitted to.
MATERIAL_FACTORS = {
    ("carbon steel", "carbon steel"): 1.0,
    ("carbon steel", "copper"): 1.25,
    ("carbon steel", "stainless steel"): 1.7,
}


def material_factor(shell_material: str, tube_material: str) -> float:
    key = (shell_material.strip().lower(), tube_material.strip().lower())
    try:
        return MATERIAL_FACTORS[key]
    except KeyError:
        raise KeyError(f"no material factor for shell={key[0]!r}, tube={key[1]!r}; "
                       "set F_M explicitly") from None


@dataclass(frozen=True)
class CostParams:
    K1: float = 3.2138
    K2: float = 0.2688
    K3: float = 0.07961
    C1: float = 0.0
    C2: float = 0.0
    C3: float = 0.0
    B1: float = 1.8
    B2: float = 1.5
    F_M: float = 1.7
    cost_index_ratio: float = 1.0
    electricity_cost: float = 0.1  # $/kWh
    interest_rate: float = 0.05
    lifespan_years: float = 20
    operating_hours: float = 8232.0

    def __post_init__(self):
        if not self.interest_rate > 0:
            raise ValueError("interest rate must be positive")
        if not self.lifespan_years >= 1:
            raise ValueError("lifespan must be at least one year")
        if self.electricity_cost < 0 or self.operating_hours < 0:
            raise ValueError("electricity cost and operating hours must be >= 0")


@dataclass(frozen=True)
class CostBreakdown:
    C_p: float
    F_P: float
    C_BM: float
    OC: float
    annuity_factor: float
    TAC: float


def purchase_cost(area: float, p: CostParams) -> float:
    """Purchase cost in $ for outer area ``area`` (m^2), index-corrected."""
    if not area > 0:
        raise ValueError("area must be positive")
    la = math.log10(area)
    return 10.0 ** (p.K1 + p.K2 * la + p.K3 * la * la) * p.cost_index_ratio


def pressure_factor(pressure_barg: float, p: CostParams) -> float:
    if p.C2 == 0 and p.C3 == 0:
        return 10.0 ** p.C1
    if not pressure_barg > 0:
        raise ValueError("pressure factor needs a positive gauge pressure")
    lp = math.log10(pressure_barg)
    return 10.0 ** (p.C1 + p.C2 * lp + p.C3 * lp * lp)


def bare_module_cost(C_p: float, pressure_barg: float, p: CostParams) -> tuple[float, float]:
    """Bare-module cost and the pressure factor used."""
    if not C_p > 0:
        raise ValueError("purchase cost must be positive")
    F_P = pressure_factor(pressure_barg, p)
    return C_p * (p.B1 + p.B2 * p.F_M * F_P), F_P


def operating_cost(power_w: float, p: CostParams) -> float:
    """Yearly electricity cost in $ for pumping power ``power_w``."""
    if power_w < 0:
        raise ValueError("pumping power must be >= 0")
    return p.operating_hours * (power_w / 1000.0) * p.electricity_cost


def annuity_factor(i: float, n: float) -> float:
    g = (1.0 + i) ** n
    return i * g / (g - 1.0)


def total_annual_cost(C_BM: float, OC: float, p: CostParams, C_p: float = math.nan,
                      F_P: float = math.nan) -> CostBreakdown:
    if C_BM < 0 or OC < 0:
        raise ValueError("costs must be >= 0")
    a = annuity_factor(p.interest_rate, p.lifespan_years)
    return CostBreakdown(C_p=C_p, F_P=F_P, C_BM=C_BM, OC=OC, annuity_factor=a,
                         TAC=C_BM * a + OC)


def pa_to_barg(pressure_pa: float) -> float:
    return (pressure_pa - ATMOSPHERE_PA) / 1e5


def cost_of(area: float, power_w: float, pressure_barg: float, p: CostParams) -> CostBreakdown:
    """Full cost stack for one design."""
    C_p = purchase_cost(area, p)
    C_BM, F_P = bare_module_cost(C_p, pressure_barg, p)
    return total_annual_cost(C_BM, operating_cost(power_w, p), p, C_p=C_p, F_P=F_P)
