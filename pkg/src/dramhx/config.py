"""Run configuration: one YAML file with sections case, layout, cost,
target, dram, decision and output.

Sections and keys omitted from a user file fall back to the bundled
naphtha/cooling-water case (see ``DEFAULT_CONFIG``).  Unknown keys are
rejected so that typos do not silently fall back to defaults.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .cost import CostParams, material_factor
from .errors import ConfigError, InvalidCaseError
from .posterior import PriorBox, TargetSpec
from .thermo import BOUNDS, CaseSpec, DesignVector, LayoutConfig, StreamSpec

DEFAULT_CONFIG = """\
# Cooling of naphtha with water: a single-shell, two-pass exchanger.
# Units are SI throughout; temperatures in degrees C.
case:
  tube_side:
    fluid: Cooling water
    flow_rate_kg_s: 30
    inlet_temperature_C: 33
    outlet_temperature_C: 37.21
    density_kg_m3: 1000
    heat_capacity_J_kgK: 4186.8
    viscosity_Pa_s: 0.00071
    thermal_conductivity_W_mK: 0.63
    design_pressure_Pa: 1278142
    fouling_resistance_m2K_W: 0.0004
    material_of_construction: stainless steel
    wall_thermal_conductivity_W_mK: 16
  shell_side:
    fluid: Naphtha
    flow_rate_kg_s: 2.7
    inlet_temperature_C: 114
    outlet_temperature_C: 40
    density_kg_m3: 656
    heat_capacity_J_kgK: 2646.06
    viscosity_Pa_s: 0.00037
    thermal_conductivity_W_mK: 0.11
    design_pressure_Pa: 738767
    fouling_resistance_m2K_W: 0.0002
    material_of_construction: carbon steel
    wall_thermal_conductivity_W_mK: 55
  pump_efficiency: 0.85

layout:
  n_passes: 2
  layout_angle_deg: 30
  sealing_strip_pairs: 0
  pass_partition_width_m: 0.0
  f_correction: true
  initial_U_W_m2K: 500
  coefficient_table: null     # path to a replacement coefficient file

cost:
  K1: 3.2138
  K2: 0.2688
  K3: 0.07961
  C1: 0.0
  C2: 0.0
  C3: 0.0
  B1: 1.8
  B2: 1.5
  F_M: null                   # null: look up from the two materials
  cost_index_ratio: 1.0
  ec_per_kWh: 0.1
  i: 0.05
  n_years: 20
  operating_hours: 8232
  pressure_side: shell        # which design pressure sets F_P

target:
  area_m2: 37.14
  pumping_power_W: null       # null: derive from the reference pressure drops
  reference_dp_tube_Pa: 8584
  reference_dp_shell_Pa: 20620
  sigma_area_frac: 0.05
  sigma_power_frac: 0.05

dram:
  seed: 20240101
  n_samples: 30000
  n0: 1000
  s_d: null                   # null: 2.4^2 / d
  eps: null                   # null: 1e-10 times the mean initial variance
  n_stages: 2
  stage_scale: 0.25
  burn_in: null               # null: n0
  checkpoint_every: 1000
  chains: 1
  rhat_threshold: 1.05
  extend_fraction: 0.5
  x0: null                    # null: middle of the prior box
  prior: {}                   # optional narrowing, e.g. {L: [3.0, 6.0]}; dtb as fraction of do

decision:
  primary_reference: multi_objective
  references:
    single_objective: [0.06, 0.25, 0.000381, 0.003, 10.7, 0.0381, 0.003405]
    multi_objective: [0.079, 0.16515, 0.000204, 0.003279, 3.426, 0.019578, 0.001652]
  ellipse_masses: [0.5, 0.9]

output:
  dir: results
  chain_csv: true
  summary_json: true
  ellipse_csv: true
  decision_json: true
"""

_STREAM_KEYS = {
    "fluid": "fluid",
    "flow_rate_kg_s": "mass_flow",
    "inlet_temperature_C": "t_in",
    "outlet_temperature_C": "t_out",
    "density_kg_m3": "density",
    "heat_capacity_J_kgK": "heat_capacity",
    "viscosity_Pa_s": "viscosity",
    "thermal_conductivity_W_mK": "conductivity",
    "design_pressure_Pa": "design_pressure",
    "fouling_resistance_m2K_W": "fouling",
    "material_of_construction": "material",
}


_FREE_FORM = ("dram.prior", "decision.references")


def default_dict() -> dict:
    return yaml.safe_load(DEFAULT_CONFIG)


def _merge(base: dict, over: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        where = f"{path}{k}"
        if k not in base:
            raise ConfigError(f"unknown key '{where}'")
        if isinstance(base[k], dict):
            if not isinstance(v, dict):
                raise ConfigError(f"'{where}' must be a mapping")
            # free-form maps are replaced wholesale, sections merged key by key
            out[k] = dict(v) if where in _FREE_FORM else _merge(base[k], v, where + ".")
        else:
            out[k] = v
    return out


@dataclass
class SamplerSettings:
    seed: int | None = 20240101
    n_samples: int = 30000
    n0: float = 1000
    s_d: float | None = None
    eps: float | None = None
    n_stages: int = 2
    stage_scale: float = 0.25
    burn_in: int | None = None
    checkpoint_every: int = 1000
    chains: int = 1
    rhat_threshold: float = 1.05
    extend_fraction: float = 0.5
    x0: np.ndarray | None = None

    @property
    def effective_burn_in(self) -> int:
        if self.burn_in is not None:
            return int(self.burn_in)
        return 0 if math.isinf(self.n0) else int(self.n0)


@dataclass
class OutputSettings:
    dir: Path = Path("results")
    chain_csv: bool = True
    summary_json: bool = True
    ellipse_csv: bool = True
    decision_json: bool = True


@dataclass
class RunConfig:
    case: CaseSpec
    layout: LayoutConfig
    cost: CostParams
    target: TargetSpec
    prior: PriorBox
    sampler: SamplerSettings
    references: dict[str, np.ndarray]
    primary_reference: str | None
    ellipse_masses: tuple[float, ...]
    output: OutputSettings
    pressure_side: str = "shell"
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def design_pressure_pa(self) -> float:
        s = self.case.tube if self.pressure_side == "tube" else self.case.shell
        return s.design_pressure


def _num(section: dict, key: str, where: str, allow_none=False):
    v = section[key]
    if v is None and allow_none:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"'{where}.{key}' must be a number, got {v!r}")
    return float(v)


def _stream(d: dict, where: str) -> StreamSpec:
    kw = {}
    for key, attr in _STREAM_KEYS.items():
        if key in ("fluid", "material_of_construction"):
            kw[attr] = str(d[key])
        else:
            kw[attr] = _num(d, key, where)
    return StreamSpec(**kw)


def _design(values, where: str) -> np.ndarray:
    try:
        arr = np.array([float(v) for v in values])
    except (TypeError, ValueError):
        raise ConfigError(f"'{where}' must be a list of 7 numbers") from None
    if arr.shape != (7,):
        raise ConfigError(f"'{where}' must have 7 values ({', '.join(DesignVector.NAMES)})")
    return arr


def _prior(over: dict) -> PriorBox:
    bounds = dict(BOUNDS)
    for name, rng in over.items():
        if name not in BOUNDS:
            raise ConfigError(f"unknown design variable '{name}' in dram.prior")
        try:
            lo, hi = (float(v) for v in rng)
        except (TypeError, ValueError):
            raise ConfigError(f"dram.prior.{name} must be [low, high]") from None
        blo, bhi = BOUNDS[name]
        if not (blo <= lo < hi <= bhi):
            raise ConfigError(f"dram.prior.{name} = [{lo}, {hi}] must be a non-empty "
                              f"range inside [{blo}, {bhi}]")
        bounds[name] = (lo, hi)
    return PriorBox(bounds)


def build(raw: dict) -> RunConfig:
    """Validate a merged configuration dict and build the typed objects.

    Raises ``ConfigError`` for malformed values and ``InvalidCaseError`` for
    a physically inconsistent case.
    """
    c = raw["case"]
    tube = _stream(c["tube_side"], "case.tube_side")
    shell = _stream(c["shell_side"], "case.shell_side")
    k_w = _num(c["tube_side"], "wall_thermal_conductivity_W_mK", "case.tube_side")
    case = CaseSpec(tube=tube, shell=shell, wall_conductivity=k_w,
                    pump_efficiency=_num(c, "pump_efficiency", "case"))

    lay = raw["layout"]
    try:
        layout = LayoutConfig(
            n_passes=int(lay["n_passes"]),
            layout_angle=int(lay["layout_angle_deg"]),
            sealing_strip_pairs=int(lay["sealing_strip_pairs"]),
            pass_partition_width_m=_num(lay, "pass_partition_width_m", "layout"),
            f_correction_enabled=bool(lay["f_correction"]),
            initial_u=_num(lay, "initial_U_W_m2K", "layout"),
            table_path=lay["coefficient_table"],
        )
    except (ValueError, OSError) as exc:
        raise ConfigError(f"layout: {exc}") from exc

    co = raw["cost"]
    f_m = co["F_M"]
    if f_m is None:
        try:
            f_m = material_factor(shell.material, tube.material)
        except KeyError as exc:
            raise ConfigError(f"cost.F_M: {exc.args[0]}") from None
    if co["pressure_side"] not in ("tube", "shell"):
        raise ConfigError("cost.pressure_side must be 'tube' or 'shell'")
    try:
        cost = CostParams(
            K1=_num(co, "K1", "cost"), K2=_num(co, "K2", "cost"), K3=_num(co, "K3", "cost"),
            C1=_num(co, "C1", "cost"), C2=_num(co, "C2", "cost"), C3=_num(co, "C3", "cost"),
            B1=_num(co, "B1", "cost"), B2=_num(co, "B2", "cost"), F_M=float(f_m),
            cost_index_ratio=_num(co, "cost_index_ratio", "cost"),
            electricity_cost=_num(co, "ec_per_kWh", "cost"),
            interest_rate=_num(co, "i", "cost"),
            lifespan_years=_num(co, "n_years", "cost"),
            operating_hours=_num(co, "operating_hours", "cost"),
        )
    except ValueError as exc:
        raise ConfigError(f"cost: {exc}") from exc

    t = raw["target"]
    try:
        area = _num(t, "area_m2", "target")
        power = _num(t, "pumping_power_W", "target", allow_none=True)
        if power is None:
            power = TargetSpec.from_pressure_drops(
                area, _num(t, "reference_dp_tube_Pa", "target"),
                _num(t, "reference_dp_shell_Pa", "target"), case).target_power
        target = TargetSpec(area, power,
                            _num(t, "sigma_area_frac", "target") * area,
                            _num(t, "sigma_power_frac", "target") * power)
    except ValueError as exc:
        raise ConfigError(f"target: {exc}") from exc

    d = raw["dram"]
    prior = _prior(d["prior"] or {})
    n0 = d["n0"]
    if isinstance(n0, str) and n0.lower() in ("inf", "infinity", ".inf"):
        n0 = math.inf
    sampler = SamplerSettings(
        seed=None if d["seed"] is None else int(d["seed"]),
        n_samples=int(d["n_samples"]), n0=float(n0),
        s_d=_num(d, "s_d", "dram", allow_none=True),
        eps=_num(d, "eps", "dram", allow_none=True),
        n_stages=int(d["n_stages"]), stage_scale=_num(d, "stage_scale", "dram"),
        burn_in=None if d["burn_in"] is None else int(d["burn_in"]),
        checkpoint_every=int(d["checkpoint_every"]), chains=int(d["chains"]),
        rhat_threshold=_num(d, "rhat_threshold", "dram"),
        extend_fraction=_num(d, "extend_fraction", "dram"),
        x0=None if d["x0"] is None else _design(d["x0"], "dram.x0"),
    )
    if sampler.n_samples < 1 or sampler.chains < 1 or sampler.n_stages < 1:
        raise ConfigError("dram.n_samples, dram.chains and dram.n_stages must be >= 1")
    if not sampler.n0 >= 1:
        raise ConfigError("dram.n0 must be >= 1")
    if not 0 < sampler.stage_scale < 1:
        raise ConfigError("dram.stage_scale must lie in (0, 1)")
    if sampler.effective_burn_in >= sampler.n_samples:
        raise ConfigError("burn-in must be shorter than the chain")
    if sampler.x0 is not None and not prior.contains(sampler.x0):
        raise ConfigError("dram.x0 lies outside the prior box")

    dec = raw["decision"]
    refs = {str(k): _design(v, f"decision.references.{k}")
            for k, v in (dec["references"] or {}).items()}
    primary = dec["primary_reference"]
    if primary is not None and primary not in refs:
        raise ConfigError(f"decision.primary_reference '{primary}' is not a listed reference")
    masses = tuple(float(m) for m in dec["ellipse_masses"])
    if not all(0 < m < 1 for m in masses):
        raise ConfigError("decision.ellipse_masses must lie in (0, 1)")

    o = raw["output"]
    output = OutputSettings(Path(o["dir"]), bool(o["chain_csv"]), bool(o["summary_json"]),
                            bool(o["ellipse_csv"]), bool(o["decision_json"]))

    return RunConfig(case=case, layout=layout, cost=cost, target=target, prior=prior,
                     sampler=sampler, references=refs, primary_reference=primary,
                     ellipse_masses=masses, output=output,
                     pressure_side=co["pressure_side"], raw=raw)


def parse(text: str, overrides: dict | None = None) -> RunConfig:
    try:
        user = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse configuration: {exc}") from exc
    if not isinstance(user, dict):
        raise ConfigError("configuration must be a mapping of sections")
    raw = _merge(default_dict(), user)
    if overrides:
        raw = _merge(raw, overrides)
    try:
        return build(raw)
    except InvalidCaseError:
        raise
    except KeyError as exc:
        raise ConfigError(f"missing key {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load(path: str | Path, overrides: dict | None = None) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    return parse(text, overrides)


def default_config() -> RunConfig:
    return parse("")


def design_from_values(values: Any) -> DesignVector:
    """Parse a design from 7 values or a comma-separated string."""
    if isinstance(values, str):
        values = [v for v in values.replace(",", " ").split()]
    arr = _design(values, "design")
    return DesignVector.from_array(arr)
