"""End-to-end run: sample the design posterior, check stability, summarise,
pick the cheapest design and write the artifacts."""

from __future__ import annotations

import csv
import json
import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import dram
from .config import RunConfig
from .cost import CostBreakdown, cost_of, pa_to_barg
from .decision import (
    DecisionResult,
    PosteriorSummary,
    confidence_ellipse,
    select_min_tac,
    split_rhat,
    stability_check,
    summarize,
)
from .errors import DegenerateEllipseError, InvalidStateError, ModelWarning, NoFeasibleDesignError
from .posterior import DesignPosterior
from .posterior import initial_state as prior_start
from .thermo import DesignVector, SizingResult, bound_violations, size_exchanger

log = logging.getLogger(__name__)

DESIGN_NAMES = DesignVector.NAMES
TARGET_NAMES = ("Ao", "Pst")
ALL_NAMES = DESIGN_NAMES + TARGET_NAMES
UNITS = {"Lbc": "m", "Bc": "-", "dtb": "m", "dsb": "m", "L": "m", "do": "m", "t": "m",
         "Ao": "m2", "Pst": "W"}


# --------------------------------------------------------------------------
# single evaluation

def evaluate_design(config: RunConfig, x) -> tuple[SizingResult, CostBreakdown]:
    """Size one design and cost it.  Model errors propagate unchanged.

    Designs outside the sampling box are still evaluated (literature
    references sometimes are), with a warning naming the offending variables.
    """
    if not isinstance(x, DesignVector):
        x = DesignVector.from_array(x)
    bad = bound_violations(x)
    if bad:
        warnings.warn(f"design outside the sampling box in {', '.join(bad)}", ModelWarning,
                      stacklevel=2)
    result = size_exchanger(x, config.case, config.layout)
    cost = cost_of(result.A_o, result.P_st, pa_to_barg(config.design_pressure_pa), config.cost)
    return result, cost


def _quiet_evaluate(config: RunConfig):
    def ev(x):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return evaluate_design(config, x)
    return ev


# --------------------------------------------------------------------------
# sampling

@dataclass
class ChainRun:
    chain: dram.Chain
    n_evaluations: int
    n_outside: int
    n_infeasible: int
    failures: dict


def _dram_config(config: RunConfig, cov0: np.ndarray, seed) -> dram.DramConfig:
    s = config.sampler
    return dram.DramConfig(cov0=cov0, n0=s.n0, scale=s.s_d, eps=s.eps, n_stages=s.n_stages,
                           stage_scale=s.stage_scale, seed=seed, n_samples=s.n_samples,
                           checkpoint_every=s.checkpoint_every)


def sample_chain(config: RunConfig, seed, extend: bool = True) -> tuple[ChainRun, bool]:
    """Run one chain; extend it once if the stability check fails.

    Returns the run and whether it was extended.
    """
    s = config.sampler
    target = DesignPosterior(config.case, config.layout, config.target, config.prior)
    x0, cov0 = prior_start(config.prior)
    if s.x0 is not None:
        x0 = s.x0
    cfg = _dram_config(config, cov0, seed)
    rng = np.random.default_rng(seed)
    try:
        chain = dram.run_chain(target, cfg, x0, rng=rng)
    except InvalidStateError as exc:
        raise NoFeasibleDesignError(f"start point cannot be sized: {exc}") from exc

    extended = False
    if extend and s.extend_fraction > 0 and not _stable(chain, config)[0]:
        more = int(math.ceil(s.extend_fraction * s.n_samples))
        log.info("chain not stable after %d samples; extending by %d", len(chain), more)
        tail = dram.run_chain(target, cfg, state=chain.state, rng=rng, n_samples=more)
        chain = dram.Chain(chain.records + tail.records, chain.checkpoints + tail.checkpoints,
                           tail.state)
        extended = True
    return ChainRun(chain, target.n_evaluations, target.n_outside, target.n_infeasible,
                    dict(target.failures)), extended


def chain_values(chain: dram.Chain) -> np.ndarray:
    """Design variables followed by A_o and P_st for every record."""
    out = np.empty((len(chain), len(ALL_NAMES)))
    for i, r in enumerate(chain.records):
        out[i, :7] = r.x
        out[i, 7:] = r.blob if r.blob is not None else (math.nan, math.nan)
    return out


def _stable(chain: dram.Chain, config: RunConfig) -> tuple[bool, np.ndarray]:
    vals = chain_values(chain)[config.sampler.effective_burn_in:]
    return stability_check(vals, len(vals) // 2, config.sampler.rhat_threshold)


def _worker(args):
    config, seed = args
    return sample_chain(config, seed)


# --------------------------------------------------------------------------
# the whole flow

@dataclass
class RunOutcome:
    runs: list[ChainRun]
    extended: list[bool]
    converged: bool
    rhat: dict[str, float]
    cross_chain_rhat: dict[str, float] | None
    summary: PosteriorSummary
    ellipses: list[dict]
    decision: DecisionResult
    paths: dict[str, Path] = field(default_factory=dict)


def chain_seeds(seed, n: int) -> list:
    if seed is None:
        return [None] * n
    return [seed + k for k in range(n)]


def run(config: RunConfig, write: bool = True) -> RunOutcome:
    s = config.sampler
    seeds = chain_seeds(s.seed, s.chains)
    if s.chains == 1:
        results = [sample_chain(config, seeds[0])]
    else:
        with ProcessPoolExecutor(max_workers=s.chains) as pool:
            results = list(pool.map(_worker, [(config, sd) for sd in seeds]))
    runs = [r for r, _ in results]
    extended = [e for _, e in results]

    burn = s.effective_burn_in
    main = runs[0]
    values = chain_values(main.chain)
    converged, rh = _stable(main.chain, config)
    rhat = dict(zip(ALL_NAMES, map(float, rh)))
    cross = None
    if len(runs) > 1:
        n = min(len(r.chain) for r in runs)
        parts = [chain_values(r.chain)[burn:n] for r in runs]
        cross = dict(zip(ALL_NAMES, map(float, split_rhat(parts))))
        converged = converged and all(v < s.rhat_threshold for v in cross.values())

    sized = main.n_evaluations - main.n_outside
    summary = summarize(
        values, ALL_NAMES, burn_in=burn,
        infeasible_fraction=main.n_infeasible / sized if sized else math.nan,
        acceptance=main.chain.acceptance_rates(),
    )

    ellipses = []
    kept = values[burn:]
    for j, name in enumerate(DESIGN_NAMES):
        for m in config.ellipse_masses:
            try:
                e = confidence_ellipse(kept[:, [j, 7]], m)
            except DegenerateEllipseError as exc:
                log.warning("no ellipse for %s at mass %g: %s", name, m, exc)
                continue
            ellipses.append({"variable": name, "mass": m,
                             "center_x": float(e.center[0]), "center_y": float(e.center[1]),
                             "axis1": e.axes[0], "axis2": e.axes[1],
                             "angle_deg": math.degrees(e.angle)})

    decision = decide(config, kept[:, :7], kept[:, 7], kept[:, 8])
    outcome = RunOutcome(runs, extended, converged, rhat, cross, summary, ellipses, decision)
    if write:
        outcome.paths = write_artifacts(config, outcome)
    return outcome


def decide(config: RunConfig, designs: np.ndarray, areas: np.ndarray,
           powers: np.ndarray) -> DecisionResult:
    """Minimum-TAC choice over the chain samples and configured references."""
    barg = pa_to_barg(config.design_pressure_pa)
    tac = np.full(len(designs), math.nan)
    memo: dict[tuple, float] = {}
    for i, (a, p) in enumerate(zip(areas, powers)):
        if not (np.isfinite(a) and np.isfinite(p)):
            continue
        key = (a, p)
        if key not in memo:
            memo[key] = cost_of(a, p, barg, config.cost).TAC
        tac[i] = memo[key]
    return select_min_tac(designs, tac, _quiet_evaluate(config), config.references)


# --------------------------------------------------------------------------
# artifacts

def _finite(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        return _finite(obj.item())
    return _finite(obj)


def summary_dict(config: RunConfig, out: RunOutcome) -> dict:
    s = out.summary
    main = out.runs[0]
    return _clean({
        "schema": "dramhx.summary/1",
        "n_chains": len(out.runs),
        "n_samples_total": len(main.chain),
        "burn_in": s.burn_in,
        "n_used": s.n_samples,
        "extended": out.extended[0],
        "converged": out.converged,
        "rhat_threshold": config.sampler.rhat_threshold,
        "rhat": out.rhat,
        "cross_chain_rhat": out.cross_chain_rhat,
        "acceptance": s.acceptance,
        "infeasible_fraction": s.infeasible_fraction,
        "outside_box_fraction": main.n_outside / main.n_evaluations,
        "failures": main.failures,
        "target": {"area_m2": config.target.target_area,
                   "pumping_power_W": config.target.target_power,
                   "sigma_area_m2": config.target.sigma_area,
                   "sigma_power_W": config.target.sigma_power},
        "variables": {k: {**asdict(v), "unit": UNITS[k]} for k, v in s.marginals.items()},
    })


def decision_dict(config: RunConfig, d: DecisionResult) -> dict:
    sizing = asdict(d.sizing)
    geom = sizing.pop("geometry")
    return _clean({
        "schema": "dramhx.decision/1",
        "source": d.source,
        "chain_index": d.index,
        "design": dict(zip(DESIGN_NAMES, map(float, d.design))),
        "sizing": sizing,
        "geometry": geom,
        "cost": asdict(d.cost),
        "TAC": d.cost.TAC,
        "reference_TAC": d.reference_tac,
        "tac_reduction": d.tac_reduction,
        "tac_reduction_fraction": d.tac_reduction_fraction,
        "primary_reference": config.primary_reference,
        "tac_reduction_vs_primary": (d.tac_reduction.get(config.primary_reference)
                                     if config.primary_reference else None),
    })


def write_artifacts(config: RunConfig, out: RunOutcome) -> dict[str, Path]:
    o = config.output
    o.dir.mkdir(parents=True, exist_ok=True)
    paths = {}
    if o.chain_csv:
        for k, r in enumerate(out.runs):
            stem = "chain" if k == 0 else f"chain_{k}"
            p = o.dir / f"{stem}.csv"
            dram.write_chain_csv(p, r.chain, DESIGN_NAMES, TARGET_NAMES,
                                 blob_getter=lambda b: b if b is not None else (math.nan,) * 2)
            dram.write_checkpoints(o.dir / f"{stem}_cov.json", r.chain)
            paths[stem] = p
    if o.summary_json:
        p = o.dir / "summary.json"
        p.write_text(json.dumps(summary_dict(config, out), indent=2) + "\n")
        paths["summary"] = p
    if o.ellipse_csv:
        p = o.dir / "ellipses.csv"
        cols = ["variable", "mass", "center_x", "center_y", "axis1", "axis2", "angle_deg"]
        with open(p, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=cols)
            w.writeheader()
            w.writerows(out.ellipses)
        paths["ellipses"] = p
    if o.decision_json:
        p = o.dir / "decision.json"
        p.write_text(json.dumps(decision_dict(config, out.decision), indent=2) + "\n")
        paths["decision"] = p
    return paths
