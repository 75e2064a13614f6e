"""Post-processing of finished chains.

Convergence diagnostics (split-chain potential scale reduction), marginal
summaries with 90% intervals, Gaussian confidence ellipses, and the
minimum-TAC choice among sampled and reference designs.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DegenerateEllipseError, InsufficientDataError, NoFeasibleDesignError

MIN_SAMPLES = 100


# --------------------------------------------------------------------------
# convergence

def gelman_rubin(segments: Sequence[np.ndarray]) -> np.ndarray:
    """Potential scale reduction over equal-length segments, per column."""
    n = min(len(s) for s in segments)
    if n < 2 or len(segments) < 2:
        raise InsufficientDataError("need at least two segments of two samples")
    arr = np.stack([np.asarray(s, dtype=float)[:n].reshape(n, -1) for s in segments])
    means = arr.mean(axis=1)
    W = arr.var(axis=1, ddof=1).mean(axis=0)
    B = n * means.var(axis=0, ddof=1)
    var_plus = (n - 1) / n * W + B / n
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.sqrt(var_plus / W)
    # constant columns: identical segments are converged, differing ones are not
    r = np.where(W > 0, r, np.where(B > 0, np.inf, 1.0))
    return r


def split_rhat(chains: Sequence[np.ndarray]) -> np.ndarray:
    """Split every chain in half and compare all halves."""
    halves = []
    for c in chains:
        c = np.asarray(c, dtype=float)
        h = len(c) // 2
        halves += [c[:h], c[h:2 * h]]
    return gelman_rubin(halves)


def stability_check(chain: np.ndarray, window: int,
                    threshold: float = 1.05) -> tuple[bool, np.ndarray]:
    """Split-R-hat over the last ``2*window`` samples.

    The chain counts as stable when every column's R-hat is below
    ``threshold``.
    """
    chain = np.asarray(chain, dtype=float)
    if window < 2 or len(chain) < 2 * window:
        raise InsufficientDataError(f"need {2 * window} samples, have {len(chain)}")
    tail = chain[len(chain) - 2 * window:]
    r = split_rhat([tail])
    return bool(np.all(r < threshold)), r


# --------------------------------------------------------------------------
# summaries

@dataclass(frozen=True)
class Marginal:
    mean: float
    variance: float
    q05: float
    q95: float


@dataclass
class PosteriorSummary:
    n_samples: int
    burn_in: int
    marginals: dict[str, Marginal]
    rhat: dict[str, float]
    infeasible_fraction: float = math.nan
    acceptance: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["marginals"] = {k: asdict(v) for k, v in self.marginals.items()}
        return d


def summarize(samples: np.ndarray, names: Sequence[str], burn_in: int = 0,
              infeasible_fraction: float = math.nan,
              acceptance: Mapping[str, float] | None = None) -> PosteriorSummary:
    samples = np.asarray(samples, dtype=float)
    if samples.ndim == 1:
        samples = samples[:, None]
    kept = samples[burn_in:]
    if len(kept) < MIN_SAMPLES:
        raise InsufficientDataError(
            f"{len(kept)} samples after burn-in; at least {MIN_SAMPLES} needed")
    if kept.shape[1] != len(names):
        raise ValueError("one name per column expected")
    mean = kept.mean(axis=0)
    var = kept.var(axis=0, ddof=1)
    q05, q95 = np.quantile(kept, [0.05, 0.95], axis=0)
    r = split_rhat([kept])
    marg = {n: Marginal(float(m), float(v), float(a), float(b))
            for n, m, v, a, b in zip(names, mean, var, q05, q95)}
    return PosteriorSummary(
        n_samples=len(kept), burn_in=burn_in, marginals=marg,
        rhat={n: float(x) for n, x in zip(names, r)},
        infeasible_fraction=infeasible_fraction,
        acceptance=dict(acceptance or {}),
    )


# --------------------------------------------------------------------------
# confidence ellipses

@dataclass(frozen=True)
class Ellipse:
    center: np.ndarray
    cov: np.ndarray
    mass: float
    radius: float        # Mahalanobis radius
    axes: tuple[float, float]  # semi-axes, major first
    angle: float         # major-axis direction, radians from the x axis

    def contains(self, points: np.ndarray) -> np.ndarray:
        d = np.asarray(points, dtype=float) - self.center
        m2 = np.einsum("ij,jk,ik->i", d, np.linalg.inv(self.cov), d)
        return m2 <= self.radius ** 2


def chi2_2_quantile(mass: float) -> float:
    """Quantile of the chi-square distribution with two degrees of freedom."""
    return -2.0 * math.log1p(-mass)


def confidence_ellipse(samples_2d: np.ndarray, mass: float) -> Ellipse:
    pts = np.asarray(samples_2d, dtype=float)
    if not 0 < mass < 1:
        raise ValueError("mass must lie in (0, 1)")
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise DegenerateEllipseError("need at least three 2-D samples")
    center = pts.mean(axis=0)
    cov = np.cov(pts, rowvar=False)
    vals, vecs = np.linalg.eigh(cov)
    if not (vals[-1] > 0 and vals[0] > 1e-12 * vals[-1]):
        raise DegenerateEllipseError("sample covariance is singular")
    r = math.sqrt(chi2_2_quantile(mass))
    major = vecs[:, 1]
    return Ellipse(center, cov, mass, r,
                   (r * math.sqrt(vals[1]), r * math.sqrt(vals[0])),
                   math.atan2(major[1], major[0]))


# --------------------------------------------------------------------------
# minimum-TAC choice

@dataclass
class DecisionResult:
    source: str            # "chain" or a reference name
    index: int | None      # position among the chain candidates
    design: np.ndarray
    sizing: object
    cost: object
    reference_tac: dict[str, float]
    tac_reduction: dict[str, float]     # (TAC_ref - TAC_chosen)/TAC_ref
    tac_reduction_fraction: float       # against the cheapest reference


def select_min_tac(designs: np.ndarray, tac: np.ndarray,
                   evaluate: Callable[[np.ndarray], tuple[object, object]],
                   references: Mapping[str, np.ndarray] | None = None) -> DecisionResult:
    """Pick the lowest-TAC design among chain samples and reference designs.

    ``tac`` holds the TAC of each chain candidate (NaN where infeasible).
    ``evaluate`` maps a design to ``(sizing, cost)`` and is used for the
    references and to re-derive the winner.  Ties go to the earliest chain
    candidate, and chain candidates precede references.
    """
    designs = np.asarray(designs, dtype=float)
    tac = np.asarray(tac, dtype=float)
    ok = np.isfinite(tac)
    if not ok.any():
        raise NoFeasibleDesignError("no feasible design among the samples")
    best = int(np.flatnonzero(ok)[np.argmin(tac[ok])])  # argmin returns the first minimum

    ref_eval = {}
    for name, x in (references or {}).items():
        ref_eval[name] = evaluate(np.asarray(x, dtype=float))
    ref_tac = {k: float(v[1].TAC) for k, v in ref_eval.items()}

    source, index, design = "chain", best, designs[best]
    sizing, cost = evaluate(design)
    for name, (s, c) in ref_eval.items():
        if c.TAC < cost.TAC:
            source, index, design, sizing, cost = name, None, np.asarray(references[name], float), s, c

    red = {k: (v - cost.TAC) / v for k, v in ref_tac.items()}
    overall = (min(ref_tac.values()) - cost.TAC) / min(ref_tac.values()) if ref_tac else math.nan
    return DecisionResult(source, index, design, sizing, cost, ref_tac, red, overall)
