"""Delayed-rejection adaptive Metropolis (DRAM) sampling.

The sampler knows nothing about heat exchangers: it needs a log target
density over R^d, a starting point with finite log density, and a
:class:`DramConfig`.  The target may return either ``logp`` or a tuple
``(logp, blob)``; blobs are stored verbatim alongside each sample.

Random numbers are consumed in a fixed order per step: for each stage tried,
``rng.standard_normal(d)`` for the proposal followed by ``rng.random()`` for
the accept test.  With one stage and no adaptation the chain is therefore
draw-for-draw identical to plain random-walk Metropolis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .errors import InvalidStateError, TargetEvaluationError

LOG_2PI = math.log(2.0 * math.pi)


@dataclass
class DramConfig:
    cov0: np.ndarray
    n0: float = 1000
    scale: float | None = None
    eps: float | None = None
    n_stages: int = 2
    stage_scale: float = 0.25
    seed: int | None = None
    n_samples: int = 30000
    checkpoint_every: int = 1000

    def __post_init__(self):
        self.cov0 = np.atleast_2d(np.asarray(self.cov0, dtype=float))
        d = self.cov0.shape[0]
        if self.cov0.shape != (d, d) or not np.allclose(self.cov0, self.cov0.T):
            raise ValueError("cov0 must be a symmetric square matrix")
        try:
            np.linalg.cholesky(self.cov0)
        except np.linalg.LinAlgError:
            raise ValueError("cov0 must be positive definite") from None
        if self.scale is None:
            self.scale = 2.4 ** 2 / d
        if self.eps is None:
            self.eps = 1e-10 * float(np.mean(np.diag(self.cov0)))
        if not self.n0 >= 1:
            raise ValueError("n0 must be >= 1")
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.n_stages < 1:
            raise ValueError("n_stages must be >= 1")
        if not 0 < self.stage_scale < 1:
            raise ValueError("stage_scale must lie in (0, 1)")
        if self.n_samples < 0:
            raise ValueError("n_samples must be >= 0")

    @property
    def dim(self) -> int:
        return self.cov0.shape[0]


@dataclass
class ChainState:
    """Everything the next step depends on, apart from the random stream.

    ``mean`` and ``scatter`` summarise X_0..X_n (scatter is the sum of
    outer products of deviations from the mean); ``cov`` is the proposal
    covariance used to move away from X_n.
    """

    n: int
    x: np.ndarray
    logp: float
    mean: np.ndarray
    scatter: np.ndarray
    cov: np.ndarray
    blob: Any = None
    tried: np.ndarray = None
    accepted: np.ndarray = None
    pd_repairs: int = 0
    chol: np.ndarray = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "n": self.n, "x": self.x.tolist(), "logp": self.logp,
            "mean": self.mean.tolist(), "scatter": self.scatter.tolist(),
            "cov": self.cov.tolist(), "blob": self.blob,
            "tried": self.tried.tolist(), "accepted": self.accepted.tolist(),
            "pd_repairs": self.pd_repairs,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ChainState":
        state = cls(
            n=int(d["n"]), x=np.array(d["x"], dtype=float), logp=float(d["logp"]),
            mean=np.array(d["mean"], dtype=float),
            scatter=np.array(d["scatter"], dtype=float),
            cov=np.array(d["cov"], dtype=float), blob=d.get("blob"),
            tried=np.array(d["tried"], dtype=np.int64),
            accepted=np.array(d["accepted"], dtype=np.int64),
            pd_repairs=int(d.get("pd_repairs", 0)),
        )
        state.chol = np.linalg.cholesky(state.cov)
        return state


@dataclass(frozen=True)
class SampleRecord:
    step: int
    x: np.ndarray
    logp: float
    stage: int  # 0 = stayed put, k = accepted at stage k
    blob: Any = None


@dataclass
class Chain:
    records: list[SampleRecord]
    checkpoints: list[tuple[int, np.ndarray]]
    state: ChainState | None

    def __len__(self):
        return len(self.records)

    @property
    def samples(self) -> np.ndarray:
        if not self.records:
            d = 0 if self.state is None else self.state.x.size
            return np.empty((0, d))
        return np.array([r.x for r in self.records])

    @property
    def logp(self) -> np.ndarray:
        return np.array([r.logp for r in self.records])

    @property
    def stages(self) -> np.ndarray:
        return np.array([r.stage for r in self.records], dtype=int)

    def acceptance_rates(self) -> dict:
        """Per-stage acceptance given the stage was tried, and overall."""
        st = self.state
        out = {"overall": float(np.mean(self.stages > 0)) if self.records else math.nan}
        for k in range(st.tried.size):
            t = st.tried[k]
            out[f"stage{k + 1}"] = float(st.accepted[k] / t) if t else math.nan
        return out


# --------------------------------------------------------------------------
# target evaluation

def evaluate(target: Callable, x: np.ndarray) -> tuple[float, Any]:
    try:
        out = target(x)
    except Exception as exc:
        raise TargetEvaluationError(f"target failed at {x!r}: {exc}", point=x.copy()) from exc
    if isinstance(out, tuple):
        logp, blob = out
    else:
        logp, blob = out, None
    logp = float(logp)
    if math.isnan(logp) or logp == math.inf:
        raise TargetEvaluationError(f"target returned {logp} at {x!r}", point=x.copy())
    return logp, blob


# --------------------------------------------------------------------------
# covariance adaptation

def push_point(state: ChainState, x: np.ndarray) -> None:
    """Fold x into the running mean/scatter of X_0..X_n (Welford)."""
    k = state.n + 2  # number of points after adding x
    delta = x - state.mean
    state.mean = state.mean + delta / k
    state.scatter = state.scatter + np.outer(delta, x - state.mean)


def covariance_update(state: ChainState, cfg: DramConfig) -> tuple[np.ndarray, np.ndarray, bool]:
    """Proposal covariance C_{n+1} from the points X_0..X_n summarised in ``state``.

    Returns the matrix, its Cholesky factor (None while not adapting) and
    whether a positive-definiteness repair was needed.
    """
    if state.n + 1 <= cfg.n0:
        return cfg.cov0, None, False
    if state.n < 1:
        raise ValueError("adaptation needs at least two points")
    d = state.x.size
    cov = cfg.scale * (state.scatter / state.n) + cfg.scale * cfg.eps * np.eye(d)
    cov = 0.5 * (cov + cov.T)
    repaired = False
    bump = cfg.eps
    for _ in range(30):
        try:
            return cov, np.linalg.cholesky(cov), repaired
        except np.linalg.LinAlgError:
            repaired = True
            cov = cov + bump * np.eye(d)
            bump *= 10.0
    raise np.linalg.LinAlgError("could not restore a positive definite proposal covariance")


# --------------------------------------------------------------------------
# acceptance probabilities

def log1m_exp(a: float) -> float:
    """log(1 - exp(a)) for a <= 0."""
    if a >= 0.0:
        return -math.inf
    if a > -0.6931471805599453:
        return math.log(-math.expm1(a))
    return math.log1p(-math.exp(a))


def log_accept_stage1(logp_x: float, logp_y: float, log_q_xy: float = 0.0,
                      log_q_yx: float = 0.0) -> float:
    """log of min(1, pi(y) q(y,x) / (pi(x) q(x,y)))."""
    if logp_x == -math.inf:
        raise InvalidStateError("current point has zero target density")
    if logp_y == -math.inf:
        return -math.inf
    return min(0.0, (logp_y + log_q_yx) - (logp_x + log_q_xy))


LogProposal = Callable[[int, Sequence[np.ndarray], np.ndarray], float]


class DelayedRejection:
    """Acceptance probabilities for every stage of one delayed-rejection step.

    ``points[0]`` is the current state and ``points[1:]`` the proposals made
    so far; ``logps`` are their log target densities.  ``log_q(j, history, y)``
    is the log density of proposing ``y`` at stage ``j`` given
    ``history = (start, y_1, ..., y_{j-1})``.

    The stage-k probability is min(1, N_k/D_k) where the denominator walks
    the path forward from the current point and the numerator walks it
    backwards from the last proposal; both carry the rejection
    probabilities of all earlier stages along their own path.  Sub-path
    results are memoised so each is computed once per step.
    """

    def __init__(self, log_q: LogProposal, points: list, logps: list):
        self.log_q = log_q
        self.points = points
        self.logps = logps
        self._memo: dict[tuple[int, ...], float] = {}

    def _log_weight(self, path: tuple[int, ...]) -> float:
        """log of pi(start) * prod q_j * prod (1 - alpha_j) along ``path``."""
        pts = self.points
        w = self.logps[path[0]]
        if w == -math.inf:
            return w
        k = len(path) - 1
        for j in range(1, k + 1):
            w += self.log_q(j, [pts[i] for i in path[:j]], pts[path[j]])
        for j in range(1, k):
            w += log1m_exp(self.log_alpha(path[:j + 1]))
            if w == -math.inf:
                break
        return w

    def log_alpha(self, path: tuple[int, ...]) -> float:
        if path in self._memo:
            return self._memo[path]
        if self.logps[path[-1]] == -math.inf:
            res = -math.inf
        else:
            log_den = self._log_weight(path)
            if log_den == -math.inf:
                res = -math.inf  # stage cannot be reached: reject
            else:
                log_num = self._log_weight(path[::-1])
                res = -math.inf if log_num == -math.inf else min(0.0, log_num - log_den)
        self._memo[path] = res
        return res

    def stage(self, k: int) -> float:
        """log alpha_k(x, y_1, ..., y_k)."""
        return self.log_alpha(tuple(range(k + 1)))


def accept_stage_i(points: list, logps: list, log_q: LogProposal) -> float:
    """Acceptance probability of the last point in ``points`` at stage len-1."""
    dr = DelayedRejection(log_q, points, logps)
    return math.exp(dr.stage(len(points) - 1))


class GaussianStages:
    """Stage-j proposal N(start, C * stage_scale**(j-1)), centred on the current point."""

    def __init__(self, cov: np.ndarray, stage_scale: float, chol: np.ndarray | None = None):
        self.chol = np.linalg.cholesky(cov) if chol is None else chol
        self.linv = np.linalg.inv(self.chol)
        self.stage_scale = stage_scale
        d = cov.shape[0]
        self._half_logdet = float(np.sum(np.log(np.diag(self.chol)))) + 0.5 * d * LOG_2PI
        self._d = d

    def factor(self, j: int) -> float:
        return self.stage_scale ** (j - 1)

    def draw(self, j: int, start: np.ndarray, z: np.ndarray) -> np.ndarray:
        return start + math.sqrt(self.factor(j)) * (self.chol @ z)

    def __call__(self, j: int, history: Sequence[np.ndarray], y: np.ndarray) -> float:
        s = self.factor(j)
        r = self.linv @ (y - history[0])
        return -0.5 * float(r @ r) / s - self._half_logdet - 0.5 * self._d * math.log(s)


# --------------------------------------------------------------------------
# the chain

def initial_state(target: Callable, x0, cfg: DramConfig) -> ChainState:
    x0 = np.asarray(x0, dtype=float).copy()
    if x0.shape != (cfg.dim,):
        raise ValueError(f"start point has shape {x0.shape}, expected ({cfg.dim},)")
    logp, blob = evaluate(target, x0)
    if logp == -math.inf:
        raise InvalidStateError("initial point is outside the target's support")
    d = cfg.dim
    state = ChainState(
        n=0, x=x0, logp=logp, blob=blob, mean=x0.copy(), scatter=np.zeros((d, d)),
        cov=cfg.cov0.copy(), tried=np.zeros(cfg.n_stages, dtype=np.int64),
        accepted=np.zeros(cfg.n_stages, dtype=np.int64),
    )
    state.chol = np.linalg.cholesky(state.cov)
    return state


def step(state: ChainState, target: Callable, cfg: DramConfig,
         rng: np.random.Generator) -> tuple[ChainState, int]:
    """Advance the chain by one transition, in place.

    Returns the state and the stage at which a proposal was accepted
    (0 when every stage was rejected).
    """
    if state.logp == -math.inf:
        raise InvalidStateError("chain is outside the target's support")
    if state.chol is None:
        state.chol = np.linalg.cholesky(state.cov)
    x = state.x
    d = x.size
    stages = GaussianStages(state.cov, cfg.stage_scale, chol=state.chol)
    points, logps, blobs = [x], [state.logp], [state.blob]
    dr = DelayedRejection(stages, points, logps)

    accepted_stage = 0
    for k in range(1, cfg.n_stages + 1):
        z = rng.standard_normal(d)
        y = stages.draw(k, x, z)
        logp_y, blob_y = evaluate(target, y)
        points.append(y)
        logps.append(logp_y)
        blobs.append(blob_y)
        state.tried[k - 1] += 1
        log_a = dr.stage(k)
        u = rng.random()
        if log_a > -math.inf and (u == 0.0 or math.log(u) < log_a):
            accepted_stage = k
            break

    if accepted_stage:
        state.accepted[accepted_stage - 1] += 1
        new_x, new_logp, new_blob = points[accepted_stage], logps[accepted_stage], blobs[accepted_stage]
    else:
        new_x, new_logp, new_blob = x, state.logp, state.blob

    cov, chol, repaired = covariance_update(state, cfg)
    push_point(state, new_x)
    state.n += 1
    state.x = new_x
    state.logp = new_logp
    state.blob = new_blob
    if chol is not None:
        state.cov, state.chol = cov, chol
    elif cov is not state.cov and not np.array_equal(cov, state.cov):
        state.cov, state.chol = cov.copy(), np.linalg.cholesky(cov)
    state.pd_repairs += int(repaired)
    return state, accepted_stage


def run_chain(target: Callable, cfg: DramConfig, x0=None, *, state: ChainState | None = None,
              rng: np.random.Generator | None = None, n_samples: int | None = None,
              progress: Callable[[int], None] | None = None) -> Chain:
    """Draw ``n_samples`` (default ``cfg.n_samples``) transitions.

    Either ``x0`` or a previous ``state`` (to continue a chain) must be
    given.  Pass the same ``rng`` object to continue a stream; otherwise a
    fresh generator is seeded from ``cfg.seed``.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    if state is None:
        if x0 is None:
            raise ValueError("need a start point or a state to continue from")
        state = initial_state(target, x0, cfg)
    n = cfg.n_samples if n_samples is None else n_samples

    records: list[SampleRecord] = []
    checkpoints: list[tuple[int, np.ndarray]] = []
    for _ in range(n):
        state, stage = step(state, target, cfg, rng)
        records.append(SampleRecord(state.n, state.x, state.logp, stage, state.blob))
        if cfg.checkpoint_every and state.n % cfg.checkpoint_every == 0:
            checkpoints.append((state.n, state.cov.copy()))
            if progress is not None:
                progress(state.n)
    return Chain(records, checkpoints, state)


def write_chain_csv(path, chain: Chain, names: Sequence[str], blob_names: Sequence[str] = (),
                    blob_getter: Callable[[Any], Sequence[float]] | None = None,
                    append: bool = False) -> None:
    """Write records as CSV: step, <names>, <blob_names>, logpi, stage."""
    import csv

    mode = "a" if append else "w"
    with open(path, mode, newline="") as fh:
        w = csv.writer(fh)
        if not append:
            w.writerow(["step", *names, *blob_names, "logpi", "stage"])
        for r in chain.records:
            extra = []
            if blob_names:
                vals = blob_getter(r.blob) if blob_getter else r.blob
                extra = [repr(float(v)) for v in vals]
            w.writerow([r.step, *(repr(float(v)) for v in r.x), *extra, repr(r.logp), r.stage])


def write_checkpoints(path, chain: Chain) -> None:
    import json

    payload = [{"step": s, "cov": c.tolist()} for s, c in chain.checkpoints]
    with open(path, "w") as fh:
        json.dump({"checkpoints": payload}, fh, indent=1)
