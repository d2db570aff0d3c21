"""Inner-product detection by derivative-free counterexample search.

A multi-start coordinate pattern search drives the slack of the three
conditional inequalities (N_ORDERING, ALPHA_BETA, LORCH) negative. Finding
a violation certifies the norm is not induced by an inner product; finding
none is evidence, never proof, and is cross-checked against an independent
parallelogram-law probe plus an estimate of the best constant c with
alpha <= c*||x-y||/(||x||+||y||).
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import NormGeoError, ZeroVectorError
from .inequalities import (
    CONDITIONAL_IDS,
    InequalityId,
    Witness,
    _lhs_rhs,
    _norm_rows,
)
from .norms import DEFAULT_RADIUS_RANGE, DEFAULT_TOL, norm_eval, sample_points, stream

VIOLATED = "VIOLATED"
CONSISTENT = "CONSISTENT"

_STEP_FLOOR = 1e-9
_GAMMA_LOG_BAND = (math.log(0.125), math.log(8.0))
_SIDE_BUDGET = 4000
_REFINE_TOP = 8
_SEARCH_STREAM = 2
_DW_STREAM = 3
_PG_STREAM = 4
_PG_DISCREPANCY = 1e-6


@dataclass(frozen=True)
class SearchConfig:
    dim: int
    seed: int
    restarts: int = 64
    iters_per_restart: int = 2000
    radius_range: tuple = DEFAULT_RADIUS_RANGE
    step_init: float = 0.25
    step_shrink: float = 0.5
    violation_threshold: float = 1e-7

    def __post_init__(self):
        if self.restarts < 1 or self.iters_per_restart < 1:
            raise NormGeoError("restarts and iters_per_restart must be >= 1")
        if not 0.0 < self.step_shrink < 1.0:
            raise NormGeoError("step_shrink must lie in (0, 1)")
        if self.step_init <= 0.0:
            raise NormGeoError("step_init must be positive")

    def to_dict(self):
        return {
            "dim": self.dim,
            "seed": self.seed,
            "restarts": self.restarts,
            "iters_per_restart": self.iters_per_restart,
            "radius_range": [float(self.radius_range[0]), float(self.radius_range[1])],
            "step_init": self.step_init,
            "step_shrink": self.step_shrink,
            "violation_threshold": self.violation_threshold,
        }


@dataclass(frozen=True)
class SearchResult:
    objective: InequalityId
    best_violation: float
    witness: Witness
    witness_slack: float
    evaluations: int
    restarts_used: int
    seed: int

    def to_dict(self):
        return {
            "objective": self.objective.value,
            "best_violation": self.best_violation,
            "witness": self.witness.to_dict(),
            "witness_slack": self.witness_slack,
            "evaluations": self.evaluations,
            "restarts_used": self.restarts_used,
            "seed": self.seed,
        }


def _pattern_search(fn, p0, step_init, shrink, max_evals, lo, hi, project):
    """Greedy compass search, maximizing fn. Deterministic.

    Candidates are clamped to [lo, hi] and projected into the feasible set
    before evaluation, so the returned value is fn at the returned point.
    Stops when the step drops below 1e-9 or the evaluation budget runs out.
    """
    p = project(np.clip(p0, lo, hi))
    best = fn(p)
    evals = 1
    step = step_init
    n = p.size
    while step >= _STEP_FLOOR and evals < max_evals:
        improved = False
        for i in range(n):
            for s in (step, -step):
                if evals >= max_evals:
                    break
                q = p.copy()
                q[i] += s
                q = project(np.clip(q, lo, hi))
                if q[i] == p[i]:
                    continue
                v = fn(q)
                evals += 1
                if v > best:
                    p = q
                    best = v
                    improved = True
                    break
            if evals >= max_evals:
                break
        if not improved:
            step *= shrink
    return best, p, evals


def _objective_fn(spec, objective, d, sign):
    """Map a flat parameter vector to -slack (higher = worse violation)."""
    if objective is InequalityId.N_ORDERING:

        def fn(q):
            lhs, rhs = _lhs_rhs(
                objective, spec, q[:d], q[d : 2 * d], t=float(q[-1])
            )
            return lhs - rhs

        return fn
    if objective is InequalityId.ALPHA_BETA:

        def fn(q):
            try:
                lhs, rhs = _lhs_rhs(objective, spec, q[:d], q[d : 2 * d])
            except ZeroVectorError:
                return -math.inf
            return lhs - rhs

        return fn

    def fn(q):
        x = q[:d]
        yf = q[d : 2 * d]
        nx = norm_eval(spec, x)
        nyf = norm_eval(spec, yf)
        if not (nx > 1e-12 and nyf > 1e-12):
            return -math.inf
        y = yf * (nx / nyf)
        lhs, rhs = _lhs_rhs(objective, spec, x, y, gamma=sign * math.exp(q[-1]))
        return lhs - rhs

    return fn


def _make_project(d, r_lo):
    def project(q):
        for lo_i in (0, d):
            block = q[lo_i : lo_i + d]
            m = math.sqrt(float(block @ block))
            if m < r_lo:
                if m == 0.0:
                    block[0] = r_lo
                else:
                    block *= r_lo / m
        return q

    return project


def _run_restart(spec, objective, config, obj_index, restart):
    d = config.dim
    rng = stream(config.seed, _SEARCH_STREAM, obj_index, restart)
    pts = sample_points(d, rng, 2, config.radius_range)
    x, y = pts[0], pts[1]
    sign = 1.0
    lo = np.full(2 * d, -math.inf)
    hi = np.full(2 * d, math.inf)
    if objective is InequalityId.N_ORDERING:
        p0 = np.concatenate([x, y, [rng.uniform(0.0, 1.0)]])
        lo = np.append(lo, 0.0)
        hi = np.append(hi, 1.0)
    elif objective is InequalityId.ALPHA_BETA:
        p0 = np.concatenate([x, y])
    else:
        sign = -1.0 if rng.random() < 0.5 else 1.0
        log_g = rng.uniform(*_GAMMA_LOG_BAND)
        p0 = np.concatenate([x, y, [log_g]])
        lo = np.append(lo, _GAMMA_LOG_BAND[0])
        hi = np.append(hi, _GAMMA_LOG_BAND[1])
    fn = _objective_fn(spec, objective, d, sign)
    project = _make_project(d, config.radius_range[0])
    best, p, evals = _pattern_search(
        fn,
        p0,
        config.step_init,
        config.step_shrink,
        config.iters_per_restart,
        lo,
        hi,
        project,
    )
    return best, p, sign, evals


def _decode_witness(spec, objective, d, p, sign):
    x = p[:d].copy()
    if objective is InequalityId.N_ORDERING:
        return Witness(x=x, y=p[d : 2 * d].copy(), t=float(p[-1]))
    if objective is InequalityId.ALPHA_BETA:
        return Witness(x=x, y=p[d : 2 * d].copy())
    yf = p[d : 2 * d]
    y = yf * (norm_eval(spec, x) / norm_eval(spec, yf))
    return Witness(x=x, y=y, gamma=sign * math.exp(float(p[-1])))


def violation_search(spec, objective, config, workers=1):
    """Multi-start pattern search for a negative-slack witness.

    Restart r draws from the (seed, objective, r) stream, so results are
    identical for any worker count and adding restarts can only improve
    (ties keep the earliest restart).
    """
    objective = InequalityId(objective)
    if objective not in CONDITIONAL_IDS:
        raise NormGeoError(f"{objective.value} is universal; nothing to search")
    if config.dim != spec.dim:
        raise NormGeoError(f"config dim {config.dim} != norm dim {spec.dim}")
    obj_index = CONDITIONAL_IDS.index(objective)

    def run(r):
        return _run_restart(spec, objective, config, obj_index, r)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, range(config.restarts)))
    else:
        outcomes = [run(r) for r in range(config.restarts)]

    total_evals = 0
    best = None
    for r, (val, p, sign, evals) in enumerate(outcomes):
        total_evals += evals
        if best is None or val > best[0]:
            best = (val, p, sign, r)
    val, p, sign, _ = best
    witness = _decode_witness(spec, objective, config.dim, p, sign)
    return SearchResult(
        objective=objective,
        best_violation=max(0.0, val),
        witness=witness,
        witness_slack=-val,
        evaluations=total_evals,
        restarts_used=config.restarts,
        seed=config.seed,
    )


@dataclass(frozen=True)
class RefinedMaxResult:
    """Outcome of a sampled-and-refined maximization over nonzero pairs."""

    value: float
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    evaluations: int
    skipped: int
    seed: int

    def to_dict(self):
        return {
            "value": self.value,
            "witness": {
                "x": [float(v) for v in self.x],
                "y": [float(v) for v in self.y],
            },
            "evaluations": self.evaluations,
            "skipped": self.skipped,
            "seed": self.seed,
        }


def _refine_pairs(spec, dim, budget, seed, tag, batch_fn, scalar_fn, radius_range):
    """Sample `budget` pairs, score them with batch_fn, refine the best few
    with the same pattern search used everywhere else."""
    if budget < 1:
        raise NormGeoError("budget must be >= 1")
    rng = stream(seed, tag, 0)
    xs = sample_points(dim, rng, budget, radius_range)
    ys = sample_points(dim, rng, budget, radius_range)
    scores = batch_fn(xs, ys)
    skipped = int(np.isneginf(scores).sum())
    order = np.argsort(-scores, kind="stable")
    top = [i for i in order[:_REFINE_TOP] if math.isfinite(scores[i])]
    best_val = -math.inf
    best_pair = (xs[0], ys[0])
    evals = 0
    if top:
        i0 = int(top[0])
        best_val = float(scores[i0])
        best_pair = (xs[i0], ys[i0])
    lo = np.full(2 * dim, -math.inf)
    hi = np.full(2 * dim, math.inf)
    project = _make_project(dim, radius_range[0])

    def fn(q):
        return scalar_fn(q[:dim], q[dim:])

    for i in top:
        p0 = np.concatenate([xs[i], ys[i]])
        val, p, used = _pattern_search(fn, p0, 0.25, 0.5, _SIDE_BUDGET, lo, hi, project)
        evals += used
        if val > best_val:
            best_val = val
            best_pair = (p[:dim].copy(), p[dim:].copy())
    return best_val, best_pair, budget + evals, skipped


def dw_constant_estimate(spec, budget, seed, dim=None, radius_range=DEFAULT_RADIUS_RANGE):
    """Lower-bound estimate of the best c in alpha <= c*||x-y||/(||x||+||y||).

    Maximizes c(x,y) = alpha * (||x||+||y||) / ||x-y|| over sampled and
    refined pairs; pairs with ||x-y|| below 1e-8*(||x||+||y||) are skipped
    (and counted), never divided through. The true constant can only be
    larger. Equals 2 for inner-product norms, at most 4 for any norm.
    """
    dim = spec.dim if dim is None else dim
    if dim != spec.dim:
        raise NormGeoError(f"dim {dim} does not match norm dim {spec.dim}")
    floor = DEFAULT_TOL.dw_separation_rel

    def batch_fn(xs, ys):
        nx = _norm_rows(spec, xs)
        ny = _norm_rows(spec, ys)
        d = _norm_rows(spec, xs - ys)
        s = nx + ny
        ok = d >= floor * s
        safe = np.where(ok, d, 1.0)
        alpha = _norm_rows(spec, xs / nx[:, None] - ys / ny[:, None])
        return np.where(ok, alpha * s / safe, -math.inf)

    def scalar_fn(x, y):
        nx = norm_eval(spec, x)
        ny = norm_eval(spec, y)
        if not (nx > 1e-12 and ny > 1e-12):
            return -math.inf
        d = norm_eval(spec, x - y)
        s = nx + ny
        if d < floor * s:
            return -math.inf
        return norm_eval(spec, x / nx - y / ny) * s / d

    val, (x, y), evals, skipped = _refine_pairs(
        spec, dim, budget, seed, _DW_STREAM, batch_fn, scalar_fn, radius_range
    )
    return RefinedMaxResult(
        value=val, x=x, y=y, evaluations=evals, skipped=skipped, seed=seed
    )


def parallelogram_defect_search(
    spec, budget, seed, dim=None, radius_range=DEFAULT_RADIUS_RANGE
):
    """Largest relative parallelogram-law defect found by sampling + refining.

    defect = |n(x+y)^2 + n(x-y)^2 - 2n(x)^2 - 2n(y)^2| / (n(x)^2 + n(y)^2).
    Independent of the inequality catalog; used as a cross-check oracle.
    """
    dim = spec.dim if dim is None else dim
    if dim != spec.dim:
        raise NormGeoError(f"dim {dim} does not match norm dim {spec.dim}")

    def batch_fn(xs, ys):
        nx = _norm_rows(spec, xs)
        ny = _norm_rows(spec, ys)
        np_ = _norm_rows(spec, xs + ys)
        nm = _norm_rows(spec, xs - ys)
        den = nx * nx + ny * ny
        num = np.abs(np_ * np_ + nm * nm - 2.0 * nx * nx - 2.0 * ny * ny)
        ok = den > 1e-24
        return np.where(ok, num / np.where(ok, den, 1.0), -math.inf)

    def scalar_fn(x, y):
        nx = norm_eval(spec, x)
        ny = norm_eval(spec, y)
        den = nx * nx + ny * ny
        if not den > 1e-24:
            return -math.inf
        a = norm_eval(spec, x + y)
        b = norm_eval(spec, x - y)
        return abs(a * a + b * b - 2.0 * nx * nx - 2.0 * ny * ny) / den

    val, (x, y), evals, skipped = _refine_pairs(
        spec, dim, budget, seed, _PG_STREAM, batch_fn, scalar_fn, radius_range
    )
    return RefinedMaxResult(
        value=val, x=x, y=y, evaluations=evals, skipped=skipped, seed=seed
    )


@dataclass(frozen=True)
class DetectionVerdict:
    verdict: str
    per_objective: dict
    parallelogram: RefinedMaxResult
    dw_estimate: RefinedMaxResult
    discrepancy_flagged: bool
    config: SearchConfig
    wall_time_s: float

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "per_objective": {
                k.value: v.to_dict() for k, v in self.per_objective.items()
            },
            "parallelogram": self.parallelogram.to_dict(),
            "dw_estimate": self.dw_estimate.to_dict(),
            "discrepancy_flagged": self.discrepancy_flagged,
            "config": self.config.to_dict(),
            "wall_time_s": self.wall_time_s,
        }


def detect_inner_product(spec, config, workers=1, side_budget=_SIDE_BUDGET):
    """Searches all three conditional inequalities and renders a verdict.

    VIOLATED iff some objective beats config.violation_threshold; witnesses
    are machine-checkable via evaluate_inequality. CONSISTENT claims only
    that the search found nothing. If the independent parallelogram probe
    finds a defect above 1e-6 while the verdict stays CONSISTENT, the
    verdict is flagged as discrepant (search insufficiency).
    """
    t0 = time.perf_counter()
    per = {}
    for objective in CONDITIONAL_IDS:
        per[objective] = violation_search(spec, objective, config, workers=workers)
    pg = parallelogram_defect_search(
        spec, side_budget, config.seed, radius_range=config.radius_range
    )
    dw = dw_constant_estimate(
        spec, side_budget, config.seed, radius_range=config.radius_range
    )
    violated = any(
        r.best_violation > config.violation_threshold for r in per.values()
    )
    verdict = VIOLATED if violated else CONSISTENT
    flagged = (not violated) and pg.value > _PG_DISCREPANCY
    return DetectionVerdict(
        verdict=verdict,
        per_objective=per,
        parallelogram=pg,
        dw_estimate=dw,
        discrepancy_flagged=flagged,
        config=config,
        wall_time_s=time.perf_counter() - t0,
    )
