"""Catalog of norm inequalities with a shared lhs <= rhs convention.

Every check reports slack = rhs - lhs, so a negative slack is a violation.
Six of the nine hold in every normed space; N_ORDERING, ALPHA_BETA and
LORCH can fail exactly when the norm does not come from an inner product,
which is what the search module exploits.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import NormGeoError, ZeroVectorError
from .norms import (
    DEFAULT_RADIUS_RANGE,
    DEFAULT_TOL,
    _norm_rows,
    norm_eval,
    sample_points,
    stream,
)


class InequalityId(str, enum.Enum):
    MALIGRANDA_UPPER = "MALIGRANDA_UPPER"
    MALIGRANDA_LOWER = "MALIGRANDA_LOWER"
    ANGULAR_LOWER = "ANGULAR_LOWER"
    ANGULAR_UPPER = "ANGULAR_UPPER"
    MASSERA_SCHAFFER = "MASSERA_SCHAFFER"
    DUNKL_WILLIAMS_4 = "DUNKL_WILLIAMS_4"
    N_ORDERING = "N_ORDERING"
    ALPHA_BETA = "ALPHA_BETA"
    LORCH = "LORCH"


UNIVERSAL_IDS = (
    InequalityId.MALIGRANDA_UPPER,
    InequalityId.MALIGRANDA_LOWER,
    InequalityId.ANGULAR_LOWER,
    InequalityId.ANGULAR_UPPER,
    InequalityId.MASSERA_SCHAFFER,
    InequalityId.DUNKL_WILLIAMS_4,
)

CONDITIONAL_IDS = (
    InequalityId.N_ORDERING,
    InequalityId.ALPHA_BETA,
    InequalityId.LORCH,
)

_GAMMA_BAND = (0.125, 8.0)
_BATCH_STREAM = 1
_BATCH_BLOCK = 1 << 13


@dataclass(frozen=True)
class Witness:
    x: np.ndarray
    y: np.ndarray
    t: float | None = None
    gamma: float | None = None

    def to_dict(self):
        return {
            "x": [float(v) for v in self.x],
            "y": [float(v) for v in self.y],
            "t": self.t,
            "gamma": self.gamma,
        }


@dataclass(frozen=True)
class InequalityReport:
    id: InequalityId
    lhs: float
    rhs: float
    slack: float
    witness: Witness
    universal: bool

    def to_dict(self):
        return {
            "id": self.id.value,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "witness": self.witness.to_dict(),
            "universal": self.universal,
        }


def _lhs_rhs(iq, spec, x, y, t=None, gamma=None):
    """Formula table. Callers own argument validation; the search hot path
    and evaluate_inequality both land here so witnesses replay exactly."""
    if iq is InequalityId.N_ORDERING:
        nx = norm_eval(spec, x)
        ny = norm_eval(spec, y)
        if nx > ny:
            x, y = y, x
        return norm_eval(spec, x + t * y), norm_eval(spec, y + t * x)
    if iq is InequalityId.LORCH:
        inv = 1.0 / gamma
        return norm_eval(spec, x + y), norm_eval(spec, gamma * x + inv * y)
    nx = norm_eval(spec, x)
    ny = norm_eval(spec, y)
    if not nx > 0.0 or not ny > 0.0:
        raise ZeroVectorError(f"{iq.value} needs nonzero x and y")
    u = x / nx
    v = y / ny
    if iq is InequalityId.MALIGRANDA_UPPER:
        return (
            norm_eval(spec, x + y),
            nx + ny - (2.0 - norm_eval(spec, u + v)) * min(nx, ny),
        )
    if iq is InequalityId.MALIGRANDA_LOWER:
        return (
            nx + ny - (2.0 - norm_eval(spec, u + v)) * max(nx, ny),
            norm_eval(spec, x + y),
        )
    alpha = norm_eval(spec, u - v)
    if iq is InequalityId.ANGULAR_LOWER:
        return (norm_eval(spec, x - y) - abs(nx - ny)) / min(nx, ny), alpha
    if iq is InequalityId.ANGULAR_UPPER:
        return alpha, (norm_eval(spec, x - y) + abs(nx - ny)) / max(nx, ny)
    if iq is InequalityId.MASSERA_SCHAFFER:
        return alpha, 2.0 * norm_eval(spec, x - y) / max(nx, ny)
    if iq is InequalityId.DUNKL_WILLIAMS_4:
        return alpha, 4.0 * norm_eval(spec, x - y) / (nx + ny)
    if iq is InequalityId.ALPHA_BETA:
        return alpha, norm_eval(spec, x / ny - y / nx)
    raise NormGeoError(f"unknown inequality id {iq!r}")


def evaluate_inequality(iq, spec, x, y, t=None, gamma=None):
    """Evaluate one inequality at a concrete witness and report the slack."""
    iq = InequalityId(iq)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if iq is InequalityId.N_ORDERING:
        if t is None:
            raise NormGeoError("N_ORDERING needs t")
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise NormGeoError(f"N_ORDERING needs t in [0, 1], got {t}")
    elif t is not None:
        raise NormGeoError(f"{iq.value} takes no t")
    if iq is InequalityId.LORCH:
        if gamma is None:
            raise NormGeoError("LORCH needs gamma")
        gamma = float(gamma)
        if gamma == 0.0 or not math.isfinite(gamma):
            raise NormGeoError(f"LORCH needs finite nonzero gamma, got {gamma}")
        nx = norm_eval(spec, x)
        ny = norm_eval(spec, y)
        if abs(nx - ny) > DEFAULT_TOL.equal_norm_rel * max(nx, ny):
            raise NormGeoError(
                f"LORCH needs ||x|| = ||y|| (got {nx:.17g} vs {ny:.17g}); "
                "rescale before calling"
            )
    elif gamma is not None:
        raise NormGeoError(f"{iq.value} takes no gamma")
    lhs, rhs = _lhs_rhs(iq, spec, x, y, t=t, gamma=gamma)
    return InequalityReport(
        id=iq,
        lhs=lhs,
        rhs=rhs,
        slack=rhs - lhs,
        witness=Witness(x=x.copy(), y=y.copy(), t=t, gamma=gamma),
        universal=iq in UNIVERSAL_IDS,
    )


def _batch_lhs_rhs(iq, spec, xs, ys, ts=None, gammas=None):
    """Vectorized twin of _lhs_rhs over row stacks."""
    if iq is InequalityId.N_ORDERING:
        nx = _norm_rows(spec, xs)
        ny = _norm_rows(spec, ys)
        swap = nx > ny
        a = np.where(swap[:, None], ys, xs)
        b = np.where(swap[:, None], xs, ys)
        tt = ts[:, None]
        return _norm_rows(spec, a + tt * b), _norm_rows(spec, b + tt * a)
    if iq is InequalityId.LORCH:
        g = gammas[:, None]
        return (
            _norm_rows(spec, xs + ys),
            _norm_rows(spec, g * xs + (1.0 / g) * ys),
        )
    nx = _norm_rows(spec, xs)
    ny = _norm_rows(spec, ys)
    u = xs / nx[:, None]
    v = ys / ny[:, None]
    if iq is InequalityId.MALIGRANDA_UPPER:
        return (
            _norm_rows(spec, xs + ys),
            nx + ny - (2.0 - _norm_rows(spec, u + v)) * np.minimum(nx, ny),
        )
    if iq is InequalityId.MALIGRANDA_LOWER:
        return (
            nx + ny - (2.0 - _norm_rows(spec, u + v)) * np.maximum(nx, ny),
            _norm_rows(spec, xs + ys),
        )
    alpha = _norm_rows(spec, u - v)
    if iq is InequalityId.ANGULAR_LOWER:
        lhs = (_norm_rows(spec, xs - ys) - np.abs(nx - ny)) / np.minimum(nx, ny)
        return lhs, alpha
    if iq is InequalityId.ANGULAR_UPPER:
        rhs = (_norm_rows(spec, xs - ys) + np.abs(nx - ny)) / np.maximum(nx, ny)
        return alpha, rhs
    if iq is InequalityId.MASSERA_SCHAFFER:
        return alpha, 2.0 * _norm_rows(spec, xs - ys) / np.maximum(nx, ny)
    if iq is InequalityId.DUNKL_WILLIAMS_4:
        return alpha, 4.0 * _norm_rows(spec, xs - ys) / (nx + ny)
    if iq is InequalityId.ALPHA_BETA:
        return alpha, _norm_rows(spec, xs / ny[:, None] - ys / nx[:, None])
    raise NormGeoError(f"unknown inequality id {iq!r}")


def default_t_strategy(rng, count):
    return rng.uniform(0.0, 1.0, count)


def default_gamma_strategy(rng, count):
    lo, hi = _GAMMA_BAND
    g = np.exp(rng.uniform(math.log(lo), math.log(hi), count))
    return g * np.where(rng.random(count) < 0.5, -1.0, 1.0)


@dataclass(frozen=True)
class BatchResult:
    report: InequalityReport
    trials: int
    seed: int
    trial_index: int
    min_normalized_slack: float

    def to_dict(self):
        out = self.report.to_dict()
        out["trials"] = self.trials
        out["seed"] = self.seed
        out["trial_index"] = self.trial_index
        out["min_normalized_slack"] = self.min_normalized_slack
        return out


def _batch_block(iq, spec, seed, block_index, start, count, t_strategy, gamma_strategy):
    rng = stream(seed, _BATCH_STREAM, block_index)
    xs = sample_points(spec.dim, rng, count, DEFAULT_RADIUS_RANGE)
    ys = sample_points(spec.dim, rng, count, DEFAULT_RADIUS_RANGE)
    ts = gammas = None
    if iq is InequalityId.N_ORDERING:
        ts = t_strategy(rng, count)
    elif iq is InequalityId.LORCH:
        gammas = gamma_strategy(rng, count)
        nx = _norm_rows(spec, xs)
        ny = _norm_rows(spec, ys)
        ys = ys * (nx / ny)[:, None]
    lhs, rhs = _batch_lhs_rhs(iq, spec, xs, ys, ts=ts, gammas=gammas)
    slack = rhs - lhs
    normalized = slack / (1.0 + np.abs(lhs) + np.abs(rhs))
    i = int(np.argmin(slack))
    return (
        float(slack[i]),
        start + i,
        xs[i],
        ys[i],
        None if ts is None else float(ts[i]),
        None if gammas is None else float(gammas[i]),
        float(normalized.min()),
    )


def batch_min_slack(
    iq,
    spec,
    trials,
    seed,
    dim=None,
    t_strategy=None,
    gamma_strategy=None,
    workers=1,
):
    """Sample trials random pairs and return the report with minimal slack.

    Trials are split into fixed-size blocks, each with its own seed-derived
    stream, so the result is byte-identical for any worker count. Ties go to
    the earliest trial. LORCH pairs are made equal-norm by rescaling the
    second sample; t is uniform on [0,1] and gamma log-uniform on
    +-[1/8, 8] unless custom strategies are given.
    """
    iq = InequalityId(iq)
    if trials < 1:
        raise NormGeoError("trials must be >= 1")
    if dim is not None and dim != spec.dim:
        raise NormGeoError(f"dim {dim} does not match norm dim {spec.dim}")
    t_strategy = t_strategy or default_t_strategy
    gamma_strategy = gamma_strategy or default_gamma_strategy
    blocks = []
    start = 0
    b = 0
    while start < trials:
        count = min(_BATCH_BLOCK, trials - start)
        blocks.append((b, start, count))
        start += count
        b += 1

    def run(block):
        b, start, count = block
        return _batch_block(
            iq, spec, seed, b, start, count, t_strategy, gamma_strategy
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, blocks))
    else:
        results = [run(block) for block in blocks]

    best = None
    min_norm_slack = math.inf
    for res in results:
        slack, index, x, y, t, gamma, block_norm = res
        min_norm_slack = min(min_norm_slack, block_norm)
        if best is None or slack < best[0] or (slack == best[0] and index < best[1]):
            best = res
    _, index, x, y, t, gamma, _ = best
    report = evaluate_inequality(iq, spec, x, y, t=t, gamma=gamma)
    return BatchResult(
        report=report,
        trials=trials,
        seed=seed,
        trial_index=index,
        min_normalized_slack=min_norm_slack,
    )
