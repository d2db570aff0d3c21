"""Angular-type distances between nonzero vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroVectorError
from .norms import norm_eval


def _norms_checked(spec, x, y):
    nx = norm_eval(spec, x)
    ny = norm_eval(spec, y)
    if not nx > 0.0 or not ny > 0.0:
        raise ZeroVectorError("angular distances need nonzero x and y")
    return nx, ny


def angular_distance(spec, x, y):
    """|| x/||x|| - y/||y|| ||, the gap between the normalized directions."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx, ny = _norms_checked(spec, x, y)
    return norm_eval(spec, x / nx - y / ny)


def skew_angular_distance(spec, x, y):
    """|| x/||y|| - y/||x|| ||, each vector scaled by the other's norm."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx, ny = _norms_checked(spec, x, y)
    return norm_eval(spec, x / ny - y / nx)


@dataclass(frozen=True)
class DistancePair:
    alpha: float
    beta: float
    norm_x: float
    norm_y: float


def distance_pair(spec, x, y):
    """Both distances plus the two norms in one record.

    Values are raw: alpha may overshoot 2 by rounding and is never clamped
    here.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx, ny = _norms_checked(spec, x, y)
    return DistancePair(
        alpha=norm_eval(spec, x / nx - y / ny),
        beta=norm_eval(spec, x / ny - y / nx),
        norm_x=nx,
        norm_y=ny,
    )
