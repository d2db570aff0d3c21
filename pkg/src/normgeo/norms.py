"""Norm families on R^n: evaluation, validation, and pair sampling.

Three kinds are supported: LP (p >= 1, p = +inf means the max norm),
WEIGHTED_LP (positive weights), and QUADRATIC (sqrt(x' G x) for an SPD
gram matrix G, certified by a triangular factorization).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    GramValidationError,
    NormSpecError,
)

LP = "lp"
WEIGHTED_LP = "weighted_lp"
QUADRATIC = "quadratic"

DEFAULT_RADIUS_RANGE = (0.5, 4.0)

_AXIOM_STREAM = 0
_BLOCK = 1 << 14


@dataclass(frozen=True)
class Tolerances:
    """Default tolerances, kept in one place instead of scattered literals."""

    axiom_rel: float = 1e-9
    gram_symmetry_rel: float = 1e-12
    order_tie_rel: float = 1e-12
    equal_norm_rel: float = 1e-9
    derivative_agree_rel: float = 1e-7
    derivative_step_floor: float = 1e-10
    dw_separation_rel: float = 1e-8


DEFAULT_TOL = Tolerances()


def _freeze(a):
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class NormSpec:
    """Validated description of one norm. Construction rejects bad input."""

    kind: str
    dim: int
    p: float | None = None
    weights: np.ndarray | None = None
    gram: np.ndarray | None = None
    chol: np.ndarray | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.dim, int) or isinstance(self.dim, bool) or self.dim < 1:
            raise NormSpecError(f"dim must be a positive integer, got {self.dim!r}")
        if self.kind in (LP, WEIGHTED_LP):
            p = self.p
            if isinstance(p, bool) or not isinstance(p, (int, float)):
                raise NormSpecError(f"p must be a number or inf, got {p!r}")
            p = float(p)
            if math.isnan(p) or p < 1.0:
                raise NormSpecError(f"p must satisfy p >= 1, got {p}")
            object.__setattr__(self, "p", p)
        if self.kind == LP:
            if self.weights is not None or self.gram is not None:
                raise NormSpecError("lp norm takes no weights or gram")
        elif self.kind == WEIGHTED_LP:
            if self.gram is not None:
                raise NormSpecError("weighted_lp norm takes no gram")
            w = np.asarray(self.weights, dtype=float)
            if w.ndim != 1 or w.size != self.dim:
                raise NormSpecError("weights must be a flat list of length dim")
            if not np.all(np.isfinite(w)) or not np.all(w > 0.0):
                raise NormSpecError("weights must be finite and strictly positive")
            object.__setattr__(self, "weights", _freeze(w))
        elif self.kind == QUADRATIC:
            if self.p is not None or self.weights is not None:
                raise NormSpecError("quadratic norm takes only a gram matrix")
            g = np.asarray(self.gram, dtype=float)
            if g.shape != (self.dim, self.dim):
                raise NormSpecError(
                    f"gram must be {self.dim}x{self.dim}, got shape {g.shape}"
                )
            chol = gram_validate(g)
            object.__setattr__(self, "gram", _freeze(g))
            object.__setattr__(self, "chol", _freeze(chol))
        else:
            raise NormSpecError(f"unknown norm kind {self.kind!r}")


def lp_norm(p, dim):
    """LP norm spec; p may be math.inf for the max norm."""
    return NormSpec(kind=LP, dim=dim, p=p)


def weighted_lp_norm(p, weights):
    w = np.asarray(weights, dtype=float)
    return NormSpec(kind=WEIGHTED_LP, dim=int(w.size), p=p, weights=w)


def quadratic_norm(gram):
    g = np.asarray(gram, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise NormSpecError(f"gram must be square, got shape {g.shape}")
    return NormSpec(kind=QUADRATIC, dim=int(g.shape[0]), gram=g)


def gram_validate(gram, sym_rel_tol=None):
    """Certify that a matrix is SPD; return the lower-triangular factor.

    Elimination proceeds pivot by pivot so a failure can report exactly
    which pivot went nonpositive (e.g. [[1,2],[2,1]] fails at index 1
    with pivot -3). Symmetry is required up to a relative tolerance.
    """
    tol = DEFAULT_TOL.gram_symmetry_rel if sym_rel_tol is None else sym_rel_tol
    a = np.asarray(gram, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise GramValidationError(f"gram must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise GramValidationError("gram has nonfinite entries")
    scale = float(np.abs(a).max()) if a.size else 0.0
    asym = float(np.abs(a - a.T).max())
    if asym > tol * max(scale, 1e-300):
        raise GramValidationError(
            f"gram is not symmetric: max |G - G'| = {asym:.3e} "
            f"exceeds {tol:.1e} * {scale:.3e}"
        )
    n = a.shape[0]
    work = a.copy()
    factor = np.zeros_like(work)
    for k in range(n):
        pivot = work[k, k]
        if not pivot > 0.0:
            raise GramValidationError(
                f"gram is not positive definite: pivot {pivot:.6g} at index {k}",
                pivot_index=k,
                pivot=float(pivot),
            )
        d = math.sqrt(pivot)
        factor[k, k] = d
        if k + 1 < n:
            col = work[k + 1 :, k] / d
            factor[k + 1 :, k] = col
            work[k + 1 :, k + 1 :] -= np.outer(col, col)
    return factor


def norm_eval(spec, x):
    """Evaluate the norm. Accepts a vector or an (..., dim) stack of vectors.

    Returns a float for a single vector, an array of norms otherwise.
    The zero vector maps to exactly 0.0.
    """
    v = np.asarray(x, dtype=float)
    if v.ndim == 0 or v.shape[-1] != spec.dim:
        raise DimensionMismatchError(
            f"expected vectors of length {spec.dim}, got shape {v.shape}"
        )
    out = _norm_rows(spec, v)
    return float(out) if v.ndim == 1 else out


def _norm_rows(spec, v):
    # Shared by the scalar and the vectorized callers so both take the
    # same arithmetic path.
    if spec.kind == QUADRATIC:
        z = v @ spec.chol
        return np.sqrt((z * z).sum(axis=-1))
    a = np.abs(v)
    w = spec.weights
    p = spec.p
    if p == math.inf:
        # Weighted sup norm: the weights stay meaningful at p = inf.
        return (a if w is None else w * a).max(axis=-1)
    if p == 1.0:
        return (a if w is None else w * a).sum(axis=-1)
    if p == 2.0:
        sq = a * a
        return np.sqrt((sq if w is None else w * sq).sum(axis=-1))
    # General p: rescale by the largest coordinate before exponentiation so
    # large p cannot overflow; an all-zero row stays exactly 0.
    m = a.max(axis=-1, keepdims=True)
    safe = np.where(m > 0.0, m, 1.0)
    r = (a / safe) ** p
    s = (r if w is None else w * r).sum(axis=-1) ** (1.0 / p)
    return m[..., 0] * s


def as_vector(x, dim=None):
    """Coerce to a finite 1-D float vector; used at API boundaries."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise NormSpecError(f"expected a flat vector, got shape {v.shape}")
    if dim is not None and v.size != dim:
        raise DimensionMismatchError(f"expected length {dim}, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise NormSpecError("vector has nonfinite entries")
    return v


def stream(seed, *key):
    """Deterministic child generator for (seed, key...). Worker-count free."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def sample_points(dim, rng, count, radius_range=DEFAULT_RADIUS_RANGE):
    """Isotropic directions with log-uniform Euclidean magnitudes.

    Directions come from normalized standard normals; magnitudes are
    log-uniform in [r_lo, r_hi]. Never returns a zero vector.
    """
    r_lo, r_hi = float(radius_range[0]), float(radius_range[1])
    if not (0.0 < r_lo <= r_hi) or not math.isfinite(r_hi):
        raise NormSpecError(f"bad radius range {radius_range!r}")
    dirs = rng.standard_normal((count, dim))
    norms = np.sqrt((dirs * dirs).sum(axis=1))
    while True:
        bad = norms < 1e-12
        if not bad.any():
            break
        dirs[bad] = rng.standard_normal((int(bad.sum()), dim))
        norms[bad] = np.sqrt((dirs[bad] * dirs[bad]).sum(axis=1))
    radii = np.exp(rng.uniform(math.log(r_lo), math.log(r_hi), count))
    return dirs * (radii / norms)[:, None]


def sample_pair(dim, rng, radius_range=DEFAULT_RADIUS_RANGE):
    pts = sample_points(dim, rng, 2, radius_range)
    return pts[0], pts[1]


@dataclass(frozen=True)
class AxiomReport:
    trials: int
    worst_homogeneity_defect: float
    worst_triangle_slack: float
    worst_positivity: float
    passed: bool
    seed: int

    def to_dict(self):
        return {
            "trials": self.trials,
            "worst_homogeneity_defect": self.worst_homogeneity_defect,
            "worst_triangle_slack": self.worst_triangle_slack,
            "worst_positivity": self.worst_positivity,
            "passed": self.passed,
            "seed": self.seed,
        }


def validate_norm_axioms(spec, trials, seed, tol=None):
    """Sampled smoke test of the norm axioms.

    Records the worst relative homogeneity defect |n(lx)-|l|n(x)|, the worst
    relative triangle slack n(x)+n(y)-n(x+y), and the smallest norm seen over
    nonzero samples. Deterministic for a fixed seed.
    """
    if trials < 1:
        raise NormSpecError("trials must be >= 1")
    tol = DEFAULT_TOL.axiom_rel if tol is None else float(tol)
    worst_h = 0.0
    worst_t = math.inf
    worst_p = math.inf
    done = 0
    block = 0
    while done < trials:
        n_b = min(_BLOCK, trials - done)
        rng = stream(seed, _AXIOM_STREAM, block)
        xs = sample_points(spec.dim, rng, n_b)
        ys = sample_points(spec.dim, rng, n_b)
        lam = np.exp(rng.uniform(math.log(1e-2), math.log(1e2), n_b))
        lam *= np.where(rng.random(n_b) < 0.5, -1.0, 1.0)
        nx = _norm_rows(spec, xs)
        ny = _norm_rows(spec, ys)
        nlx = _norm_rows(spec, lam[:, None] * xs)
        hom = np.abs(nlx - np.abs(lam) * nx) / (1.0 + np.abs(lam) * nx)
        tri = (nx + ny - _norm_rows(spec, xs + ys)) / (1.0 + nx + ny)
        worst_h = max(worst_h, float(hom.max()))
        worst_t = min(worst_t, float(tri.min()))
        worst_p = min(worst_p, float(nx.min()), float(ny.min()))
        done += n_b
        block += 1
    passed = worst_t >= -tol and worst_h <= tol and worst_p >= 0.0
    return AxiomReport(
        trials=trials,
        worst_homogeneity_defect=worst_h,
        worst_triangle_slack=worst_t,
        worst_positivity=worst_p,
        passed=passed,
        seed=seed,
    )


_KEYS = {
    LP: {"kind", "p", "dim"},
    WEIGHTED_LP: {"kind", "p", "weights", "dim"},
    QUADRATIC: {"kind", "gram", "dim"},
}


def _parse_p(raw):
    if isinstance(raw, str):
        if raw.strip().lower() == "inf":
            return math.inf
        raise NormSpecError(f'p must be a number or "inf", got {raw!r}')
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise NormSpecError(f'p must be a number or "inf", got {raw!r}')
    return float(raw)


def parse_norm_spec(obj):
    """Build a NormSpec from a parsed JSON object; unknown keys are rejected."""
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise NormSpecError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise NormSpecError("norm spec must be a JSON object")
    kind = obj.get("kind")
    if kind not in _KEYS:
        raise NormSpecError(f"unknown norm kind {kind!r}")
    extra = set(obj) - _KEYS[kind]
    missing = _KEYS[kind] - set(obj)
    if extra:
        raise NormSpecError(f"unknown keys for kind {kind!r}: {sorted(extra)}")
    if missing:
        raise NormSpecError(f"missing keys for kind {kind!r}: {sorted(missing)}")
    dim = obj["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise NormSpecError(f"dim must be an integer, got {dim!r}")
    if kind == LP:
        return lp_norm(_parse_p(obj["p"]), dim)
    if kind == WEIGHTED_LP:
        spec = weighted_lp_norm(_parse_p(obj["p"]), obj["weights"])
        if spec.dim != dim:
            raise NormSpecError(
                f"dim {dim} does not match {spec.dim} weights"
            )
        return spec
    spec = quadratic_norm(obj["gram"])
    if spec.dim != dim:
        raise NormSpecError(f"dim {dim} does not match gram shape {spec.dim}")
    return spec


def load_norm_spec(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_norm_spec(fh.read())


def spec_to_dict(spec):
    """JSON-ready echo of a spec (p = inf serializes as the string "inf")."""
    if spec.kind == LP:
        p = "inf" if spec.p == math.inf else spec.p
        return {"kind": LP, "p": p, "dim": spec.dim}
    if spec.kind == WEIGHTED_LP:
        p = "inf" if spec.p == math.inf else spec.p
        return {
            "kind": WEIGHTED_LP,
            "p": p,
            "weights": [float(w) for w in spec.weights],
            "dim": spec.dim,
        }
    return {
        "kind": QUADRATIC,
        "gram": [[float(g) for g in row] for row in spec.gram],
        "dim": spec.dim,
    }
