"""Scaling sweeps, exponent fits and a small hill-climbing search."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .constructions import ConstructionOutput, generate
from .counting import ChainQuery, Pin, count_chains, count_pairs_at_distance, query
from .errors import BudgetExceeded, DegenerateFit, InvalidParams, QueryInvalid
from .geometry import AngleSpec, PointSet


@dataclass
class SweepSample:
    n: int
    count: int
    construction: str
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"n": self.n, "count": str(self.count), "construction": self.construction,
                "params": self.params}


@dataclass
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    samples_used: int

    def to_json(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r_squared": self.r_squared,
                "samples_used": self.samples_used}


@dataclass
class SearchState:
    best_points: PointSet
    best_score: float
    iterations: int
    seed: int
    best_count: int = 0
    initial_score: float = 0.0
    history: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"best_score": self.best_score, "best_count": str(self.best_count),
                "initial_score": self.initial_score, "iterations": self.iterations,
                "seed": self.seed, "history": self.history, "params": self.params,
                "points": [list(p) for p in self.best_points.points]}


# --------------------------------------------------------------------------
# Sweeps and fits.
# --------------------------------------------------------------------------


def default_query(out: ConstructionOutput, distinctness: str = "local", method: str = "auto") -> Optional[ChainQuery]:
    """The chain query a construction is designed for (None for the distance family)."""
    if not out.angle_type:
        return None
    mode = out.params.get("pin_mode")
    pin = None
    if mode == "first":
        pin = Pin("first", out.points.pin)
    elif mode == "middle":
        pin = Pin("middle", out.points.pin)
    return query(out.angle_type, pin=pin, distinctness=distinctness, method=method)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, AngleSpec):
        return v.label()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


_SUMMARY_KEYS = ("m", "k", "c", "spacing", "orientation", "rays", "grid", "lines", "pivots", "h", "pinned")


def scaling_sweep(construction: str, n_grid: Sequence[int], q: Optional[ChainQuery] = None,
                  params: Optional[dict] = None, distance: Optional[float] = None,
                  tol: float = 1e-9) -> list:
    """Generate ``construction`` at each n and count.

    With ``q`` None the construction's own angle type and pin are used
    (local distinctness); the distance family counts pairs at
    ``distance`` (default sqrt 2).
    """
    grid = [int(n) for n in n_grid]
    if len(grid) < 2:
        raise InvalidParams("n_grid needs at least two sizes")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidParams("n_grid must be strictly increasing")
    params = dict(params or {})
    out = []
    for n in grid:
        c = generate(construction, n, **params)
        if q is None and not c.angle_type:
            d = distance if distance is not None else c.params.get("distance", math.sqrt(2))
            cnt = count_pairs_at_distance(c.points, d, tol)
        else:
            qq = q if q is not None else default_query(c)
            if qq.pin is not None and qq.pin.index is None:
                qq = ChainQuery(qq.angles, Pin(qq.pin.kind, c.points.pin), qq.distinctness,
                                qq.method, qq.allow_duplicates)
            cnt = count_chains(c.points, qq).count
        # scalar-ish metadata only; index lists belong in generate output
        summary = {k: _jsonable(c.params[k]) for k in _SUMMARY_KEYS
                   if k in c.params and not (k == "lines" and isinstance(c.params[k], list))}
        summary["points"] = len(c.points)
        summary["claimed_exponent"] = str(c.claimed_exponent)
        out.append(SweepSample(n, int(cnt), construction, summary))
    return out


def fit_exponent(samples: Sequence) -> FitResult:
    """OLS slope of ln(count) against ln(n).

    Accepts SweepSample objects or (n, count) pairs.
    """
    pairs = [(s.n, s.count) if isinstance(s, SweepSample) else (s[0], s[1]) for s in samples]
    if len(pairs) < 2:
        raise DegenerateFit("need at least two samples")
    if any(c <= 0 for _, c in pairs):
        raise DegenerateFit("every count must be positive")
    x = np.array([math.log(n) for n, _ in pairs])
    y = np.array([math.log(c) for _, c in pairs])
    if np.all(x == x[0]):
        raise DegenerateFit("all sample sizes are equal")
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    sxy = float(np.sum((x - xm) * (y - ym)))
    syy = float(np.sum((y - ym) ** 2))
    slope = sxy / sxx
    intercept = float(ym - slope * xm)
    r2 = 1.0 if syy == 0.0 else (sxy * sxy) / (sxx * syy)
    return FitResult(float(slope), intercept, min(1.0, max(0.0, r2)), len(pairs))


# --------------------------------------------------------------------------
# Hill climbing.
# --------------------------------------------------------------------------


def _lattice_start(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    side = 1
    while side ** d < n:
        side += 1
    cells = np.array(np.unravel_index(rng.choice(side ** d, size=n, replace=False), (side,) * d)).T
    pts = cells.astype(np.int64)
    # nudge a few points off the lattice while keeping them distinct
    seen = {tuple(p) for p in pts}
    for i in rng.choice(n, size=max(1, n // 4), replace=False):
        step = rng.integers(-1, 2, size=d)
        cand = tuple(int(v) for v in pts[i] + step)
        if cand not in seen:
            seen.discard(tuple(pts[i]))
            seen.add(cand)
            pts[i] = cand
    return pts


def _min_distance(P: np.ndarray) -> float:
    diff = P[:, None, :] - P[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff).astype(float)
    np.fill_diagonal(d2, np.inf)
    return float(np.sqrt(d2.min()))


def _lattice_unit(P: np.ndarray) -> int:
    # gcd of all coordinate offsets: moves by multiples of it keep the set on
    # its own lattice and commute with translation and integer scaling
    diffs = np.abs(P - P[0]).ravel()
    g = int(np.gcd.reduce(diffs)) if diffs.size else 0
    return g if g > 0 else 1


def _to_pointset(P: np.ndarray) -> PointSet:
    if P.dtype.kind in "iu":
        return PointSet(P.shape[1], tuple(tuple(int(v) for v in row) for row in P))
    return PointSet(P.shape[1], tuple(tuple(float(v) for v in row) for row in P))


def search_extremal(d: int, n: int, angles: Sequence[AngleSpec], iters: int, seed: int,
                    target_exponent=Fraction(3), start: str = "lattice", distinctness: str = "local",
                    op_limit: int = 10 ** 9, initial: Optional[PointSet] = None) -> SearchState:
    """Single-point-move hill climbing on count / n^target_exponent.

    A proposal moves one point by ``h * rint(N(0, sigma))`` per coordinate,
    where ``h`` is the starting configuration's step unit (1 on a lattice,
    the minimum pairwise distance otherwise).  Ties are accepted so the
    walk can cross plateaus; sigma shrinks on acceptance and grows on
    rejection.
    """
    if d < 2:
        raise InvalidParams("d must be at least 2")
    if n > 64:
        raise QueryInvalid("search is limited to n <= 64")
    if n < len(angles) + 2:
        raise InvalidParams("n must be at least k+2")
    if iters < 0:
        raise InvalidParams("iters must be nonnegative")
    if start not in ("lattice", "random"):
        raise InvalidParams("start must be 'lattice' or 'random'")
    k = len(angles)
    if k * n ** 3 > op_limit:
        raise BudgetExceeded(f"k*n^3 = {k * n ** 3} exceeds op limit {op_limit}")
    rng = np.random.default_rng(seed)
    if initial is not None:
        if initial.dim != d or len(initial) != n:
            raise InvalidParams("initial configuration does not match d and n")
        if initial.is_exact:
            P = np.array(initial.exact_array.tolist(), dtype=np.int64)
            h = _lattice_unit(P)
        else:
            P = initial.as_array().copy()
            h = _min_distance(P)
    elif start == "lattice":
        P = _lattice_start(d, n, rng)
        h = 1
    else:
        P = rng.normal(size=(n, d))
        h = _min_distance(P)
    q = query(angles, distinctness=distinctness, method="dp" if distinctness == "local" else "brute")
    norm = float(n) ** float(target_exponent)

    def score(arr):
        c = count_chains(_to_pointset(arr), q).count
        return c, c / norm

    cur_count, cur = score(P)
    init = cur
    best_P, best_count, best = P.copy(), cur_count, cur
    sigma = 1.0
    history = [best]
    occupied = {tuple(row) for row in P.tolist()}
    for _ in range(iters):
        i = int(rng.integers(n))
        step = np.rint(rng.normal(0.0, sigma, size=d))
        if not step.any():
            step[int(rng.integers(d))] = rng.choice((-1.0, 1.0))
        if P.dtype.kind in "iu":
            cand_pt = P[i] + (h * step).astype(P.dtype)
        else:
            cand_pt = P[i] + h * step
        key = tuple(cand_pt.tolist())
        if key in occupied:
            sigma = min(sigma * 1.1, 8.0)
            history.append(best)
            continue
        Q = P.copy()
        Q[i] = cand_pt
        c, s = score(Q)
        if s >= cur:
            occupied.discard(tuple(P[i].tolist()))
            occupied.add(key)
            P, cur, cur_count = Q, s, c
            sigma = max(sigma * 0.9, 0.5)
            if s > best or (s == best and c >= best_count):
                best_P, best, best_count = Q.copy(), s, c
        else:
            sigma = min(sigma * 1.1, 8.0)
        history.append(best)
    return SearchState(_to_pointset(best_P), best, iters, seed, best_count, init, history,
                       {"d": d, "n": n, "angles": [a.label() for a in angles], "start": start,
                        "target_exponent": str(Fraction(target_exponent)), "distinctness": distinctness,
                        "step_unit": h if isinstance(h, int) else float(h)})
