"""Chain, triple, distance and rich-line counters.

Three routes count angle chains:

* :func:`count_chains_bruteforce` walks every tuple (with early rejection of
  failed prefixes) and is the reference for everything else;
* :func:`count_chains_dp` counts walks on ordered pairs, one transition per
  angle, and only supports per-window ("local") distinctness;
* :func:`count_triples_planar_fast` handles single angles in the plane by
  bucketing polar directions around each vertex and verifying candidates.

Counts are Python ints.  The DP runs in int64 while a bound proves it safe
and switches to object arrays of Python ints before it could overflow.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicatePoints,
    InvalidParams,
    QueryInvalid,
    UnsupportedSemantics,
)
from .geometry import AngleSpec, PointSet
from .kernels import MatchTables, cosine_row, use_exact

DISTINCTNESS = ("local", "full")
METHODS = ("brute", "dp", "planar_fast", "auto")
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class Pin:
    """Pinned position: ``first`` fixes x_1, ``middle`` fixes x_2 of a triple.

    ``index=None`` means "use the point set's own pin".
    """

    kind: str
    index: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("first", "middle"):
            raise QueryInvalid(f"unknown pin kind {self.kind!r}")

    def resolve(self, E: PointSet) -> int:
        idx = E.pin if self.index is None else self.index
        if idx is None:
            raise QueryInvalid("pin requested but no index given and the point set has no pin")
        if not (0 <= idx < len(E)):
            raise QueryInvalid(f"pin index {idx} out of range for {len(E)} points")
        return idx


@dataclass(frozen=True)
class ChainQuery:
    angles: tuple
    pin: Optional[Pin] = None
    distinctness: str = "full"
    method: str = "auto"
    allow_duplicates: bool = False

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(self.angles))
        if len(self.angles) < 1:
            raise QueryInvalid("a chain needs at least one angle")
        if not all(isinstance(a, AngleSpec) for a in self.angles):
            raise QueryInvalid("angles must be AngleSpec instances")
        if self.distinctness not in DISTINCTNESS:
            raise QueryInvalid(f"distinctness must be one of {DISTINCTNESS}")
        if self.method not in METHODS:
            raise QueryInvalid(f"method must be one of {METHODS}")
        if self.pin is not None and self.pin.kind == "middle" and self.k != 1:
            raise QueryInvalid("a middle pin only applies to single angles (k = 1)")
        if self.method == "planar_fast" and self.k != 1:
            raise QueryInvalid("planar_fast counts single angles only")

    @property
    def k(self) -> int:
        return len(self.angles)

    def reversed(self) -> "ChainQuery":
        return ChainQuery(self.angles[::-1], self.pin, self.distinctness, self.method, self.allow_duplicates)


@dataclass
class CountReport:
    count: int
    method: str
    distinctness: str
    k: int
    n: int
    elapsed: float = 0.0
    witnesses: Optional[list] = None

    def to_json(self, tol: Optional[float] = None, timing: bool = True) -> dict:
        d = {
            "count": str(self.count),
            "n": self.n,
            "k": self.k,
            "method": self.method,
            "distinct": self.distinctness,
        }
        if tol is not None:
            d["tol"] = tol
        if timing:
            d["elapsed_s"] = round(self.elapsed, 6)
        if self.witnesses is not None:
            d["witnesses"] = [list(w) for w in self.witnesses]
        return d


@dataclass
class RichLine:
    direction: tuple
    anchor: tuple
    members: tuple


@dataclass
class RichLineReport:
    r: int
    line_count: int
    lines: Optional[list] = field(default=None)


def _check_points(E: PointSet, allow_duplicates: bool):
    if not allow_duplicates:
        dup = E.duplicates()
        if dup:
            raise DuplicatePoints(
                f"{len(dup)} duplicate point pair(s), first {dup[0]}; pass allow_duplicates to skip degenerate triples"
            )


def _check_dim2(E: PointSet):
    if E.dim != 2:
        raise DimensionMismatch(f"planar counter needs dim = 2, got {E.dim}")


def count_chains_bruteforce(E: PointSet, q: ChainQuery, witnesses: int = 0) -> CountReport:
    """Enumerate ordered (k+2)-tuples and count those realising every angle.

    Prefixes that already fail an angle are abandoned; the last point of each
    surviving prefix is counted from one predicate row.  ``full`` requires all
    k+2 points distinct, ``local`` only the three points of every window.
    """
    t0 = time.perf_counter()
    _check_points(E, q.allow_duplicates)
    n, k = len(E), q.k
    if q.pin is not None and q.pin.kind == "middle":
        spec = q.angles[0]
        rep = count_middle_pinned_triples(E, spec, q.pin.resolve(E), witnesses=witnesses,
                                          allow_duplicates=q.allow_duplicates)
        rep.method = "brute"
        rep.distinctness = q.distinctness
        rep.elapsed = time.perf_counter() - t0
        return rep
    tables = MatchTables(E, q.angles)
    full = q.distinctness == "full"
    firsts = [q.pin.resolve(E)] if q.pin is not None else range(n)
    total = 0
    found: list = []

    def extend(prefix: list, j: int):
        nonlocal total
        a, b = prefix[-2], prefix[-1]
        row = tables.row(a, b, q.angles[j])
        if full and len(prefix) > 2:
            row = row.copy()
            row[prefix[:-2]] = False
        cand = np.flatnonzero(row)
        if j == k - 1:
            total += len(cand)
            if len(found) < witnesses:
                for c in cand[: witnesses - len(found)]:
                    found.append(tuple(prefix) + (int(c),))
            return
        for c in cand:
            prefix.append(int(c))
            extend(prefix, j + 1)
            prefix.pop()

    for x1 in firsts:
        for x2 in range(n):
            if x2 != x1:
                extend([x1, x2], 0)
    return CountReport(total, "brute", q.distinctness, k, n, time.perf_counter() - t0,
                       found if witnesses else None)


def _to_object(M: np.ndarray) -> np.ndarray:
    out = np.empty(M.shape, dtype=object)
    out[...] = [[int(v) for v in row] for row in M.tolist()]
    return out


def count_chains_dp(E: PointSet, q: ChainQuery, witnesses: int = 0) -> CountReport:
    """Walk counting over ordered pairs: (a, b) -> (b, c) when angle(a, b, c) matches.

    Only per-window distinctness can be enforced this way; each window's
    three points are distinct because the match tables exclude a == c and
    degenerate vertices.
    """
    if q.distinctness != "local":
        raise UnsupportedSemantics("the DP counter only supports local distinctness")
    t0 = time.perf_counter()
    _check_points(E, q.allow_duplicates)
    n, k = len(E), q.k
    if q.pin is not None and q.pin.kind == "middle":
        raise QueryInvalid("use count_middle_pinned_triples for a middle pin")
    tables = MatchTables(E, q.angles)
    M = np.zeros((n, n), dtype=np.int64)
    if q.pin is not None:
        i = q.pin.resolve(E)
        M[i, :] = 1
        M[i, i] = 0
    else:
        M[:, :] = 1
        np.fill_diagonal(M, 0)
    for spec in q.angles:
        big = M.dtype == object
        if not big:
            peak = int(M.max()) if M.size else 0
            if peak * n >= _INT64_SAFE:
                M = _to_object(M)
                big = True
        new = np.zeros((n, n), dtype=object if big else np.int64)
        for b in range(n):
            col = M[:, b]
            nz = np.flatnonzero(col)
            if len(nz) == 0:
                continue
            if len(nz) * 8 < n:
                # sparse column (pinned start): rows are cheaper than the table
                T = np.array([tables.row(int(a), b, spec) for a in nz])
            else:
                T = tables.table(b, spec)[nz]
            if big:
                new[b, :] = col[nz].dot(T.astype(object))
            else:
                new[b, :] = col[nz] @ T.astype(np.int64)
        M = new
    total = int(M.sum()) if M.size else 0
    found = _witness_search(E, q, tables, witnesses) if witnesses else None
    return CountReport(total, "dp", "local", k, n, time.perf_counter() - t0, found)


def _witness_search(E: PointSet, q: ChainQuery, tables: MatchTables, limit: int) -> list:
    n, k = len(E), q.k
    full = q.distinctness == "full"
    out: list = []
    firsts = [q.pin.resolve(E)] if q.pin is not None else range(n)

    def walk(prefix, j):
        a, b = prefix[-2], prefix[-1]
        row = tables.table(b, q.angles[j])[a]
        for c in np.flatnonzero(row):
            c = int(c)
            if full and c in prefix:
                continue
            if j == k - 1:
                out.append(tuple(prefix) + (c,))
            else:
                walk(prefix + [c], j + 1)
            if len(out) >= limit:
                return

    for x1 in firsts:
        for x2 in range(n):
            if x2 != x1 and len(out) < limit:
                walk([x1, x2], 0)
    return out


def _angle_window(spec: AngleSpec, pad: float):
    """Unsigned angles whose cosine lies within tol of spec.cosine, padded."""
    lo = math.acos(min(1.0, spec.cosine + spec.tol))
    hi = math.acos(max(-1.0, spec.cosine - spec.tol))
    return max(0.0, lo - pad), min(math.pi, hi + pad)


def count_triples_planar_fast(
    E: PointSet,
    spec: AngleSpec,
    pin: Optional[int] = None,
    witnesses: int = 0,
    allow_duplicates: bool = False,
    pad: float = 1e-7,
) -> CountReport:
    """Single-angle triple count in the plane by direction bucketing.

    Around each vertex the polar angles of the other points are sorted; for
    each first point the two arcs at +-angle are located by binary search and
    every candidate in them is confirmed with the shared predicate, so the
    buckets only prune.  ``pin`` restricts the first point.
    """
    t0 = time.perf_counter()
    _check_dim2(E)
    _check_points(E, allow_duplicates)
    n = len(E)
    P = E.as_array()
    exact = use_exact(E, [spec])
    Z = E.exact_array if exact else None
    lo, hi = _angle_window(spec, pad)
    two_pi = 2.0 * math.pi
    total = 0
    found: list = []
    firsts_all = np.arange(n) if pin is None else np.array([pin])
    for b in range(n):
        others = np.flatnonzero(np.any(P != P[b], axis=1))
        if len(others) < 2:
            continue
        d = P[others] - P[b]
        theta = np.mod(np.arctan2(d[:, 1], d[:, 0]), two_pi)
        order = np.argsort(theta, kind="stable")
        th = theta[order]
        idx = others[order]
        th2 = np.concatenate([th, th + two_pi])
        m = len(th)
        pos = {int(v): i for i, v in enumerate(idx)}
        firsts = [a for a in firsts_all.tolist() if a in pos]
        if not firsts:
            continue
        ta = np.array([theta[np.searchsorted(others, a)] for a in firsts])
        cand_a = []
        cand_c = []
        for sign in (1.0, -1.0):
            if sign > 0:
                start, stop = ta + lo, ta + hi
            else:
                start, stop = ta - hi, ta - lo
            shift = np.floor(start / two_pi) * two_pi
            start = start - shift
            stop = stop - shift
            i0 = np.searchsorted(th2, start, side="left")
            i1 = np.searchsorted(th2, stop, side="right")
            for a, s, e in zip(firsts, i0.tolist(), i1.tolist()):
                if e > s:
                    sel = np.arange(s, min(e, s + m)) % m
                    cand_a.append(np.full(len(sel), a))
                    cand_c.append(idx[sel])
        if not cand_a:
            continue
        ca = np.concatenate(cand_a)
        cc = np.concatenate(cand_c)
        key = np.unique(ca * n + cc)
        ca, cc = key // n, key % n
        keep = ca != cc
        ca, cc = ca[keep], cc[keep]
        if exact:
            ok = _exact_ok(Z, ca, b, cc)
        else:
            ok = _float_ok(P, ca, b, cc, spec)
        hits = int(np.count_nonzero(ok))
        total += hits
        if witnesses and len(found) < witnesses and hits:
            for a, c in zip(ca[ok].tolist(), cc[ok].tolist()):
                if len(found) >= witnesses:
                    break
                found.append((a, b, c))
    return CountReport(total, "planar_fast", "full", 1, n, time.perf_counter() - t0,
                       found if witnesses else None)


def _float_ok(P, ca, b, cc, spec: AngleSpec) -> np.ndarray:
    # same operation order as geometry.angle_cosine
    U = P[ca] - P[b]
    V = P[cc] - P[b]
    dot = U[:, 0] * V[:, 0]
    su = U[:, 0] * U[:, 0]
    sv = V[:, 0] * V[:, 0]
    for i in range(1, P.shape[1]):
        dot = dot + U[:, i] * V[:, i]
        su = su + U[:, i] * U[:, i]
        sv = sv + V[:, i] * V[:, i]
    with np.errstate(divide="ignore", invalid="ignore"):
        cos = dot / (np.sqrt(su) * np.sqrt(sv))
    np.clip(cos, -1.0, 1.0, out=cos)
    with np.errstate(invalid="ignore"):
        return (np.abs(cos - spec.cosine) <= spec.tol) & (su > 0) & (sv > 0)


def _exact_ok(Z, ca, b, cc) -> np.ndarray:
    U = Z[ca] - Z[b]
    V = Z[cc] - Z[b]
    dot = (U * V).sum(axis=1)
    return np.asarray(dot == 0, dtype=bool) & np.any(U != 0, axis=1) & np.any(V != 0, axis=1)


def count_pinned_chains(E: PointSet, q: ChainQuery, witnesses: int = 0) -> CountReport:
    """Chains whose first point is the pinned point.

    Local distinctness goes through the DP (states start at pairs (pin, b)),
    full distinctness through enumeration.
    """
    if q.pin is None or q.pin.kind != "first":
        raise QueryInvalid("count_pinned_chains needs pin = first(index)")
    q.pin.resolve(E)
    if q.method == "auto" and q.k == 1 and E.dim == 2:
        return _planar_from_query(E, q, witnesses)
    if q.method == "brute" or (q.distinctness == "full" and q.k > 1):
        if q.method == "dp":
            raise UnsupportedSemantics("the DP counter only supports local distinctness")
        return count_chains_bruteforce(E, q, witnesses)
    if q.method == "planar_fast":
        return _planar_from_query(E, q, witnesses)
    rep = count_chains_dp(E, _with(q, distinctness="local"), witnesses)
    rep.distinctness = q.distinctness
    return rep


def count_middle_pinned_triples(
    E: PointSet, spec: AngleSpec, pin: int, witnesses: int = 0, allow_duplicates: bool = False
) -> CountReport:
    """Ordered pairs (x1, x3) with the angle at the pinned point realising ``spec``."""
    t0 = time.perf_counter()
    if not (0 <= pin < len(E)):
        raise QueryInvalid(f"pin index {pin} out of range")
    _check_points(E, allow_duplicates)
    T = MatchTables(E, [spec]).table(pin, spec)
    total = int(np.count_nonzero(T))
    found = None
    if witnesses:
        a, c = np.nonzero(T)
        found = [(int(x), pin, int(y)) for x, y in zip(a[:witnesses], c[:witnesses])]
    return CountReport(total, "middle_pinned", "full", 1, len(E), time.perf_counter() - t0, found)


def count_pairs_at_distance(E: PointSet, dist: float, tol: float = 1e-9) -> int:
    """Unordered pairs {x, y} with | |x - y| - dist | <= tol."""
    if not dist > 0:
        raise InvalidParams("distance must be positive")
    P = E.as_array()
    total = 0
    for i in range(len(P) - 1):
        D = P[i + 1:] - P[i]
        r = np.sqrt(np.einsum("ij,ij->i", D, D))
        total += int(np.count_nonzero(np.abs(r - dist) <= tol))
    return total


def _canonical_line(p: np.ndarray, d: np.ndarray, grid: float = 1e-9):
    d = d / np.linalg.norm(d)
    nzi = np.flatnonzero(np.abs(d) > grid)
    if len(nzi) and d[nzi[0]] < 0:
        d = -d
    anchor = p - np.dot(p, d) * d
    snap = lambda v: tuple(float(x) for x in (np.round(v / grid) * grid + 0.0))
    return snap(d), snap(anchor)


def count_rich_lines(E: PointSet, r: int, tol: float = 1e-9, with_lines: bool = False) -> RichLineReport:
    """Lines (in any dimension) containing at least ``r`` points of E.

    Each line is discovered from its two lowest-index members; collinearity is
    a perpendicular distance within ``tol`` times the coordinate scale.
    """
    if r < 2:
        raise InvalidParams("r must be at least 2")
    P = E.as_array()
    n = len(P)
    scale = max(1.0, float(np.abs(P).max())) if n else 1.0
    covered = np.zeros((n, n), dtype=bool)
    lines = []
    count = 0
    for i in range(n):
        for j in range(i + 1, n):
            if covered[i, j]:
                continue
            d = P[j] - P[i]
            L = np.linalg.norm(d)
            if L == 0.0:
                continue
            u = d / L
            W = P - P[i]
            along = W @ u
            perp = W - along[:, None] * u
            dist = np.sqrt(np.einsum("ij,ij->i", perp, perp))
            members = np.flatnonzero(dist <= tol * scale)
            sub = np.ix_(members, members)
            covered[sub] = True
            if len(members) >= r:
                count += 1
                if with_lines:
                    direction, anchor = _canonical_line(P[i], d)
                    order = members[np.argsort(along[members], kind="stable")]
                    lines.append(RichLine(direction, anchor, tuple(int(x) for x in order)))
    return RichLineReport(r, count, lines if with_lines else None)


def _planar_from_query(E: PointSet, q: ChainQuery, witnesses: int) -> CountReport:
    if q.k != 1:
        raise QueryInvalid("planar_fast counts single angles only")
    pin = q.pin.resolve(E) if q.pin is not None else None
    rep = count_triples_planar_fast(E, q.angles[0], pin=pin, witnesses=witnesses,
                                    allow_duplicates=q.allow_duplicates)
    rep.distinctness = q.distinctness
    return rep


def count_chains(E: PointSet, q: ChainQuery, witnesses: int = 0) -> CountReport:
    """Dispatch a query to the counter its method, pin and semantics call for."""
    if q.pin is not None and q.pin.kind == "middle":
        rep = count_middle_pinned_triples(E, q.angles[0], q.pin.resolve(E), witnesses, q.allow_duplicates)
        rep.distinctness = q.distinctness
        return rep
    method = q.method
    if method == "auto":
        if q.k == 1 and E.dim == 2:
            method = "planar_fast"
        elif q.distinctness == "local" or q.k == 1:
            method = "dp"
        else:
            method = "brute"
    if method == "planar_fast":
        return _planar_from_query(E, q, witnesses)
    if method == "dp":
        if q.k == 1 and q.distinctness == "full":
            # one window is the whole tuple: both semantics coincide
            rep = count_chains_dp(E, _with(q, distinctness="local"), witnesses)
            rep.distinctness = "full"
            return rep
        return count_chains_dp(E, q, witnesses)
    return count_chains_bruteforce(E, q, witnesses)


def _with(q: ChainQuery, **kw) -> ChainQuery:
    d = dict(angles=q.angles, pin=q.pin, distinctness=q.distinctness, method=q.method,
             allow_duplicates=q.allow_duplicates)
    d.update(kw)
    return ChainQuery(**d)


def query(angles: Sequence[AngleSpec], pin=None, distinctness: str = "full", method: str = "auto",
          allow_duplicates: bool = False) -> ChainQuery:
    """Convenience constructor accepting ``pin`` as an int (first), a Pin, or None."""
    if isinstance(pin, int):
        pin = Pin("first", pin)
    return ChainQuery(tuple(angles), pin, distinctness, method, allow_duplicates)
