"""Point configurations with many angle chains.

Every generator returns a :class:`ConstructionOutput`: the point set, the
growth exponent the family is known to achieve, the angle type it realises
and a ``params`` map.  Family-based generators record ``families`` (index
lists in chain order) so the designated chains can be enumerated with
:func:`designated_chains`.

Generators are deterministic.  The only randomness is the seeded jitter the
railroad uses when a placement would make two points coincide.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import Infeasible, InvalidParams, OutOfRange
from .geometry import AngleSpec, PointSet


@dataclass
class ConstructionOutput:
    points: PointSet
    claimed_exponent: Fraction
    angle_type: list
    params: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.params.get("construction", "")


def _rows(arr) -> tuple:
    return tuple(tuple(float(x) for x in row) for row in arr)


# --------------------------------------------------------------------------
# Railroad: points on a fan of lines, two angles per line change.
# --------------------------------------------------------------------------


def _rot(v: np.ndarray, ang: float) -> np.ndarray:
    c, s = math.cos(ang), math.sin(ang)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def _cross(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


_MIN_QUALITY = 0.05


@dataclass
class _Step:
    alpha: float
    beta: Optional[float]  # None for the trailing unpaired angle
    eps: int
    eps2: int
    free_beta: float = 0.0


def _step_geometry(u: np.ndarray, sigma: int, st: _Step):
    """Directions for one line change in the frame of line direction ``u``.

    Returns (psi, e_out, shared_apex, s_ratio, quality).  ``psi`` points from
    a vertex on the current line to its partner; ``e_out`` points from that
    partner towards the chain's next point.  With a shared apex the partner
    of position s sits at position s * s_ratio on the new line.
    """
    e_in = sigma * u
    psi = _rot(e_in, st.eps * st.alpha)
    beta = st.beta if st.beta is not None else st.free_beta
    e_out = _rot(-psi, st.eps2 * beta)
    # u*s + t*psi = s' * e_out  (per unit s)
    A = np.column_stack([psi, -e_out])
    det = np.linalg.det(A)
    sep = abs(_cross(u, e_out))
    ok = abs(det) > 1e-12 and sep > 1e-12
    t = s_ratio = 0.0
    if ok:
        t, s_ratio = np.linalg.solve(A, -u)
        ok = t > 0 and abs(s_ratio) > 1e-12
    quality = min(sep, abs(det)) if ok else 0.0
    return psi, e_out, ok, float(s_ratio), quality


def _plan_railroad(alphas: Sequence[float]):
    """Choose orientations for every line change.

    The search maximises, in order: no parallel-offset fallbacks, all steps
    well conditioned, agreement with the textbook orientation (previous
    point farther out, new line rotated by alpha_odd - alpha_even), and the
    worst conditioning.
    """
    k = len(alphas)
    pairs = [(alphas[i], alphas[i + 1] if i + 1 < k else None) for i in range(0, k, 2)]
    free_menu = (math.pi / 2, math.pi / 3, 2 * math.pi / 3)
    per_step = []
    for a, b in pairs:
        opts = []
        for eps in (1, -1):
            for eps2 in (1, -1):
                if b is None:
                    for fb in free_menu:
                        opts.append(_Step(a, None, eps, eps2, fb))
                else:
                    opts.append(_Step(a, b, eps, eps2))
        per_step.append(opts)

    best = None
    combos = itertools.product((1, -1), *per_step) if len(pairs) <= 5 else None
    if combos is None:
        # greedy for long chains
        combos = [_greedy_plan(per_step)]
    for combo in combos:
        sigma0, steps = combo[0], list(combo[1:])
        u = np.array([1.0, 0.0])
        sigma = sigma0
        fallbacks = 0
        qmin = math.inf
        # prefer the textbook orientation when scores otherwise tie
        canonical = 1 if sigma0 == 1 else 0
        for st in steps:
            psi, e_out, ok, ratio, q = _step_geometry(u, sigma, st)
            if ok and q >= 1e-9:
                u_next = e_out if ratio > 0 else -e_out
                sigma = -1 if ratio > 0 else 1
                qmin = min(qmin, q)
            else:
                fallbacks += 1
                u_next = e_out
                sigma = -1
                qmin = min(qmin, 0.0)
            if st.eps == 1 and st.eps2 == -1:
                canonical += 1
            u = u_next
        score = (-fallbacks, qmin >= _MIN_QUALITY, canonical, qmin)
        if best is None or score > best[0]:
            best = (score, sigma0, steps)
    return best[1], best[2]


def _greedy_plan(per_step):
    sigma0 = 1
    u = np.array([1.0, 0.0])
    sigma = sigma0
    chosen = []
    for opts in per_step:
        scored = []
        for st in opts:
            psi, e_out, ok, ratio, q = _step_geometry(u, sigma, st)
            scored.append(((ok, q), st, e_out, ok, ratio))
        _, st, e_out, ok, ratio = max(scored, key=lambda x: x[0])
        chosen.append(st)
        if ok:
            u = e_out if ratio > 0 else -e_out
            sigma = -1 if ratio > 0 else 1
        else:
            u, sigma = e_out, -1
    return (sigma0, *chosen)


def _build_railroad(alphas, m, ratio, seed, jitter, max_spread):
    sigma0, steps = _plan_railroad(alphas)
    rng = np.random.default_rng(seed)
    # any fallback breaks scale invariance between lines: use even spacing then
    shared = True
    u = np.array([1.0, 0.0])
    sigma = sigma0
    for st in steps:
        _, e_out, ok, r, q = _step_geometry(u, sigma, st)
        if not (ok and q >= 1e-9):
            shared = False
            u, sigma = e_out, -1
        else:
            u, sigma = (e_out if r > 0 else -e_out), (-1 if r > 0 else 1)
    # A wide spread lets far points look collinear to within the angle
    # tolerance, so the ratio shrinks until the whole line spans at most
    # max_spread.
    eff = min(ratio, max_spread ** (1.0 / max(m - 1, 1)))
    geometric = shared and eff > 1.0
    if geometric:
        pos = eff ** np.arange(m, dtype=float)
    else:
        pos = np.arange(1, m + 1, dtype=float)
    if jitter:
        pos = pos * (1.0 + jitter * rng.uniform(-1, 1, size=m))
        pos = np.sort(pos)

    apex = np.zeros(2)
    u = np.array([1.0, 0.0])
    sigma = sigma0
    coords = [apex + np.outer(pos, u)]
    positions = [pos]
    sigmas = [sigma0]
    orient = []
    for st in steps:
        psi, e_out, ok, r, q = _step_geometry(u, sigma, st)
        X = coords[-1]
        S = positions[-1]
        if ok and q >= 1e-9:
            u_next = e_out if r > 0 else -e_out
            S_next = abs(r) * S
            Y = apex + np.outer(S_next, u_next)
            sigma = -1 if r > 0 else 1
            mode = "shared_apex"
        else:
            # offset line with direction e_out, every partner at t > 0 along psi
            A = np.column_stack([psi, -e_out])
            kt, kl = np.linalg.solve(A, -u)
            s_ref = S[0] if kt >= 0 else S[-1]
            T = (S[-1] - S[0]) + S[0]
            t = T + kt * (S - s_ref)
            Y = X + np.outer(t, psi)
            lam = kl * (S - s_ref)
            delta = (lam.max() - lam.min()) + S[0]
            P0 = apex + s_ref * u + T * psi
            apex = P0 + (lam.min() - delta) * e_out
            u_next = e_out
            S_next = lam - lam.min() + delta
            sigma = -1
            mode = "offset"
        coords.append(Y)
        positions.append(S_next)
        sigmas.append(sigma)
        orient.append({"eps": st.eps, "eps2": st.eps2, "mode": mode,
                       "turn": math.degrees(math.atan2(_cross(u, u_next), float(u @ u_next)))})
        u = u_next
    return sigma0, steps, coords, positions, sigmas, orient, (eff if geometric else None)


def _railroad(n: int, angles: Sequence[AngleSpec], pinned: bool, ratio: float, seed: int,
              max_spread: float = 1e6, max_retries: int = 8) -> ConstructionOutput:
    k = len(angles)
    if k < 1:
        raise InvalidParams("need at least one angle")
    for a in angles:
        if not (0.0 < a.radians < math.pi):
            raise OutOfRange(f"angle {a.radians} not in (0, pi)")
    if n < 4 * (k + 2):
        raise InvalidParams(f"railroad needs n >= 4(k+2) = {4 * (k + 2)}, got {n}")
    alphas = [a.radians for a in angles]
    n_lines = (k + 1) // 2 + 1
    m = n // n_lines
    jitter = 0.0
    for attempt in range(max_retries + 1):
        sigma0, steps, coords, positions, sigmas, orient, geometric = _build_railroad(
            alphas, m, ratio, seed + attempt, jitter, max_spread)
        pts = np.vstack(coords)
        if np.all(np.isfinite(pts)) and not _near_coincident(pts):
            break
        jitter = 0.01 if jitter == 0.0 else jitter * 2
    else:
        raise Infeasible("railroad placement keeps producing coincident points")

    lines = []
    partner = {}
    off = 0
    for li, S in enumerate(positions):
        order = np.argsort(S, kind="stable")
        lines.append([off + int(i) for i in order])
        if li > 0:
            for j in range(m):
                partner[off - m + j] = off + j
        off += m
    pin = None
    if pinned:
        # the extreme first-line point that lies on the "previous" side of all others
        pin = lines[0][-1] if sigma0 == 1 else lines[0][0]
    ps = PointSet(2, _rows(pts), pin)
    params = {
        "construction": "pinned-chain" if pinned else "railroad",
        "m": m,
        "lines": lines,
        "partner": partner,
        "sides": sigmas,
        "orientation": orient,
        "spacing": f"geometric({geometric:.6g})" if geometric else "arithmetic",
        "jitter": jitter,
        "seed": seed,
        "pin_mode": "first" if pinned else None,
    }
    expo = Fraction(k // 2 + (1 if pinned else 2))
    return ConstructionOutput(ps, expo, list(angles), params)


def _near_coincident(pts: np.ndarray) -> bool:
    """True if two points agree to ~1e-9 of the configuration's extent."""
    scale = float(np.abs(pts).max()) if pts.size else 0.0
    if scale == 0.0:
        return len(pts) > 1
    _, counts = np.unique(np.round(pts / scale, 9), axis=0, return_counts=True)
    return bool(np.any(counts > 1))


def gen_railroad(n: int, angles: Sequence[AngleSpec], ratio: float = 1.5, seed: int = 0) -> ConstructionOutput:
    """Planar set on ceil(k/2)+1 lines with order n^(floor(k/2)+2) chains of the given type.

    Consecutive lines are joined by "partners": each point x of a line gets
    one point y on the next line with the first angle of the pair at x, and
    the next line's direction makes the second angle at y.  Whenever possible
    the lines share an apex (the origin), so positions scale geometrically
    (``ratio``) from line to line.
    """
    return _railroad(n, angles, False, ratio, seed)


def gen_pinned_chain(n: int, angles: Sequence[AngleSpec], ratio: float = 1.5, seed: int = 0) -> ConstructionOutput:
    """Railroad with the pin on an extreme first-line point (order n^(floor(k/2)+1) chains)."""
    return _railroad(n, angles, True, ratio, seed)


# --------------------------------------------------------------------------
# Higher-dimensional families.
# --------------------------------------------------------------------------


def gen_lenz(n: int) -> ConstructionOutput:
    """Two orthogonal unit circles in R^4; every cross pair is at distance sqrt(2)."""
    if n < 2:
        raise InvalidParams("n must be at least 2")
    h1, h2 = (n + 1) // 2, n // 2
    pts = [(math.cos(a), math.sin(a), 0.0, 0.0) for a in range(1, h1 + 1)]
    pts += [(0.0, 0.0, math.cos(a), math.sin(a)) for a in range(1, h2 + 1)]
    fam = [list(range(h1)), list(range(h1, h1 + h2))]
    return ConstructionOutput(PointSet(4, tuple(pts)), Fraction(2), [],
                              {"construction": "lenz", "families": fam, "distance": math.sqrt(2),
                               "pin_mode": None})


def gen_right_triples_r4(n: int) -> ConstructionOutput:
    """Families (-1,0,a,0), (cos a, sin a,0,0), (1,0,0,a): every cross triple is right-angled."""
    if n < 3:
        raise InvalidParams("n must be at least 3")
    m = n // 3
    x1 = [(-1, 0, a, 0) for a in range(1, m + 1)]
    x2 = [(math.cos(a), math.sin(a), 0.0, 0.0) for a in range(1, m + 1)]
    x3 = [(1, 0, 0, a) for a in range(1, m + 1)]
    pts = x1 + x2 + x3
    fam = [list(range(m)), list(range(m, 2 * m)), list(range(2 * m, 3 * m))]
    return ConstructionOutput(PointSet(4, tuple(pts)), Fraction(3), [AngleSpec.right()],
                              {"construction": "right-r4", "families": fam, "m": m, "pin_mode": None})


def gen_right_2chains_r5(n: int) -> ConstructionOutput:
    """Four families in R^5 whose designated quadruples are right-angle 2-chains.

    The third family is (1, 0, 0, cos a, sin a).
    """
    if n < 4:
        raise InvalidParams("n must be at least 4")
    m = n // 4
    r = range(1, m + 1)
    x1 = [(-1, 0, a, 0, 1) for a in r]
    x2 = [(math.cos(a), math.sin(a), 0.0, 0.0, 1.0) for a in r]
    x3 = [(1.0, 0.0, 0.0, math.cos(a), math.sin(a)) for a in r]
    x4 = [(1, 0, a, 0, -1) for a in r]
    pts = x1 + x2 + x3 + x4
    fam = [list(range(i * m, (i + 1) * m)) for i in range(4)]
    right = AngleSpec.right()
    return ConstructionOutput(PointSet(5, tuple(pts)), Fraction(4), [right, right],
                              {"construction": "right-r5", "families": fam, "m": m, "pin_mode": None})


def _r6_right_family(i: int, a: int, pinned: bool) -> tuple:
    c, s = math.cos(a), math.sin(a)
    if not pinned:
        rows = [
            (-1, 0, 1, 0, c, s),
            (c, s, 1, 0, 1, 0),
            (1, 0, c, s, 1, 0),
            (1, 0, -1, 0, c, s),
            (c, s, -1, 0, -1, 0),
            (-1, 0, c, s, -1, 0),
        ]
    else:
        rows = [
            (0, 0, 2, 0, 1 + c, s),
            (1 + c, s, 2, 0, 2, 0),
            (2, 0, 1 + c, s, 2, 0),
            (2, 0, 0, 0, 1 + c, s),
            (1 + c, s, 0, 0, 0, 0),
            (0, 0, 1 + c, s, 0, 0),
        ]
    return tuple(float(x) for x in rows[i])


def gen_right_kchains_r6(n: int, k: int, pinned: bool = False) -> ConstructionOutput:
    """Six cyclic families in R^6; consecutive families always meet at right angles.

    The pinned variant uses the shifted coordinates and adds the origin as
    the pin; the origin followed by families 1, 2, ... starts right-angle
    chains.
    """
    if n < 6:
        raise InvalidParams("n must be at least 6")
    if k < 1:
        raise InvalidParams("k must be at least 1")
    m = n // 6
    pts = []
    fams = []
    for i in range(6):
        fams.append(list(range(len(pts), len(pts) + m)))
        pts += [_r6_right_family(i, a, pinned) for a in range(1, m + 1)]
    pin = None
    if pinned:
        pin = len(pts)
        pts.append((0,) * 6)
    chain = [fams[j % 6] for j in range(k + 1 if pinned else k + 2)]
    if pinned:
        chain = [[pin]] + chain
    expo = Fraction(k + 1 if pinned else k + 2)
    return ConstructionOutput(PointSet(6, tuple(pts), pin), expo, [AngleSpec.right()] * k,
                              {"construction": "right-r6", "families": chain, "m": m, "k": k,
                               "pinned": pinned, "pin_mode": "first" if pinned else None})


def acute_angles(c: Sequence[float]) -> tuple:
    """(alphas, betas) realised by the radii c_1..c_{k+2} of the acute R^6 family."""
    c = [float(x) for x in c]
    alphas, betas = [], []
    for i in range(len(c) - 2):
        ci, cj, ck = c[i], c[i + 1], c[i + 2]
        cos_a = cj * cj / (math.sqrt(ci * ci + cj * cj) * math.sqrt(ck * ck + cj * cj))
        alphas.append(math.acos(cos_a))
        betas.append(math.acos(cj / math.sqrt(ci * ci + cj * cj)))
    return alphas, betas


def gen_acute_kchains_r6(n: int, k: int, c=None,
                         pinned: bool = False) -> ConstructionOutput:
    """Points with c_i cos a, c_i sin a in slot pair i (mod 3) of R^6.

    ``c`` is a list of k+2 radii or a single radius used for all of them.

    The angle at family i+1 depends only on the radii c_i, c_{i+1}, c_{i+2}.
    Families that share a slot pair draw their parameters from disjoint
    integer ranges so no two points coincide.  ``pinned`` sets c_1 = 0, which
    collapses the first family to the origin.
    """
    if k < 1:
        raise InvalidParams("k must be at least 1")
    if c is None:
        c = 1.0
    if isinstance(c, (int, float)):
        c = [float(c)] * (k + 2)
    c = [float(x) for x in c]
    if len(c) != k + 2:
        raise InvalidParams(f"need k+2 = {k + 2} radii, got {len(c)}")
    if pinned:
        c[0] = 0.0
    rest = c[1:] if pinned else c
    if any(not (x > 0) for x in rest):
        raise InvalidParams("radii must be positive (c_1 may be 0 only when pinned)")
    if n < k + 2:
        raise InvalidParams("n must be at least k+2")
    cos_list = []
    for i in range(k):
        ci, cj, ck = c[i], c[i + 1], c[i + 2]
        cos_list.append(cj * cj / (math.sqrt(ci * ci + cj * cj) * math.sqrt(ck * ck + cj * cj)))
    angle_type = [AngleSpec.from_cosine(x) if x != 0.5 else AngleSpec.from_pi_fraction(Fraction(1, 3))
                  for x in cos_list]
    pts = []
    fams = []
    if pinned:
        m = (n - 1) // (k + 1)
        pts.append((0.0,) * 6)
        fams.append([0])
    else:
        m = n // (k + 2)
    if m < 1:
        raise InvalidParams("n too small for the requested k")
    for i in range(1 if pinned else 0, k + 2):
        slot = 2 * (i % 3)
        idx = []
        for a in range(i * m + 1, i * m + m + 1):
            p = [0.0] * 6
            p[slot] = c[i] * math.cos(a)
            p[slot + 1] = c[i] * math.sin(a)
            idx.append(len(pts))
            pts.append(tuple(p))
        fams.append(idx)
    _, betas = acute_angles(c) if not pinned else acute_angles([max(x, 0.0) for x in c])
    expo = Fraction(k + 1 if pinned else k + 2)
    return ConstructionOutput(PointSet(6, tuple(pts), 0 if pinned else None), expo, angle_type,
                              {"construction": "acute-r6", "families": fams, "m": m, "c": c,
                               "betas": betas, "pinned": pinned, "pin_mode": "first" if pinned else None})


# --------------------------------------------------------------------------
# Pinned families.
# --------------------------------------------------------------------------


def gen_middle_pinned(n: int, spec: AngleSpec, d: int = 2) -> ConstructionOutput:
    """Vertex (the pin) plus two rays at the given angle, split as evenly as possible."""
    if n < 3:
        raise InvalidParams("n must be at least 3")
    if d < 2:
        raise InvalidParams("d must be at least 2")
    r1, r2 = (n - 1 + 1) // 2, (n - 1) // 2
    exact = spec.exact_right
    pad = (0,) * (d - 2)
    pts = [(0,) * d]
    for j in range(1, r1 + 1):
        pts.append((j, 0) + pad)
    if exact:
        ray2 = [(0, j) + pad for j in range(1, r2 + 1)]
    else:
        cs, sn = spec.cosine, math.sin(spec.radians)
        ray2 = [(j * cs, j * sn) + tuple(float(x) for x in pad) for j in range(1, r2 + 1)]
    pts += ray2
    fams = [list(range(1, r1 + 1)), [0], list(range(r1 + 1, r1 + r2 + 1))]
    return ConstructionOutput(PointSet(d, tuple(pts), 0), Fraction(2), [spec],
                              {"construction": "middle-pinned", "families": fams,
                               "rays": [r1, r2], "pin_mode": "middle"})


def _icbrt(n: int) -> int:
    m = int(round(n ** (1.0 / 3.0)))
    while m ** 3 > n:
        m -= 1
    while (m + 1) ** 3 <= n:
        m += 1
    return m


def gen_pinned_st(n: int, spec: AngleSpec) -> ConstructionOutput:
    """Grid-and-pivots set with order n^(4/3) angles starting at the origin.

    Grid P = [1, m] x [1, m^2] (m = floor(cbrt n)), lines y = a x + b with
    1 <= a <= m, 1 <= b <= m^2 / 2.  On each line the pivot points are where
    the ray towards the origin meets the line at the target angle: two
    pivots in general, one (the foot of the perpendicular) for a right angle.
    """
    m = _icbrt(n)
    if m < 2:
        raise Infeasible(f"n = {n} gives m = {m} < 2")
    exact = spec.exact_right

    def key(q):
        return (Fraction(q[0]), Fraction(q[1])) if exact else (round(float(q[0]), 9), round(float(q[1]), 9))

    pts: list = [(0, 0)]
    seen = {key((0, 0)): 0}
    for x in range(1, m + 1):
        for y in range(1, m * m + 1):
            seen[key((x, y))] = len(pts)
            pts.append((x, y))
    cot = spec.cosine / math.sin(spec.radians)
    designated = []
    n_lines = 0
    for a in range(1, m + 1):
        for b in range(1, m * m // 2 + 1):
            n_lines += 1
            on_line = [(x, a * x + b) for x in range(1, m + 1) if a * x + b <= m * m]
            if exact:
                pivots = [((Fraction(-a * b, 1 + a * a), Fraction(b, 1 + a * a)), None)]
            else:
                norm = math.sqrt(1 + a * a)
                v = (1 / norm, a / norm)
                h = b / norm
                foot = (-a * b / (1 + a * a), b / (1 + a * a))
                # pivot at +h cot serves points behind it (-v), at -h cot points ahead (+v)
                pivots = [((foot[0] + h * cot * v[0], foot[1] + h * cot * v[1]), -1),
                          ((foot[0] - h * cot * v[0], foot[1] - h * cot * v[1]), +1)]
            for q, side in pivots:
                qk = key(q)
                qi = seen.get(qk)
                if qi is None:
                    qi = len(pts)
                    seen[qk] = qi
                    pts.append(q if exact else (float(q[0]), float(q[1])))
                for p in on_line:
                    pi = seen[key(p)]
                    along = (p[0] - float(q[0])) + a * (p[1] - float(q[1]))
                    if pi != qi and (side is None or along * side > 0):
                        designated.append((0, qi, pi))
    return ConstructionOutput(PointSet(2, tuple(pts), 0), Fraction(4, 3), [spec],
                              {"construction": "pinned-st", "m": m, "grid": m ** 3,
                               "lines": n_lines, "pivots": len(pts) - 1 - m ** 3,
                               "designated": designated, "pin_mode": "first"})


def gen_pinned_right_r3(n: int) -> ConstructionOutput:
    """Origin, circle points (1+cos i, sin i, 0) and line points (2, 0, j).

    The origin, any circle point and any line point form a right angle at the
    circle point.
    """
    if n < 2:
        raise InvalidParams("n must be at least 2")
    h = n // 2
    pts = [(0, 0, 0)]
    pts += [(1 + math.cos(i), math.sin(i), 0.0) for i in range(1, h + 1)]
    pts += [(2, 0, j) for j in range(1, h + 1)]
    fams = [[0], list(range(1, h + 1)), list(range(h + 1, 2 * h + 1))]
    return ConstructionOutput(PointSet(3, tuple(pts), 0), Fraction(2), [AngleSpec.right()],
                              {"construction": "pinned-right-r3", "families": fams, "h": h,
                               "pin_mode": "first"})


# --------------------------------------------------------------------------
# Designated chains.
# --------------------------------------------------------------------------


def designated_chains(out: ConstructionOutput, limit: Optional[int] = None) -> Iterator[tuple]:
    """Yield the index tuples the construction was built to realise."""
    p = out.params
    it: Iterator[tuple]
    if "families" in p and p.get("construction") != "lenz":
        it = itertools.product(*p["families"])
    elif "designated" in p:
        it = iter(p["designated"])
    elif "lines" in p and "partner" in p:
        it = _railroad_chains(out)
    else:
        it = iter(())
    return itertools.islice(it, limit)


def _railroad_chains(out: ConstructionOutput) -> Iterator[tuple]:
    p = out.params
    k = len(out.angle_type)
    lines = p["lines"]
    sides = p["sides"]
    partner = p["partner"]
    rank = {}
    for li, line in enumerate(lines):
        for r, idx in enumerate(line):
            rank[idx] = (li, r)

    def after(li, idx, side):
        # points on line li lying on the given side (+1 = larger position) of idx
        r = rank[idx][1]
        line = lines[li]
        return line[r + 1:] if side > 0 else line[:r]

    pin = out.points.pin
    first_line = lines[0]

    def rec(prefix):
        if len(prefix) == k + 2:
            yield tuple(prefix)
            return
        j = len(prefix)  # next chain position (0-based)
        last = prefix[-1]
        li = rank[last][0]
        if j % 2 == 0:
            nxt = partner.get(last)
            if nxt is not None:
                yield from rec(prefix + [nxt])
        else:
            for c in after(li, last, -sides[li]):
                yield from rec(prefix + [c])

    starts = [pin] if pin is not None else first_line
    for x1 in starts:
        for x2 in after(0, x1, -sides[0]):
            yield from rec([x1, x2])


GENERATORS = {
    "railroad": gen_railroad,
    "pinned-chain": gen_pinned_chain,
    "lenz": gen_lenz,
    "right-r4": gen_right_triples_r4,
    "right-r5": gen_right_2chains_r5,
    "right-r6": gen_right_kchains_r6,
    "acute-r6": gen_acute_kchains_r6,
    "middle-pinned": gen_middle_pinned,
    "pinned-st": gen_pinned_st,
    "pinned-right-r3": gen_pinned_right_r3,
}


def generate(name: str, n: int, angles: Optional[Sequence[AngleSpec]] = None, k: Optional[int] = None,
             c: Optional[Sequence[float]] = None, pinned: bool = False, dim: int = 2,
             seed: int = 0) -> ConstructionOutput:
    """Uniform entry point used by sweeps and the CLI."""
    if name not in GENERATORS:
        raise InvalidParams(f"unknown construction {name!r}; choose from {sorted(GENERATORS)}")
    if name in ("railroad", "pinned-chain"):
        if not angles:
            raise InvalidParams(f"{name} needs angles")
        return GENERATORS[name](n, angles, seed=seed)
    if name in ("lenz", "right-r4", "right-r5", "pinned-right-r3"):
        return GENERATORS[name](n)
    if name == "right-r6":
        return gen_right_kchains_r6(n, k if k is not None else (len(angles) if angles else 1), pinned)
    if name == "acute-r6":
        if c is not None and len(c) == 1:
            c = c[0]
        kk = k if k is not None else (len(c) - 2 if isinstance(c, (list, tuple)) else 1)
        return gen_acute_kchains_r6(n, kk, c, pinned)
    spec = angles[0] if angles else AngleSpec.right()
    if name == "middle-pinned":
        return gen_middle_pinned(n, spec, dim)
    return gen_pinned_st(n, spec)
