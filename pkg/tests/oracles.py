"""Independent reference implementations used by the tests.

These deliberately share no code with the package's counters: tuples are
enumerated with itertools and angles are evaluated with numpy's norm.
"""

import itertools
import math

import numpy as np


def cosine(a, b, c):
    u = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    v = np.asarray(c, dtype=float) - np.asarray(b, dtype=float)
    return float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))


def exact_right(a, b, c):
    return sum((x - y) * (z - y) for x, y, z in zip(a, b, c)) == 0


def naive_chain_count(points, cosines, distinct="full", first=None, tol=1e-9, exact=False):
    """Count (k+2)-tuples; ``cosines`` are target cosine values."""
    n = len(points)
    k = len(cosines)
    total = 0
    for t in itertools.product(range(n), repeat=k + 2):
        if first is not None and t[0] != first:
            continue
        if distinct == "full" and len(set(t)) < k + 2:
            continue
        ok = True
        for i in range(k):
            a, b, c = t[i], t[i + 1], t[i + 2]
            if len({a, b, c}) < 3:
                ok = False
                break
            if exact:
                hit = exact_right(points[a], points[b], points[c])
            else:
                hit = abs(cosine(points[a], points[b], points[c]) - cosines[i]) <= tol
            if not hit:
                ok = False
                break
        if ok:
            total += 1
    return total


def naive_pairs_at_distance(points, dist, tol=1e-9):
    P = np.asarray(points, dtype=float)
    cnt = 0
    for i, j in itertools.combinations(range(len(P)), 2):
        if abs(math.dist(P[i], P[j]) - dist) <= tol:
            cnt += 1
    return cnt


def naive_rich_lines(points, r):
    """Exact collinearity on integer points: maximal collinear subsets of size >= r."""
    pts = [tuple(p) for p in points]
    lines = set()
    for i, j in itertools.combinations(range(len(pts)), 2):
        (x1, y1), (x2, y2) = pts[i], pts[j]
        members = frozenset(
            k for k, (x, y) in enumerate(pts) if (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1) == 0
        )
        lines.add(members)
    return sum(1 for L in lines if len(L) >= r)


def lattice_points(rng, n, d, side=4):
    """n distinct integer points in [0, side)^d."""
    cells = rng.choice(side ** d, size=n, replace=False)
    return [tuple(int(v) for v in np.unravel_index(c, (side,) * d)) for c in cells]
