"""Vectorised per-vertex angle predicates.

For a vertex ``b`` these build the full (n, n) table over endpoint pairs
``(a, c)``.  The floating path repeats the operation order of
:func:`anglechains.geometry.angle_cosine` exactly, so a kernel entry and a
scalar call on the same triple agree to the last bit.
"""

from __future__ import annotations

from collections import OrderedDict

import numpy as np

from .geometry import AngleSpec, PointSet


def cosine_table(P: np.ndarray, b: int) -> np.ndarray:
    """cos of the angle at ``P[b]`` for every endpoint pair; NaN where degenerate."""
    U = P - P[b]
    dot = U[:, None, 0] * U[None, :, 0]
    sq = U[:, 0] * U[:, 0]
    for i in range(1, P.shape[1]):
        dot = dot + U[:, None, i] * U[None, :, i]
        sq = sq + U[:, i] * U[:, i]
    norm = np.sqrt(sq)
    with np.errstate(divide="ignore", invalid="ignore"):
        cos = dot / (norm[:, None] * norm[None, :])
    zero = sq == 0.0
    cos[zero, :] = np.nan
    cos[:, zero] = np.nan
    np.clip(cos, -1.0, 1.0, out=cos)
    return cos


def cosine_row(P: np.ndarray, a: int, b: int) -> np.ndarray:
    """Row ``a`` of :func:`cosine_table` without building the full table."""
    U = P - P[b]
    u = U[a]
    dot = u[0] * U[:, 0]
    sq = U[:, 0] * U[:, 0]
    su = u[0] * u[0]
    for i in range(1, P.shape[1]):
        dot = dot + u[i] * U[:, i]
        sq = sq + U[:, i] * U[:, i]
        su = su + u[i] * u[i]
    norm = np.sqrt(sq)
    with np.errstate(divide="ignore", invalid="ignore"):
        cos = dot / (np.sqrt(su) * norm)
    cos[sq == 0.0] = np.nan
    if su == 0.0:
        cos[:] = np.nan
    np.clip(cos, -1.0, 1.0, out=cos)
    return cos


def exact_dot_table(Z: np.ndarray, b: int):
    """Exact dot products (b->a).(b->c) on integer coordinates, plus a degeneracy mask."""
    U = Z - Z[b]
    dot = U[:, None, 0] * U[None, :, 0]
    nz = U[:, 0] != 0
    for i in range(1, Z.shape[1]):
        dot = dot + U[:, None, i] * U[None, :, i]
        nz = nz | (U[:, i] != 0)
    return dot, nz


def use_exact(E: PointSet, specs) -> bool:
    """Set-level arithmetic policy: exact only for right angles on rational input."""
    return E.is_exact and all(s.exact_right for s in specs)


class MatchTables:
    """Cached boolean match tables ``T[b][spec][a, c]``.

    Entries with ``a == c`` or a degenerate vertex are always False.  Tables
    for all distinct specs at a vertex are built from one cosine table; an
    LRU bound keeps memory at roughly ``budget_bytes``.
    """

    def __init__(self, E: PointSet, specs, budget_bytes: int = 256 * 2**20):
        self.E = E
        self.specs = list(dict.fromkeys(specs))
        self.exact = {s: (E.is_exact and s.exact_right) for s in self.specs}
        self.n = len(E)
        self._P = E.as_array()
        self._Z = E.exact_array if any(self.exact.values()) else None
        per_vertex = max(1, self.n * self.n * len(self.specs))
        self._cap = max(2, budget_bytes // per_vertex)
        self._cache: OrderedDict = OrderedDict()
        self._diag = np.eye(self.n, dtype=bool)

    def at(self, b: int) -> dict:
        hit = self._cache.get(b)
        if hit is not None:
            self._cache.move_to_end(b)
            return hit
        out = {}
        cos = None
        dots = None
        for s in self.specs:
            if self.exact[s]:
                if dots is None:
                    dots = exact_dot_table(self._Z, b)
                dot, nz = dots
                m = (dot == 0) & nz[:, None] & nz[None, :]
                m = np.asarray(m, dtype=bool)
            else:
                if cos is None:
                    cos = cosine_table(self._P, b)
                with np.errstate(invalid="ignore"):
                    m = np.abs(cos - s.cosine) <= s.tol
            m &= ~self._diag
            m[b, :] = False
            m[:, b] = False
            out[s] = m
        self._cache[b] = out
        if len(self._cache) > self._cap:
            self._cache.popitem(last=False)
        return out

    def table(self, b: int, spec: AngleSpec) -> np.ndarray:
        return self.at(b)[spec]

    def row(self, a: int, b: int, spec: AngleSpec) -> np.ndarray:
        """Row ``a`` of the table at ``b``, computed alone unless the table is cached."""
        hit = self._cache.get(b)
        if hit is not None:
            return hit[spec][a]
        if a == b:
            return np.zeros(self.n, dtype=bool)
        if self.exact[spec]:
            U = self._Z - self._Z[b]
            u = U[a]
            dot = u[0] * U[:, 0]
            nz = U[:, 0] != 0
            for i in range(1, U.shape[1]):
                dot = dot + u[i] * U[:, i]
                nz = nz | (U[:, i] != 0)
            m = np.asarray(dot == 0, dtype=bool) & nz
            if not nz[a]:
                m[:] = False
        else:
            cos = cosine_row(self._P, a, b)
            with np.errstate(invalid="ignore"):
                m = np.abs(cos - spec.cosine) <= spec.tol
        m[a] = False
        m[b] = False
        return m
