"""Points, angle predicates and similarity transforms.

Angles are compared on cosines: ``|cos(angle) - spec.cosine| <= spec.tol``.
When a right angle is requested and every coordinate involved is an exact
rational (``int`` or ``Fraction``) the test becomes an exact dot product.

``angle_cosine`` fixes the floating-point evaluation order (left-to-right
accumulation over coordinates); the vectorised kernels in
:mod:`anglechains.kernels` reproduce it bit for bit, so every counter in the
package applies literally the same predicate.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Integral, Rational, Real
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    DegenerateAngle,
    DimensionMismatch,
    InvalidParams,
    OutOfRange,
    ParseError,
)

Coord = Union[int, float, Fraction]
Point = tuple  # tuple of Coord, length = dimension

DEFAULT_TOL = 1e-9


def is_exact_number(x) -> bool:
    return isinstance(x, (Integral, Rational)) and not isinstance(x, bool)


def _coerce_coord(x) -> Coord:
    if isinstance(x, bool):
        raise InvalidParams("boolean is not a coordinate")
    if isinstance(x, Integral):
        return int(x)
    if isinstance(x, Fraction):
        return x if x.denominator != 1 else int(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, Real):
        v = float(x)
        if not math.isfinite(v):
            raise InvalidParams(f"non-finite coordinate {x!r}")
        return v
    raise InvalidParams(f"unsupported coordinate type {type(x).__name__}")


@dataclass(frozen=True)
class PointSet:
    """An ordered finite point set in R^dim, optionally with a pinned point.

    Duplicates are allowed in storage; :meth:`duplicates` reports them and the
    counters refuse them unless told otherwise.
    """

    dim: int
    points: tuple
    pin: Optional[int] = None

    def __post_init__(self):
        if self.dim < 2:
            raise DimensionMismatch(f"dimension must be >= 2, got {self.dim}")
        pts = []
        for i, p in enumerate(self.points):
            p = tuple(_coerce_coord(x) for x in p)
            if len(p) != self.dim:
                raise DimensionMismatch(
                    f"point {i} has {len(p)} coordinates, expected {self.dim}"
                )
            pts.append(p)
        object.__setattr__(self, "points", tuple(pts))
        if self.pin is not None and not (0 <= self.pin < len(pts)):
            raise InvalidParams(f"pin index {self.pin} out of range for {len(pts)} points")

    @classmethod
    def from_array(cls, arr, pin: Optional[int] = None) -> "PointSet":
        arr = np.asarray(arr, dtype=float)
        if arr.ndim != 2:
            raise DimensionMismatch("expected an (n, d) array")
        return cls(arr.shape[1], tuple(map(tuple, arr.tolist())), pin)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.points)

    @cached_property
    def is_exact(self) -> bool:
        return all(is_exact_number(x) for p in self.points for x in p)

    def as_array(self) -> np.ndarray:
        """Float64 (n, dim) array; cached, do not mutate."""
        return self._float_array

    @cached_property
    def _float_array(self) -> np.ndarray:
        a = np.array([[float(x) for x in p] for p in self.points], dtype=float)
        a = a.reshape(len(self.points), self.dim)
        a.setflags(write=False)
        return a

    @cached_property
    def exact_array(self) -> np.ndarray:
        """Integer coordinates after clearing denominators (exact sets only).

        Scaling by a positive common denominator preserves the sign of every
        dot product, which is all the exact right-angle test needs.
        """
        if not self.is_exact:
            raise InvalidParams("point set has floating-point coordinates")
        den = 1
        for p in self.points:
            for x in p:
                if isinstance(x, Fraction):
                    den = den * x.denominator // math.gcd(den, x.denominator)
        ints = [[int(x * den) for x in p] for p in self.points]
        big = max((abs(v) for row in ints for v in row), default=0)
        # |sum of dim products of differences| must stay below 2**63
        if big and 4 * self.dim * big * big >= 2**62:
            a = np.empty((len(ints), self.dim), dtype=object)
            for i, row in enumerate(ints):
                a[i, :] = row
        else:
            a = np.array(ints, dtype=np.int64).reshape(len(ints), self.dim)
        a.setflags(write=False)
        return a

    def duplicates(self) -> list:
        """Index pairs (i, j), i < j, of numerically identical points."""
        seen: dict = {}
        out = []
        for j, p in enumerate(self.points):
            key = tuple(Fraction(x) for x in p)
            if key in seen:
                for i in seen[key]:
                    out.append((i, j))
                seen[key].append(j)
            else:
                seen[key] = [j]
        return out

    def with_pin(self, pin: Optional[int]) -> "PointSet":
        return PointSet(self.dim, self.points, pin)

    def with_point(self, p: Sequence[Coord]) -> "PointSet":
        return PointSet(self.dim, self.points + (tuple(p),), self.pin)

    def embed(self, dim: int) -> "PointSet":
        """Pad with zero coordinates into a higher dimension."""
        if dim < self.dim:
            raise DimensionMismatch("cannot embed into a lower dimension")
        pad = (0,) * (dim - self.dim)
        return PointSet(dim, tuple(p + pad for p in self.points), self.pin)


def _cos_of_pi_fraction(f: Fraction) -> float:
    special = {
        Fraction(1, 2): 0.0,
        Fraction(1, 3): 0.5,
        Fraction(2, 3): -0.5,
        Fraction(1, 4): math.sqrt(2) / 2,
        Fraction(3, 4): -math.sqrt(2) / 2,
        Fraction(1, 6): math.sqrt(3) / 2,
        Fraction(5, 6): -math.sqrt(3) / 2,
    }
    if f in special:
        return special[f]
    return math.cos(f.numerator * math.pi / f.denominator)


@dataclass(frozen=True)
class AngleSpec:
    """Target angle in (0, pi), compared through its cosine."""

    radians: float
    cosine: float
    tol: float = DEFAULT_TOL
    exact_right: bool = False

    def __post_init__(self):
        if not (0.0 < self.radians < math.pi):
            raise OutOfRange(f"angle {self.radians!r} rad is not in the open interval (0, pi)")
        if not (-1.0 < self.cosine < 1.0):
            raise OutOfRange(f"cosine {self.cosine!r} is not in (-1, 1)")
        if not (self.tol >= 0.0):
            raise InvalidParams(f"tolerance must be nonnegative, got {self.tol!r}")
        if self.exact_right and self.cosine != 0.0:
            raise InvalidParams("exact_right requires a right angle")

    @classmethod
    def from_radians(cls, radians: float, tol: float = DEFAULT_TOL) -> "AngleSpec":
        radians = float(radians)
        if not (0.0 < radians < math.pi):
            raise OutOfRange(f"angle {radians!r} rad is not in the open interval (0, pi)")
        return cls(radians, math.cos(radians), tol)

    @classmethod
    def from_pi_fraction(cls, frac, tol: float = DEFAULT_TOL) -> "AngleSpec":
        frac = Fraction(frac)
        if not (0 < frac < 1):
            raise OutOfRange(f"angle {frac}*pi is not in the open interval (0, pi)")
        return cls(
            frac.numerator * math.pi / frac.denominator,
            _cos_of_pi_fraction(frac),
            tol,
            frac == Fraction(1, 2),
        )

    @classmethod
    def right(cls, tol: float = DEFAULT_TOL) -> "AngleSpec":
        return cls.from_pi_fraction(Fraction(1, 2), tol)

    @classmethod
    def from_cosine(cls, cosine: float, tol: float = DEFAULT_TOL) -> "AngleSpec":
        if not (-1.0 < cosine < 1.0):
            raise OutOfRange(f"cosine {cosine!r} is not in (-1, 1)")
        return cls(math.acos(cosine), float(cosine), tol)

    def with_tol(self, tol: float) -> "AngleSpec":
        return AngleSpec(self.radians, self.cosine, tol, self.exact_right)

    def label(self) -> str:
        if self.exact_right:
            return "pi/2"
        return repr(self.radians) + "rad"


_NUM = r"[-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?"
_PI_RE = re.compile(r"^(?:(?P<p>\d+)\s*\*?\s*)?pi(?:\s*/\s*(?P<q>\d+))?$")
_UNIT_RE = re.compile(rf"^(?P<x>{_NUM})\s*(?P<unit>rad|deg)$")


def parse_angle(text: str, tol: float = DEFAULT_TOL) -> AngleSpec:
    """Parse ``pi/q``, ``p pi/q``, ``<x>rad`` or ``<x>deg`` into an AngleSpec.

    Rational multiples of pi (including whole degrees) keep exact cosines
    for the common denominators, and ``pi/2`` / ``90deg`` enable the exact
    right-angle mode.
    """
    s = text.strip().lower()
    m = _PI_RE.match(s)
    if m:
        p = int(m.group("p") or 1)
        q = int(m.group("q") or 1)
        if q == 0:
            raise ParseError(f"zero denominator in angle {text!r}")
        return AngleSpec.from_pi_fraction(Fraction(p, q), tol)
    m = _UNIT_RE.match(s)
    if not m:
        raise ParseError(f"cannot parse angle {text!r}; expected pi/q, p*pi/q, <x>rad or <x>deg")
    if m.group("unit") == "deg":
        deg = Fraction(m.group("x"))
        return AngleSpec.from_pi_fraction(deg / 180, tol)
    return AngleSpec.from_radians(float(m.group("x")), tol)


def parse_angles(text: str, tol: float = DEFAULT_TOL) -> list:
    return [parse_angle(part, tol) for part in text.split(",") if part.strip()]


def _check_triple(a, b, c):
    if not (len(a) == len(b) == len(c)):
        raise DimensionMismatch("points of different dimensions")


def angle_cosine(a: Sequence[Coord], b: Sequence[Coord], c: Sequence[Coord]) -> float:
    """Cosine of the angle at vertex ``b`` between rays b->a and b->c.

    The result is clamped to [-1, 1].
    """
    _check_triple(a, b, c)
    u = [float(x) - float(y) for x, y in zip(a, b)]
    v = [float(x) - float(y) for x, y in zip(c, b)]
    dot = u[0] * v[0]
    su = u[0] * u[0]
    sv = v[0] * v[0]
    for i in range(1, len(u)):
        dot = dot + u[i] * v[i]
        su = su + u[i] * u[i]
        sv = sv + v[i] * v[i]
    if su == 0.0 or sv == 0.0:
        raise DegenerateAngle("vertex coincides with an endpoint")
    cos = dot / (math.sqrt(su) * math.sqrt(sv))
    return max(-1.0, min(1.0, cos))


def exact_dot(a, b, c):
    """Exact (b->a) . (b->c) for rational coordinates."""
    _check_triple(a, b, c)
    u = [Fraction(x) - Fraction(y) for x, y in zip(a, b)]
    v = [Fraction(x) - Fraction(y) for x, y in zip(c, b)]
    if not any(u) or not any(v):
        raise DegenerateAngle("vertex coincides with an endpoint")
    return sum(x * y for x, y in zip(u, v))


def matches_angle(a, b, c, spec: AngleSpec, exact: Optional[bool] = None) -> bool:
    """True iff the angle at ``b`` realises ``spec``.

    ``exact=None`` picks exact arithmetic when ``spec.exact_right`` holds and
    all nine-or-more coordinates are rational; counters pass an explicit
    set-level decision instead.
    """
    if exact is None:
        exact = spec.exact_right and all(is_exact_number(x) for p in (a, b, c) for x in p)
    if exact:
        if not spec.exact_right:
            raise InvalidParams("exact matching is only defined for right angles")
        return exact_dot(a, b, c) == 0
    return abs(angle_cosine(a, b, c) - spec.cosine) <= spec.tol


@dataclass(frozen=True, eq=False)
class SimilarityTransform:
    """x -> scale * rotation @ x + translation."""

    rotation: np.ndarray
    translation: np.ndarray
    scale: float = 1.0
    _exact: bool = field(default=False, repr=False)

    def __post_init__(self):
        rot = self.rotation
        exact = (
            is_exact_number(self.scale)
            and all(is_exact_number(x) for x in np.asarray(rot, dtype=object).ravel())
            and all(is_exact_number(x) for x in np.asarray(self.translation, dtype=object).ravel())
        )
        r = np.asarray(rot, dtype=float)
        t = np.asarray(self.translation, dtype=float)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise DimensionMismatch("rotation must be a square matrix")
        if t.shape != (r.shape[0],):
            raise DimensionMismatch("translation length must match rotation size")
        if not np.allclose(r @ r.T, np.eye(r.shape[0]), rtol=0.0, atol=1e-12):
            raise InvalidParams("rotation is not orthogonal to 1e-12")
        if not (self.scale > 0):
            raise InvalidParams("scale must be positive")
        object.__setattr__(self, "_exact", exact)
        if exact:
            object.__setattr__(self, "rotation", np.asarray(rot, dtype=object))
            object.__setattr__(self, "translation", np.asarray(self.translation, dtype=object))
        else:
            object.__setattr__(self, "rotation", r)
            object.__setattr__(self, "translation", t)

    @property
    def dim(self) -> int:
        return self.rotation.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "SimilarityTransform":
        return cls(np.eye(dim, dtype=int).astype(object), np.zeros(dim, dtype=int).astype(object), 1)

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator, scale_range=(0.5, 2.0), shift: float = 10.0):
        return cls(
            random_orthogonal(dim, rng),
            rng.uniform(-shift, shift, size=dim),
            float(rng.uniform(*scale_range)),
        )


def random_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


def apply_similarity(ps: PointSet, t: SimilarityTransform) -> PointSet:
    """Map every point through ``t``; exact inputs with an exact map stay exact."""
    if t.dim != ps.dim:
        raise DimensionMismatch(f"transform is {t.dim}-dimensional, point set is {ps.dim}-dimensional")
    if t._exact and ps.is_exact:
        rot = [[Fraction(x) for x in row] for row in t.rotation]
        tr = [Fraction(x) for x in t.translation]
        s = Fraction(t.scale)
        pts = []
        for p in ps.points:
            q = [s * sum(r * Fraction(x) for r, x in zip(row, p)) + tt for row, tt in zip(rot, tr)]
            pts.append(tuple(q))
        return PointSet(ps.dim, tuple(pts), ps.pin)
    arr = ps.as_array()
    rot = np.asarray(t.rotation, dtype=float)
    out = float(t.scale) * (arr @ rot.T) + np.asarray(t.translation, dtype=float)
    return PointSet(ps.dim, tuple(map(tuple, out.tolist())), ps.pin)


def points_from(rows: Iterable[Sequence[Coord]], dim: Optional[int] = None, pin: Optional[int] = None) -> PointSet:
    rows = [tuple(r) for r in rows]
    if dim is None:
        if not rows:
            raise InvalidParams("cannot infer dimension of an empty point list")
        dim = len(rows[0])
    return PointSet(dim, tuple(rows), pin)
