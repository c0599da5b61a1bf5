"""Point-set files.

JSON (canonical)::

    {"dim": 2, "pin": 0, "points": [[0, 0], [1, 0], ["1/2", 0.25]]}

Integers stay integers, rationals are "p/q" strings and floats are written
with 17 significant digits, so a save/load round trip is exact.  CSV files
are headerless, one point per row, and need the dimension from the caller.
"""

from __future__ import annotations

import csv
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .errors import AngleChainError, FormatError
from .geometry import PointSet


def _format_float(x: float) -> str:
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def _encode_coord(x):
    if isinstance(x, bool):
        raise FormatError("boolean coordinate")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return _RawFloat(float(x))


class _RawFloat(float):
    pass


def _dump(obj) -> str:
    # json.dumps writes repr(float); emit the fixed 17-digit form instead
    if isinstance(obj, _RawFloat):
        if not math.isfinite(obj):
            raise FormatError(f"non-finite coordinate {obj}")
        return _format_float(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_dump(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dump(v) for v in obj) + "]"
    return json.dumps(obj)


def pointset_to_json(ps: PointSet) -> str:
    doc = {"dim": ps.dim}
    if ps.pin is not None:
        doc["pin"] = ps.pin
    doc["points"] = [[_encode_coord(x) for x in p] for p in ps.points]
    return _dump(doc)


def _decode_coord(v, where: str):
    if isinstance(v, bool) or v is None:
        raise FormatError(f"{where}: expected a number, got {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        if not math.isfinite(v):
            raise FormatError(f"{where}: non-finite coordinate")
        return v
    if isinstance(v, str):
        return _parse_text_coord(v, where)
    raise FormatError(f"{where}: expected a number, got {type(v).__name__}")


def _parse_text_coord(text: str, where: str):
    t = text.strip()
    if not t:
        raise FormatError(f"{where}: empty field")
    try:
        if "/" in t:
            return Fraction(t)
        if any(ch in t for ch in ".eE") or t.lower() in ("nan", "inf", "-inf"):
            v = float(t)
            if not math.isfinite(v):
                raise FormatError(f"{where}: non-finite coordinate {t!r}")
            return v
        return int(t)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"{where}: cannot parse {t!r} as a coordinate") from None


def pointset_from_json(text: str, source: str = "<json>") -> PointSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{source}: line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise FormatError(f"{source}: top level must be an object")
    unknown = set(doc) - {"dim", "pin", "points"}
    if unknown:
        raise FormatError(f"{source}: unknown field(s) {sorted(unknown)}")
    dim = doc.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise FormatError(f"{source}: field 'dim' must be a positive integer")
    pts = doc.get("points")
    if not isinstance(pts, list):
        raise FormatError(f"{source}: field 'points' must be a list")
    rows = []
    for i, p in enumerate(pts):
        if not isinstance(p, list):
            raise FormatError(f"{source}: points[{i}] must be a list")
        if len(p) != dim:
            raise FormatError(f"{source}: points[{i}] has {len(p)} coordinates, expected dim = {dim}")
        rows.append(tuple(_decode_coord(v, f"{source}: points[{i}][{j}]") for j, v in enumerate(p)))
    pin = doc.get("pin")
    if pin is not None and (isinstance(pin, bool) or not isinstance(pin, int)):
        raise FormatError(f"{source}: field 'pin' must be an integer")
    if pin is not None and not (0 <= pin < len(rows)):
        raise FormatError(f"{source}: field 'pin' = {pin} out of range for {len(rows)} points")
    try:
        return PointSet(dim, tuple(rows), pin)
    except AngleChainError as e:
        raise FormatError(f"{source}: {e}") from None


def pointset_from_csv(text: str, dim: int, source: str = "<csv>") -> PointSet:
    rows = []
    for lineno, rec in enumerate(csv.reader(text.splitlines()), start=1):
        if not rec or all(not f.strip() for f in rec):
            continue
        if len(rec) != dim:
            raise FormatError(f"{source}: line {lineno} has {len(rec)} fields, expected dim = {dim}")
        rows.append(tuple(_parse_text_coord(f, f"{source}: line {lineno} field {j + 1}")
                          for j, f in enumerate(rec)))
    return PointSet(dim, tuple(rows))


def pointset_to_csv(ps: PointSet) -> str:
    out = []
    for p in ps.points:
        fields = []
        for x in p:
            enc = _encode_coord(x)
            fields.append(_format_float(enc) if isinstance(enc, _RawFloat) else str(enc))
        out.append(",".join(fields))
    return "\n".join(out) + ("\n" if out else "")


def _is_csv(path: Path) -> bool:
    return path.suffix.lower() in (".csv", ".txt")


def load_pointset(path, dim: Optional[int] = None) -> PointSet:
    """Read a point set; CSV (by extension) needs ``dim``."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise FormatError(f"{p}: {e.strerror}") from None
    if _is_csv(p):
        if dim is None:
            raise FormatError(f"{p}: CSV input needs an explicit dimension")
        return pointset_from_csv(text, dim, str(p))
    ps = pointset_from_json(text, str(p))
    if dim is not None and ps.dim != dim:
        raise FormatError(f"{p}: file has dim = {ps.dim}, expected {dim}")
    return ps


def save_pointset(ps: PointSet, path) -> None:
    p = Path(path)
    if _is_csv(p):
        p.write_text(pointset_to_csv(ps))
    else:
        p.write_text(pointset_to_json(ps) + "\n")
