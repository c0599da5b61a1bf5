"""Command-line front end.

Every verb prints one JSON object on stdout.  Counts are decimal strings.
Exit status: 0 success, 1 runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .analysis import default_query, fit_exponent, scaling_sweep, search_extremal
from .constructions import GENERATORS, designated_chains, generate
from .counting import (
    ChainQuery,
    Pin,
    count_chains,
    count_pairs_at_distance,
    count_rich_lines,
    query,
)
from .errors import AngleChainError, DegenerateFit
from .geometry import AngleSpec, matches_angle, parse_angle
from .io import load_pointset, save_pointset

_METHODS = {"brute": "brute", "dp": "dp", "planar-fast": "planar_fast", "auto": "auto"}


def _angle_list(text: str) -> list:
    out = []
    for part in text.split(","):
        if not part.strip():
            continue
        try:
            out.append(parse_angle(part))
        except AngleChainError as e:
            raise argparse.ArgumentTypeError(f"{type(e).__name__}: {e}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty angle list")
    return out


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _pin(text: str):
    t = text.strip().lower()
    if t == "none":
        return None
    kind, _, idx = t.partition(":")
    if kind not in ("first", "middle"):
        raise argparse.ArgumentTypeError(f"pin must be none, first[:IDX] or middle[:IDX], got {text!r}")
    if not idx:
        return (kind, None)
    try:
        return (kind, int(idx))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad pin index in {text!r}") from None


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, separators=(",", ":")) + "\n")


def _with_tol(angles, tol):
    return [a.with_tol(tol) for a in angles] if angles else angles


def _construction_args(p: argparse.ArgumentParser):
    p.add_argument("--construction", required=True, choices=sorted(GENERATORS))
    p.add_argument("--angles", type=_angle_list, help="comma-separated angles, e.g. pi/3,pi/2")
    p.add_argument("--k", type=int, help="chain length for the R^6 families")
    p.add_argument("--c", type=_float_list, help="radii c_1..c_{k+2} for acute-r6")
    p.add_argument("--pinned", action="store_true", help="pinned variant of the R^6 families")
    p.add_argument("--dim", type=int, default=2, help="ambient dimension for middle-pinned")
    p.add_argument("--seed", type=int, default=0)


def _gen_kwargs(args) -> dict:
    return {"angles": _with_tol(args.angles, args.tol), "k": args.k, "c": args.c,
            "pinned": args.pinned, "dim": args.dim, "seed": args.seed}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anglechains", description="Count and construct angle chains.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True)

    g = sub.add_parser("generate", help="write a construction to a point-set file")
    _construction_args(g)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--out", required=True, help="output path (.json or .csv)")
    g.add_argument("--tol", type=_positive, default=1e-9)

    c = sub.add_parser("count", help="count chains, distance pairs or rich lines")
    c.add_argument("--input", required=True)
    c.add_argument("--dim", type=int)
    mode = c.add_mutually_exclusive_group(required=True)
    mode.add_argument("--angles", type=_angle_list)
    mode.add_argument("--distance", type=_positive)
    mode.add_argument("--rich-lines", type=int, dest="rich_lines")
    c.add_argument("--tol", type=_positive, default=1e-9)
    c.add_argument("--method", choices=sorted(_METHODS), default="auto")
    c.add_argument("--distinct", choices=("local", "full"), default="full")
    c.add_argument("--pin", type=_pin, default=None, help="none, first[:IDX] or middle[:IDX]")
    c.add_argument("--witnesses", type=int, default=0)
    c.add_argument("--allow-duplicates", action="store_true", dest="allow_duplicates")

    s = sub.add_parser("sweep", help="count a construction over a size grid and fit the exponent")
    _construction_args(s)
    s.add_argument("--n-grid", type=_int_list, required=True, dest="n_grid")
    s.add_argument("--tol", type=_positive, default=1e-9)
    s.add_argument("--method", choices=sorted(_METHODS), default="auto")
    s.add_argument("--distinct", choices=("local", "full"), default="local")
    s.add_argument("--distance", type=_positive, help="pair distance for the lenz family")

    r = sub.add_parser("search", help="hill-climb for configurations with many chains")
    r.add_argument("--d", type=int, required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--angles", type=_angle_list, required=True)
    r.add_argument("--iters", type=int, default=200)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--target", type=Fraction, default=Fraction(3), help="normalising exponent")
    r.add_argument("--start", choices=("lattice", "random"), default="lattice")
    r.add_argument("--distinct", choices=("local", "full"), default="local")
    r.add_argument("--tol", type=_positive, default=1e-9)
    r.add_argument("--out", help="also save the best configuration here")

    v = sub.add_parser("validate", help="check a point-set file or a construction's designated chains")
    src = v.add_mutually_exclusive_group(required=True)
    src.add_argument("--input")
    src.add_argument("--construction", choices=sorted(GENERATORS))
    v.add_argument("--dim", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--angles", type=_angle_list)
    v.add_argument("--k", type=int)
    v.add_argument("--c", type=_float_list)
    v.add_argument("--pinned", action="store_true")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--limit", type=int, default=10000, help="designated chains to check")
    v.add_argument("--tol", type=_positive, default=1e-9)
    return parser


def _cmd_generate(args) -> int:
    out = generate(args.construction, args.n, **_gen_kwargs(args))
    save_pointset(out.points, args.out)
    _emit({"construction": args.construction, "n": args.n, "points": len(out.points),
           "dim": out.points.dim, "pin": out.points.pin,
           "claimed_exponent": str(out.claimed_exponent),
           "angle_type": [a.label() for a in out.angle_type], "out": str(args.out)})
    return 0


def _cmd_count(parser, args) -> int:
    E = load_pointset(args.input, args.dim)
    if args.distance is not None:
        cnt = count_pairs_at_distance(E, args.distance, args.tol)
        _emit({"count": str(cnt), "n": len(E), "mode": "distance", "distance": args.distance, "tol": args.tol})
        return 0
    if args.rich_lines is not None:
        rep = count_rich_lines(E, args.rich_lines, args.tol)
        _emit({"count": str(rep.line_count), "n": len(E), "mode": "rich_lines", "r": args.rich_lines,
               "tol": args.tol})
        return 0
    pin = None
    if args.pin is not None:
        kind, idx = args.pin
        if idx is None:
            if E.pin is None:
                parser.error(f"--pin {kind} needs an index: the input file has no pin")
            idx = E.pin
        pin = Pin(kind, idx)
    q = query(_with_tol(args.angles, args.tol), pin=pin, distinctness=args.distinct,
              method=_METHODS[args.method], allow_duplicates=args.allow_duplicates)
    rep = count_chains(E, q, witnesses=args.witnesses)
    _emit(rep.to_json(tol=args.tol))
    return 0


def _cmd_sweep(args) -> int:
    out0 = generate(args.construction, args.n_grid[0], **_gen_kwargs(args))
    q = default_query(out0, distinctness=args.distinct, method=_METHODS[args.method])
    if q is not None:
        q = _unpinned_index(q)
    samples = scaling_sweep(args.construction, args.n_grid, q, params=_gen_kwargs(args),
                            distance=args.distance, tol=args.tol)
    report = {"construction": args.construction, "claimed_exponent": str(out0.claimed_exponent),
              "distinct": args.distinct, "tol": args.tol,
              "samples": [s.to_json() for s in samples]}
    try:
        report["fit"] = fit_exponent(samples).to_json()
    except DegenerateFit as e:
        report["fit"] = None
        report["fit_error"] = str(e)
    _emit(report)
    return 0


def _unpinned_index(q):
    # the pin index is re-resolved per n inside the sweep
    if q.pin is None:
        return q
    return ChainQuery(q.angles, Pin(q.pin.kind, None), q.distinctness, q.method, q.allow_duplicates)


def _cmd_search(args) -> int:
    st = search_extremal(args.d, args.n, _with_tol(args.angles, args.tol), args.iters, args.seed,
                         target_exponent=args.target, start=args.start, distinctness=args.distinct)
    if args.out:
        save_pointset(st.best_points, args.out)
    _emit(st.to_json())
    return 0


def _cmd_validate(parser, args) -> int:
    if args.input is not None:
        E = load_pointset(args.input, args.dim)
        dups = E.duplicates()
        _emit({"valid": not dups, "n": len(E), "dim": E.dim, "pin": E.pin, "exact": E.is_exact,
               "duplicate_pairs": len(dups)})
        return 0 if not dups else 1
    if args.n is None:
        parser.error("--construction needs --n")
    out = generate(args.construction, args.n, angles=_with_tol(args.angles, args.tol), k=args.k, c=args.c,
                   pinned=args.pinned, dim=args.dim or 2, seed=args.seed)
    P = out.points.points
    checked = failures = 0
    for ch in designated_chains(out, args.limit):
        checked += 1
        ok = all(matches_angle(P[ch[i]], P[ch[i + 1]], P[ch[i + 2]], out.angle_type[i])
                 for i in range(len(ch) - 2))
        failures += not ok
    dups = out.points.duplicates()
    valid = failures == 0 and not dups and len(out.points) > 0
    _emit({"valid": valid, "construction": args.construction, "n": args.n, "points": len(out.points),
           "checked": checked, "failures": failures, "duplicate_pairs": len(dups)})
    return 0 if valid else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.verb == "generate":
            return _cmd_generate(args)
        if args.verb == "count":
            return _cmd_count(parser, args)
        if args.verb == "sweep":
            return _cmd_sweep(args)
        if args.verb == "search":
            return _cmd_search(args)
        return _cmd_validate(parser, args)
    except AngleChainError as e:
        sys.stderr.write(f"anglechains: {type(e).__name__}: {e}\n")
        return 1


run = main

if __name__ == "__main__":
    sys.exit(main())
