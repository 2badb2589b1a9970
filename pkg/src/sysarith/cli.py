"""Command-line front end.

Subcommands run the minimal-factor searches, the same-systole family
generator, the cover constructions, systole queries, bound evaluators, and
volume computations, emitting aligned tables, CSV, or JSON.  A plain-text
unit cache (``--cache`` or ``SYSARITH_CACHE``) persists fundamental units
between runs; results are identical with or without it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from collections import Counter

from .constructions import (
    cover_algebra_2d,
    cover_algebra_3d,
    growth_check,
    same_systole_family_q,
    systole_field_q,
    theorem_area_log_bound_2d,
)
from .errors import (
    EXIT_INPUT_ERROR,
    EXIT_NO_CANDIDATE,
    EXIT_OK,
    InputError,
    NoCandidateError,
)
from .geodesics import MODE_PAPER, MODE_TRACE, exact_systole_q
from .quaternion import algebra_q
from .real_quadratic import load_unit_cache, quad_field, save_unit_cache
from .search import _norm_choices, minimal_algebra_2d, valid_algebra_3d
from .volume import coarea_q, format_volume, volume_constant_qi, volume_qi

HEADER_L = "Lower Bound for Systole Length l"
HEADER_SET = "Ramification Set"
HEADER_FACTOR = "Area Factor"
HEADER_VOLUME = "Volume"

FORMATS = ("table", "csv", "json")


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with the input-error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def _parse_int_list(text: str, what: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise InputError(f"malformed {what} list: {text!r}") from None
    if not values:
        raise InputError(f"empty {what} list: {text!r}")
    return values


def _fmt_num(x: float) -> str:
    return f"{x:g}"


def _fmt_set(values) -> str:
    return "{" + ",".join(str(v) for v in values) + "}"


def _emit_rows(fmt: str, headers: list[str], rows: list[list[str]],
               footer: str | None = None) -> None:
    if fmt == "csv":
        print(",".join(headers))
        for row in rows:
            print(",".join(row))
        return
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    print("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip())
    for row in rows:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    if footer:
        print(footer)


def _emit(fmt: str, payload: dict, headers: list[str], rows: list[list[str]],
          footer: str | None = None) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        _emit_rows(fmt, headers, rows, footer)


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_search2d(args) -> int:
    res = minimal_algebra_2d(args.systole, args.torsion_free, args.workers)
    rows = [[_fmt_num(args.systole), _fmt_set(s), str(res.factor)]
            for s in res.sets]
    _emit(args.format, res.to_json(), [HEADER_L, HEADER_SET, HEADER_FACTOR], rows)
    return EXIT_OK


def _cmd_search3d(args) -> int:
    res = valid_algebra_3d(args.systole, args.norm_bound, args.budget)
    rows = [[_fmt_num(args.systole),
             _fmt_set(P.norm for P in s),
             format_volume(res.volume)]
            for s in res.sets]
    _emit(args.format, res.to_json(), [HEADER_L, HEADER_SET, HEADER_VOLUME], rows)
    return EXIT_OK


def _cmd_family(args) -> int:
    base = algebra_q(_parse_int_list(args.ram, "prime"))
    if args.field is not None:
        field = quad_field(args.field)
    else:
        field = systole_field_q(base, args.cap)
    entries = same_systole_family_q(base, field, args.count)
    c_obs = growth_check(entries) if len(entries) >= 2 else None
    payload = {
        "base": base.to_json(),
        "field_d": field.d,
        "entries": [e.to_json() for e in entries],
        "c_obs": c_obs,
    }
    rows = [[str(e.index), _fmt_set(e.ram), str(e.factor)] for e in entries]
    footer = None if c_obs is None else f"c_obs = {c_obs:.6g}"
    _emit(args.format, payload, ["Index", HEADER_SET, HEADER_FACTOR], rows, footer)
    return EXIT_OK


def _cmd_cover2d(args) -> int:
    res = cover_algebra_2d(args.systole, args.torsion_free, args.exact)
    payload = dict(res.to_json(), x=args.systole)
    rows = [[_fmt_num(args.systole), _fmt_set(res.algebra.ram_sorted),
             str(res.factor)]]
    _emit(args.format, payload, [HEADER_L, HEADER_SET, HEADER_FACTOR], rows)
    return EXIT_OK


def _cmd_cover3d(args) -> int:
    res = cover_algebra_3d(args.systole, args.torsion_free)
    vol = volume_qi(res.algebra)
    payload = dict(res.to_json(), x=args.systole, volume=vol)
    rows = [[_fmt_num(args.systole),
             _fmt_set(P.norm for P in res.algebra.ram_sorted),
             format_volume(vol)]]
    _emit(args.format, payload, [HEADER_L, HEADER_SET, HEADER_VOLUME], rows)
    return EXIT_OK


def _cmd_systole2d(args) -> int:
    base = algebra_q(_parse_int_list(args.ram, "prime"))
    res = exact_systole_q(base, args.mode, args.cap)
    if not res.found:
        raise NoCandidateError(
            f"no geodesic of length below {args.cap} for {args.ram}")
    if args.format == "json":
        print(json.dumps(res.to_json(), indent=2))
    elif args.format == "csv":
        print("Systole Length,Field")
        print(f"{res.length:.6f},{res.field.d}")
    else:
        print(f"{res.length:.6f} (d={res.field.d})")
    return EXIT_OK


def _cmd_bounds(args) -> int:
    value = theorem_area_log_bound_2d(args.x, args.c1, args.c2)
    payload = {"x": args.x, "c1": args.c1, "c2": args.c2,
               "log_area_bound": value}
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    elif args.format == "csv":
        print("x,c1,c2,Log Area Bound")
        print(f"{_fmt_num(args.x)},{_fmt_num(args.c1)},{_fmt_num(args.c2)},"
              f"{value:.6f}")
    else:
        print(f"Log Area Bound: {value:.6f}")
    return EXIT_OK


def _cmd_volume(args) -> int:
    if args.base == "q":
        if args.ram is None:
            raise InputError("--base q requires --ram")
        primes = _parse_int_list(args.ram, "prime")
        algebra = algebra_q(primes)
        vol = coarea_q(algebra)
        factor = math.prod(p - 1 for p in algebra.ram_sorted)
        members = algebra.ram_sorted
    else:
        if args.ram_norms is None:
            raise InputError("--base qi requires --ram-norms")
        norms = sorted(_parse_int_list(args.ram_norms, "norm"))
        for norm, mult in Counter(norms).items():
            _norm_choices(norm, mult)  # validates realizability
        if len(norms) % 2 != 0 or len(norms) < 2:
            raise InputError(
                f"norm multiset must have even cardinality >= 2, got {norms}")
        vol = volume_constant_qi() * math.prod(n - 1 for n in norms)
        factor = math.prod(n - 1 for n in norms)
        members = norms
    payload = {"base": args.base, "ram": list(members), "factor": factor,
               "volume": vol}
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    elif args.format == "csv":
        print(f"{HEADER_SET},{HEADER_VOLUME}")
        print(f"{_fmt_set(members)},{format_volume(vol)}")
    else:
        print(format_volume(vol))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> _Parser:
    parser = _Parser(prog="sysarith",
                     description="Arithmetic systole searches and constructions.")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table",
                        help="output format (default: table)")
    common.add_argument("--cache", default=None,
                        help="unit cache path (overrides SYSARITH_CACHE)")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("search2d", parents=[common],
                       help="minimal area-factor ramification set over Q")
    p.add_argument("--systole", type=float, required=True, metavar="L",
                   help="lower bound for the systole length")
    p.add_argument("--torsion-free", action="store_true",
                   help="require the torsion-freeness conditions")
    p.add_argument("--workers", type=int, default=1,
                   help="worker threads for the sweep (default: 1)")
    p.set_defaults(func=_cmd_search2d)

    p = sub.add_parser("search3d", parents=[common],
                       help="small-volume valid ramification set over Q(i)")
    p.add_argument("--systole", type=float, required=True, metavar="L")
    p.add_argument("--norm-bound", type=int, default=100,
                   help="ideal pool norm bound (default: 100)")
    p.add_argument("--budget", type=int, default=200_000,
                   help="candidate evaluation budget (default: 200000)")
    p.set_defaults(func=_cmd_search3d)

    p = sub.add_parser("family", parents=[common],
                       help="same-systole family over a base algebra")
    p.add_argument("--ram", required=True,
                   help="comma-separated base ramification primes")
    p.add_argument("--count", type=int, required=True,
                   help="number of family entries")
    p.add_argument("--field", type=int, default=None,
                   help="systole field d (default: computed from the base)")
    p.add_argument("--cap", type=float, default=5.0,
                   help="systole search cap when deriving the field")
    p.set_defaults(func=_cmd_family)

    p = sub.add_parser("cover2d", parents=[common],
                       help="greedy cover algebra over Q")
    p.add_argument("--systole", type=float, required=True, metavar="X",
                   help="systole parameter x (disc bound e^(2+2x))")
    p.add_argument("--torsion-free", action="store_true")
    p.add_argument("--exact", action="store_true",
                   help="exhaustive minimal cover (small x only)")
    p.set_defaults(func=_cmd_cover2d)

    p = sub.add_parser("cover3d", parents=[common],
                       help="greedy cover algebra over Q(i)")
    p.add_argument("--systole", type=float, required=True, metavar="X")
    p.add_argument("--torsion-free", action="store_true")
    p.set_defaults(func=_cmd_cover3d)

    p = sub.add_parser("systole2d", parents=[common],
                       help="exact systole of a surface over Q")
    p.add_argument("--ram", required=True,
                   help="comma-separated ramification primes")
    p.add_argument("--mode", choices=(MODE_PAPER, MODE_TRACE),
                   default=MODE_PAPER)
    p.add_argument("--cap", type=float, default=5.0,
                   help="search cap on the geodesic length (default: 5)")
    p.set_defaults(func=_cmd_systole2d)

    p = sub.add_parser("bounds", parents=[common],
                       help="log-domain area bound with explicit constants")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--c1", type=float, default=1.0)
    p.add_argument("--c2", type=float, default=1.0)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("volume", parents=[common],
                       help="coarea or volume of a given ramification set")
    p.add_argument("--base", choices=("q", "qi"), default="q")
    p.add_argument("--ram", default=None,
                   help="comma-separated primes (base q)")
    p.add_argument("--ram-norms", default=None,
                   help="comma-separated ideal norms (base qi)")
    p.set_defaults(func=_cmd_volume)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INPUT_ERROR
    cache_path = args.cache or os.environ.get("SYSARITH_CACHE")
    if cache_path and os.path.exists(cache_path):
        load_unit_cache(cache_path)
    try:
        code = args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except NoCandidateError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NO_CANDIDATE
    if cache_path:
        save_unit_cache(cache_path)
    return code


if __name__ == "__main__":
    sys.exit(main())
