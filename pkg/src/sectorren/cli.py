"""Command-line front end.

Every subcommand writes its result to ``--out`` (plus ``<out>.manifest.json``)
or, without ``--out``, to stdout with the manifest as one JSON line on
stderr.  Exit status: 0 on success, 1 on a domain error, 2 on a usage error.
"""
from __future__ import annotations

import argparse
import hashlib
import io
import json
import re
import sys
import time
from fractions import Fraction

import mpmath

from . import __version__
from .cardioid import fmt17, scaling_report
from .fractal import (
    BACKEND,
    Window,
    area_estimate,
    boundary_fraction,
    closest_returns,
    render,
    siegel_orbit,
    siegel_parameter,
    zoom_sequence,
)
from .powertriples import TriplesContext, iota
from .rotnum import check_word, itinerary, parse_rotation, periodic_point, prime_renorm
from .surd import QuadSurd
from .tiling import (
    DominantSequence,
    build_tiling,
    close_return,
    close_return_oracle,
    dominant_points,
)


class UsageError(Exception):
    pass


# -- argument parsing helpers ------------------------------------------------

def _complex(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}") from None
    if len(parts) == 1:
        return complex(parts[0], 0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}")
    return complex(parts[0], parts[1])


def _pair(text: str) -> tuple[str, str]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected lo,hi but got {text!r}")
    return parts[0].strip(), parts[1].strip()


def _resolution(text: str) -> tuple[int, int]:
    try:
        parts = [int(p) for p in text.lower().split("x")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or WxH but got {text!r}") from None
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2 or min(parts) < 1:
        raise argparse.ArgumentTypeError(f"expected N or WxH but got {text!r}")
    return parts[0], parts[1]


def _word(text: str) -> str:
    try:
        return check_word(text.strip().upper())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _exact_number(text: str, D: int):
    """Window endpoints and generation bounds: ``p/q``, decimal or ``surd:p,q,r,D``."""
    text = text.strip()
    if text.startswith("surd:"):
        p, q, r, d = (int(x) for x in text[5:].split(","))
        return QuadSurd(p, q, r, d)
    return QuadSurd(Fraction(text).numerator, 0, Fraction(text).denominator, D)


def _surd_line(name: str, x: QuadSurd) -> str:
    return f"{name} = {x}  ({fmt17(x)})"


# -- subcommands -------------------------------------------------------------

def cmd_renorm(args) -> tuple[str, dict]:
    theta = parse_rotation(args.theta)
    it = itinerary(theta, args.steps)
    buf = io.StringIO()
    buf.write("step,theta,symbol\n")
    for k, x in enumerate(it.orbit):
        sym = it.word[k] if k < len(it.word) else ""
        buf.write(f"{k},{fmt17(x)},{sym}\n")
    meta = {"itinerary": it.word, "hit_zero": it.hit_zero}
    return buf.getvalue(), meta


def cmd_fixed_point(args) -> tuple[str, dict]:
    e = periodic_point(args.word)
    M = e.matrix
    theta = e.theta_star
    for _ in e.word:
        theta = prime_renorm(theta)
    lines = [
        f"word = {e.word}",
        f"matrix = [[{M.m11},{M.m12}],[{M.m21},{M.m22}]]",
        _surd_line("theta_star", e.theta_star),
        _surd_line("t", e.t),
        _surd_line("lambda_star", e.lambda_star),
        _surd_line("v", e.v),
        _surd_line("w", e.w),
        f"det = {M.det}",
        f"lambda_star == t^2: {e.lambda_star == e.t * e.t}",
        f"periodic: {theta == e.theta_star}",
    ]
    return "\n".join(lines) + "\n", {}


def _window(args, ctx: TriplesContext):
    if args.window_level is not None:
        m = args.window_level
        return -ctx.v_n(m), ctx.w_n(m)
    if args.window is None:
        raise UsageError("one of --window or --window-level is required")
    lo, hi = args.window
    D = ctx.t.D
    return _exact_number(lo, D), _exact_number(hi, D)


def cmd_tiling(args) -> tuple[str, dict]:
    ctx = TriplesContext.from_word(args.word)
    tiling = build_tiling(ctx, args.level, _window(args, ctx))
    buf = io.StringIO()
    buf.write("index,kind,left,right,n,a,b\n")
    for tile in tiling:
        P = tile.landing
        buf.write(f"{tile.index},{tile.kind},{fmt17(tile.left)},{fmt17(tile.right)},{P.n},{P.a},{P.b}\n")
    return buf.getvalue(), {"tiles": len(tiling), "kinds": tiling.kinds}


def cmd_dominant(args) -> tuple[str, dict]:
    ctx = TriplesContext.from_word(args.word)
    buf = io.StringIO()
    buf.write("index,position,n,a,b,generation\n")
    if args.max_generation is not None:
        D = ctx.t.D
        window = _window(args, ctx)
        found = dominant_points(ctx, _exact_number(args.max_generation, D), window)
        points, k = list(found), found.k
    else:
        seq = DominantSequence(ctx)
        points, k = seq.points(args.first, args.last + 1), seq.k
    for p in points:
        P = p.generation
        buf.write(f"{p.index},{fmt17(p.position)},{P.n},{P.a},{P.b},{fmt17(iota(P, ctx))}\n")
    return buf.getvalue(), {"k": k}


def cmd_close_return(args) -> tuple[str, dict]:
    ctx = TriplesContext.from_word(args.word)
    seq = DominantSequence(ctx)
    buf = io.StringIO()
    buf.write("i,Q_n,Q_a,Q_b,n,m,oracle_agrees\n")
    agree = True
    for i in range(args.index, args.index + args.count):
        cr = close_return(ctx, i, seq)
        ok = ""
        if args.oracle:
            same = close_return_oracle(ctx, i, seq) == cr
            agree &= same
            ok = "true" if same else "false"
        buf.write(f"{i},{cr.Q.n},{cr.Q.a},{cr.Q.b},{cr.n},{cr.m},{ok}\n")
    return buf.getvalue(), {"oracle_agrees": agree if args.oracle else None}


def cmd_scaling(args) -> tuple[str, dict]:
    report = scaling_report(args.word, parse_rotation(args.start), args.steps, precision=args.precision)
    meta = {"precision_bits": report.precision, "truncated": report.truncated, "notes": list(report.notes)}
    return report.to_csv(), meta


def cmd_render(args) -> tuple[bytes, dict]:
    grid = render(args.mode, Window(args.center, args.width), args.px, args.max_iter,
                  c=args.c, bailout=args.bailout, threads=args.threads)
    meta = {"non_escaped": grid.non_escaped_count(), "bailout": grid.bailout,
            "grid_sha256": grid.digest(), "backend": BACKEND}
    return grid.to_ppm(), meta


def _lambda_star(word: str) -> float:
    return float(periodic_point(word).lambda_star)


def cmd_zoom(args) -> tuple[str, dict]:
    if args.factor is None and args.word is None:
        raise UsageError("zoom needs --factor or --word")
    factor = args.factor if args.factor is not None else _lambda_star(args.word)
    center = args.center
    if center is None:
        if args.word is None:
            raise UsageError("zoom needs --center or --word")
        center = complex(siegel_parameter(args.word)[0])
    buf = io.StringIO()
    buf.write("frame,width,max_iter,non_escaped,boundary_fraction,grid_sha256\n")
    frames = zoom_sequence(center, args.width, factor, args.frames, args.px, args.max_iter,
                           iter_growth=args.iter_growth, threads=args.threads)
    for k, g in enumerate(frames):
        buf.write(f"{k},{fmt17(g.window.width)},{g.max_iter},{g.non_escaped_count()},"
                  f"{fmt17(boundary_fraction(g))},{g.digest()}\n")
    return buf.getvalue(), {"factor": factor, "center": [center.real, center.imag]}


def cmd_siegel(args) -> tuple[str, dict]:
    orbit = siegel_orbit(args.word, args.count, args.precision)
    buf = io.StringIO()
    buf.write("n,re,im\n")
    for n, z in enumerate(orbit.points):
        buf.write(f"{n},{fmt17(float(z.real))},{fmt17(float(z.imag))}\n")
    returns = closest_returns(orbit.points)
    meta = {"max_abs": orbit.max_abs, "min_distance_to_alpha": orbit.min_distance_to_alpha(),
            "winding_per_step": orbit.winding_number(), "closest_return_times": [n for n, _ in returns]}
    return buf.getvalue(), meta


def cmd_area(args) -> tuple[str, dict]:
    if (args.c is None) == (args.word is None):
        raise UsageError("area needs exactly one of --c or --word")
    c = args.c if args.c is not None else complex(siegel_parameter(args.word)[0])
    est = area_estimate(c, args.px, args.max_iter, threads=args.threads)
    out = "c_re,c_im,lower_cells,upper_cells,pixel_area,area\n"
    out += f"{fmt17(c.real)},{fmt17(c.imag)},{est.lower_cells},{est.upper_cells},{fmt17(est.pixel_area)},{fmt17(est.area)}\n"
    return out, {}


def cmd_self_sim(args) -> tuple[str, dict]:
    orbit = siegel_orbit(args.word, args.budget + 2, args.precision)
    found = closest_returns(orbit.points)
    if len(found) < args.returns:
        raise ValueError(f"only {len(found)} closest returns within {args.budget} iterations")
    found = found[:args.returns]
    buf = io.StringIO()
    buf.write("k,time,distance,ratio\n")
    for k, (n, d) in enumerate(found):
        ratio = "" if k == 0 else fmt17(found[k - 1][1] / d)
        buf.write(f"{k},{n},{fmt17(d)},{ratio}\n")
    return buf.getvalue(), {}


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sectorren", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--out", help="output file; a manifest is written next to it")
        sp.set_defaults(func=func)
        return sp

    sp = add("renorm", cmd_renorm, "forward orbit and itinerary under the prime renormalization")
    sp.add_argument("--theta", required=True, help="p/q, surd:p,q,r,D or decimal")
    sp.add_argument("--steps", type=int, default=10)

    sp = add("fixed-point", cmd_fixed_point, "periodic point and eigen-data of a word")
    sp.add_argument("--word", type=_word, required=True)

    def window_args(sp):
        sp.add_argument("--window", type=_pair, help="lo,hi (p/q, decimal or surd:p,q,r,D)")
        sp.add_argument("--window-level", type=int, help="use [-v_m, w_m] for this m")

    sp = add("tiling", cmd_tiling, "renormalization tiling over a window")
    sp.add_argument("--word", type=_word, required=True)
    sp.add_argument("--level", type=int, required=True)
    window_args(sp)

    sp = add("dominant", cmd_dominant, "dominant points")
    sp.add_argument("--word", type=_word, required=True)
    sp.add_argument("--max-generation", help="brute-force all dominants up to this generation")
    window_args(sp)
    sp.add_argument("--first", type=int, default=0, help="first index (sequence mode)")
    sp.add_argument("--last", type=int, default=11, help="last index (sequence mode)")

    sp = add("close-return", cmd_close_return, "close returns between dominant intervals")
    sp.add_argument("--word", type=_word, required=True)
    sp.add_argument("--index", type=int, required=True)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--oracle", action="store_true", help="cross-check against exhaustive search")

    sp = add("scaling", cmd_scaling, "angle and parameter scaling ratios of pulled-back rotation numbers")
    sp.add_argument("--word", type=_word, required=True)
    sp.add_argument("--start", required=True)
    sp.add_argument("--steps", type=int, default=8)
    sp.add_argument("--precision", type=int, help="fixed working precision in bits (default: automatic)")

    def grid_args(sp):
        sp.add_argument("--px", type=_resolution, default=(512, 512), help="N or WxH")
        sp.add_argument("--max-iter", type=int, default=1000)
        sp.add_argument("--threads", type=int, default=1)

    sp = add("render", cmd_render, "escape-time image (binary PPM)")
    sp.add_argument("--mode", choices=("mandelbrot", "julia"), default="mandelbrot")
    sp.add_argument("--center", type=_complex, default=complex(-0.75, 0))
    sp.add_argument("--width", type=float, default=3.5)
    sp.add_argument("--c", type=_complex, help="julia parameter re,im")
    sp.add_argument("--bailout", type=float)
    grid_args(sp)

    sp = add("zoom", cmd_zoom, "self-similar zoom sequence statistics")
    sp.add_argument("--word", type=_word, help="zoom at c(theta*) by lambda* of this word")
    sp.add_argument("--center", type=_complex)
    sp.add_argument("--width", type=float, default=0.5)
    sp.add_argument("--factor", type=float)
    sp.add_argument("--frames", type=int, default=3)
    sp.add_argument("--iter-growth", type=float, default=1.0, help="max_iter multiplier per frame")
    grid_args(sp)

    sp = add("siegel", cmd_siegel, "critical orbit at the Siegel parameter c(theta*)")
    sp.add_argument("--word", type=_word, required=True)
    sp.add_argument("--count", type=int, default=10000)
    sp.add_argument("--precision", type=int, default=96)

    sp = add("area", cmd_area, "pixel-count area of a filled Julia set")
    sp.add_argument("--c", type=_complex)
    sp.add_argument("--word", type=_word, help="use c(theta*) of this word")
    grid_args(sp)

    sp = add("self-sim", cmd_self_sim, "closest returns of the critical orbit to the critical value")
    sp.add_argument("--word", type=_word, required=True)
    sp.add_argument("--returns", type=int, default=10)
    sp.add_argument("--budget", type=int, default=20000)
    sp.add_argument("--precision", type=int, default=96)
    return p


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return str(v)


_NEGATIVE_VALUE = re.compile(r"^-\.?\d")


def _join_negative_values(argv: list[str]) -> list[str]:
    """Rewrite ``--flag -0.75,0`` as ``--flag=-0.75,0``.

    argparse only accepts a separate value starting with ``-`` when it is a
    plain number; pairs such as ``-0.75,0`` would be taken for an option.
    """
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NEGATIVE_VALUE.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        payload, meta = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"sectorren: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"sectorren: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    data = payload.encode("ascii") if isinstance(payload, str) else payload
    config = {k: _jsonable(v) for k, v in vars(args).items() if k not in ("func", "out")}
    manifest = {
        "command": ["sectorren", *argv],
        "config": config,
        "precision": {"mpmath_bits": mpmath.mp.prec, "float": "IEEE-754 binary64",
                      **({"working_bits": meta["precision_bits"]} if "precision_bits" in meta else {})},
        "result": {k: _jsonable(v) if not isinstance(v, list) else v for k, v in meta.items()},
        "wall_time_s": time.perf_counter() - start,
        "outputs": {},
    }
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
        manifest["outputs"][args.out] = hashlib.sha256(data).hexdigest()
        with open(args.out + ".manifest.json", "w", encoding="ascii") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        manifest["outputs"]["<stdout>"] = hashlib.sha256(data).hexdigest()
        sys.stdout.flush()
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        print(json.dumps(manifest, sort_keys=True), file=sys.stderr)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
