"""Compare the numba and numpy escape-time kernels on the same grids.

Usage: python benchmarks/bench_kernels.py [--px 512] [--max-iter 500] [--repeat 3]

Both backends must produce identical grids; the script fails loudly if not.
"""
import argparse
import time

from sectorren.fractal import Window, render
from sectorren.fractal import _kernels

CASES = {
    "mandelbrot-overview": dict(mode="mandelbrot", window=Window(complex(-0.75, 0.0), 3.5)),
    "julia-basilica": dict(mode="julia", window=Window(0j, 4.0), c=-1.0),
    "siegel-cardioid-zoom": dict(mode="mandelbrot", window=Window(complex(-0.3905408702184, 0.5867879073469687), 0.05)),
}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--px", type=int, default=512)
    ap.add_argument("--max-iter", type=int, default=500)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels.escape_block_numba is None:
        raise SystemExit("numba backend unavailable (unset SECTORREN_NO_NUMBA to benchmark it)")
    res = (args.px, args.px)
    # compile outside the timed region
    render("mandelbrot", Window(0j, 4.0), (8, 8), 10, backend="numba")
    print(f"{'case':24s} {'numba s':>9s} {'numpy s':>9s} {'speedup':>8s}")
    for name, case in CASES.items():
        kw = dict(case)
        mode, window = kw.pop("mode"), kw.pop("window")
        t_nb, g_nb = best_of(lambda: render(mode, window, res, args.max_iter, backend="numba", **kw), args.repeat)
        t_np, g_np = best_of(lambda: render(mode, window, res, args.max_iter, backend="numpy", **kw), args.repeat)
        if g_nb != g_np:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:24s} {t_nb:9.3f} {t_np:9.3f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
