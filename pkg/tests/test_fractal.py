import math
import os
import subprocess
import sys

import numpy as np
import pytest

from sectorren.fractal import (
    BudgetError,
    FractalError,
    PrecisionError,
    Window,
    area_estimate,
    boundary_fraction,
    closest_returns,
    convergent_denominators,
    escape_time,
    render,
    siegel_orbit,
    zoom_sequence,
)
from sectorren.fractal import _kernels

STANDARD = Window(complex(-0.75, 0), 3.5)


@pytest.mark.parametrize("c, expected", [
    (0j, (False, 100)),
    (complex(-1, 0), (False, 100)),
    (complex(1, 0), (True, 3)),
    (complex(0.26, 0), (True, 30)),
])
def test_escape_time_examples(c, expected):
    escaped, n, _ = escape_time(c, 0j, 100)
    assert (escaped, n) == expected


def test_escape_time_counts():
    # 0 -> 1 -> 2 -> 5: |z_3| is the first above 2
    assert escape_time(1 + 0j, 0j, 100)[:2] == (True, 3)
    assert escape_time(0j, 3 + 0j, 10)[:2] == (True, 0)
    assert escape_time(-2 + 0j, 0j, 500)[:2] == (False, 500)


def test_mandelbrot_golden_count():
    g = render("mandelbrot", STANDARD, (64, 64), 100)
    assert g.non_escaped_count() == 514


def test_grid_matches_scalar():
    g = render("mandelbrot", STANDARD, (32, 24), 60)
    xs = STANDARD.center.real + (np.arange(32) * 2 + 1 - 32) / 2 * (3.5 / 32)
    ys = STANDARD.center.imag + (24 - 1 - np.arange(24) * 2) / 2 * (3.5 / 32)
    for i in range(0, 24, 5):
        for j in range(0, 32, 3):
            e, n, _ = escape_time(complex(xs[j], ys[i]), 0j, 60, g.bailout)
            assert (bool(g.escaped[i, j]), int(g.iterations[i, j])) == (e, n)


@pytest.mark.skipif(_kernels.escape_block_numba is None, reason="numba unavailable")
@pytest.mark.parametrize("mode, c", [("mandelbrot", None), ("julia", complex(-0.39, 0.59))])
def test_backends_and_threads_agree(mode, c):
    w = STANDARD if mode == "mandelbrot" else Window(0j, 3.2)
    a = render(mode, w, (96, 80), 300, c=c, backend="numba")
    b = render(mode, w, (96, 80), 300, c=c, backend="numpy")
    t = render(mode, w, (96, 80), 300, c=c, threads=4)
    assert a == b == t
    assert a.digest() == b.digest() == t.digest()


def test_numpy_fallback_flag():
    code = ("from sectorren.fractal import _kernels, render, Window;"
            "print(_kernels.BACKEND, render('mandelbrot', Window(complex(-0.75,0),3.5),(64,64),100).non_escaped_count())")
    env = dict(os.environ, SECTORREN_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "514"]


def test_julia_disk():
    est = area_estimate(0j, 512, 200)
    assert abs(est.area / math.pi - 1) < 0.02
    assert est.lower_cells <= est.upper_cells


def test_mirror_symmetry():
    g = render("mandelbrot", STANDARD, (64, 64), 200)
    assert np.array_equal(g.escaped, g.escaped[::-1, :])


def test_julia_point_symmetry():
    g = render("julia", Window(0j, 3.2), (64, 64), 200, c=complex(-0.12, 0.75))
    assert np.array_equal(g.escaped, g.escaped[::-1, ::-1])


def test_monotone_in_max_iter():
    low = render("mandelbrot", STANDARD, (48, 48), 50)
    high = render("mandelbrot", STANDARD, (48, 48), 400)
    assert np.all(high.escaped >= low.escaped)
    assert high.non_escaped_count() <= low.non_escaped_count()


def test_real_line_membership():
    g = render("mandelbrot", Window(complex(-0.75, 0), 3.5), (70, 1), 2000)
    xs = -0.75 + (np.arange(70) * 2 + 1 - 70) / 2 * (3.5 / 70)
    inside = (xs >= -2) & (xs <= 0.25)
    assert np.array_equal(~g.escaped[0], inside)


def test_cardioid_interior_never_escapes():
    g = render("mandelbrot", Window(complex(-0.1, 0), 0.2), (32, 32), 500)
    assert not g.escaped.any()
    assert boundary_fraction(g) == 0.0


def test_ppm_and_gray():
    g = render("mandelbrot", STANDARD, (16, 8), 50)
    ppm = g.to_ppm()
    assert ppm.startswith(b"P6\n16 8\n255\n")
    assert len(ppm) == len(b"P6\n16 8\n255\n") + 16 * 8 * 3
    gray = g.gray()
    assert np.all(gray[~g.escaped] == 0)
    assert np.array_equal(gray[g.escaped], (g.iterations[g.escaped] * 255 // 50).astype(np.uint8))


def test_errors():
    with pytest.raises(BudgetError):
        render("mandelbrot", STANDARD, (5000, 5000), 10)
    with pytest.raises(FractalError):
        render("julia", STANDARD, (8, 8), 10)
    with pytest.raises(FractalError):
        render("mandelbrot", STANDARD, (8, 8), 10, bailout=1.5)
    with pytest.raises(FractalError):
        Window(0j, 0.0)
    with pytest.raises(FractalError):
        escape_time(complex(math.nan, 0))
    with pytest.raises(FractalError):
        zoom_sequence(0.3 + 0.5j, 1.0, 0.5, 2, (8, 8), 10)
    with pytest.raises(PrecisionError):
        zoom_sequence(0.3 + 0.5j, 1.0, 10.0, 20, (8, 8), 10)
    with pytest.raises(FractalError):
        area_estimate(0j, 64, 10, Window(0j, 2.0))


def test_zoom_iterations_grow():
    frames = zoom_sequence(-0.75 + 0.1j, 1.0, 2.0, 3, (16, 16), 100, iter_growth=2.0)
    assert [f.max_iter for f in frames] == [100, 200, 400]
    assert [f.window.width for f in frames] == [1.0, 0.5, 0.25]


def test_siegel_orbit_basic():
    orb = siegel_orbit("LR", 5000)
    assert orb.points[0] == 0
    assert abs(orb.points[1] - complex(orb.c)) < 1e-15
    assert orb.max_abs < 1.0
    assert orb.min_distance_to_alpha() > 0.2
    assert abs(orb.winding_number() - (3 - math.sqrt(5)) / 2) < 1e-3


def test_closest_returns_and_convergents():
    orb = siegel_orbit("LR", 3000)
    times = [n for n, _ in closest_returns(orb.points)]
    assert times[:8] == [1, 2, 3, 5, 8, 13, 21, 34]
    assert convergent_denominators("LR", 6) == [1, 2, 3, 5, 8, 13]


def test_siegel_precision_guard():
    with pytest.raises(FractalError):
        siegel_orbit("LR", 10, prec=53)
