"""Filled-Julia area, Siegel critical orbits, zoom sequences and closest returns."""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from ..cardioid import cardioid_map
from ..rotnum import periodic_point
from .grid import FractalError, ImageGrid, Window, render

#: working precision (bits) for Siegel parameters and orbits
SIEGEL_PRECISION = 96
#: smallest pixel size relative to |center| a double-precision zoom may reach
ZOOM_FLOOR = 1e-14


class PrecisionError(FractalError):
    pass


# -- area --------------------------------------------------------------------

@dataclass(frozen=True)
class AreaEstimate:
    lower_cells: int
    upper_cells: int
    area: float
    pixel_area: float


def _interior_cells(inside: np.ndarray) -> int:
    # cells whose whole 3x3 neighbourhood stayed bounded
    H, W = inside.shape
    if H < 3 or W < 3:
        return 0
    core = inside[1:-1, 1:-1].copy()
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            core &= inside[1 + di:H - 1 + di, 1 + dj:W - 1 + dj]
    return int(np.count_nonzero(core))


def area_estimate(c: complex, resolution: int | tuple[int, int], max_iter: int,
                  window: Window | None = None, *, threads: int = 1) -> AreaEstimate:
    """Pixel-count estimate of the area of the filled Julia set of ``z^2 + c``.

    ``upper_cells`` counts pixels whose orbit stayed bounded, ``lower_cells``
    those whose eight neighbours did too; the area is ``upper_cells`` times
    the pixel area.  The window must contain the disk ``|z| <= 2``.
    """
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    window = window or Window(0j, 4.0)
    x0, x1, y0, y1 = window.bounds(resolution)
    if x0 > -2 or x1 < 2 or y0 > -2 or y1 < 2:
        raise FractalError("area window must contain the disk |z| <= 2")
    grid = render("julia", window, resolution, max_iter, c=c, threads=threads)
    inside = ~grid.escaped
    upper = int(np.count_nonzero(inside))
    return AreaEstimate(_interior_cells(inside), upper, upper * grid.pixel_area, grid.pixel_area)


# -- Siegel orbits -----------------------------------------------------------

def siegel_parameter(word: str, prec: int = SIEGEL_PRECISION) -> tuple[mpmath.mpc, mpmath.mpc]:
    """``(c, lambda)`` on the main cardioid at the periodic point of ``word``."""
    theta = periodic_point(word).theta_star
    return cardioid_map(theta.to_mpf(prec), prec)


@dataclass(frozen=True)
class SiegelOrbit:
    word: str
    c: mpmath.mpc
    alpha: mpmath.mpc
    points: np.ndarray
    max_abs: float
    precision: int

    def min_distance_to_alpha(self) -> float:
        return float(np.min(np.abs(self.points - complex(self.alpha))))

    def winding_number(self) -> float:
        """Mean turn per step of the orbit around the fixed point, in [0, 1)."""
        ang = np.angle(self.points - complex(self.alpha))
        inc = np.mod(np.diff(ang), 2 * math.pi)
        return float(inc.sum() / (2 * math.pi) / inc.size)


def siegel_orbit(word: str, count: int, prec: int = SIEGEL_PRECISION) -> SiegelOrbit:
    """The first ``count`` points ``z_0 = 0, z_1 = c, ...`` of the critical orbit at ``c(theta*)``.

    Iterates in ``prec``-bit arithmetic.  Raises :class:`PrecisionError` if
    the orbit leaves ``|z| <= 4``, which signals a mis-evaluated parameter.
    """
    if prec < 80:
        raise FractalError("Siegel orbits need at least 80 bits")
    if count < 1:
        raise FractalError("count must be positive")
    c, lam = siegel_parameter(word, prec)
    pts = np.empty(count, dtype=np.complex128)
    with mpmath.workprec(prec):
        # plain mpf pairs keep the loop cheap
        cr, ci = c.real, c.imag
        x = y = mpmath.mpf(0)
        peak = 0.0
        for n in range(count):
            xf, yf = float(x), float(y)
            pts[n] = complex(xf, yf)
            r = math.hypot(xf, yf)
            if r > peak:
                peak = r
            if r > 4:
                raise PrecisionError(f"critical orbit left |z| <= 4 at step {n}; parameter mis-evaluated")
            x, y = x * x - y * y + cr, 2 * x * y + ci
        alpha = lam / 2
    return SiegelOrbit(word, c, alpha, pts, peak, prec)


def closest_returns(points: np.ndarray, target_index: int = 1) -> list[tuple[int, float]]:
    """Times ``n >= 1`` at which ``z_(target+n)`` comes closer to ``z_target`` than ever before."""
    ref = points[target_index]
    d = np.abs(points[target_index + 1:] - ref)
    out = []
    best = math.inf
    for n, dist in enumerate(d, start=1):
        if dist < best:
            best = float(dist)
            out.append((n, best))
    return out


def convergent_denominators(word: str, count: int) -> list[int]:
    """Denominators of the continued-fraction convergents of ``theta*``, exactly."""
    x = periodic_point(word).theta_star
    qs = [1]  # q_0 for theta = [0; a1, a2, ...]
    q_prev = 0
    for _ in range(count + 1):
        if x == 0:
            break
        y = 1 / x
        a = math.floor(float(y))
        while y < a:
            a -= 1
        while y >= a + 1:
            a += 1
        x = y - a
        q_prev, q = qs[-1], a * qs[-1] + q_prev
        qs.append(q)
        if len(qs) > count + 1:
            break
    return sorted(set(qs))[:count]


def self_similarity_estimate(word: str, returns: int, *, budget: int = 20000,
                             prec: int = SIEGEL_PRECISION) -> list[float]:
    """Ratios of consecutive closest-return distances of the critical orbit to the critical value."""
    if returns < 3:
        raise FractalError("need at least 3 returns")
    orbit = siegel_orbit(word, budget + 2, prec)
    found = closest_returns(orbit.points)
    if len(found) < returns:
        raise FractalError(f"only {len(found)} closest returns within {budget} iterations")
    found = found[:returns]
    return [a[1] / b[1] for a, b in zip(found, found[1:])]


# -- zoom --------------------------------------------------------------------

def zoom_sequence(center: complex, initial_width: float, factor: float, frames: int,
                  resolution: tuple[int, int], max_iter: int, *, mode: str = "mandelbrot",
                  c: complex | None = None, iter_growth: float = 1.0,
                  threads: int = 1) -> list[ImageGrid]:
    """Frames of width ``initial_width / factor**k`` around a fixed center.

    Frame ``k`` iterates up to ``max_iter * iter_growth**k`` steps.  Near a
    Siegel parameter escape is slow, and one zoom by ``lambda*`` corresponds to
    return times growing by ``t``, so ``iter_growth = t`` keeps the
    classification of consecutive frames comparable.
    """
    if iter_growth < 1:
        raise FractalError("iter_growth must be at least 1")
    if not factor > 1:
        raise FractalError("zoom factor must exceed 1")
    if frames < 1:
        raise FractalError("need at least one frame")
    center = complex(center)
    widths = [initial_width / factor ** k for k in range(frames)]
    for w in widths:
        if w / resolution[0] < ZOOM_FLOOR * abs(center):
            raise PrecisionError(f"pixel size {w / resolution[0]:.3g} exhausts double precision at this center")
    return [render(mode, Window(center, w), resolution, int(round(max_iter * iter_growth ** k)),
                   c=c, threads=threads)
            for k, w in enumerate(widths)]


def boundary_fraction(grid: ImageGrid) -> float:
    """Fraction of pixels whose 3x3 neighbourhood mixes escaped and bounded pixels."""
    e = grid.escaped
    H, W = e.shape
    if H < 3 or W < 3:
        return 0.0
    any_e = e[1:-1, 1:-1].copy()
    all_e = e[1:-1, 1:-1].copy()
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            s = e[1 + di:H - 1 + di, 1 + dj:W - 1 + dj]
            any_e |= s
            all_e &= s
    return float(np.count_nonzero(any_e & ~all_e)) / ((H - 2) * (W - 2))
