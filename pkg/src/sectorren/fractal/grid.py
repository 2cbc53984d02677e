"""Windows, escape-time grids and deterministic rendering."""
from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._kernels import MODE_JULIA, MODE_MANDELBROT

#: largest number of pixels a single render may request
MAX_PIXELS = 4096 * 4096
DEFAULT_BAILOUT = 2.0


class FractalError(ValueError):
    pass


class BudgetError(FractalError):
    pass


@dataclass(frozen=True)
class Window:
    center: complex
    width: float

    def __post_init__(self):
        if not (self.width > 0 and math.isfinite(self.width)):
            raise FractalError(f"window width must be positive and finite, got {self.width}")
        if not (math.isfinite(self.center.real) and math.isfinite(self.center.imag)):
            raise FractalError("window center must be finite")

    def pixel_size(self, resolution: tuple[int, int]) -> float:
        return self.width / resolution[0]

    def height(self, resolution: tuple[int, int]) -> float:
        return self.pixel_size(resolution) * resolution[1]

    def bounds(self, resolution: tuple[int, int]) -> tuple[float, float, float, float]:
        """``(x_min, x_max, y_min, y_max)`` of the covered rectangle."""
        hw, hh = self.width / 2, self.height(resolution) / 2
        c = complex(self.center)
        return c.real - hw, c.real + hw, c.imag - hh, c.imag + hh


def pixel_coordinates(window: Window, resolution: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    """Real parts of the column centers and imaginary parts of the row centers (row 0 on top)."""
    W, H = resolution
    px = window.pixel_size(resolution)
    c = complex(window.center)
    cols = np.arange(W, dtype=np.float64)
    rows = np.arange(H, dtype=np.float64)
    xs = c.real + (0.5 * (2.0 * cols + 1.0 - W)) * px
    ys = c.imag + (0.5 * (H - 1.0 - 2.0 * rows)) * px
    return xs, ys


@dataclass(frozen=True, eq=False)
class ImageGrid:
    mode: str
    window: Window
    resolution: tuple
    max_iter: int
    bailout: float
    c: complex | None
    iterations: np.ndarray
    escaped: np.ndarray
    final_magnitude: np.ndarray

    @property
    def pixel_area(self) -> float:
        px = self.window.pixel_size(self.resolution)
        return px * px

    def non_escaped_count(self) -> int:
        return int(self.resolution[0] * self.resolution[1] - np.count_nonzero(self.escaped))

    def gray(self) -> np.ndarray:
        """8-bit levels: ``floor(255*it/max_iter)`` when escaped, 0 otherwise."""
        levels = (self.iterations.astype(np.int64) * 255) // self.max_iter
        return np.where(self.escaped, levels, 0).astype(np.uint8)

    def to_ppm(self) -> bytes:
        W, H = self.resolution
        g = self.gray()
        rgb = np.repeat(g[:, :, None], 3, axis=2)
        return b"P6\n%d %d\n255\n" % (W, H) + rgb.tobytes()

    def digest(self) -> str:
        h = hashlib.sha256()
        for arr in (self.iterations, self.escaped, self.final_magnitude):
            h.update(np.ascontiguousarray(arr).tobytes())
        return h.hexdigest()

    def __eq__(self, other):
        if not isinstance(other, ImageGrid):
            return NotImplemented
        return (self.resolution == other.resolution and self.max_iter == other.max_iter
                and np.array_equal(self.iterations, other.iterations)
                and np.array_equal(self.escaped, other.escaped)
                and np.array_equal(self.final_magnitude, other.final_magnitude))


def escape_time(c: complex, z0: complex = 0j, max_iter: int = 1000, bailout: float = DEFAULT_BAILOUT):
    """``(escaped, iterations, final_magnitude)`` for the orbit of ``z0`` under ``z^2 + c``.

    Same arithmetic, in the same order, as the grid kernels.
    """
    c, z0 = complex(c), complex(z0)
    for v in (c.real, c.imag, z0.real, z0.imag, bailout):
        if not math.isfinite(v):
            raise FractalError("escape_time requires finite inputs")
    if max_iter < 1:
        raise FractalError("max_iter must be at least 1")
    if bailout < 2:
        raise FractalError("bailout must be at least 2")
    zx, zy, a, b = z0.real, z0.imag, c.real, c.imag
    n = 0
    while True:
        m = math.sqrt(zx * zx + zy * zy)
        if m > bailout:
            return True, n, m
        if n == max_iter:
            return False, n, m
        zx, zy = zx * zx - zy * zy + a, 2.0 * zx * zy + b
        n += 1


def _corner_bailout(window: Window, resolution) -> float:
    x0, x1, y0, y1 = window.bounds(resolution)
    return max(DEFAULT_BAILOUT, max(math.hypot(x, y) for x in (x0, x1) for y in (y0, y1)))


def render(
    mode: str,
    window: Window,
    resolution: tuple[int, int],
    max_iter: int,
    *,
    c: complex | None = None,
    bailout: float | None = None,
    threads: int = 1,
    backend: str | None = None,
) -> ImageGrid:
    """Escape-time grid in ``mandelbrot`` (pixel = parameter) or ``julia`` (pixel = start) mode.

    Rows are split into contiguous blocks across ``threads`` workers; the
    result does not depend on the split.  The default bailout is 2, or the
    largest ``|c|`` in play when that exceeds 2.
    """
    W, H = (int(r) for r in resolution)
    if W < 1 or H < 1:
        raise FractalError("resolution must be positive")
    if W * H > MAX_PIXELS:
        raise BudgetError(f"{W}x{H} exceeds the pixel budget of {MAX_PIXELS}")
    if max_iter < 1:
        raise FractalError("max_iter must be at least 1")
    if mode == "mandelbrot":
        kind, cr, ci = MODE_MANDELBROT, 0.0, 0.0
        auto = _corner_bailout(window, (W, H))
    elif mode == "julia":
        if c is None:
            raise FractalError("julia mode needs a parameter c")
        c = complex(c)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise FractalError("julia parameter must be finite")
        kind, cr, ci = MODE_JULIA, c.real, c.imag
        auto = max(DEFAULT_BAILOUT, abs(c))
    else:
        raise FractalError(f"unknown render mode {mode!r}")
    bailout = auto if bailout is None else float(bailout)
    if bailout < 2:
        raise FractalError("bailout must be at least 2")
    if backend is None:
        kernel = _kernels.escape_block
    elif backend == "numba":
        if _kernels.escape_block_numba is None:
            raise FractalError("numba backend unavailable")
        kernel = _kernels.escape_block_numba
    elif backend == "numpy":
        kernel = _kernels.escape_block_numpy
    else:
        raise FractalError(f"unknown backend {backend!r}")

    iters = np.zeros((H, W), dtype=np.int32)
    escaped = np.zeros((H, W), dtype=np.bool_)
    mag = np.zeros((H, W), dtype=np.float64)
    center = complex(window.center)
    px = window.pixel_size((W, H))
    args = (kind, center.real, center.imag, px, W, H)
    tail = (cr, ci, int(max_iter), float(bailout), iters, escaped, mag)
    threads = max(1, int(threads))
    if threads == 1:
        kernel(*args, 0, H, *tail)
    else:
        step = -(-H // threads)
        blocks = [(r, min(H, r + step)) for r in range(0, H, step)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for fut in [pool.submit(kernel, *args, r0, r1, *tail) for r0, r1 in blocks]:
                fut.result()
    return ImageGrid(mode, window, (W, H), int(max_iter), float(bailout),
                     None if kind == MODE_MANDELBROT else c, iters, escaped, mag)
