"""Renormalization tilings, dominant points and close returns.

The level-``n`` tiling of the line is obtained by spreading the two base
intervals ``J_n(0) = [-v_n, 0]`` (kind ``B``) and ``J_n(1) = [0, w_n]``
(kind ``A``) around by the translations ``T^P``: every ``P < (n, 0, 1)``
contributes a ``B`` tile and every ``P < (n, 1, 0)`` an ``A`` tile.

A point ``b_P = -T^P(0)`` is *dominant* when ``[0, b_P]`` holds no ``b_Q``
of smaller generation.  Dominants are indexed by increasing generation, and
``P -> tP`` shifts the index by a fixed ``k``; :class:`DominantSequence`
uses this to produce any index from one brute-forced fundamental block.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .powertriples import (
    DEFAULT_BUDGET,
    PowerTriple,
    PowerTripleError,
    TriplesContext,
    canonical,
    compare,
    critical_preimage,
    enumerate_triples,
    iota,
    scale_by_t,
    subtract,
    translation_of,
)
from .surd import QuadSurd

KIND_B = "B"
KIND_A = "A"


class TilingError(ValueError):
    pass


def _exact(x, D: int):
    """Exact version of a window endpoint (floats are taken at face value)."""
    if isinstance(x, QuadSurd):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise TilingError(f"window endpoint {x} is not finite")
        x = Fraction(x)
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return QuadSurd(x.numerator, 0, x.denominator, D)
    raise TypeError(f"unsupported window endpoint {x!r}")


@dataclass(frozen=True)
class Tile:
    kind: str
    landing: PowerTriple
    left: QuadSurd
    right: QuadSurd
    index: int

    def contains(self, x, *, closed_right: bool = False) -> bool:
        return self.left <= x and (x <= self.right if closed_right else x < self.right)


@dataclass(frozen=True)
class Tiling:
    level: int
    tiles: tuple
    window: tuple

    def __len__(self) -> int:
        return len(self.tiles)

    def __iter__(self):
        return iter(self.tiles)

    @property
    def kinds(self) -> str:
        return "".join(tile.kind for tile in self.tiles)

    @property
    def indices(self) -> list[int]:
        return [tile.index for tile in self.tiles]

    def endpoints(self) -> list[QuadSurd]:
        if not self.tiles:
            return []
        return [self.tiles[0].left] + [tile.right for tile in self.tiles]

    def tile(self, index: int) -> Tile:
        for tile in self.tiles:
            if tile.index == index:
                return tile
        raise KeyError(index)

    def locate(self, x) -> Tile:
        """The tile owning ``x``: its left endpoint, or both ends for the leftmost tile."""
        for pos, tile in enumerate(self.tiles):
            if tile.contains(x, closed_right=pos == len(self.tiles) - 1) or (pos == 0 and x == tile.left):
                return tile
        raise TilingError(f"point {float(x):.17g} lies outside the tiling window")


def _spread(ctx: TriplesContext, level: int, lo, hi, budget: int) -> list[tuple[QuadSurd, str, PowerTriple]]:
    vn, wn = ctx.v_n(level), ctx.w_n(level)
    out = []
    # B tiles [d - v_n, d] with interior meeting (lo, hi)
    for P in enumerate_triples(ctx, iota(PowerTriple(level, 0, 1), ctx), lo, hi + vn,
                               include_zero=True, budget=budget):
        d = translation_of(P, ctx)
        if lo < d and d - vn < hi:
            out.append((d - vn, KIND_B, P))
    # A tiles [d, d + w_n]
    for P in enumerate_triples(ctx, iota(PowerTriple(level, 1, 0), ctx), lo - wn, hi,
                               include_zero=True, budget=budget):
        d = translation_of(P, ctx)
        if d < hi and lo < d + wn:
            out.append((d, KIND_A, P))
    out.sort(key=lambda item: item[0])
    return out


def build_tiling(ctx: TriplesContext, level: int, window, *, budget: int = DEFAULT_BUDGET) -> Tiling:
    """Tiles of the level-``level`` tiling whose interior meets ``window``.

    Indices count tiles left to right with ``J_n(0)`` at 0 and ``J_n(1)`` at 1;
    for windows away from the origin the tiles in between are counted too.
    A degenerate window ``[x, x]`` returns the single tile owning ``x``.
    """
    D = ctx.t.D
    lo, hi = (_exact(x, D) for x in window)
    if hi < lo:
        raise TilingError("window must satisfy lo <= hi")
    vn, wn = ctx.v_n(level), ctx.w_n(level)
    point = lo == hi
    if point:
        # widen to something containing the owner; trimmed below
        lo, hi = lo - vn - wn, hi + vn + wn
    hull_lo = lo if lo < -vn else -vn
    hull_hi = hi if hi > wn else wn
    try:
        raw = _spread(ctx, level, hull_lo, hull_hi, budget)
    except PowerTripleError as exc:
        raise TilingError(str(exc)) from exc
    origin = next(pos for pos, (left, kind, P) in enumerate(raw) if kind == KIND_B and P.is_zero())
    vn_lengths = {KIND_B: vn, KIND_A: wn}
    tiles = []
    for pos, (left, kind, P) in enumerate(raw):
        right = left + vn_lengths[kind]
        if left < hi and lo < right:
            tiles.append(Tile(kind, P, left, right, pos - origin))
    tiling = Tiling(level, tuple(tiles), (lo, hi))
    if point:
        x = window[0] if isinstance(window[0], QuadSurd) else _exact(window[0], D)
        tiling = Tiling(level, (tiling.locate(x),), (x, x))
    validate_tiling(tiling)
    return tiling


def validate_tiling(tiling: Tiling) -> None:
    """Exact check: consecutive tiles abut, interiors are disjoint, the window is covered."""
    tiles = tiling.tiles
    if not tiles:
        raise TilingError("empty tiling")
    for t0, t1 in zip(tiles, tiles[1:]):
        if t0.right != t1.left:
            raise TilingError(f"tiles {t0.index} and {t1.index} do not abut")
        if t1.index != t0.index + 1:
            raise TilingError("tile indices are not consecutive")
    lo, hi = tiling.window
    if tiles[0].left > lo or tiles[-1].right < hi:
        raise TilingError("tiling does not cover its window")


def triangulation_sequence(ctx: TriplesContext, level: int, window, *, budget: int = DEFAULT_BUDGET):
    """Kinds and landing triples of :func:`build_tiling`, left to right."""
    return [(tile.kind, tile.landing) for tile in build_tiling(ctx, level, window, budget=budget)]


def first_return_images(ctx: TriplesContext, level: int) -> dict[str, tuple[QuadSurd, QuadSurd]]:
    """Images of the base tiles under the first-return translations.

    ``J_n(0)`` returns by ``T^(n,0,1)`` and ``J_n(1)`` by ``T^(n,1,0)``;
    both images lie in ``J_n(0) U J_n(1)``.
    """
    vn, wn = ctx.v_n(level), ctx.w_n(level)
    db = translation_of(PowerTriple(level, 0, 1), ctx)
    da = translation_of(PowerTriple(level, 1, 0), ctx)
    return {KIND_B: (-vn + db, db), KIND_A: (da, wn + da)}


# -- dominant points ---------------------------------------------------------

@dataclass(frozen=True)
class DominantPoint:
    position: QuadSurd
    generation: PowerTriple
    index: int


@dataclass(frozen=True)
class DominantSet:
    points: tuple
    k: int | None

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def by_index(self, i: int) -> DominantPoint:
        for p in self.points:
            if p.index == i:
                return p
        raise KeyError(i)


def anchor_generation(ctx: TriplesContext) -> QuadSurd:
    """Generation of index 0: the smaller of the two level-0 generators."""
    return min(iota(PowerTriple(0, 1, 0), ctx), iota(PowerTriple(0, 0, 1), ctx))


def _sweep(ctx, triples):
    # triples sorted by generation; keep those whose b lands strictly inside
    # the gap to 0 left by all earlier ones
    best_pos = best_neg = None
    out = []
    for P in triples:
        b = critical_preimage(P, ctx)
        if b > 0:
            if best_pos is None or b < best_pos:
                best_pos = b
                out.append((b, P))
        else:
            if best_neg is None or b > best_neg:
                best_neg = b
                out.append((b, P))
    return out


def dominant_points(ctx: TriplesContext, max_generation, window, *, budget: int = DEFAULT_BUDGET) -> DominantSet:
    """All dominant ``b_P`` with ``iota(P) <= max_generation`` inside ``window``.

    Brute force over every triple in range.  The window must contain 0, so
    that every ``b_Q`` able to block ``b_P`` is enumerated too.
    """
    D = ctx.t.D
    lo, hi = (_exact(x, D) for x in window)
    if not (lo <= 0 <= hi):
        raise TilingError("dominant search window must contain 0")
    try:
        triples = enumerate_triples(ctx, max_generation, -hi, -lo, strict=False, budget=budget)
    except PowerTripleError as exc:
        raise TilingError(str(exc)) from exc
    found = _sweep(ctx, triples)
    g0 = anchor_generation(ctx)
    first = next((j for j, (_, P) in enumerate(found) if iota(P, ctx) >= g0), len(found))
    points = tuple(DominantPoint(b, P, j - first) for j, (b, P) in enumerate(found))
    k = None
    if points and first < len(points):
        target = canonical(scale_by_t(points[first].generation), ctx)
        k = next((p.index for p in points if p.generation == target), None)
    return DominantSet(points, k)


class DominantSequence:
    """All dominant points, generated from one fundamental block.

    The block holds the dominants with generation in ``[g0, t*g0)``; index
    ``q*k + r`` is the block entry ``r`` scaled by ``t^q``.
    """

    def __init__(self, ctx: TriplesContext):
        self.ctx = ctx
        g0 = anchor_generation(ctx)
        # choose a level m whose two generators both precede g0; every later
        # dominant then lies in [-w_m, v_m]
        m = 0
        while not (iota(PowerTriple(m, 1, 0), ctx) < g0 and iota(PowerTriple(m, 0, 1), ctx) < g0):
            m -= 1
        found = dominant_points(ctx, ctx.t * g0, (-ctx.w_n(m), ctx.v_n(m)))
        block = [p for p in found if p.index >= 0 and iota(p.generation, ctx) < ctx.t * g0]
        if not block:
            raise TilingError("empty fundamental block of dominant points")
        self.block = tuple(block)
        self.k = len(block)
        if found.k is not None and found.k != self.k:
            raise TilingError(f"inconsistent period: block size {self.k}, scaling shift {found.k}")

    def generation(self, i: int) -> PowerTriple:
        q, r = divmod(i, self.k)
        return scale_by_t(self.block[r].generation, q)

    def position(self, i: int) -> QuadSurd:
        q, r = divmod(i, self.k)
        return self.block[r].position * self.ctx.t_pow(-q)

    def point(self, i: int) -> DominantPoint:
        return DominantPoint(self.position(i), self.generation(i), i)

    def points(self, start: int, stop: int) -> list[DominantPoint]:
        return [self.point(i) for i in range(start, stop)]

    def index_of(self, x, near: int, spread: int = 64) -> int | None:
        """Index ``j`` with ``b_j == x``, searched within ``near +- spread``."""
        for j in range(near - spread, near + spread + 1):
            if self.position(j) == x:
                return j
        return None


# -- close returns -----------------------------------------------------------

@dataclass(frozen=True)
class CloseReturn:
    Q: PowerTriple
    n: int
    m: int


def _image_indices(seq: DominantSequence, Q: PowerTriple, i: int) -> tuple[int, int] | None:
    d = translation_of(Q, seq.ctx)
    n = seq.index_of(seq.position(i) + d, i)
    m = seq.index_of(seq.position(i + 1) + d, i)
    if n is None or m is None:
        return None
    return n, m


def close_return(ctx: TriplesContext, i: int, seq: DominantSequence | None = None) -> CloseReturn:
    """The translation carrying ``[b_i, b_(i+1)]`` onto a dominant interval ``[b_n, b_m]``.

    ``Q = P_(i-1)`` when 0 separates ``b_i`` and ``b_(i-1)``, otherwise
    ``Q = P_i - P_(i-1)``; the images of ``b_i`` and ``b_(i+1)`` are the
    dominants ``b_n`` and ``b_m`` with ``m > n`` and ``m <= i``.
    """
    seq = seq or DominantSequence(ctx)
    bi, bprev = seq.position(i), seq.position(i - 1)
    if (bi > 0) != (bprev > 0):
        Q = seq.generation(i - 1)
    else:
        Q = subtract(seq.generation(i), seq.generation(i - 1), ctx)
    idx = _image_indices(seq, Q, i)
    if idx is None:
        raise TilingError(f"close return at index {i}: image is not a dominant interval")
    n, m = idx
    if not (i >= m > n):
        raise TilingError(f"close return at index {i}: unexpected target indices ({n}, {m})")
    return CloseReturn(canonical(Q, ctx), n, m)


def close_return_oracle(ctx: TriplesContext, i: int, seq: DominantSequence | None = None) -> CloseReturn:
    """Exhaustive search for the close return at index ``i``.

    Scans every ``Q`` with ``iota(Q) <= iota(P_(i+2))`` whose displacement is
    small enough to keep ``b_i, b_(i+1)`` within the span of their
    neighbours, and keeps those mapping both endpoints onto dominants with
    ``i >= m > n``.  A close return is the earliest such translation, so the
    solution of least generation is returned.
    """
    seq = seq or DominantSequence(ctx)
    b = [seq.position(j) for j in (i - 1, i, i + 1)]
    rho = ctx.t * (abs(b[0]) + abs(b[1]) + abs(b[2]))
    bound = iota(seq.generation(i + 2), ctx)
    sols = []
    for Q in enumerate_triples(ctx, bound, -rho, rho, strict=False):
        idx = _image_indices(seq, Q, i)
        if idx is not None and i >= idx[1] > idx[0]:
            sols.append(CloseReturn(Q, *idx))
    if not sols:
        raise TilingError(f"oracle found no close return at index {i}")
    return min(sols, key=lambda s: iota(s.Q, ctx))


def fibonacci_pattern(ctx: TriplesContext, i: int, seq: DominantSequence | None = None) -> bool:
    """Whether ``T^(P_(i+1))`` carries ``{b_i, b_(i-1)}`` onto ``{b_(i+1), b_(i+3)}``."""
    seq = seq or DominantSequence(ctx)
    d = translation_of(seq.generation(i + 1), ctx)
    image = {seq.position(i) + d, seq.position(i - 1) + d}
    return image == {seq.position(i + 1), seq.position(i + 3)}


def index_window(ctx: TriplesContext, seq: DominantSequence, start: int, stop: int):
    """Convenience: dominant points ``start <= i < stop`` with generations sorted."""
    pts = seq.points(start, stop)
    for p, q in zip(pts, pts[1:]):
        if compare(p.generation, q.generation, ctx) >= 0:
            raise TilingError("dominant generations are not increasing")
    return pts
