"""Power-triples: the index semigroup of a renormalization cascade.

A power-triple ``(n, a, b)`` names the translation
``T^(n,a,b) = t^-n (b*w - a*v)`` of the real line, where ``(-v, w)`` is the
contracting eigenvector of the antirenormalization matrix ``M`` and ``t > 1``
its leading eigenvalue.  Triples are identified through
``(n, a, b) ~ (n - 1, (a, b) @ M)``; the resulting semigroup embeds in the
nonnegative reals by ``iota(n, a, b) = t^n proj_t(a, b)``.

All arithmetic on classes is integer arithmetic on representatives; ``iota``
and translations are exact quadratic surds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .rotnum import AntiRenormMatrix, EigenData, periodic_point
from .surd import QuadSurd

#: largest |level| a power-triple may carry
MAX_LEVEL = 512
#: default cap on lattice points examined by :func:`enumerate_triples`
DEFAULT_BUDGET = 2_000_000


class PowerTripleError(ValueError):
    pass


class LevelOverflowError(PowerTripleError):
    pass


class BudgetExceededError(PowerTripleError):
    pass


@dataclass(frozen=True)
class PowerTriple:
    n: int
    a: int
    b: int

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise PowerTripleError(f"power-triple coordinates must be nonnegative: {self}")
        if abs(self.n) > MAX_LEVEL:
            raise LevelOverflowError(f"level {self.n} exceeds the configured bound {MAX_LEVEL}")

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __str__(self) -> str:
        return f"({self.n},{self.a},{self.b})"


ZERO = PowerTriple(0, 0, 0)


class TriplesContext:
    """Eigen-data of a two-symbol word, as needed by power-triple arithmetic."""

    def __init__(self, eigen: EigenData):
        self.eigen = eigen
        self.matrix: AntiRenormMatrix = eigen.matrix
        M, t = self.matrix, eigen.t
        # left eigen-covector for t, first component 1
        self.e_t = (QuadSurd(1, 0, 1, t.D), (t - M.m11) / M.m21)
        # right eigenvector for t; annihilated by the 1/t covector
        self.r_t = (QuadSurd(M.m12, 0, 1, t.D), t - M.m11)
        self._norm = self.e_t[0] * self.r_t[0] + self.e_t[1] * self.r_t[1]
        self._t_pow: dict[int, QuadSurd] = {}

    @classmethod
    def from_word(cls, word: str) -> TriplesContext:
        return cls(periodic_point(word))

    @property
    def word(self) -> str:
        return self.eigen.word

    @property
    def t(self) -> QuadSurd:
        return self.eigen.t

    @property
    def v(self) -> QuadSurd:
        return self.eigen.v

    @property
    def w(self) -> QuadSurd:
        return self.eigen.w

    @cached_property
    def t_float(self) -> float:
        return float(self.t)

    def t_pow(self, n: int) -> QuadSurd:
        p = self._t_pow.get(n)
        if p is None:
            p = self.t ** n
            self._t_pow[n] = p
        return p

    def v_n(self, n: int) -> QuadSurd:
        return self.t_pow(-n) * self.v

    def w_n(self, n: int) -> QuadSurd:
        return self.t_pow(-n) * self.w

    def proj_t(self, a: int, b: int) -> QuadSurd:
        """Coefficient of ``e_t`` in the covector ``(a, b)``."""
        return (a * self.r_t[0] + b * self.r_t[1]) / self._norm

    def __repr__(self) -> str:
        return f"TriplesContext(word={self.word!r})"


# -- representatives ---------------------------------------------------------

def push_down(P: PowerTriple, ctx: TriplesContext, levels: int = 1) -> PowerTriple:
    """Equivalent representative ``levels`` steps lower."""
    a, b = P.a, P.b
    for _ in range(levels):
        a, b = ctx.matrix.row_apply(a, b)
    return PowerTriple(P.n - levels, a, b)


def to_level(P: PowerTriple, level: int, ctx: TriplesContext) -> PowerTriple:
    if level > P.n:
        raise PowerTripleError(f"cannot lift {P} to level {level}; use canonical()")
    return push_down(P, ctx, P.n - level)


def canonical(P: PowerTriple, ctx: TriplesContext) -> PowerTriple:
    """Representative at the largest level with nonnegative coordinates."""
    if P.is_zero():
        return PowerTriple(0, 0, 0)
    n, a, b = P.n, P.a, P.b
    while True:
        a1, b1 = ctx.matrix.row_apply_inverse(a, b)
        if a1 < 0 or b1 < 0:
            return PowerTriple(n, a, b)
        n, a, b = n + 1, a1, b1
        if n > MAX_LEVEL:
            raise LevelOverflowError(f"canonical form of {P} exceeds level {MAX_LEVEL}")


def equivalent(P: PowerTriple, Q: PowerTriple, ctx: TriplesContext) -> bool:
    return canonical(P, ctx) == canonical(Q, ctx)


def common_level(P: PowerTriple, Q: PowerTriple, ctx: TriplesContext) -> tuple[PowerTriple, PowerTriple]:
    n = min(P.n, Q.n)
    return to_level(P, n, ctx), to_level(Q, n, ctx)


# -- order and arithmetic ----------------------------------------------------

def iota(P: PowerTriple, ctx: TriplesContext) -> QuadSurd:
    """Order-preserving embedding of power-triples into the nonnegative reals."""
    return ctx.t_pow(P.n) * ctx.proj_t(P.a, P.b)


def _difference_sign(da: int, db: int, ctx: TriplesContext, max_steps: int = 100_000) -> tuple[int, int, int]:
    # push the covector (da, db) down until it leaves the mixed-sign region;
    # returns (sign, steps, ...) with the final coordinates
    for k in range(max_steps):
        if da == 0 and db == 0:
            return 0, k, 0
        if da >= 0 and db >= 0:
            return 1, k, 0
        if da <= 0 and db <= 0:
            return -1, k, 0
        da, db = ctx.matrix.row_apply(da, db)
    raise PowerTripleError("comparison did not terminate")


def compare(P: PowerTriple, Q: PowerTriple, ctx: TriplesContext) -> int:
    """-1, 0 or 1 as P <, ==, > Q in the semigroup order.

    Integer-only: the difference covector is pushed down through ``M`` until
    it has coordinates of one sign.
    """
    P, Q = common_level(P, Q, ctx)
    return _difference_sign(P.a - Q.a, P.b - Q.b, ctx)[0]


def add(P: PowerTriple, Q: PowerTriple, ctx: TriplesContext) -> PowerTriple:
    P, Q = common_level(P, Q, ctx)
    return PowerTriple(P.n, P.a + Q.a, P.b + Q.b)


def subtract(P: PowerTriple, Q: PowerTriple, ctx: TriplesContext) -> PowerTriple:
    """``P - Q`` for ``P >= Q``, at the first level where the difference is nonnegative."""
    P, Q = common_level(P, Q, ctx)
    sgn, steps, _ = _difference_sign(P.a - Q.a, P.b - Q.b, ctx)
    if sgn < 0:
        raise PowerTripleError(f"cannot subtract {Q} from smaller {P}")
    if sgn == 0:
        return PowerTriple(P.n, 0, 0)
    P, Q = push_down(P, ctx, steps), push_down(Q, ctx, steps)
    return PowerTriple(P.n, P.a - Q.a, P.b - Q.b)


def scale_by_t(P: PowerTriple, k: int = 1) -> PowerTriple:
    """The automorphism ``P -> t^k P``."""
    return PowerTriple(P.n + k, P.a, P.b)


def translation_of(P: PowerTriple, ctx: TriplesContext) -> QuadSurd:
    """Displacement of ``T^P``: ``t^-n (b*w - a*v)``."""
    return ctx.t_pow(-P.n) * (P.b * ctx.w - P.a * ctx.v)


def critical_preimage(P: PowerTriple, ctx: TriplesContext) -> QuadSurd:
    """The unique point ``b_P`` with ``T^P(b_P) = 0``."""
    return -translation_of(P, ctx)


# -- enumeration -------------------------------------------------------------

def minimal_level(ctx: TriplesContext, radius: float) -> int:
    """A level at which every class with ``|translation| <= radius`` has a representative.

    For a canonical representative ``(k, a, b)`` the covector ``(a, b) M^-1``
    has coordinates of opposite signs, which forces
    ``|b*w - a*v| >= (v + w)/t = 1/t``; hence ``|T^P| >= t^(-k-1)``.
    """
    radius = max(float(radius), 1e-300)
    k = math.floor(-1.0 - math.log(radius) / math.log(ctx.t_float)) - 1
    if abs(k) > MAX_LEVEL:
        raise LevelOverflowError(f"radius {radius:g} needs level {k} beyond {MAX_LEVEL}")
    return k


def enumerate_triples(
    ctx: TriplesContext,
    max_generation,
    lo,
    hi,
    *,
    strict: bool = True,
    include_zero: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> list[PowerTriple]:
    """All classes ``P`` with ``iota(P) < max_generation`` and ``lo <= T^P <= hi``.

    With ``strict=False`` the generation bound is inclusive.  Returned triples
    are canonical and sorted by generation.  Raises
    :class:`BudgetExceededError` when more than ``budget`` lattice points
    would have to be examined.
    """
    if hi < lo:
        raise PowerTripleError(f"empty displacement range [{lo}, {hi}]")
    lo_f, hi_f = float(lo), float(hi)
    L = minimal_level(ctx, max(abs(lo_f), abs(hi_f)) * (1 + 1e-9))
    D = ctx.t.D
    tL = ctx.t_pow(L)
    c1 = tL * ctx.r_t[0] / ctx._norm
    c2 = tL * ctx.r_t[1] / ctx._norm
    sv = ctx.t_pow(-L) * ctx.v
    sw = ctx.t_pow(-L) * ctx.w
    c1f, c2f, svf, swf = float(c1), float(c2), float(sv), float(sw)
    B = max_generation if isinstance(max_generation, QuadSurd) else QuadSurd(
        Fraction(max_generation).numerator, 0, Fraction(max_generation).denominator, D)
    Bf = float(B)
    a_max = int(Bf / c1f) + 1
    if a_max + 1 > budget:
        raise BudgetExceededError(f"enumeration needs more than {budget} lattice points")
    out = []
    examined = 0
    for a in range(a_max + 1):
        b_lo = max(0, math.ceil((lo_f + a * svf) / swf) - 1)
        b_hi = min(math.floor((hi_f + a * svf) / swf) + 1, math.floor((Bf - a * c1f) / c2f) + 1)
        if b_hi < b_lo:
            continue
        examined += b_hi - b_lo + 1
        if examined > budget:
            raise BudgetExceededError(f"enumeration needs more than {budget} lattice points")
        for b in range(b_lo, b_hi + 1):
            if a == 0 and b == 0 and not include_zero:
                continue
            g = a * c1 + b * c2
            if (g >= B) if strict else (g > B):
                continue
            d = b * sw - a * sv
            if d < lo or d > hi:
                continue
            out.append((g, PowerTriple(L, a, b)))
    out.sort(key=lambda item: item[0])
    return [canonical(P, ctx) for _, P in out]
