"""Rotation numbers and the prime renormalization map.

A rotation number is held in one of three forms:

* ``fractions.Fraction`` -- exact rational in lowest terms;
* :class:`~sectorren.surd.QuadSurd` -- exact real quadratic irrational;
* ``mpmath.iv.mpf`` -- a high-precision interval; its half-width is the
  absolute error bound.  Branch decisions on an interval that straddles 1/2
  raise :class:`AmbiguousBranchError` instead of guessing.

The prime renormalization is ``theta/(1-theta)`` on ``(0, 1/2]`` (symbol
``L``) and ``(2*theta-1)/theta`` on ``(1/2, 1)`` (symbol ``R``).  At exactly
1/2 both formulas give ``1 == 0 (mod 1)``; the orbit is labelled ``L`` there.
"""
from __future__ import annotations

import math
import re
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import iv

from .surd import QuadSurd

RotationNumber = Union[Fraction, QuadSurd, "mpmath.ctx_iv.ivmpf"]

#: binary precision used for interval-valued rotation numbers
FLOAT_PREC = 96

HALF = Fraction(1, 2)
BRANCH_13 = "1/3"
BRANCH_23 = "2/3"
MAX_PERIOD = 256


class RotationError(ValueError):
    """Domain error for rotation-number operations."""


class AmbiguousBranchError(RotationError):
    """An interval rotation number straddles a branch boundary."""


@contextmanager
def _iv_prec(prec: int = FLOAT_PREC):
    saved = iv.prec
    iv.prec = max(prec, saved)
    try:
        yield
    finally:
        iv.prec = saved


def _is_interval(x) -> bool:
    return isinstance(x, iv.mpf)


def _floor_exact(x) -> int:
    if isinstance(x, Fraction):
        return math.floor(x)
    k = math.floor(float(x))
    while x < k:
        k -= 1
    while x >= k + 1:
        k += 1
    return k


def as_rotation(x) -> RotationNumber:
    """Normalize ``x`` to a rotation number in [0, 1).

    Ints and Fractions stay exact, QuadSurds stay exact, Python floats and
    decimal strings become intervals enclosing the given value.
    """
    if type(x) is Fraction and 0 <= x.numerator < x.denominator:
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rotation number")
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, (Fraction, QuadSurd)):
        k = _floor_exact(x)
        return x - k if k else x
    if isinstance(x, (float, str, mpmath.mpf)):
        with _iv_prec():
            x = iv.mpf(x) if not isinstance(x, mpmath.mpf) else iv.mpf(str(x))
    if _is_interval(x):
        with _iv_prec():
            k = int(mpmath.floor(x.a))
            if k != int(mpmath.floor(x.b)):
                raise AmbiguousBranchError(f"interval {x} straddles an integer")
            return x - k if k else x
    raise TypeError(f"unsupported rotation number type {type(x).__name__}")


_SURD_RE = re.compile(r"^surd:\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(\d+)\s*$")
_FRAC_RE = re.compile(r"^\s*(-?\d+)\s*/\s*(\d+)\s*$")


def parse_rotation(text: str) -> RotationNumber:
    """Parse ``p/q``, ``surd:p,q,r,D`` or a decimal literal."""
    m = _SURD_RE.match(text.strip())
    if m:
        p, q, r, D = (int(g) for g in m.groups())
        return as_rotation(QuadSurd(p, q, r, D))
    m = _FRAC_RE.match(text)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise RotationError(f"zero denominator in {text!r}")
        return as_rotation(Fraction(num, den))
    try:
        float(text)
    except ValueError:
        raise RotationError(f"cannot parse rotation number {text!r}") from None
    return as_rotation(text.strip())


def error_bound(theta) -> mpmath.mpf:
    """Absolute error bound; zero for exact representations."""
    if _is_interval(theta):
        with mpmath.workprec(FLOAT_PREC):
            return (mpmath.mpf(theta.b) - mpmath.mpf(theta.a)) / 2
    return mpmath.mpf(0)


def to_mpf(theta, prec: int = 128) -> mpmath.mpf:
    if _is_interval(theta):
        with mpmath.workprec(prec):
            return (mpmath.mpf(theta.a) + mpmath.mpf(theta.b)) / 2
    if isinstance(theta, QuadSurd):
        return theta.to_mpf(prec)
    with mpmath.workprec(prec):
        return mpmath.mpf(theta.numerator) / theta.denominator


def is_zero(theta) -> bool:
    if type(theta) is Fraction:
        return theta.numerator == 0
    if _is_interval(theta):
        return theta.a <= 0 <= theta.b
    return theta == 0


def branch_of(theta) -> str:
    """``'L'`` if theta lies in (0, 1/2], ``'R'`` if in (1/2, 1)."""
    if _is_interval(theta):
        if theta.b <= 0.5:
            return "L"
        if theta.a > 0.5:
            return "R"
        raise AmbiguousBranchError(f"interval {theta} straddles 1/2")
    if type(theta) is Fraction:
        return "L" if 2 * theta.numerator <= theta.denominator else "R"
    return "L" if theta <= HALF else "R"


def _apply_branch(theta, symbol: str):
    if isinstance(theta, Fraction):
        p, q = theta.numerator, theta.denominator
        num, den = (p, q - p) if symbol == "L" else (2 * p - q, p)
        return Fraction(0) if num == den else Fraction(num, den)
    if _is_interval(theta):
        with _iv_prec():
            out = theta / (1 - theta) if symbol == "L" else (2 * theta - 1) / theta
            if out.b >= 1:
                if out.a < 1:
                    raise AmbiguousBranchError(f"image {out} straddles 1 == 0 (mod 1)")
                out = out - 1
            return out
    out = theta / (1 - theta) if symbol == "L" else (2 * theta - 1) / theta
    return Fraction(0) if out == 1 else out


def prime_renorm(theta):
    """One step of the prime renormalization of a rotation number."""
    if type(theta) is Fraction:
        p, q = theta.numerator, theta.denominator
        if 0 < p < q:
            num, den = (p, q - p) if 2 * p <= q else (2 * p - q, p)
            return Fraction(0) if num == den else Fraction(num, den)
    theta = as_rotation(theta)
    if is_zero(theta):
        raise RotationError("prime renormalization is undefined at theta = 0")
    return _apply_branch(theta, branch_of(theta))


def molecule_map(theta):
    """Action of the molecule map on main-cardioid rotation numbers.

    Same formula as :func:`prime_renorm`.
    """
    return prime_renorm(theta)


def prime_renorm_vec(v_minus, w):
    """Prime renormalization of a pair of translations ``(v_minus, w)``.

    ``v_minus <= 0 <= w``.  With ``v = -v_minus`` the result is
    ``(v_minus + w, w)`` when ``v >= w`` and ``(v_minus, w + v_minus)`` otherwise.
    """
    if v_minus > 0 or w < 0:
        raise RotationError(f"({v_minus}, {w}) lies outside the quadrant R<=0 x R>=0")
    if v_minus == 0 and w == 0:
        raise RotationError("zero vector has no direction")
    if -v_minus >= w:
        return v_minus + w, w
    return v_minus, w + v_minus


def projectivize(v_minus, w):
    """The rotation number ``v/(v+w)`` of a quadrant vector."""
    v = -v_minus
    return v / (v + w)


@dataclass(frozen=True)
class AntiRenormMatrix:
    m11: int
    m12: int
    m21: int
    m22: int

    def __post_init__(self):
        if min(self.m11, self.m12, self.m21, self.m22) < 0:
            raise RotationError("antirenormalization matrices have nonnegative entries")

    @property
    def det(self) -> int:
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def trace(self) -> int:
        return self.m11 + self.m22

    def __matmul__(self, other: AntiRenormMatrix) -> AntiRenormMatrix:
        return AntiRenormMatrix(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def apply(self, x, y):
        """Column-vector action."""
        return self.m11 * x + self.m12 * y, self.m21 * x + self.m22 * y

    def row_apply(self, a, b):
        """Row-vector action ``(a, b) @ M``."""
        return a * self.m11 + b * self.m21, a * self.m12 + b * self.m22

    def row_apply_inverse(self, a, b):
        """Row-vector action of ``M^-1`` (det 1)."""
        return a * self.m22 - b * self.m21, -a * self.m12 + b * self.m11

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.m11, self.m12), (self.m21, self.m22)


ELEMENTARY = {
    "R": AntiRenormMatrix(1, 1, 0, 1),
    "L": AntiRenormMatrix(1, 0, 1, 1),
}


def check_word(word: str) -> str:
    if not word or any(s not in "LR" for s in word):
        raise RotationError(f"renormalization words are nonempty strings over L/R, got {word!r}")
    return word


def word_to_matrix(word: str) -> AntiRenormMatrix:
    """Product of elementary matrices; the first symbol is the rightmost factor."""
    check_word(word)
    M = AntiRenormMatrix(1, 0, 0, 1)
    for s in word:
        M = ELEMENTARY[s] @ M
    return M


@dataclass(frozen=True)
class EigenData:
    word: str
    matrix: AntiRenormMatrix
    t: QuadSurd
    lambda_star: QuadSurd
    theta_star: QuadSurd
    v: QuadSurd
    w: QuadSurd

    @property
    def period(self) -> int:
        return len(self.word)


def periodic_point(word: str) -> EigenData:
    """Periodic point of the prime renormalization with the given itinerary."""
    check_word(word)
    if "L" not in word or "R" not in word:
        raise RotationError(
            f"boundary word {word!r}: the periodic point degenerates to 0; both symbols are required")
    M = word_to_matrix(word)
    tr = M.trace
    t = QuadSurd(tr, 1, 2, tr * tr - 4)
    t_inv = tr - t
    # first row of M (-v, w) = (1/t)(-v, w) with v + w = 1
    v = M.m12 / (M.m12 + M.m11 - t_inv)
    w = 1 - v
    assert M.apply(-v, w) == (-v * t_inv, w * t_inv)
    data = EigenData(word, M, t, t * t, v, v, w)
    theta = v
    for s in word:
        if branch_of(theta) != s:
            raise AssertionError(f"itinerary of periodic point disagrees with {word!r}")
        theta = _apply_branch(theta, s)
    assert theta == v
    return data


@dataclass(frozen=True)
class Itinerary:
    word: str
    orbit: tuple
    hit_zero: bool


def itinerary(theta, steps: int) -> Itinerary:
    """Branch symbols along the forward orbit of theta.

    ``orbit`` holds the iterates ``theta_0, ..., theta_k``.  When the orbit
    reaches 0 (rational input) the word is truncated there and ``hit_zero``
    is set.
    """
    theta = as_rotation(theta)
    if is_zero(theta):
        raise RotationError("itinerary is undefined at theta = 0")
    symbols = []
    orbit = [theta]
    for _ in range(steps):
        s = branch_of(theta)
        symbols.append(s)
        theta = _apply_branch(theta, s)
        orbit.append(theta)
        if not _is_interval(theta) and theta == 0:
            return Itinerary("".join(symbols), tuple(orbit), True)
    return Itinerary("".join(symbols), tuple(orbit), False)


def antirenorm_rotation(mu, branch: str):
    """Inverse branches of the prime renormalization.

    ``'1/3'`` gives ``1/(2 - mu)`` in (1/2, 1); ``'2/3'`` gives ``mu/(1 + mu)``
    in (0, 1/2).
    """
    if type(mu) is Fraction and 0 < mu.numerator < mu.denominator:
        p, q = mu.numerator, mu.denominator
        if branch == BRANCH_13:
            return Fraction(q, 2 * q - p)
        if branch == BRANCH_23:
            return Fraction(p, q + p)
    mu = as_rotation(mu)
    if is_zero(mu):
        raise RotationError("antirenormalization requires mu in (0, 1)")
    if isinstance(mu, Fraction):
        p, q = mu.numerator, mu.denominator
        if branch == BRANCH_13:
            return Fraction(q, 2 * q - p)
        if branch == BRANCH_23:
            return Fraction(p, q + p)
    elif branch in (BRANCH_13, BRANCH_23):
        if _is_interval(mu):
            with _iv_prec():
                return 1 / (2 - mu) if branch == BRANCH_13 else mu / (1 + mu)
        return 1 / (2 - mu) if branch == BRANCH_13 else mu / (1 + mu)
    raise RotationError(f"unknown antirenormalization branch {branch!r}")


def period_of(theta) -> int:
    """Least m with prime_renorm^m(theta) == theta, for exact theta."""
    if _is_interval(theta):
        raise RotationError("periodicity can only be decided for exact rotation numbers")
    theta = as_rotation(theta)
    x = theta
    for m in range(1, MAX_PERIOD + 1):
        if x == 0:
            break
        x = prime_renorm(x)
        if x == theta:
            return m
    raise RotationError(f"{theta} is not periodic (checked up to period {MAX_PERIOD})")


def antirenorm_branch_for(theta_star, i: int) -> str:
    """Inverse branch undoing the i-th step of the periodic orbit of theta_star.

    Step ``i`` (1-based) maps the ``(i-1)``-th iterate to the ``i``-th; its
    inverse is ``'2/3'`` when the ``(i-1)``-th iterate lies in (0, 1/2) and
    ``'1/3'`` when it lies in (1/2, 1).
    """
    m = period_of(theta_star)
    if not 1 <= i <= m:
        raise RotationError(f"step index {i} outside 1..{m}")
    x = as_rotation(theta_star)
    for _ in range(i - 1):
        x = prime_renorm(x)
    return BRANCH_23 if branch_of(x) == "L" else BRANCH_13


def pullback_branches(word: str) -> list[str]:
    """Branch sequence applying one full inverse period, in application order."""
    check_word(word)
    return [BRANCH_23 if s == "L" else BRANCH_13 for s in reversed(word)]
