"""Exact arithmetic in a real quadratic field Q(sqrt(D)).

Elements are stored as ``(p + q*sqrt(D)) / r`` with integer ``p, q, r``,
``r > 0``, ``gcd(p, q, r) == 1`` and ``D`` square-free.  Arithmetic between
elements of different fields raises :class:`FieldMismatchError`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, total_ordering

import mpmath


class FieldMismatchError(ValueError):
    pass


@lru_cache(maxsize=256)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` square-free."""
    if n <= 0:
        raise ValueError(f"expected a positive integer, got {n}")
    s, d = 1, n
    f = 2
    while f * f <= d:
        while d % (f * f) == 0:
            d //= f * f
            s *= f
        f += 1
    return s, d


def _sign_surd(p: int, q: int, D: int) -> int:
    # sign of p + q*sqrt(D), exact
    if q == 0:
        return (p > 0) - (p < 0)
    if p == 0:
        return (q > 0) - (q < 0)
    if (p > 0) == (q > 0):
        return 1 if p > 0 else -1
    # opposite signs: compare p^2 with q^2 D
    lhs, rhs = p * p, q * q * D
    if lhs == rhs:  # impossible for square-free D > 1, kept for safety
        return 0
    dominant_p = lhs > rhs
    if dominant_p:
        return 1 if p > 0 else -1
    return 1 if q > 0 else -1


@total_ordering
class QuadSurd:
    """An element ``(p + q*sqrt(D))/r`` of Q(sqrt(D))."""

    __slots__ = ("p", "q", "r", "D")

    def __init__(self, p: int, q: int = 0, r: int = 1, D: int = 5):
        if r == 0:
            raise ZeroDivisionError("zero denominator")
        if D < 2:
            raise ValueError("D must be a square-free integer >= 2")
        if D != 5:
            s, d = squarefree_split(D)
            if s != 1:
                q *= s
                D = d
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(p, q), r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        self.p, self.q, self.r, self.D = p, q, r, D

    @classmethod
    def sqrt(cls, n: int) -> QuadSurd:
        s, d = squarefree_split(n)
        if d == 1:
            raise ValueError(f"{n} is a perfect square")
        return cls(0, s, 1, d)

    @classmethod
    def from_parts(cls, a: Fraction, b: Fraction, D: int) -> QuadSurd:
        """Build ``a + b*sqrt(D)`` from rational parts."""
        a, b = Fraction(a), Fraction(b)
        r = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        return cls(a.numerator * (r // a.denominator), b.numerator * (r // b.denominator), r, D)

    # -- views -------------------------------------------------------------
    @property
    def rational_part(self) -> Fraction:
        return Fraction(self.p, self.r)

    @property
    def surd_part(self) -> Fraction:
        return Fraction(self.q, self.r)

    def is_rational(self) -> bool:
        return self.q == 0

    def conjugate(self) -> QuadSurd:
        return QuadSurd(self.p, -self.q, self.r, self.D)

    def norm(self) -> Fraction:
        return Fraction(self.p * self.p - self.q * self.q * self.D, self.r * self.r)

    def sign(self) -> int:
        return _sign_surd(self.p, self.q, self.D)

    def to_mpf(self, prec: int = 128) -> mpmath.mpf:
        with mpmath.workprec(prec + 16):
            if self.q == 0 or (self.p > 0) == (self.q > 0) or self.p == 0:
                return (self.p + self.q * mpmath.sqrt(self.D)) / self.r
            # p and q of opposite sign: x = norm(x) / conj(x) avoids cancellation
            n = self.p * self.p - self.q * self.q * self.D
            conj = self.p - self.q * mpmath.sqrt(self.D)
            return mpmath.mpf(n) / (conj * self.r)

    def __float__(self) -> float:
        return float(self.to_mpf(64))

    def __repr__(self) -> str:
        return f"QuadSurd({self.p}, {self.q}, {self.r}, D={self.D})"

    def __str__(self) -> str:
        if self.q == 0:
            num = str(self.p)
        else:
            qs = "" if abs(self.q) == 1 else f"{abs(self.q)}*"
            sgn = "-" if self.q < 0 else "+"
            num = f"{qs}sqrt({self.D})" if self.p == 0 and self.q > 0 else (
                f"-{qs}sqrt({self.D})" if self.p == 0 else f"{self.p} {sgn} {qs}sqrt({self.D})")
        if self.r == 1:
            return num
        return f"({num})/{self.r}"

    # -- coercion ----------------------------------------------------------
    def _coerce(self, other) -> QuadSurd | None:
        if isinstance(other, QuadSurd):
            if other.D != self.D:
                if other.q == 0:
                    return QuadSurd(other.p, 0, other.r, self.D)
                raise FieldMismatchError(f"Q(sqrt({self.D})) vs Q(sqrt({other.D}))")
            return other
        if isinstance(other, int):
            return QuadSurd(other, 0, 1, self.D)
        if isinstance(other, Fraction):
            return QuadSurd(other.numerator, 0, other.denominator, self.D)
        return None

    def _pair(self, other) -> tuple[QuadSurd, QuadSurd] | None:
        # a rational self adopts the field of an irrational partner
        if isinstance(other, QuadSurd) and other.D != self.D and self.q == 0 and other.q != 0:
            return QuadSurd(self.p, 0, self.r, other.D), other
        o = self._coerce(other)
        return None if o is None else (self, o)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, o = pair
        r = x.r * o.r
        return QuadSurd(x.p * o.r + o.p * x.r, x.q * o.r + o.q * x.r, r, x.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.p, -self.q, self.r, self.D)

    def __pos__(self):
        return self

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return pair[0] + (-pair[1])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, o = pair
        return QuadSurd(x.p * o.p + x.q * o.q * x.D, x.p * o.q + x.q * o.p, x.r * o.r, x.D)

    __rmul__ = __mul__

    def _inverse(self) -> QuadSurd:
        n = self.p * self.p - self.q * self.q * self.D
        if n == 0:
            raise ZeroDivisionError("division by zero surd")
        # r / (p + q sqrt D) = r (p - q sqrt D) / n
        return QuadSurd(self.r * self.p, -self.r * self.q, n, self.D)

    def __truediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return pair[0] * pair[1]._inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self._inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self._inverse()
        n = abs(n)
        result = QuadSurd(1, 0, 1, self.D)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadSurd):
            return (self.p, self.q, self.r, self.D) == (other.p, other.q, other.r, other.D) or (
                self.q == 0 and other.q == 0 and self.p * other.r == other.p * self.r)
        if isinstance(other, (int, Fraction)):
            return self.q == 0 and Fraction(self.p, self.r) == other
        return NotImplemented

    def __hash__(self):
        if self.q == 0:
            return hash(Fraction(self.p, self.r))
        return hash((self.p, self.q, self.r, self.D))

    def __lt__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return (pair[0] - pair[1]).sign() < 0

    def __bool__(self):
        return self.p != 0 or self.q != 0


def sign(x) -> int:
    """Exact sign of an int, Fraction or QuadSurd."""
    if isinstance(x, QuadSurd):
        return x.sign()
    return (x > 0) - (x < 0)


def to_mpf(x, prec: int = 128):
    """Evaluate an exact number at the given binary precision."""
    if isinstance(x, QuadSurd):
        return x.to_mpf(prec)
    with mpmath.workprec(prec):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)
