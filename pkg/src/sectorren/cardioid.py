"""Main-cardioid parameters and the scaling of pulled-back rotation numbers.

``c(theta) = lambda/2 - lambda^2/4`` with ``lambda = exp(2 pi i theta)``
parameterizes the boundary of the main hyperbolic component.  Pulling a
rotation number back through the inverse branches of one period of the prime
renormalization contracts its distance to the periodic point by ``1/lambda*``;
since ``c`` is conformal at ``theta*`` the same ratio appears on the cardioid.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .rotnum import (
    RotationError,
    _is_interval,
    antirenorm_rotation,
    as_rotation,
    periodic_point,
    prime_renorm,
    pullback_branches,
)
from .rotnum import to_mpf as rot_to_mpf
from .surd import QuadSurd

#: minimum working precision (bits) for parameter differences
MIN_PRECISION = 128
#: a report is truncated once |r_n - theta*| drops below this many ulps
ULP_GUARD = 1000

CSV_HEADER = "step,r,abs_err,angle_ratio,c_re,c_im,param_ratio"


class CardioidError(ValueError):
    pass


class BranchMismatchError(CardioidError):
    pass


@dataclass(frozen=True)
class CardioidPoint:
    theta: object
    c: mpmath.mpc
    lam: mpmath.mpc


def _theta_mpf(theta, prec: int) -> mpmath.mpf:
    if isinstance(theta, Fraction):
        with mpmath.workprec(prec):
            return mpmath.mpf(theta.numerator) / theta.denominator
    return rot_to_mpf(theta, prec)


def cardioid_map(theta_mpf, prec: int) -> tuple[mpmath.mpc, mpmath.mpc]:
    with mpmath.workprec(prec):
        lam = mpmath.expjpi(2 * theta_mpf)
        return lam / 2 - lam * lam / 4, lam


def cardioid_point(theta, prec: int = MIN_PRECISION) -> CardioidPoint:
    theta = as_rotation(theta)
    c, lam = cardioid_map(_theta_mpf(theta, prec), prec)
    return CardioidPoint(theta, c, lam)


def _distance(r, theta_star, prec: int) -> mpmath.mpf:
    # |r - theta*| evaluated without cancellation for exact inputs
    if _is_interval(r):
        with mpmath.workprec(prec):
            return abs(rot_to_mpf(r, prec) - rot_to_mpf(theta_star, prec))
    d = r - theta_star
    if isinstance(d, QuadSurd):
        return abs(d.to_mpf(prec))
    with mpmath.workprec(prec):
        return abs(mpmath.mpf(d.numerator) / d.denominator)


def pullback_sequence(word: str, r0, steps: int) -> list:
    """``[r_0, r_1, ..., r_steps]``, each obtained by pulling the previous back one period.

    One period applies the inverse branches of the word in reverse order.
    Raises :class:`BranchMismatchError` if the distance to ``theta*`` fails to
    shrink.
    """
    if steps < 0:
        raise CardioidError("steps must be nonnegative")
    eigen = periodic_point(word)
    theta_star = eigen.theta_star
    r = as_rotation(r0)
    if r == 0:
        raise CardioidError("start rotation number must lie in (0, 1)")
    branches = pullback_branches(word)
    seq = [r]
    prev = _distance(r, theta_star, 64)
    for _ in range(steps):
        for b in branches:
            r = antirenorm_rotation(r, b)
        if r == theta_star:
            seq.append(r)
            continue
        dist = _distance(r, theta_star, 64)
        if prev != 0 and not dist < prev:
            raise BranchMismatchError(
                f"pullback along {word!r} moves away from the periodic point; start outside its basin")
        prev = dist
        seq.append(r)
    return seq


@dataclass(frozen=True)
class ScalingRow:
    step: int
    r: object
    abs_err: mpmath.mpf
    angle_ratio: mpmath.mpf | None
    c: mpmath.mpc
    param_ratio: mpmath.mpf | None


@dataclass(frozen=True)
class ScalingReport:
    theta_star: QuadSurd
    word: str
    rows: tuple
    target: QuadSurd
    precision: int
    truncated: bool = False
    notes: tuple = field(default_factory=tuple)

    @property
    def final_angle_ratio(self):
        return self.rows[-1].angle_ratio

    @property
    def final_param_ratio(self):
        return self.rows[-1].param_ratio

    @property
    def residual(self) -> mpmath.mpf:
        """Tail bound for the final ratios under geometric convergence."""
        rows = [r for r in self.rows if r.angle_ratio is not None]
        if len(rows) < 2:
            return mpmath.inf
        diffs = [abs(rows[-1].angle_ratio - rows[-2].angle_ratio),
                 abs(rows[-1].param_ratio - rows[-2].param_ratio)]
        return 2 * max(diffs)

    def convergence_rates(self) -> list[float]:
        """Successive contractions of |ratio - lambda*|, logged as an empirical rate."""
        lam = self.target.to_mpf(self.precision)
        devs = [abs(r.angle_ratio - lam) for r in self.rows if r.angle_ratio is not None]
        return [float(b / a) for a, b in zip(devs, devs[1:]) if a != 0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for row in self.rows:
            fields = [
                str(row.step),
                fmt17(row.r),
                fmt17(row.abs_err),
                "" if row.angle_ratio is None else fmt17(row.angle_ratio),
                fmt17(row.c.real),
                fmt17(row.c.imag),
                "" if row.param_ratio is None else fmt17(row.param_ratio),
            ]
            buf.write(",".join(fields) + "\n")
        return buf.getvalue()


def fmt17(x) -> str:
    """17 significant digits, '.' separator, independent of locale."""
    with mpmath.workprec(max(mpmath.mp.prec, 80)):
        if isinstance(x, Fraction):
            x = mpmath.mpf(x.numerator) / x.denominator
        elif isinstance(x, QuadSurd):
            x = x.to_mpf(80)
        elif _is_interval(x):
            x = mpmath.mpf(x.mid)
        if x == 0:
            return "0.0000000000000000"
        return mpmath.nstr(mpmath.mpf(x), 17, min_fixed=-5, max_fixed=17, strip_zeros=False)


def scaling_report(word: str, r0, steps: int, *, precision: int | None = None) -> ScalingReport:
    """Angle and parameter contraction ratios of the pullback sequence.

    With ``precision=None`` the working precision grows with the smallest
    distance so that no row is lost; with a fixed precision, rows whose
    distance to ``theta*`` falls below ``ULP_GUARD`` ulps are dropped and the
    report is flagged as truncated.
    """
    eigen = periodic_point(word)
    theta_star = eigen.theta_star
    seq = pullback_sequence(word, r0, steps)
    dists = [_distance(r, theta_star, 64) for r in seq]
    nonzero = [d for d in dists if d > 0]
    smallest = min(nonzero) if nonzero else mpmath.mpf(1)
    need = max(MIN_PRECISION, int(-mpmath.log(smallest, 2)) + 64)
    prec = need if precision is None else int(precision)
    if prec < 64:
        raise CardioidError("working precision must be at least 64 bits")
    truncated = False
    notes = []
    with mpmath.workprec(prec):
        ulp = mpmath.ldexp(1, -prec)
        keep = len(seq)
        for j, d in enumerate(dists):
            if 0 < d < ULP_GUARD * ulp:
                keep = j
                truncated = True
                notes.append(f"precision exhausted at step {j}: |r - theta*| below {ULP_GUARD} ulp of {prec} bits")
                break
        seq = seq[:keep]
        c_star, _ = cardioid_map(theta_star.to_mpf(prec), prec)
        rows = []
        prev_err = prev_cd = None
        for n, r in enumerate(seq):
            err = _distance(r, theta_star, prec)
            c, _ = cardioid_map(_theta_mpf(r, prec), prec)
            cd = abs(c - c_star)
            angle_ratio = param_ratio = None
            if n > 0:
                angle_ratio = prev_err / err if err else mpmath.inf
                param_ratio = prev_cd / cd if cd else mpmath.inf
            rows.append(ScalingRow(n, r, err, angle_ratio, c, param_ratio))
            prev_err, prev_cd = err, cd
    return ScalingReport(theta_star, eigen.word, tuple(rows), eigen.lambda_star, prec, truncated, tuple(notes))


def roundtrip(word: str, seq: list) -> object:
    """Apply ``prime_renorm`` ``len(word) * (len(seq) - 1)`` times to the last element."""
    r = seq[-1]
    for _ in range(len(word) * (len(seq) - 1)):
        r = prime_renorm(r)
    return r


def log_distances(report: ScalingReport) -> list[float]:
    return [float(mpmath.log(row.abs_err)) if row.abs_err > 0 else -math.inf for row in report.rows]


__all__ = [
    "CSV_HEADER",
    "BranchMismatchError",
    "CardioidError",
    "CardioidPoint",
    "RotationError",
    "ScalingReport",
    "ScalingRow",
    "cardioid_map",
    "cardioid_point",
    "fmt17",
    "log_distances",
    "pullback_sequence",
    "roundtrip",
    "scaling_report",
]
