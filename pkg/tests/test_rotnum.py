from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sectorren.rotnum import (
    BRANCH_13,
    BRANCH_23,
    AmbiguousBranchError,
    RotationError,
    antirenorm_branch_for,
    antirenorm_rotation,
    branch_of,
    error_bound,
    itinerary,
    molecule_map,
    parse_rotation,
    periodic_point,
    prime_renorm,
    prime_renorm_vec,
    projectivize,
    word_to_matrix,
)
from sectorren.surd import QuadSurd

GOLDEN = QuadSurd(3, -1, 2)  # (3 - sqrt 5)/2
GOLDEN_CONJ = QuadSurd(-1, 1, 2)  # (sqrt 5 - 1)/2

words = st.text(alphabet="LR", min_size=2, max_size=8).filter(lambda w: "L" in w and "R" in w)
unit_fractions = st.builds(Fraction, st.integers(1, 999), st.integers(2, 1000)).filter(lambda f: 0 < f < 1)


# -- prime renormalization -----------------------------------------------------

def test_prime_renorm_examples():
    assert prime_renorm(Fraction(1, 3)) == Fraction(1, 2)
    assert prime_renorm(Fraction(1, 2)) == 0
    assert prime_renorm(GOLDEN) == GOLDEN_CONJ
    assert prime_renorm(GOLDEN_CONJ) == GOLDEN


def test_prime_renorm_float_input():
    out = prime_renorm(0.618034)
    mid = mpmath.mpf(out.mid)
    assert abs(mid - mpmath.mpf("0.381966")) < 1e-5
    assert error_bound(out) < 1e-20


def test_prime_renorm_rejects_zero():
    with pytest.raises(RotationError):
        prime_renorm(Fraction(0))


def test_ambiguous_float_near_half_fails_loudly():
    x = mpmath.iv.mpf(["0.49", "0.51"])
    with pytest.raises(AmbiguousBranchError):
        branch_of(x)


def test_molecule_map_examples():
    assert molecule_map(Fraction(1, 2)) == 0
    assert molecule_map(Fraction(2, 5)) == Fraction(2, 3)
    assert molecule_map(molecule_map(GOLDEN)) == GOLDEN


# -- vector form -------------------------------------------------------------

def test_prime_renorm_vec_examples():
    assert prime_renorm_vec(-1, 1) == (0, 1)
    assert prime_renorm_vec(-2, 1) == (-1, 1)
    v, w = prime_renorm_vec(-0.381966, 0.618034)
    assert v == pytest.approx(-0.381966) and w == pytest.approx(0.236068)


def test_prime_renorm_vec_rejects_outside_quadrant():
    with pytest.raises(RotationError):
        prime_renorm_vec(1, 1)
    with pytest.raises(RotationError):
        prime_renorm_vec(0, 0)


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_projectivization_square(v, w):
    if v == 0 or w == 0:
        return
    v2m, w2 = prime_renorm_vec(Fraction(-v), Fraction(w))
    assert projectivize(v2m, w2) == prime_renorm(projectivize(Fraction(-v), Fraction(w)))


# -- matrices and periodic points ------------------------------------------------

def test_word_to_matrix_examples():
    assert word_to_matrix("L").rows() == ((1, 0), (1, 1))
    assert word_to_matrix("LR").rows() == ((2, 1), (1, 1))
    assert word_to_matrix("LL").rows() == ((1, 0), (2, 1))
    assert word_to_matrix("LRR").rows() == ((3, 2), (1, 1))
    with pytest.raises(RotationError):
        word_to_matrix("")


def test_periodic_point_golden():
    e = periodic_point("LR")
    assert e.theta_star == GOLDEN
    assert e.t == QuadSurd(3, 1, 2)
    assert e.lambda_star == e.t * e.t
    assert float(e.lambda_star) == pytest.approx(6.854101966249685)
    rl = periodic_point("RL")
    assert rl.theta_star == GOLDEN_CONJ and rl.t == e.t


def test_periodic_point_lrr():
    e = periodic_point("LRR")
    assert e.t == QuadSurd(2, 1, 1, 3)
    assert itinerary(e.theta_star, 3).word == "LRR"


def test_boundary_word_rejected():
    with pytest.raises(RotationError):
        periodic_point("LL")


@given(words)
def test_eigen_consistency(word):
    e = periodic_point(word)
    M = e.matrix
    assert M.det == 1
    assert min(M.m11, M.m12, M.m21, M.m22) > 0
    assert e.v + e.w == 1
    t_inv = 1 / e.t
    assert e.t * t_inv == 1 and e.t + t_inv == M.trace
    assert M.apply(-e.v, e.w) == (-e.v * t_inv, e.w * t_inv)
    assert e.lambda_star == e.t * e.t
    assert e.theta_star.q != 0  # quadratic irrational
    x = e.theta_star
    for _ in word:
        x = prime_renorm(x)
    assert x == e.theta_star


def _composition(word, x):
    for s in word:
        x = x / (1 - x) if s == "L" else (2 * x - 1) / x
    return x


@pytest.mark.parametrize("word", ["LR", "RL", "LRR", "LLR"])
def test_derivative_identity_float(word):
    # central differences at step 1e-6 in double precision
    e = periodic_point(word)
    theta, h = float(e.theta_star), 1e-6
    d = (_composition(word, theta + h) - _composition(word, theta - h)) / (2 * h)
    lam = float(e.lambda_star)
    assert abs(d - lam) / lam <= 1e-6


@given(words)
def test_derivative_identity_scaled_step(word):
    # longer words have larger higher derivatives; the step shrinks with lambda*
    e = periodic_point(word)
    with mpmath.workprec(200):
        theta = e.theta_star.to_mpf(200)
        lam = e.lambda_star.to_mpf(200)
        h = mpmath.mpf("1e-6") / lam
        d = (_composition(word, theta + h) - _composition(word, theta - h)) / (2 * h)
        assert abs(d - lam) / lam <= 1e-6


# -- itineraries ---------------------------------------------------------------

def test_itinerary_examples():
    assert itinerary(GOLDEN, 6).word == "LRLRLR"
    it = itinerary(Fraction(1, 3), 3)
    assert it.word == "LL" and it.hit_zero
    assert itinerary(Fraction(2, 3), 1).word == "R"
    with pytest.raises(RotationError):
        itinerary(Fraction(0), 3)


# -- inverse branches ----------------------------------------------------------

def test_antirenorm_examples():
    assert antirenorm_rotation(Fraction(1, 2), BRANCH_13) == Fraction(2, 3)
    assert antirenorm_rotation(Fraction(1, 2), BRANCH_23) == Fraction(1, 3)
    assert antirenorm_rotation(GOLDEN_CONJ, BRANCH_23) == GOLDEN


@given(unit_fractions, st.sampled_from([BRANCH_13, BRANCH_23]))
def test_branch_inverse_exact(mu, branch):
    assert prime_renorm(antirenorm_rotation(mu, branch)) == mu


@given(st.floats(1e-6, 1 - 1e-6), st.sampled_from([BRANCH_13, BRANCH_23]))
def test_branch_inverse_float(mu, branch):
    out = prime_renorm(antirenorm_rotation(mu, branch))
    assert abs(mpmath.mpf(out.mid) - mpmath.mpf(mu)) < 1e-20


def test_antirenorm_branch_for():
    assert [antirenorm_branch_for(GOLDEN, i) for i in (1, 2)] == [BRANCH_23, BRANCH_13]
    lrr = periodic_point("LRR").theta_star
    assert [antirenorm_branch_for(lrr, i) for i in (1, 2, 3)] == [BRANCH_23, BRANCH_13, BRANCH_13]
    with pytest.raises(RotationError):
        antirenorm_branch_for(Fraction(1, 3), 1)


def test_parse_rotation():
    assert parse_rotation("2/5") == Fraction(2, 5)
    assert parse_rotation("surd:3,-1,2,5") == GOLDEN
    assert parse_rotation("7/5") == Fraction(2, 5)
    x = parse_rotation("0.25")
    assert x.a <= 0.25 <= x.b
    with pytest.raises(RotationError):
        parse_rotation("abc")
