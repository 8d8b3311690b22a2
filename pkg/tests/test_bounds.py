from fractions import Fraction
from math import factorial, pi, sqrt

import pytest
from hypothesis import given, strategies as st

from tdmpf.bounds import (BoundReport, bell_number, bell_number_upper_bound, beta_coefficient,
                          complete_bell, domain_note, query_count_estimate, remainder_exact,
                          remainder_mpf, report_step_count, report_theorem_bound,
                          step_cap, step_count_bound, theorem_bound, touchard,
                          touchard_upper_bound)
from tdmpf.errors import InvalidInputError, OverflowGuardError, TooLargeError
from tdmpf.mpf import MpfScheme

# [DERIVED] beta_k^{(n)} for n = 0..4 by brute-force enumeration of compositions
# with an independent complete-Bell implementation (sympy incomplete Bell sums)
BETA_TABLE = {
    1: ["1", "3/2", "7/4", "79/48", "173/128"],
    2: ["1", "3/2", "57/32", "167/96", "2299/1536"],
    3: ["1", "3/2", "193/108", "253/144", "47399/31104"],
}
# [DERIVED] Bell numbers b_0..b_10 from the Bell triangle by hand / OEIS A000110
BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]


def test_bell_numbers():
    assert [bell_number(n) for n in range(11)] == BELL
    with pytest.raises(OverflowGuardError):
        bell_number(26)
    with pytest.raises(InvalidInputError):
        bell_number(-1)


@pytest.mark.parametrize("n", range(1, 21))
def test_bell_upper_bound(n):
    assert bell_number(n) < bell_number_upper_bound(n)


def test_complete_bell_identities():
    assert complete_bell(1, [7]) == 7
    for n in range(11):
        assert complete_bell(n, [1] * n) == bell_number(n)
    for n in range(9):
        assert complete_bell(n, [2 ** j for j in range(1, n + 1)]) == 2 ** n * bell_number(n)
    with pytest.raises(InvalidInputError):
        complete_bell(3, [1, 2])


def test_complete_bell_explicit():
    # Y_3 = x1^3 + 3 x1 x2 + x3
    assert complete_bell(3, [2, 3, 5]) == 8 + 18 + 5


def test_touchard():
    for n in range(8):
        assert touchard(n, 1) == bell_number(n)
    for x in (Fraction(1, 2), 3, 7):
        assert touchard(2, x) == x + x * x


@pytest.mark.parametrize("n", range(1, 16))
@pytest.mark.parametrize("x", [0.5, 1.0, 3.0])
def test_touchard_bound(n, x):
    assert touchard(n, x) <= touchard_upper_bound(n, x)


def test_touchard_bound_domain():
    with pytest.raises(InvalidInputError):
        touchard_upper_bound(3, 0.0)


def test_remainder_exact():
    assert remainder_exact(1, 1.0, 0.5) == pytest.approx(1 / (2 * sqrt(pi)), rel=1e-14)
    assert remainder_exact(2, 3.0, 0.0) == 0.0


@given(st.integers(1, 6), st.floats(0.1, 5), st.floats(1e-4, 0.1))
def test_remainder_exact_halving(M, lam, dt):
    ratio = remainder_exact(M, lam, dt) / remainder_exact(M, lam, dt / 2)
    assert ratio == pytest.approx(2 ** (2 * M + 1), rel=1e-12)


def test_theorem_bound_values():
    assert theorem_bound(2, 5 / 3, 4.0, 0.0) == 0.0
    assert theorem_bound(2, 5 / 3, 4.0, 1e-3) == pytest.approx(0.32 * 5 / 3 * 0.164 ** 5, rel=1e-12)
    assert theorem_bound(2, 5 / 3, 4.0, 1e-3) == pytest.approx(6.3e-5, rel=0.01)


@given(st.integers(1, 5), st.floats(1, 10), st.floats(0.1, 10), st.floats(1e-5, 1e-2))
def test_theorem_is_twice_remainder(M, anorm, lam, dt):
    assert theorem_bound(M, anorm, lam, dt) == pytest.approx(2 * remainder_mpf(M, anorm, lam, dt),
                                                              rel=1e-15)


def test_anorm_guard():
    with pytest.raises(InvalidInputError):
        remainder_mpf(2, 0.5, 1.0, 1e-3)


def test_domain_note():
    assert "vacuous" in domain_note(4.0, 0.01)
    assert "vacuous" not in domain_note(4.0, 0.001)


def test_beta_table():
    for k, row in BETA_TABLE.items():
        assert [beta_coefficient(k, n) for n in range(5)] == [Fraction(v) for v in row]


def test_beta_k1_n1_by_hand():
    # one segment, q = 1: (1/1!) (1/2) Y_1(1/(1/2) + 1) = 3/2
    assert beta_coefficient(1, 1) == Fraction(3, 2)


def test_beta_guards():
    with pytest.raises(TooLargeError):
        beta_coefficient(13, 2)
    with pytest.raises(InvalidInputError):
        beta_coefficient(0, 1)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_beta_factorial_weighted_growth(k):
    """n! beta_k^{(n)} grows with n; beta itself does not (see the next test)."""
    vals = [factorial(n) * beta_coefficient(k, n) for n in range(6)]
    assert all(b > a for a, b in zip(vals[1:], vals[2:]))


@pytest.mark.xfail(strict=True, reason="beta_k^{(n)} peaks at n = 2 and then decreases; "
                                       "monotonicity in n holds only for n! beta")
def test_beta_monotone_in_n_as_stated():
    for k in (1, 2, 3):
        vals = [beta_coefficient(k, n) for n in range(6)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_beta_increases_with_k():
    for n in range(2, 6):
        vals = [beta_coefficient(k, n) for k in range(1, 6)]
        assert all(b > a for a, b in zip(vals, vals[1:]))


def test_step_count_bound_inversion():
    M, anorm, lam, dt = 2, 1.380952380952381, 4.0, 1e-3
    eps = theorem_bound(M, anorm, lam, dt)
    assert step_count_bound(M, anorm, 0.0, lam, dt, eps) == pytest.approx(1.0, rel=0.2)


@given(st.integers(1, 5), st.floats(0.5, 8), st.floats(0.01, 5), st.floats(1e-10, 1e-3))
def test_step_count_bound_scaling(M, lam, dt, eps):
    s = MpfScheme.wellconditioned(M)
    r1 = step_count_bound(M, s.a_norm1, 0.0, lam, dt, eps)
    r2 = step_count_bound(M, s.a_norm1, 0.0, lam, 2 * dt, eps)
    assert r2 / r1 == pytest.approx(2 ** (1 + 1 / (2 * M)), rel=1e-12)


def test_step_cap_consistency():
    # r steps at the cap sum to eps under the one-step bound
    M, anorm, eps, r = 3, 1.5, 1e-6, 17
    cap = step_cap(M, anorm, eps, r)
    assert r * theorem_bound(M, anorm, 1.0, cap) == pytest.approx(eps, rel=1e-12)


def test_query_count():
    assert query_count_estimate(1, 1, MpfScheme.from_k((1,))) == 3
    assert query_count_estimate(2, 3, MpfScheme.wellconditioned(2)) == 3 * 9 * 14
    with pytest.raises(InvalidInputError):
        query_count_estimate(0, 1, MpfScheme.from_k((1,)))


def test_reports():
    rep = report_theorem_bound(2, 1.38, 4.0, 1e-3)
    assert isinstance(rep, BoundReport) and rep.value > 0 and rep.valid_domain
    assert report_step_count(2, 1.38, 0.0, 4.0, 1.0, 1e-6).value > 1
    with pytest.raises(InvalidInputError):
        BoundReport("x", {}, -1.0)
