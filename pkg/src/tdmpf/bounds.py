"""
Closed-form bounds: Bell machinery, Taylor remainders of the midpoint and
multiproduct formulas, the one-step error bound, the beta coefficients of the
derivative bound, and step/query count estimates.

Counting functions use exact integers or fractions; the analytic bounds are
plain floats.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, log, pi, sqrt

from .errors import InvalidInputError, OverflowGuardError, TooLargeError

BELL_MAX = 25
BELL_POLY_MAX = 20


@dataclass(frozen=True)
class BoundReport:
    name: str
    inputs: dict
    value: float
    valid_domain: str = ""
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if not self.value >= 0:
            raise InvalidInputError(f"{self.name} evaluated to {self.value}")


def bell_number(n):
    """Number of set partitions of n elements, from the Bell triangle."""
    if int(n) != n or n < 0:
        raise InvalidInputError("n must be a nonnegative integer")
    if n > BELL_MAX:
        raise OverflowGuardError(f"bell_number capped at n={BELL_MAX}")
    row = [1]
    for _ in range(int(n)):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def bell_number_upper_bound(n):
    """(0.792 n / log(n + 1))^n, valid for n >= 1."""
    return (0.792 * n / log(n + 1)) ** n


def complete_bell(n, x):
    """Complete exponential Bell polynomial Y_n(x_1, ..., x_n).

    Uses Y_{m+1} = sum_i C(m, i) Y_{m-i} x_{i+1}; exact when the x_j are ints or
    Fractions.
    """
    if int(n) != n or n < 0:
        raise InvalidInputError("n must be a nonnegative integer")
    if n > BELL_POLY_MAX:
        raise OverflowGuardError(f"complete_bell capped at n={BELL_POLY_MAX}")
    x = list(x)
    if len(x) != n:
        raise InvalidInputError(f"expected {n} arguments, got {len(x)}")
    Y = [1]
    for m in range(int(n)):
        Y.append(sum(comb(m, i) * Y[m - i] * x[i] for i in range(m + 1)))
    return Y[n]


def touchard(n, x):
    """Touchard (single-variable Bell) polynomial B_n(x) = Y_n(x, ..., x)."""
    return complete_bell(n, [x] * n)


def touchard_upper_bound(n, x):
    """(n / log(1 + n / x))^n; requires x > 0."""
    if not x > 0:
        raise InvalidInputError("the Touchard bound needs x > 0")
    if n == 0:
        return 1.0
    return (n / log(1 + n / x)) ** n


def remainder_exact(M, lambda_max, dt):
    """(1 / (2 sqrt(pi M))) (2 Lambda dt)^{2M+1}."""
    _check_order(M)
    return (2 * lambda_max * dt) ** (2 * M + 1) / (2 * sqrt(pi * M))


def remainder_mpf(M, a_norm1, lambda_max, dt):
    """0.16 ||a||_1 (41 Lambda dt)^{2M+1}."""
    _check_order(M)
    _check_anorm(a_norm1)
    return 0.16 * a_norm1 * (41 * lambda_max * dt) ** (2 * M + 1)


def theorem_bound(M, a_norm1, lambda_max, dt):
    """One-step MPF error bound 0.32 ||a||_1 (41 Lambda dt)^{2M+1}."""
    return 2 * remainder_mpf(M, a_norm1, lambda_max, dt)


def _check_order(M):
    if int(M) != M or M < 1:
        raise InvalidInputError("M must be a positive integer")


def _check_anorm(a_norm1):
    # sum a_j = 1 forces ||a||_1 >= 1; allow rounding in the last place
    if a_norm1 < 1 - 1e-12:
        raise InvalidInputError("||a||_1 is at least 1 for any valid scheme")


def domain_note(lambda_max, dt):
    x = 41 * lambda_max * dt
    return "41*Lambda*dt < 1" if x < 1 else f"vacuous: 41*Lambda*dt = {x:.4g} >= 1"


@lru_cache(maxsize=None)
def _segment_factor(q2, k, s):
    """(1/s!) ((q - 1/2)/k)^s Y_s(x) with x_j = j/(q - 1/2) + 1/k; q2 = 2q - 1."""
    half = Fraction(q2, 2)
    x = [Fraction(j) / half + Fraction(1, k) for j in range(1, s + 1)]
    return Fraction(1, factorial(s)) * (half / k) ** s * complete_bell(s, x)


def beta_coefficient(k, n):
    """beta_k^{(n)} = sum over s_1 + ... + s_k = n of prod_q (1/s_q!) ((q-1/2)/k)^{s_q} Y_{s_q}(x_q).

    The sum over compositions factorizes segment by segment, so it is the
    coefficient of z^n in prod_q F_q(z), F_q(z) = sum_s f_q(s) z^s.  Returned
    as an exact Fraction.
    """
    if int(k) != k or int(n) != n or k < 1 or n < 0:
        raise InvalidInputError("k >= 1 and n >= 0 must be integers")
    if n > 8 or k > 12:
        raise TooLargeError("beta_coefficient supports n <= 8 and k <= 12")
    poly = [Fraction(1)] + [Fraction(0)] * n
    for q in range(1, k + 1):
        f = [_segment_factor(2 * q - 1, k, s) for s in range(n + 1)]
        poly = [sum(poly[i] * f[m - i] for i in range(m + 1)) for m in range(n + 1)]
    return poly[n]


def step_count_bound(M, a_norm1, K, lambda_bar, dt, eps):
    """(41 (1 + 1.5 K) Lambda_bar dt)^{1 + 1/2M} (0.32 ||a||_1 / eps)^{1/2M}."""
    _check_order(M)
    _check_anorm(a_norm1)
    if eps <= 0 or lambda_bar <= 0 or dt <= 0 or K < 0:
        raise InvalidInputError("step_count_bound needs positive eps, Lambda, dt and K >= 0")
    return ((41 * (1 + 1.5 * K) * lambda_bar * dt) ** (1 + 1 / (2 * M))
            * (0.32 * a_norm1 / eps) ** (1 / (2 * M)))


def step_cap(M, a_norm1, eps, r):
    """Largest allowed max Lambda * dt per step for an r-step plan at total error eps."""
    return (eps / (0.32 * a_norm1 * r)) ** (1 / (2 * M + 1)) / 41


def query_count_estimate(L, r, scheme):
    """r (6L - 3) sum_j k_j: midpoint steps cost 6L - 3 queries each."""
    if L < 1 or r < 1:
        raise InvalidInputError("L and r must be positive")
    return int(r) * (6 * int(L) - 3) * sum(scheme.k)


def report_theorem_bound(M, a_norm1, lambda_max, dt):
    return BoundReport("theorem_bound", dict(M=M, a_norm1=a_norm1, lambda_max=lambda_max, dt=dt),
                       theorem_bound(M, a_norm1, lambda_max, dt), domain_note(lambda_max, dt))


def report_remainder_mpf(M, a_norm1, lambda_max, dt):
    return BoundReport("remainder_mpf", dict(M=M, a_norm1=a_norm1, lambda_max=lambda_max, dt=dt),
                       remainder_mpf(M, a_norm1, lambda_max, dt), domain_note(lambda_max, dt))


def report_remainder_exact(M, lambda_max, dt):
    return BoundReport("remainder_exact", dict(M=M, lambda_max=lambda_max, dt=dt),
                       remainder_exact(M, lambda_max, dt), "2*Lambda*dt < 1 for decay in M")


def report_step_count(M, a_norm1, K, lambda_bar, dt, eps):
    return BoundReport("step_count_bound",
                       dict(M=M, a_norm1=a_norm1, K=K, lambda_bar=lambda_bar, dt=dt, eps=eps),
                       step_count_bound(M, a_norm1, K, lambda_bar, dt, eps),
                       "eps small enough that the per-step cap is below 1/K")
