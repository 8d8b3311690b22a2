"""
Multiproduct formulas built on the midpoint rule.

    U_k(t0 + dt, t0) = sum_j a_j U2^{(k_j)}(t0 + dt, t0)

where U2^{(k)} chains k midpoint steps of width dt/k and the coefficients a
solve the Vandermonde system sum_j a_j k_j^{-2p} = delta_{p0}, p = 0..M-1.
"""
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import operators as ops
from .errors import DegenerateSchemeError, InvalidInputError, SingularSystemError
from .hamiltonian import midpoint_chain

M_MAX = 12


def wellconditioned_k(M):
    """Step counts k_j = ceil((sqrt(8) M / pi) / |sin(pi (2j-1) / (8M))|), j = 1..M.

    Evaluated with 50-digit arithmetic so the ceiling is never decided by
    double rounding.  For M = 1 the formula gives 3; a single-term scheme must
    have a_1 = 1 and its step count only rescales the midpoint rule, so (1,) is
    returned, which makes M = 1 the plain midpoint formula.
    """
    if int(M) != M or not 1 <= M <= M_MAX:
        raise InvalidInputError(f"M must be an integer in [1, {M_MAX}]")
    M = int(M)
    if M == 1:
        return (1,)
    with mpmath.workdps(50):
        pref = mpmath.sqrt(8) * M / mpmath.pi
        k = [int(mpmath.ceil(pref / abs(mpmath.sin(mpmath.pi * (2 * j - 1) / (8 * M)))))
             for j in range(1, M + 1)]
    if len(set(k)) != M:
        raise DegenerateSchemeError(f"repeated step counts for M={M}: {k}")
    return tuple(k)


def vandermonde_fractions(k):
    """Exact coefficients a_j = prod_{i != j} k_j^2 / (k_j^2 - k_i^2)."""
    k = [int(x) for x in k]
    if not k or any(x < 1 for x in k):
        raise InvalidInputError("k must be a nonempty list of positive integers")
    if len(set(k)) != len(k):
        raise SingularSystemError(f"repeated entries in k={k}")
    a = []
    for j, kj in enumerate(k):
        val = Fraction(1)
        for i, ki in enumerate(k):
            if i != j:
                val *= Fraction(kj * kj, kj * kj - ki * ki)
        a.append(val)
    return a


def solve_vandermonde(k):
    return np.array([float(x) for x in vandermonde_fractions(k)])


def vandermonde_residuals(k, a):
    """|sum_j a_j k_j^{-2p}| for p = 1..M-1, evaluated in floating point."""
    k = np.asarray(k, dtype=float)
    a = np.asarray(a, dtype=float)
    return np.array([abs(np.sum(a * k ** (-2.0 * p))) for p in range(1, len(k))])


@dataclass(frozen=True)
class MpfScheme:
    """Order parameter M, step counts k (strictly decreasing) and coefficients a."""

    M: int
    k: tuple
    a: np.ndarray = field(repr=False)
    a_exact: tuple = field(repr=False)
    a_norm1: float

    @classmethod
    def from_k(cls, k, check_conditioning=True):
        k = tuple(int(x) for x in k)
        if any(k[i] <= k[i + 1] for i in range(len(k) - 1)):
            raise InvalidInputError("k must be strictly decreasing")
        M = len(k)
        if check_conditioning and M > 1 and max(k) >= 3 * M * M:
            raise InvalidInputError(f"k_j must stay below 3M^2 = {3 * M * M}")
        exact = vandermonde_fractions(k)
        a = np.array([float(x) for x in exact])
        a.flags.writeable = False
        scheme = cls(M, k, a, tuple(exact), float(np.sum(np.abs(a))))
        if sum(exact) != 1 or np.any(vandermonde_residuals(k, a) >= 1e-12):
            raise SingularSystemError("coefficient certificate failed")
        return scheme

    @classmethod
    def wellconditioned(cls, M):
        return cls.from_k(wellconditioned_k(M))

    @property
    def kmax(self):
        return max(self.k)


def midpoint(model, t0, dt):
    """exp(-i H(t0 + dt/2) dt).  Negative dt runs the step backwards from t0."""
    return ops.expm_hermitian_generator(model.evaluate(t0 + dt / 2), dt)


def product_chain(model, t0, dt, k):
    if int(k) != k or k < 1:
        raise InvalidInputError("k must be a positive integer")
    return midpoint_chain(model, t0, dt, int(k))


def mpf_apply(model, scheme, t0, dt):
    """sum_j a_j U2^{(k_j)}(t0 + dt, t0); not unitary in general."""
    out = np.zeros((model.dim, model.dim), dtype=complex)
    for aj, kj in zip(scheme.a, scheme.k):
        out += aj * product_chain(model, t0, dt, kj)
    return out


def mpf_apply_extended(model, scheme, t0, dt, dps=32):
    """``mpf_apply`` carried out in mpmath at ``dps`` digits; returns an mpmath matrix.

    Midpoint times and H(t) are evaluated at full precision when every
    coefficient has a closed form (``model.supports_mp``); otherwise the double
    samples are used, which is enough for structural quantities such as
    conservation laws but not for the error against an exact propagator.
    Used to resolve high-order small-dt behaviour that sits below the double
    precision roundoff floor.  Slow: one mpmath expm per midpoint step.
    """
    if int(dps) != dps or dps < 16:
        raise InvalidInputError("dps must be an integer >= 16")
    with mpmath.workdps(int(dps)):
        t0, dt = mpmath.mpf(t0), mpmath.mpf(dt)
        if model.supports_mp:
            sample = model.evaluate_mp
        else:
            def sample(t):
                return mpmath.matrix(model.evaluate(float(t)).tolist())
        out = mpmath.zeros(model.dim, model.dim)
        for aj, kj in zip(scheme.a_exact, scheme.k):
            h = dt / kj
            chain = mpmath.eye(model.dim)
            for m in range(kj):
                chain = mpmath.expm(sample(t0 + (m + mpmath.mpf(0.5)) * h) * (-1j * h)) * chain
            out += chain * (mpmath.mpf(aj.numerator) / aj.denominator)
        return out


def mpf_apply_many(model, scheme, t0s, dts, chunk=4096):
    """Vectorized ``mpf_apply`` over arrays of start times and durations, shape (n, d, d)."""
    t0s = np.atleast_1d(np.asarray(t0s, dtype=float))
    dts = np.broadcast_to(np.asarray(dts, dtype=float), t0s.shape)
    out = np.zeros((len(t0s), model.dim, model.dim), dtype=complex)
    for start in range(0, len(t0s), chunk):
        sl = slice(start, start + chunk)
        t0, dt = t0s[sl], dts[sl]
        for aj, kj in zip(scheme.a, scheme.k):
            h = dt / kj
            mids = t0[:, None] + (np.arange(kj) + 0.5)[None, :] * h[:, None]
            steps = ops.expm_hermitian_generator(model.evaluate_many(mids.ravel()),
                                                 np.repeat(h, kj))
            steps = steps.reshape(len(t0), kj, model.dim, model.dim)
            out[sl] += aj * ops.ordered_product(steps)
    return out


def trotter(model, t0, dt, r):
    """r midpoint steps over [t0, t0 + dt]; the plain second-order product formula."""
    return product_chain(model, t0, dt, r)
