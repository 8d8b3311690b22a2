"""
Time-dependent Hamiltonians H(t) = sum_j alpha_j(t) H_j.

The two example systems (a driven spin-1/2 in its rotating frame and an XX ring
in the interaction picture) are built here together with their closed-form
propagators, plus a brute-force Richardson/midpoint oracle used as ground truth
for everything else.
"""
from dataclasses import dataclass
from math import comb

import mpmath
import numpy as np
from scipy.optimize import minimize_scalar

from . import operators as ops
from .errors import (ConvergenceError, InvalidFrameError, InvalidInputError,
                     UnsupportedOrderError)

# "all orders" for closed-form coefficients; derivative bounds never go this high
ANALYTIC_ORDER = 64


class Constant:
    """alpha(t) = c"""

    order = ANALYTIC_ORDER

    def __init__(self, c):
        self.c = float(c)

    def __call__(self, t):
        return np.full(np.shape(t), self.c)

    def derivative(self, t, n):
        return self(t) if n == 0 else np.zeros(np.shape(t))

    def mp(self, t):
        return mpmath.mpf(self.c)


class Harmonic:
    """alpha(t) = amp * cos(freq * t + phase), with derivatives of every order."""

    order = ANALYTIC_ORDER

    def __init__(self, amp, freq, phase=0.0):
        self.amp, self.freq, self.phase = float(amp), float(freq), float(phase)

    def __call__(self, t):
        return self.amp * np.cos(self.freq * np.asarray(t, dtype=float) + self.phase)

    def derivative(self, t, n):
        t = np.asarray(t, dtype=float)
        return self.amp * self.freq ** n * np.cos(self.freq * t + self.phase + n * np.pi / 2)

    def mp(self, t):
        """Value at the current mpmath precision.

        amp and freq are taken as exact; a phase equal to the double rounding of
        a multiple of pi/2 is taken as that exact multiple.
        """
        quarter = round(self.phase / (np.pi / 2))
        if self.phase == quarter * (np.pi / 2):
            phase = quarter * mpmath.pi / 2
        else:
            phase = mpmath.mpf(self.phase)
        return mpmath.mpf(self.amp) * mpmath.cos(mpmath.mpf(self.freq) * t + phase)


class Coefficient:
    """Wrap a plain function and an optional list of its analytic derivatives.

    ``derivs[i]`` must be the (i+1)-th derivative.  Beyond ``len(derivs)`` the
    derivative falls back to central finite differences.
    """

    def __init__(self, func, derivs=()):
        self.func = func
        self.derivs = tuple(derivs)
        self.order = len(self.derivs)

    def __call__(self, t):
        return np.asarray(self.func(np.asarray(t, dtype=float)), dtype=float)

    def derivative(self, t, n):
        if n == 0:
            return self(t)
        return np.asarray(self.derivs[n - 1](np.asarray(t, dtype=float)), dtype=float)


def _as_coefficient(c):
    if isinstance(c, (int, float)):
        return Constant(c)
    if hasattr(c, "derivative") and hasattr(c, "order"):
        return c
    if callable(c):
        return Coefficient(c)
    raise InvalidInputError(f"cannot use {c!r} as a coefficient")


def fd_step(t):
    return 1e-4 * (1.0 + abs(float(t)))


def central_difference(f, t, m, h=None):
    """m-th central difference quotient of a scalar or matrix valued f at t."""
    h = fd_step(t) if h is None else h
    acc = 0.0
    for i in range(m + 1):
        acc = acc + (-1) ** i * comb(m, i) * f(t + (m / 2 - i) * h)
    return acc / h ** m


class HamiltonianModel:
    """H(t) = sum_j alpha_j(t) H_j with access to time derivatives.

    Parameters
    ----------
    terms : sequence of (coefficient, matrix) pairs
        A coefficient is a number, a callable of time, or an object with
        ``__call__``, ``derivative(t, n)`` and ``order`` (see :class:`Harmonic`).
        Matrices must be Hermitian.
    """

    def __init__(self, terms):
        terms = list(terms)
        if not terms:
            raise InvalidInputError("a model needs at least one term")
        coeffs, mats = [], []
        for c, H in terms:
            H = ops.as_matrix(H, "term matrix")
            if not ops.is_hermitian(H):
                raise InvalidInputError("term matrices must be Hermitian")
            coeffs.append(_as_coefficient(c))
            mats.append(0.5 * (H + ops.dagger(H)))
        dims = {H.shape[0] for H in mats}
        if len(dims) != 1:
            raise InvalidInputError("term matrices differ in dimension")
        self.coeffs = tuple(coeffs)
        self.mats = np.stack(mats)
        self.mats.flags.writeable = False
        self.dim = dims.pop()
        self.deriv_order = min(c.order for c in self.coeffs)

    @property
    def terms(self):
        return list(zip(self.coeffs, self.mats))

    @property
    def is_time_independent(self):
        return all(isinstance(c, Constant) for c in self.coeffs)

    def coefficients(self, ts, n=0):
        """Array of shape (len(ts), L) with alpha_j^{(n)} at each time."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        cols = []
        for c in self.coeffs:
            if n <= c.order:
                cols.append(np.broadcast_to(c.derivative(ts, n), ts.shape))
            else:
                cols.append(np.array([_fd_coefficient(c, t, n) for t in ts]))
        return np.stack(cols, axis=-1)

    def evaluate_many(self, ts):
        """Stack of H(t) for an array of times, shape (n, d, d)."""
        a = self.coefficients(ts)
        return np.einsum("nj,jab->nab", a.astype(complex), self.mats)

    def evaluate(self, t):
        if not np.isfinite(t):
            raise InvalidInputError("time must be finite")
        return self.evaluate_many([t])[0]

    @property
    def supports_mp(self):
        return all(hasattr(c, "mp") for c in self.coeffs)

    def evaluate_mp(self, t):
        """H(t) as an mpmath matrix at the current precision; closed-form coefficients only."""
        if not self.supports_mp:
            raise InvalidInputError("extended precision needs Constant or Harmonic coefficients")
        out = mpmath.zeros(self.dim, self.dim)
        for c, H in zip(self.coeffs, self.mats):
            out += mpmath.matrix(H.tolist()) * c.mp(t)
        return out

    def derivative(self, t, n):
        """H^{(n)}(t); analytic up to ``deriv_order``, finite differences beyond."""
        a = self.coefficients([t], n)[0]
        return np.einsum("j,jab->ab", a.astype(complex), self.mats)

    def __add__(self, other):
        if not isinstance(other, HamiltonianModel) or type(other) is not HamiltonianModel:
            return NotImplemented
        return HamiltonianModel(self.terms + other.terms)

    def __call__(self, t):
        return self.evaluate(t)


def _fd_coefficient(c, t, n):
    base = c.order
    return float(central_difference(lambda s: c.derivative(s, base), t, n - base))


class FramedModel(HamiltonianModel):
    """H~(t) = i T'(t) T(t)^dagger + T(t) H(t) T(t)^dagger for a unitary frame T."""

    def __init__(self, base, T, Tdot):
        self.base, self.T, self.Tdot = base, T, Tdot
        self.dim = base.dim
        self.deriv_order = 0
        self.coeffs, self.mats = (), None

    @property
    def supports_mp(self):
        return False

    @property
    def terms(self):
        raise InvalidInputError("a framed model has no fixed term list")

    @property
    def is_time_independent(self):
        return False

    def evaluate_many(self, ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        Hs = self.base.evaluate_many(ts)
        out = np.empty_like(Hs)
        for i, t in enumerate(ts):
            T = np.asarray(self.T(t), dtype=complex)
            Td = np.asarray(self.Tdot(t), dtype=complex)
            Tdag = ops.dagger(T)
            out[i] = 1j * Td @ Tdag + T @ Hs[i] @ Tdag
        return 0.5 * (out + ops.dagger(out))

    def derivative(self, t, n):
        if n == 0:
            return self.evaluate(t)
        return central_difference(self.evaluate, t, n)


def frame_transform(model, T, Tdot, sample_times=None):
    """Move ``model`` into the frame defined by the unitary path ``T``.

    ``T`` and ``Tdot`` are callables of time.  Both are checked at a few sample
    times: T must be unitary to 1e-10 and Tdot must agree with a central
    difference of T to 1e-6 (relative to the size of Tdot).
    """
    if sample_times is None:
        sample_times = np.linspace(-1.0, 1.0, 7)
    for t in sample_times:
        U = np.asarray(T(t), dtype=complex)
        if U.shape != (model.dim, model.dim) or ops.unitarity_defect(U) > 1e-10:
            raise InvalidFrameError(f"frame is not unitary at t={t}")
        fd = central_difference(lambda s: np.asarray(T(s), dtype=complex), t, 1)
        Td = np.asarray(Tdot(t), dtype=complex)
        if ops.spectral_norm(fd - Td) > 1e-6 * max(1.0, ops.spectral_norm(Td)):
            raise InvalidFrameError(f"Tdot does not match T at t={t}")
    return FramedModel(model, T, Tdot)


@dataclass(frozen=True)
class LambdaBound:
    """Continuous Lambda(t) dominating ||H^{(j)}(t)||^{1/(j+1)}, with |Lambda'| <= K Lambda^2.

    ``value`` is set for constant bounds, which lets callers skip sampling.
    """

    evaluator: object
    K: float = 0.0
    value: float = None

    def __call__(self, t):
        return self.evaluator(t)

    @classmethod
    def constant(cls, value):
        value = float(value)
        if not value > 0:
            raise InvalidInputError("Lambda must be positive")
        return cls(lambda t: np.full(np.shape(t), value) if np.ndim(t) else value, 0.0, value)


def lambda_bound(model, t, n):
    """max_{j<=n} ||H^{(j)}(t)||^{1/(j+1)} with analytic derivatives only."""
    if n > model.deriv_order:
        raise UnsupportedOrderError(
            f"order {n} requested, model supplies {model.deriv_order}")
    vals = [ops.spectral_norm(model.derivative(t, j)) ** (1.0 / (j + 1)) for j in range(n + 1)]
    return float(max(vals))


def default_lambda(model, t0, t1, M, samples=257):
    """Constant Lambda equal to the interval maximum of the pointwise bound at n = 2M+1.

    The maximum over a sample grid is refined with a bounded scalar search
    around the best grid point; K = 0 for a constant bound.
    """
    n = 2 * M + 1
    ts = np.linspace(t0, t1, samples)
    vals = np.array([lambda_bound(model, t, n) for t in ts])
    i = int(np.argmax(vals))
    best = vals[i]
    if t1 > t0:
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, samples - 1)]
        if hi > lo:
            res = minimize_scalar(lambda s: -lambda_bound(model, s, n), bounds=(lo, hi),
                                  method="bounded", options={"xatol": 1e-10})
            best = max(best, -res.fun)
    return LambdaBound.constant(best)


def midpoint_chain(model, t0, dt, k):
    """k midpoint steps of width dt/k starting at t0 (later steps on the left)."""
    h = dt / k
    mids = t0 + (np.arange(k) + 0.5) * h
    steps = ops.expm_hermitian_generator(model.evaluate_many(mids), h)
    return ops.ordered_product(steps)


def exact_propagator_oracle(model, t0, t1, tol=1e-13, max_halvings=24, max_columns=8):
    """Reference propagator U(t1, t0) by Richardson extrapolation of midpoint chains.

    Chains with 2^j uniform steps have an error expansion in even powers of the
    step, so each Richardson column removes one power of h^2.  Iteration stops
    once two successive diagonal entries agree to ``tol`` in spectral norm.
    ``t1 < t0`` gives the backward propagator.
    """
    if tol < 1e-13:
        raise InvalidInputError("oracle tolerance must be >= 1e-13")
    dt = float(t1) - float(t0)
    if dt == 0:
        return ops.identity(model.dim)
    if model.is_time_independent:
        return ops.expm_hermitian_generator(model.evaluate(t0), dt)
    prev_row, prev_best = None, None
    for j in range(max_halvings + 1):
        row = [midpoint_chain(model, t0, dt, 2 ** j)]
        for m in range(1, min(j, max_columns) + 1):
            row.append(row[m - 1] + (row[m - 1] - prev_row[m - 1]) / (4 ** m - 1))
        best = row[-1]
        if prev_best is not None and ops.spectral_norm(best - prev_best) < tol:
            return best
        prev_row, prev_best = row, best
    raise ConvergenceError(f"oracle did not reach tol={tol} after {max_halvings} halvings")


def rz(phi):
    """R_z(phi) = exp(-i phi Z / 2)."""
    return np.diag([np.exp(-0.5j * phi), np.exp(0.5j * phi)])


def build_spin_half(B=1.0, omega=4.0, theta=np.pi / 6):
    """Driven spin-1/2 in the frame rotating at ``omega`` about z.

    The lab Hamiltonian is H = B (cos(theta) Z + sin(theta) X) / 2 and the frame
    is T(t) = R_z(omega t), giving

        H~(t) = (omega + B cos(theta)) Z/2 + B sin(theta) (cos(omega t) X/2 + sin(omega t) Y/2).

    Returns
    -------
    model : HamiltonianModel
    propagator : callable
        t -> R_z(omega t) exp(-i H t), the exact rotating-frame propagator U~(t, 0).
    """
    B, omega, theta = float(B), float(omega), float(theta)
    s = B * np.sin(theta)
    terms = [((omega + B * np.cos(theta)) / 2, ops.Z)]
    if s != 0 and omega != 0:
        terms += [(Harmonic(s / 2, omega), ops.X), (Harmonic(s / 2, omega, -np.pi / 2), ops.Y)]
    elif s != 0:
        terms.append((s / 2, ops.X))
    model = HamiltonianModel(terms)
    H_lab = B * (np.cos(theta) * ops.Z + np.sin(theta) * ops.X) / 2

    def propagator(t):
        return rz(omega * t) @ ops.expm_hermitian_generator(H_lab, t)

    def propagator_mp(t):
        # exact for the model as stored (double coefficients), at the current mpmath precision
        t = mpmath.mpf(t)
        c0 = mpmath.mpf((omega + B * np.cos(theta)) / 2) - mpmath.mpf(omega) / 2
        a = mpmath.mpf(s / 2) if s != 0 else mpmath.mpf(0)
        H = mpmath.matrix([[c0, a], [a, -c0]])
        half = mpmath.mpf(omega) * t / 2
        R = mpmath.diag([mpmath.exp(-1j * half), mpmath.exp(1j * half)])
        return R * mpmath.expm(H * (-1j * t))

    model.lab_hamiltonian = H_lab
    model.propagator_mp = propagator_mp
    return model, propagator


def xx_chain_parts(N, J=1.0, omega=4.0):
    """Lab-frame pieces of the XX ring: H0, H1, G1, G2 and the magnetization mu.

    Sites are numbered k = 1..N as in the usual ring convention, so the qubit
    frequency on site k is (-1)^k omega; neighbours wrap modulo N.
    """
    if int(N) != N or N < 2 or N % 2 or N > 8:
        raise InvalidInputError("XX chain needs an even N with 2 <= N <= 8")
    N = int(N)
    sign = [(-1) ** (s + 1) for s in range(N)]
    H0 = sum(sign[s] * omega / 2 * ops.pauli_on(N, {s: "Z"}) for s in range(N))
    XX_YY = [ops.pauli_on(N, {s: "X", s + 1: "X"}) + ops.pauli_on(N, {s: "Y", s + 1: "Y"})
             for s in range(N)]
    XY_YX = [ops.pauli_on(N, {s: "X", s + 1: "Y"}) - ops.pauli_on(N, {s: "Y", s + 1: "X"})
             for s in range(N)]
    G1 = sum(XX_YY)
    G2 = sum(sign[s] * XY_YX[s] for s in range(N))
    H1 = J / 2 * G1
    mu = sum(ops.pauli_on(N, {s: "Z"}) for s in range(N))
    return H0, H1, G1, G2, mu


def build_xx_chain(N=4, J=1.0, omega=4.0):
    """XX ring with alternating qubit frequencies, in the interaction picture of H0.

    H~(t) = (J/2) (cos(2 omega t) G1 + sin(2 omega t) G2)

    Returns
    -------
    model : HamiltonianModel
    propagator : callable
        t -> exp(i H0 t) exp(-i (H0 + H1) t).
    mu : ndarray
        Total magnetization sum_k Z_k, conserved by H~(t).
    """
    H0, H1, G1, G2, mu = xx_chain_parts(N, J, omega)
    J, omega = float(J), float(omega)
    if omega == 0:
        model = HamiltonianModel([(J / 2, G1)])
    else:
        model = HamiltonianModel([(Harmonic(J / 2, 2 * omega), G1),
                                  (Harmonic(J / 2, 2 * omega, -np.pi / 2), G2)])
    H = H0 + H1

    def propagator(t):
        return ops.expm_hermitian_generator(H0, -t) @ ops.expm_hermitian_generator(H, t)

    model.lab_parts = {"H0": H0, "H1": H1, "G1": G1, "G2": G2}
    return model, propagator, mu
