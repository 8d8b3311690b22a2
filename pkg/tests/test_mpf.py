from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from tdmpf import operators as ops
from tdmpf.errors import DegenerateSchemeError, InvalidInputError, SingularSystemError
from tdmpf.hamiltonian import Harmonic, HamiltonianModel, build_spin_half, exact_propagator_oracle
from tdmpf.mpf import (MpfScheme, midpoint, mpf_apply, mpf_apply_extended, mpf_apply_many,
                       product_chain, solve_vandermonde, trotter, vandermonde_fractions,
                       vandermonde_residuals, wellconditioned_k)

from conftest import random_hermitian

# [DERIVED] ceilings of the step-count formula evaluated with 60-digit mpmath
K_TABLE = {2: (10, 4), 3: (21, 8, 5), 4: (37, 13, 8, 6), 5: (58, 20, 12, 9, 7),
           6: (83, 28, 17, 13, 10, 9), 7: (113, 38, 23, 17, 14, 11, 10),
           8: (147, 50, 30, 22, 17, 15, 13, 11)}
# [DERIVED] midpoint error against a DOP853 integration: e(0.1) / e(0.05)
MIDPOINT_RATIO = 7.981146127086981


def random_model(seed, d=2, terms=2):
    rng = np.random.default_rng(seed)
    parts = [(1.0, random_hermitian(rng, d))]
    for _ in range(terms):
        amp, freq, ph = rng.uniform(0.2, 1.0), rng.uniform(0.5, 3.0), rng.uniform(0, np.pi)
        parts.append((Harmonic(amp, freq, ph), random_hermitian(rng, d)))
    return HamiltonianModel(parts)


def test_wellconditioned_k_table():
    assert wellconditioned_k(1) == (1,)
    for M, k in K_TABLE.items():
        assert wellconditioned_k(M) == k
    k3 = wellconditioned_k(3)
    assert all(3 < x < 27 for x in k3)


@pytest.mark.parametrize("M", range(2, 13))
def test_wellconditioned_k_below_3M2(M):
    k = wellconditioned_k(M)
    assert len(set(k)) == M and max(k) < 3 * M * M
    assert list(k) == sorted(k, reverse=True)


@pytest.mark.parametrize("M", [0, 13, 2.5])
def test_wellconditioned_k_rejects(M):
    with pytest.raises(InvalidInputError):
        wellconditioned_k(M)


def test_vandermonde_examples():
    assert vandermonde_fractions([1]) == [Fraction(1)]
    assert vandermonde_fractions([2, 1]) == [Fraction(4, 3), Fraction(-1, 3)]
    a = vandermonde_fractions([3, 2, 1])
    assert a == [Fraction(81, 40), Fraction(-16, 15), Fraction(1, 24)]
    assert sum(a) == 1
    assert np.allclose(solve_vandermonde([2, 1]), [4 / 3, -1 / 3], atol=1e-15)


def test_vandermonde_singular():
    with pytest.raises(SingularSystemError):
        vandermonde_fractions([3, 3, 1])


@given(st.lists(st.integers(1, 60), min_size=1, max_size=7, unique=True))
def test_vandermonde_exact_moments(k):
    a = vandermonde_fractions(k)
    assert sum(a) == 1
    for p in range(1, len(k)):
        assert sum(aj * Fraction(1, kj ** (2 * p)) for aj, kj in zip(a, k)) == 0
    assert np.all(vandermonde_residuals(k, [float(x) for x in a]) < 1e-12)


def test_scheme_validation():
    s = MpfScheme.wellconditioned(2)
    assert s.M == 2 and s.k == (10, 4) and s.kmax == 10
    assert s.a_norm1 == pytest.approx(1.380952380952381)
    with pytest.raises(InvalidInputError):
        MpfScheme.from_k((4, 10))
    with pytest.raises(InvalidInputError):
        MpfScheme.from_k((13, 1))
    assert MpfScheme.from_k((13, 1), check_conditioning=False).M == 2
    assert MpfScheme.from_k((3, 2, 1)).a_norm1 == pytest.approx(81 / 40 + 16 / 15 + 1 / 24)


def test_midpoint_basics(rng):
    model = random_model(1)
    assert np.allclose(midpoint(model, 0.3, 0.0), np.eye(2))
    H = random_hermitian(rng, 3)
    static = HamiltonianModel([(1.0, H)])
    assert ops.spectral_norm(midpoint(static, 0.0, 2.3) - ops.expm_hermitian_generator(H, 2.3)) < 1e-13
    assert ops.unitarity_defect(midpoint(model, 0.1, 0.4)) < 1e-11


def test_midpoint_third_order_local_error():
    model, prop = build_spin_half()
    e1 = ops.spectral_norm(midpoint(model, 0.0, 0.1) - prop(0.1))
    e2 = ops.spectral_norm(midpoint(model, 0.0, 0.05) - prop(0.05))
    assert e1 / e2 == pytest.approx(8.0, rel=0.2)
    assert e1 / e2 == pytest.approx(MIDPOINT_RATIO, rel=1e-6)


@given(st.integers(0, 10 ** 6), st.floats(-1, 1), st.floats(0.01, 0.5), st.integers(1, 6))
def test_chain_time_reversal(seed, t0, dt, k):
    model = random_model(seed)
    fwd = product_chain(model, t0, dt, k)
    back = product_chain(model, t0 + dt, -dt, k)
    assert ops.spectral_norm(ops.dagger(fwd) - back) < 1e-12


def test_chain_k1_is_midpoint():
    model = random_model(5)
    assert np.allclose(product_chain(model, 0.2, 0.3, 1), midpoint(model, 0.2, 0.3))


@given(st.integers(0, 10 ** 6), st.integers(1, 3), st.floats(-1, 1), st.floats(0.01, 0.3))
def test_mpf_symmetry(seed, M, t0, dt):
    model = random_model(seed)
    s = MpfScheme.wellconditioned(M)
    fwd = mpf_apply(model, s, t0, dt)
    back = mpf_apply(model, s, t0 + dt, -dt)
    assert ops.spectral_norm(ops.dagger(fwd) - back) < 1e-10


def test_mpf_identity_and_static(rng):
    model = random_model(2)
    for M in (1, 2, 3):
        assert np.allclose(mpf_apply(model, MpfScheme.wellconditioned(M), 0.4, 0.0), np.eye(2))
    # mutually commuting terms, time independent: exact even at dt = 1
    D1, D2 = np.diag(rng.normal(size=4)), np.diag(rng.normal(size=4))
    static = HamiltonianModel([(0.7, D1), (1.3, D2)])
    exact = ops.expm_hermitian_generator(0.7 * D1 + 1.3 * D2, 1.0)
    for M in (1, 2, 3, 4):
        assert ops.spectral_norm(mpf_apply(static, MpfScheme.wellconditioned(M), 0.0, 1.0) - exact) < 1e-12


def _expm_2x2_mp(H, h):
    """exp(-i h H) for a 2x2 Hermitian mpmath matrix: exp(-i h c) (cos(h r) - i sin(h r) n.sigma)."""
    c = (H[0, 0] + H[1, 1]) / 2
    z, x, y = (H[0, 0] - H[1, 1]) / 2, mpmath.re(H[1, 0]), mpmath.im(H[1, 0])
    r = mpmath.sqrt(x * x + y * y + z * z)
    cs = mpmath.cos(h * r)
    sn = mpmath.sin(h * r) / r if r else h
    U = mpmath.matrix([[cs - 1j * sn * z, -1j * sn * (x - 1j * y)],
                       [-1j * sn * (x + 1j * y), cs + 1j * sn * z]])
    return U * mpmath.expj(-h * c)


def richardson_mp(model, t0, dt, levels=7, cols=6):
    """Independent reference: Richardson table over 2^j-step midpoint chains, all in mpmath."""
    prev = None
    for j in range(levels):
        n = 2 ** j
        h = dt / n
        U = mpmath.eye(2)
        for m in range(n):
            U = _expm_2x2_mp(model.evaluate_mp(t0 + (m + mpmath.mpf(0.5)) * h), h) * U
        row = [U]
        for c in range(1, min(j, cols) + 1):
            row.append(row[c - 1] + (row[c - 1] - prev[c - 1]) / (4 ** c - 1))
        prev = row
    return prev[-1]


@pytest.mark.parametrize("M", [1, 2, 3])
def test_mpf_order_slope(M):
    """Fitted log-log slope of the error over dt in [1e-3, 1e-1] / Lambda is at least 2M+1-0.2.

    For M >= 2 these errors lie far below double-precision roundoff, so both
    the formula and the reference are evaluated with 40 digits.
    """
    model, _ = build_spin_half()
    lam = 4.0
    dts = np.geomspace(1e-3, 1e-1, 8) / lam
    s = MpfScheme.wellconditioned(M)
    errs = []
    with mpmath.workdps(40):
        for dt in dts:
            D = mpf_apply_extended(model, s, 0.0, dt, dps=40) - richardson_mp(model, 0, mpmath.mpf(dt))
            errs.append(float(max(mpmath.svd_c(D, compute_uv=False))))
    slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    assert slope >= 2 * M + 1 - 0.2
    assert min(errs) > 1e-36


def test_mpf_against_oracle_at_offset_start():
    model, _ = build_spin_half()
    s = MpfScheme.wellconditioned(2)
    U = exact_propagator_oracle(model, 0.7, 0.72)
    assert ops.spectral_norm(mpf_apply(model, s, 0.7, 0.02) - U) < 1e-12


def test_mpf_apply_many_matches_loop():
    model = random_model(9, d=3)
    s = MpfScheme.wellconditioned(3)
    t0s, dts = np.array([0.0, 0.2, -0.4]), np.array([0.1, 0.05, 0.3])
    many = mpf_apply_many(model, s, t0s, dts, chunk=2)
    for V, t0, dt in zip(many, t0s, dts):
        assert np.allclose(V, mpf_apply(model, s, t0, dt), atol=1e-13)


def test_mpf_extended_agrees_with_double():
    model, _ = build_spin_half()
    s = MpfScheme.wellconditioned(2)
    V = np.array(mpf_apply_extended(model, s, 0.1, 0.2, dps=30).tolist(), dtype=complex)
    assert np.allclose(V, mpf_apply(model, s, 0.1, 0.2), atol=1e-13)
    with pytest.raises(InvalidInputError):
        mpf_apply_extended(model, s, 0.0, 0.1, dps=8)


def test_trotter_is_uniform_midpoint_chain():
    model = random_model(4)
    assert np.allclose(trotter(model, 0.1, 0.9, 7), product_chain(model, 0.1, 0.9, 7))


def test_m1_scheme_is_midpoint():
    model = random_model(6)
    s = MpfScheme.wellconditioned(1)
    assert np.allclose(mpf_apply(model, s, 0.0, 0.3), midpoint(model, 0.0, 0.3))


def test_degenerate_scheme_error_is_input_error():
    assert issubclass(DegenerateSchemeError, InvalidInputError)


def test_richardson_mp_reference_matches_analytic():
    model, prop = build_spin_half()
    with mpmath.workdps(40):
        U = richardson_mp(model, 0, mpmath.mpf(0.02))
    assert np.allclose(np.array(U.tolist(), dtype=complex), prop(0.02), atol=1e-15)
