import numpy as np
import pytest
from hypothesis import given, strategies as st

from tdmpf import operators as ops
from tdmpf.errors import (ConvergenceError, InvalidFrameError, InvalidInputError,
                          UnsupportedOrderError)
from tdmpf.hamiltonian import (Coefficient, Harmonic, HamiltonianModel, LambdaBound,
                               build_spin_half, build_xx_chain, default_lambda,
                               exact_propagator_oracle, frame_transform, lambda_bound, rz)

from conftest import random_hermitian

# [DERIVED] U~(0.1, 0) for the spin-half model (B=1, omega=4, theta=pi/6) from an
# independent DOP853 integration of the Schroedinger equation at rtol 1e-13
SPIN_U01 = np.array([[0.970242699435236 - 0.240841493211574j, -0.004964664056349 - 0.024491456695231j],
                     [0.004964664056349 - 0.024491456695231j, 0.970242699435236 + 0.240841493211574j]])
# [DERIVED] same integrator on the XX ring (N=4, J=1, omega=4) at t=0.3:
# trace and the column of basis state |0101>
XX_U03_TRACE = 15.159309231826402
XX_U03_COL5 = np.array([0, 0, 0, 0.203064772213603 - 0.0661549591865j, 0,
                        0.892867036053593 + 0.100162413827774j, 0.203064772213603 - 0.0661549591865j,
                        0, 0, 0.203064772213603 - 0.0661549591865j,
                        0.074869343439063 - 0.068581388448649j, 0,
                        0.203064772213603 - 0.0661549591865j, 0, 0, 0])


def test_spin_half_at_zero():
    model, _ = build_spin_half(1.0, 4.0, np.pi / 6)
    expected = (4 + np.cos(np.pi / 6)) * ops.Z / 2 + np.sin(np.pi / 6) * ops.X / 2
    assert np.allclose(model.evaluate(0.0), expected, atol=1e-15)


@given(st.floats(-5, 5))
def test_spin_half_rotating_frame_formula(t):
    B, w, th = 1.3, 2.5, 0.4
    model, _ = build_spin_half(B, w, th)
    ref = ((w + B * np.cos(th)) * ops.Z / 2
           + B * np.sin(th) * (np.cos(w * t) * ops.X / 2 + np.sin(w * t) * ops.Y / 2))
    assert np.allclose(model.evaluate(t), ref, atol=1e-14)


def test_spin_half_degenerate_cases():
    model, _ = build_spin_half(1.0, 0.0, 0.3)
    assert model.is_time_independent
    assert np.allclose(model.evaluate(1.0), model.lab_hamiltonian)
    model, _ = build_spin_half(2.0, 3.0, 0.0)
    assert model.is_time_independent
    assert np.allclose(model.evaluate(0.7), 5.0 * ops.Z / 2)


def test_time_independent_same_everywhere(rng):
    H = random_hermitian(rng, 3)
    model = HamiltonianModel([(1.0, H)])
    assert np.array_equal(model.evaluate(0.0), model.evaluate(7.0))


def test_spin_half_propagator_against_ode_oracle():
    _, prop = build_spin_half()
    assert ops.spectral_norm(prop(0.1) - SPIN_U01) < 1e-11


def test_spin_half_oracle_matches_analytic():
    model, prop = build_spin_half()
    tol = 1e-13
    assert ops.spectral_norm(exact_propagator_oracle(model, 0.0, 0.5, tol) - prop(0.5)) < 10 * tol
    assert ops.spectral_norm(exact_propagator_oracle(model, 0.0, 0.1, tol) - SPIN_U01) < 1e-11


def test_xx_chain_propagator_against_ode_oracle():
    model, prop, _ = build_xx_chain()
    U = prop(0.3)
    assert abs(np.trace(U) - XX_U03_TRACE) < 1e-10
    assert np.max(np.abs(U[:, 5] - XX_U03_COL5)) < 1e-11
    tol = 1e-13
    assert ops.spectral_norm(exact_propagator_oracle(model, 0.0, 0.3, tol) - U) < 10 * tol


def test_xx_chain_structure():
    model, _, mu = build_xx_chain(4, 1.0, 4.0)
    G1, G2 = model.lab_parts["G1"], model.lab_parts["G2"]
    assert np.allclose(model.evaluate(0.0), 0.5 * G1, atol=1e-15)
    assert ops.spectral_norm(ops.commutator(G1, G2)) > 1.0
    for t in np.random.default_rng(3).uniform(-2, 2, 5):
        assert ops.spectral_norm(ops.commutator(mu, model.evaluate(t))) < 1e-13
    _, _, mu2 = build_xx_chain(2)
    assert np.allclose(mu2, np.kron(ops.Z, ops.I2) + np.kron(ops.I2, ops.Z))


@given(st.floats(-1, 1))
def test_xx_chain_is_interaction_picture(t):
    model, _, _ = build_xx_chain(4, 0.7, 1.5)
    H0, H1 = model.lab_parts["H0"], model.lab_parts["H1"]
    U0 = ops.expm_hermitian_generator(H0, -t)
    assert ops.spectral_norm(U0 @ H1 @ ops.dagger(U0) - model.evaluate(t)) < 1e-12


@pytest.mark.parametrize("N", [3, 0, 10])
def test_xx_chain_rejects(N):
    with pytest.raises(InvalidInputError):
        build_xx_chain(N)


def test_lambda_bound_examples():
    const = HamiltonianModel([(2.0, ops.Z)])
    for n in range(5):
        assert lambda_bound(const, 0.3, n) == pytest.approx(2.0)
    cosx = HamiltonianModel([(Harmonic(1.0, 1.0), ops.X)])
    assert lambda_bound(cosx, 0.0, 1) == pytest.approx(1.0)


def test_lambda_bound_spin_half_below_omega():
    model, _ = build_spin_half()
    for t in np.linspace(0, 2, 9):
        for n in range(7):
            assert lambda_bound(model, t, n) <= 4.0 + 1e-12


def test_lambda_bound_order_limit():
    model = HamiltonianModel([(Coefficient(np.sin, [np.cos]), ops.X)])
    assert lambda_bound(model, 0.1, 1) > 0
    with pytest.raises(UnsupportedOrderError):
        lambda_bound(model, 0.1, 2)


def test_finite_difference_fallback():
    model = HamiltonianModel([(Coefficient(np.sin, [np.cos]), ops.X)])
    d3 = model.derivative(0.4, 3)
    assert np.allclose(d3, -np.cos(0.4) * ops.X, atol=1e-6)


def test_default_lambda_constant():
    model, _ = build_spin_half()
    lam = default_lambda(model, 0.0, 1.0, 2)
    assert isinstance(lam, LambdaBound) and lam.K == 0.0
    assert lam.value <= 4.0 + 1e-12 and lam(0.3) == lam.value


def test_frame_identity_and_pure_rotation():
    base = HamiltonianModel([(Harmonic(1.0, 2.0), ops.X), (0.3, ops.Z)])
    framed = frame_transform(base, lambda t: np.eye(2), lambda t: np.zeros((2, 2)))
    assert np.allclose(framed.evaluate(0.4), base.evaluate(0.4), atol=1e-14)
    w = 1.7
    zero = HamiltonianModel([(0.0, ops.Z)])
    T = lambda t: ops.expm_hermitian_generator(ops.Z, -w * t / 2)  # exp(i w t Z/2)
    Td = lambda t: 0.5j * w * ops.Z @ T(t)
    framed = frame_transform(zero, T, Td)
    for t in (0.0, 0.8, -2.0):
        assert np.allclose(framed.evaluate(t), -w * ops.Z / 2, atol=1e-12)


def test_frame_reproduces_rotating_spin():
    B, w, th = 1.0, 4.0, np.pi / 6
    lab = HamiltonianModel([(1.0, B * (np.cos(th) * ops.Z + np.sin(th) * ops.X) / 2)])
    framed = frame_transform(lab, lambda t: rz(w * t), lambda t: -0.5j * w * ops.Z @ rz(w * t))
    model, _ = build_spin_half(B, w, th)
    for t in np.linspace(-1, 1, 7):
        assert np.max(np.abs(framed.evaluate(t) - model.evaluate(t))) < 1e-10


def test_frame_rejects_bad_frames():
    base = HamiltonianModel([(1.0, ops.Z)])
    with pytest.raises(InvalidFrameError):
        frame_transform(base, lambda t: 2 * np.eye(2), lambda t: np.zeros((2, 2)))
    with pytest.raises(InvalidFrameError):
        frame_transform(base, lambda t: rz(t), lambda t: np.zeros((2, 2)))


def test_oracle_time_independent(rng):
    H = random_hermitian(rng, 3)
    model = HamiltonianModel([(1.0, H)])
    U = exact_propagator_oracle(model, 0.2, 1.7)
    assert ops.spectral_norm(U - ops.expm_hermitian_generator(H, 1.5)) < 1e-13


def test_oracle_guards():
    model, _ = build_spin_half()
    with pytest.raises(InvalidInputError):
        exact_propagator_oracle(model, 0.0, 1.0, tol=1e-14)
    with pytest.raises(ConvergenceError):
        exact_propagator_oracle(model, 0.0, 5.0, tol=1e-13, max_halvings=2)


def test_model_validation():
    with pytest.raises(InvalidInputError):
        HamiltonianModel([])
    with pytest.raises(InvalidInputError):
        HamiltonianModel([(1.0, np.array([[0, 1], [0, 0]]))])
    with pytest.raises(InvalidInputError):
        HamiltonianModel([(1.0, ops.X), (1.0, np.eye(3))])
    with pytest.raises(InvalidInputError):
        HamiltonianModel([(1.0, ops.X)]).evaluate(np.inf)


def test_harmonic_mp_uses_exact_quarter_phase():
    import mpmath
    c = Harmonic(1.0, 1.0, -np.pi / 2)
    with mpmath.workdps(40):
        # cos(t - pi/2) = sin(t) exactly, not just to double rounding
        assert abs(c.mp(mpmath.mpf(1)) - mpmath.sin(1)) < mpmath.mpf(10) ** -38


def test_spin_half_mp_propagator_matches_double():
    import mpmath
    model, prop = build_spin_half()
    with mpmath.workdps(30):
        U = np.array(model.propagator_mp(0.7).tolist(), dtype=complex)
    assert np.allclose(U, prop(0.7), atol=1e-14)
