# coding: utf-8

# # Time as a quantum register
#
# A clock register of n_t = n_p + q qubits stores 2^{n_t} time points.  The
# shift U_+ moves the clock by one tick, and its logarithm Delta turns the
# time-dependent problem into a static generator H~/2^{n_p} + i Delta on
# system x clock.  Here we check the basic properties and then look at how
# close the clock construction gets to the true propagator.
#
# Run with `python3 demos/03_clock_register.py`.

# %%

import numpy as np

from tdmpf import clockspace as cs
from tdmpf import operators as ops
from tdmpf.hamiltonian import build_spin_half

# ## The shift generator
#
# The eigenvalues of Delta are -2 pi i k / 2^{n_t}, so its norm is
# 2 pi (1 - 2^{-n_t}), always below 2 pi.

# %%

for nt in (1, 3, 6):
    reg = cs.ClockRegister(1, nt - 1)
    D = cs.delta(reg)
    print(f"n_t={nt}  |Delta|={ops.spectral_norm(D):.12f}  2pi(1-2^-n_t)={2 * np.pi * (1 - 2.0 ** -nt):.12f}"
          f"  |exp(Delta)-U+|={ops.spectral_norm(ops.expm_antihermitian(D) - cs.incrementer(reg)):.1e}")

# ## Block encodings of U(1, 0)
#
# Evolving under the static generator for 2^{n_p} ticks and projecting the
# clock back onto |0> gives an approximation of the propagator.  Its error
# roughly halves with each extra precision qubit.

# %%

model, prop = build_spin_half()
exact = prop(1.0)
for n_p in (1, 2, 3, 4, 5):
    reg = cs.ClockRegister(n_p, 6 if n_p > 1 else 2)
    err = ops.spectral_norm(cs.block_encode_asymmetric(model, reg) - exact)
    print(f"n_p={n_p} q={reg.q}  error={err:.4e}")

# The symmetric variant raises exp(-2i G) to the power 2^{n_p-1}.  That is the
# same unitary as exp(-iG)^{2^{n_p}}, so both encodings agree to roundoff and
# the symmetric one does not converge faster.

# %%

reg = cs.ClockRegister(3, 4)
gap = ops.spectral_norm(cs.block_encode_symmetric(model, reg) - cs.block_encode_asymmetric(model, reg))
print("symmetric vs asymmetric:", gap)

# ## The commutator and the padding qubits
#
# H is placed on the clock circle by mirroring it with period 2.  That makes
# H~ invariant under a shift by 2^{n_p+1} ticks, and the norm of [Delta, H~]
# stops changing once q >= 1.

# %%

for q, c in cs.commutator_scaling_scan(model, 3, [0, 1, 2, 4, 6]):
    print(f"q={q}  |[Delta, H~]|={c:.10f}")

# ## Clock entanglement
#
# For a static H the clock never entangles with the system.  For the driven
# spin it stays small and does not grow with q.

# %%

psi = np.array([1.0, 0.0])
for q in (2, 4, 6):
    print(f"q={q}  entropy={cs.clock_entanglement(model, cs.ClockRegister(3, q), psi):.6f} bits")
