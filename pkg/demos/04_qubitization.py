# coding: utf-8

# # Walk operators from a Pauli decomposition
#
# Writing H = sum_j alpha_j U_j with unitary U_j and alpha_j >= 0 gives a walk
# W = (2 PREP|0><0|PREP^dagger - 1) SEL.  On the plane spanned by
# PREP|0>|E> and W PREP|0>|E>, W rotates by arccos(E / |alpha|_1).
#
# Run with `python3 demos/04_qubitization.py`.

# %%

import numpy as np

from tdmpf import clockspace as cs
from tdmpf import qubitization as qb
from tdmpf.hamiltonian import build_spin_half

rng = np.random.default_rng(3)
A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
lcu = qb.pauli_decompose((A + A.conj().T) / 2)
print(f"{lcu.L} Pauli terms, |alpha|_1 = {lcu.alpha_norm1:.4f}")
print("largest terms:", sorted(zip(lcu.alphas.round(3).tolist(), lcu.labels), reverse=True)[:4])

# %%

for entry in qb.invariant_subspace_phases(lcu):
    phases = np.sort(np.angle(entry["found"]))
    print(f"E={entry['energy']:+.4f}  phases={np.round(phases, 6)}"
          f"  arccos(E/|alpha|)={np.arccos(entry['energy'] / lcu.alpha_norm1):.6f}"
          f"  mismatch={entry['mismatch']:.1e}")

# ## The clock-extended Hamiltonian
#
# H' = H~ + i 2^{n_p} Delta is Hermitian, and exp(-i H') projected on the clock
# reproduces the asymmetric clock encoding.

# %%

model, _ = build_spin_half()
reg = cs.ClockRegister(2, 2)
Hp = qb.clock_extended_hamiltonian(model, reg)
print("H' Hermitian:", np.allclose(Hp, Hp.conj().T))
print("matches clock encoding:",
      np.allclose(qb.block_encode_from_extended(model, reg), cs.block_encode_asymmetric(model, reg)))
