# coding: utf-8

# # Multiproduct formulas for a driven spin
#
# A multiproduct formula (MPF) adds up several midpoint-rule chains with
# different step counts k_j.  The weights a_j cancel the even error terms of
# the midpoint rule, so one MPF step over dt has error O(dt^{2M+1}).
#
# Run with `python3 demos/01_multiproduct_formulas.py`.

# %%

import numpy as np

from tdmpf import operators as ops
from tdmpf.hamiltonian import build_spin_half
from tdmpf.mpf import MpfScheme, mpf_apply, trotter, vandermonde_fractions

# ## Coefficients
#
# The step counts come from a closed formula that keeps sum |a_j| small.  The
# weights are exact rationals.

# %%

for M in range(1, 6):
    scheme = MpfScheme.wellconditioned(M)
    print(f"M={M}  k={scheme.k}  |a|_1={scheme.a_norm1:.4f}")

print("k=(2,1) ->", [str(a) for a in vandermonde_fractions((2, 1))])

# ## Order of a single step
#
# The spin-half model rotates at omega=4 around z while a field of strength B
# is tilted by theta=pi/6.  Its exact propagator is known in closed form.  The
# running power log(e_t / e_ref) / log(t / t_ref) should settle near 2M+1.
# Errors under 1e-13 are skipped: at M=3 they reach double-precision roundoff
# for small t (the conservation and unitarity scans switch to mpmath there).

# %%

model, prop = build_spin_half(B=1.0, omega=4.0, theta=np.pi / 6)
ts = np.geomspace(0.02, 0.6, 8)
for M in (1, 2, 3):
    scheme = MpfScheme.wellconditioned(M)
    errs = np.array([ops.spectral_norm(mpf_apply(model, scheme, 0.0, t) - prop(t)) for t in ts])
    keep = errs[:-1] > 1e-13
    powers = np.log(errs[:-1][keep] / errs[-1]) / np.log(ts[:-1][keep] / ts[-1])
    print(f"M={M}  running powers " + " ".join(f"{p:5.2f}" for p in powers))

# ## Against Trotter at equal depth
#
# Give Trotter r_mp * max(k) midpoint steps, the length of the longest MPF chain.
# The M=1 formula *is* the midpoint rule, so the first line matches exactly.

# %%

t, r = 5.0, 10
exact = prop(t)
for M in (1, 2, 3, 4):
    scheme = MpfScheme.wellconditioned(M)
    h = t / r
    V = np.eye(2, dtype=complex)
    for j in range(r):
        V = mpf_apply(model, scheme, j * h, h) @ V
    T = trotter(model, 0.0, t, r * scheme.kmax)
    print(f"M={M}  MPF {ops.spectral_norm(V - exact):.3e}   Trotter({r * scheme.kmax}) "
          f"{ops.spectral_norm(T - exact):.3e}")
