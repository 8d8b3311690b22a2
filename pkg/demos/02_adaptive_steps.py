# coding: utf-8

# # Choosing steps from an error budget
#
# The one-step error of an M-term formula is bounded by a power of
# Lambda * dt, where Lambda(t) dominates the scaled derivatives of H.  Giving
# every step the same share of the budget eps fixes the step caps.  The
# adaptive planner then places steps greedily under those caps.
#
# Run with `python3 demos/02_adaptive_steps.py`.

# %%

from math import ceil

import numpy as np

from tdmpf import operators as ops
from tdmpf.hamiltonian import LambdaBound, build_spin_half, build_xx_chain, default_lambda
from tdmpf.mpf import MpfScheme
from tdmpf.stepper import adaptive_plan, simulate_long

# ## Constant Lambda
#
# For the two example systems Lambda is taken constant over [0, 1], so the
# plan is uniform.  The measured error sits far below eps because the bound is
# loose.

# %%

systems = {"spin_half": build_spin_half(), "xx_chain": build_xx_chain()[:2]}
for name, (model, prop) in systems.items():
    scheme = MpfScheme.wellconditioned(3)
    lam = default_lambda(model, 0.0, 1.0, 3)
    for eps in (1e-4, 1e-8):
        plan = adaptive_plan(lam, 0.0, 1.0, eps, scheme)
        err = ops.spectral_norm(simulate_long(model, scheme, plan) - prop(1.0))
        print(f"{name:9s} eps={eps:.0e}  Lambda={lam.value:.3f}  r={plan.r:5d}"
              f"  ceil(bound)={ceil(plan.r_bound):5d}  error={err:.2e}")

# ## A Lambda that jumps
#
# When Lambda doubles halfway through, the planner halves the step there.

# %%

lam = LambdaBound(lambda t: np.where(np.asarray(t) <= 0.1, 4.0, 8.0), 0.0)
plan = adaptive_plan(lam, 0.0, 0.2, 1e-6, MpfScheme.wellconditioned(2))
steps = np.diff(plan.mesh)
print("first steps :", np.round(steps[:3], 6))
print("last steps  :", np.round(steps[-3:], 6))
print("ratio of medians:", np.median(steps[plan.mesh[1:] <= 0.1]) / np.median(steps[plan.mesh[:-1] >= 0.1]))
