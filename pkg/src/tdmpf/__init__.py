"""Time-dependent multiproduct formulas: midpoint-based MPFs, their error bounds,
adaptive long-time stepping, the discrete clock construction and qubitization."""
from .errors import *  # noqa: F401,F403
from .hamiltonian import (Constant, Coefficient, Harmonic, HamiltonianModel, LambdaBound,
                          build_spin_half, build_xx_chain, exact_propagator_oracle)
from .mpf import MpfScheme, midpoint, mpf_apply, trotter, wellconditioned_k
from .stepper import StepPlan, adaptive_plan, simulate_long, uniform_plan
from .clockspace import ClockRegister, block_encode_asymmetric, block_encode_symmetric
from .qubitization import LcuModel, pauli_decompose, walk_operator
from .bounds import theorem_bound, step_count_bound

__version__ = "0.1.0"
