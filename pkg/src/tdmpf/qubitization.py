"""
Qubitization walk operators for H = sum_j alpha_j U_j and the clock-extended
Hamiltonian H' = H~ + i 2^{n_p} Delta.

Ancilla is the most significant tensor factor: index ``j * d + a``.
"""
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import operators as ops
from .clockspace import clock_extended_generator
from .errors import DegenerateModelError, InvalidInputError

PAULI_DROP_TOL = 1e-14


@dataclass(frozen=True)
class LcuModel:
    """H = sum_j alphas[j] unitaries[j] with nonnegative weights."""

    unitaries: tuple
    alphas: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        if len(self.unitaries) != len(self.alphas) or len(self.alphas) == 0:
            raise InvalidInputError("need one weight per unitary")
        alphas = np.asarray(self.alphas, dtype=float)
        if np.any(alphas < 0) or not np.all(np.isfinite(alphas)):
            raise InvalidInputError("weights must be finite and nonnegative")
        for U in self.unitaries:
            if ops.unitarity_defect(ops.as_matrix(U)) > 1e-11:
                raise InvalidInputError("LCU terms must be unitary")
        object.__setattr__(self, "alphas", alphas)
        if not ops.is_hermitian(self.hamiltonian(), 1e-10):
            raise InvalidInputError("sum_j alpha_j U_j must be Hermitian")

    @property
    def L(self):
        return len(self.alphas)

    @property
    def dim(self):
        return self.unitaries[0].shape[0]

    @property
    def alpha_norm1(self):
        return float(np.sum(self.alphas))

    def hamiltonian(self):
        return sum(a * np.asarray(U, dtype=complex) for a, U in zip(self.alphas, self.unitaries))


def pauli_decompose(H):
    """Pauli-basis LCU of a Hermitian matrix on n qubits.

    Coefficients c_P = Tr(P H) / 2^n are real; negative ones are folded into the
    unitary as -P so every weight is |c_P|.  Terms below 1e-14 are dropped.
    """
    H = ops.as_matrix(H)
    d = H.shape[0]
    n = int(round(np.log2(d)))
    if 2 ** n != d:
        raise InvalidInputError("dimension must be a power of two")
    if not ops.is_hermitian(H):
        raise InvalidInputError("H must be Hermitian")
    unitaries, alphas, labels = [], [], []
    for label in ("".join(p) for p in product("IXYZ", repeat=n)):
        P = ops.pauli_string(label)
        c = float(np.real(np.trace(P @ H))) / d
        if abs(c) > PAULI_DROP_TOL:
            unitaries.append(np.sign(c) * P)
            alphas.append(abs(c))
            labels.append(("-" if c < 0 else "+") + label)
    if not alphas:
        raise DegenerateModelError("H has no Pauli weight")
    return LcuModel(tuple(unitaries), np.array(alphas), tuple(labels))


def prep_matrix(model, anc_dim=None):
    """Unitary whose first column is sqrt(alpha_j / ||alpha||_1), zero-padded.

    Completed deterministically by the Householder reflection taking e_0 to
    that column.
    """
    anc_dim = model.L if anc_dim is None else int(anc_dim)
    if anc_dim < model.L:
        raise InvalidInputError("ancilla dimension must be at least L")
    total = model.alpha_norm1
    if total <= 0:
        raise DegenerateModelError("all weights are zero")
    v = np.zeros(anc_dim)
    v[:model.L] = np.sqrt(model.alphas / total)
    u = v.copy()
    u[0] -= 1.0
    nu = np.linalg.norm(u)
    if nu < 1e-15:
        return ops.identity(anc_dim)
    R = np.eye(anc_dim) - 2.0 * np.outer(u, u) / nu ** 2
    return R.astype(complex)


def select_matrix(model, anc_dim=None):
    """sum_j |j><j| (x) U_j, identity on unused ancilla states."""
    anc_dim = model.L if anc_dim is None else int(anc_dim)
    d = model.dim
    out = np.zeros((anc_dim * d, anc_dim * d), dtype=complex)
    for j in range(anc_dim):
        U = model.unitaries[j] if j < model.L else ops.identity(d)
        out[j * d:(j + 1) * d, j * d:(j + 1) * d] = U
    return out


def walk_operator(model, anc_dim=None, reflection="standard"):
    """Qubitization walk W = R SEL.

    ``reflection="standard"`` uses R = 2 PREP|0><0|PREP^dagger (x) 1 - 1, for which
    the eigenvalues on the subspace through PREP|0>|E> are exp(+-i arccos(E/||alpha||_1)).
    ``reflection="negated"`` uses 1 - 2 PREP|0><0|PREP^dagger (x) 1; that walk is
    -W, with eigenvalues exp(+-i arccos(-E/||alpha||_1)).
    """
    anc_dim = model.L if anc_dim is None else int(anc_dim)
    prep = prep_matrix(model, anc_dim)
    g = prep[:, 0]
    Pi = ops.kron(np.outer(g, g.conj()), ops.identity(model.dim))
    one = ops.identity(anc_dim * model.dim)
    if reflection == "standard":
        R = 2 * Pi - one
    elif reflection == "negated":
        R = one - 2 * Pi
    else:
        raise InvalidInputError(f"unknown reflection {reflection!r}")
    return R @ select_matrix(model, anc_dim)


def invariant_subspace_phases(model, anc_dim=None, reflection="standard"):
    """For each eigenpair (E, |E>) of H, the W-eigenvalues on span{|G>, W|G>}, |G> = PREP|0>|E>.

    Returns a list of dicts with the energy, the expected pair
    exp(+-i arccos(E/||alpha||_1)), the eigenvalues found, and the invariance
    defect ||(1 - P_S) W P_S||.
    """
    anc_dim = model.L if anc_dim is None else int(anc_dim)
    W = walk_operator(model, anc_dim, reflection)
    g = prep_matrix(model, anc_dim)[:, 0]
    energies, vecs = np.linalg.eigh(model.hamiltonian())
    out = []
    for E, v in zip(energies, vecs.T):
        G = np.kron(g, v)
        WG = W @ G
        S = np.stack([G, WG], axis=1)
        U_, s, _ = np.linalg.svd(S, full_matrices=False)
        Q = U_[:, s > 1e-8 * s[0]]
        defect = np.linalg.norm(W @ Q - Q @ (Q.conj().T @ W @ Q), 2)
        found = np.linalg.eigvals(Q.conj().T @ W @ Q)
        x = np.clip(E / model.alpha_norm1, -1.0, 1.0)
        phi = np.arccos(x) if reflection == "standard" else np.arccos(-x)
        expected = np.exp(1j * phi * np.array([1, -1])[:Q.shape[1]]) if Q.shape[1] == 2 \
            else np.array([np.exp(1j * phi)])
        out.append(dict(energy=float(E), expected=expected, found=found,
                        mismatch=_pair_mismatch(expected, found), invariance_defect=float(defect)))
    return out


def _pair_mismatch(expected, found):
    """Distance between two small eigenvalue multisets under the best matching."""
    expected, found = list(expected), list(found)
    if len(expected) != len(found):
        return np.inf
    if len(found) == 1:
        return abs(expected[0] - found[0])
    a = max(abs(expected[0] - found[0]), abs(expected[1] - found[1]))
    b = max(abs(expected[0] - found[1]), abs(expected[1] - found[0]))
    return float(min(a, b))


def clock_extended_hamiltonian(model, reg):
    """H' = H~ + i 2^{n_p} Delta (Hermitian)."""
    return reg.ticks * clock_extended_generator(model, reg)


def block_encode_from_extended(model, reg):
    """(1 (x) <0|) U_-^{2^{n_p}} exp(-i H') (1 (x) |0>), computed densely from H'."""
    Hp = clock_extended_hamiltonian(model, reg)
    d, N = model.dim, reg.dim
    E = ops.expm_hermitian_generator(Hp, 1.0).reshape(d, N, d, N)
    return E[:, reg.ticks % N, :, 0]

