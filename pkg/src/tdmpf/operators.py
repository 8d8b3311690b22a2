"""
Dense complex matrix helpers.

Everything here works on plain ``numpy`` arrays of dtype ``complex128``.
Stacks of matrices (shape ``(..., d, d)``) are accepted wherever it is cheap
to do so, since the product formulas evaluate many small exponentials at once.
"""
from functools import reduce

import numpy as np

from .errors import InvalidInputError

HERMITIAN_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}


def as_matrix(A, name="matrix"):
    """Validate and convert to a square complex array (or a stack of them)."""
    A = np.asarray(A, dtype=complex)
    if A.ndim < 2 or A.shape[-1] != A.shape[-2] or A.shape[-1] == 0:
        raise InvalidInputError(f"{name} must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return A


def dagger(A):
    return np.swapaxes(np.conj(A), -1, -2)


def identity(d):
    return np.eye(d, dtype=complex)


def kron(*ops):
    """Tensor product, first factor is the most significant index."""
    return reduce(np.kron, ops)


def commutator(A, B):
    return A @ B - B @ A


def spectral_norm(A):
    """Largest singular value, via the symmetric eigenproblem of A^dagger A.

    Works on a single matrix or a stack; returns a float or an array.
    """
    A = as_matrix(A)
    G = dagger(A) @ A
    G = 0.5 * (G + dagger(G))
    ev = np.linalg.eigvalsh(G)[..., -1]
    out = np.sqrt(np.clip(ev, 0.0, None))
    return float(out) if out.ndim == 0 else out


def hermiticity_defect(H):
    H = as_matrix(H)
    D = H - dagger(H)
    # Frobenius norm bounds the spectral norm from above; only refine when it matters
    fro = np.linalg.norm(D, axis=(-2, -1))
    if np.all(fro < HERMITIAN_TOL):
        return fro if fro.ndim else float(fro)
    return spectral_norm(D)


def is_hermitian(H, tol=HERMITIAN_TOL):
    return bool(np.all(hermiticity_defect(H) <= tol * np.maximum(1.0, _scale(H))))


def unitarity_defect(U):
    U = as_matrix(U)
    d = U.shape[-1]
    return spectral_norm(dagger(U) @ U - np.eye(d))


def is_unitary(U, tol=1e-11):
    return bool(np.all(unitarity_defect(U) <= tol))


def _scale(H):
    # cheap upper bound on the spectral norm, used to make the Hermiticity test relative
    return np.max(np.abs(H), axis=(-2, -1)) * H.shape[-1]


def _check_hermitian(H):
    defect = hermiticity_defect(H)
    scale = np.maximum(1.0, _scale(H))
    if np.any(defect > HERMITIAN_TOL * scale):
        raise InvalidInputError(
            f"generator is not Hermitian (defect {np.max(defect):.3e})")
    return 0.5 * (H + dagger(H))


def expm_hermitian_generator(H, theta=1.0):
    """Return exp(-i theta H) for Hermitian H.

    Parameters
    ----------
    H : array_like, shape (d, d) or (n, d, d)
        Hermitian generator(s).
    theta : float or array_like of shape (n,)
        Time factor(s), broadcast against the leading axis of ``H``.

    Returns
    -------
    ndarray
        Unitary matrix (or stack of unitaries).
    """
    H = _check_hermitian(as_matrix(H, "generator"))
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)):
        raise InvalidInputError("theta must be finite")
    evals, V = np.linalg.eigh(H)
    phase = np.exp(-1j * theta[..., None] * evals)
    return (V * phase[..., None, :]) @ dagger(V)


def expm_antihermitian(A, theta=1.0):
    """exp(theta A) for anti-Hermitian A, through the Hermitian generator iA."""
    return expm_hermitian_generator(1j * as_matrix(A), theta)


def ordered_product(stack):
    """Product of a sequence of matrices with later entries on the left.

    The sequence runs along axis -3, so ``stack[..., 0, :, :]`` acts first and
    any leading axes are treated as a batch.  Pairs are multiplied level by
    level, which keeps the work vectorized for long chains.
    """
    stack = np.asarray(stack)
    if stack.ndim < 3:
        raise InvalidInputError("expected a stack of matrices")
    while stack.shape[-3] > 1:
        n = stack.shape[-3]
        even = n - n % 2
        paired = stack[..., 1:even:2, :, :] @ stack[..., 0:even:2, :, :]
        if n % 2:
            paired = np.concatenate([paired, stack[..., -1:, :, :]], axis=-3)
        stack = paired
    return stack[..., 0, :, :]


def qft(n):
    """Quantum Fourier transform on ``n`` qubits, entries w^{jk}/sqrt(2^n)."""
    if int(n) != n or n < 1:
        raise InvalidInputError("qft needs n >= 1")
    N = 2 ** int(n)
    jk = np.outer(np.arange(N), np.arange(N)) % N
    return np.exp(2j * np.pi * jk / N) / np.sqrt(N)


def pauli_string(label):
    """Dense matrix of a Pauli string such as ``"XZI"``."""
    try:
        return kron(*[PAULI[c] for c in label.upper()])
    except KeyError as exc:
        raise InvalidInputError(f"bad Pauli label {label!r}") from exc


def pauli_on(n_qubits, ops):
    """Pauli product acting on selected sites, e.g. ``pauli_on(4, {0: 'X', 3: 'Y'})``.

    Site indices are taken modulo ``n_qubits`` so ring couplings can be written
    without special cases; two entries landing on the same site are an error.
    """
    label = ["I"] * n_qubits
    for site, p in ops.items():
        if label[site % n_qubits] != "I":
            raise InvalidInputError(f"site {site} given twice (mod {n_qubits})")
        label[site % n_qubits] = p
    return pauli_string("".join(label))
