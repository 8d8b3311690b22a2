"""
Discrete clock register: the time-dependent problem as a time-independent one
on system (x) clock.

Ordering convention: the system is the most significant factor, so basis index
``a * 2**n_t + t`` is system state ``a`` with clock value ``t``.

The Hamiltonian is placed on the clock circle by the mirror-periodic rule
(period 2 in units of the physical interval), which gives the controlled
Hamiltonian a translation symmetry of 2^{n_p+1} clock ticks whenever q >= 1.
The block encodings use that symmetry: the clock Hilbert space splits into
2^{q-1} Bloch sectors of dimension 2^{n_p+1}, each exponentiated on its own.
A dense path over the whole space is kept for q = 0 and for cross-checks.
"""
from dataclasses import dataclass

import numpy as np

from . import operators as ops
from .errors import InvalidInputError, InvalidStateError, TooLargeError

NT_MAX = 12
DIM_MAX = 4096


@dataclass(frozen=True)
class ClockRegister:
    """n_p precision qubits and q padding qubits, 2^{n_p+q} clock ticks in total."""

    n_p: int
    q: int = 0

    def __post_init__(self):
        if int(self.n_p) != self.n_p or self.n_p < 1:
            raise InvalidInputError("n_p must be an integer >= 1")
        if int(self.q) != self.q or self.q < 0:
            raise InvalidInputError("q must be an integer >= 0")
        if self.n_p + self.q > NT_MAX:
            raise TooLargeError(f"n_t = {self.n_p + self.q} exceeds {NT_MAX}")

    @property
    def n_t(self):
        return self.n_p + self.q

    @property
    def dim(self):
        return 2 ** self.n_t

    @property
    def ticks(self):
        """Clock ticks per unit of physical time, 2^{n_p}."""
        return 2 ** self.n_p


def mirror(s):
    """Fold s onto [0, 1] with H(1 - x) = H(1 + x) and period 2."""
    s = np.mod(np.asarray(s, dtype=float), 2.0)
    return np.where(s > 1.0, 2.0 - s, s)


def clock_times(reg):
    return mirror(np.arange(reg.dim) / reg.ticks)


def incrementer(reg):
    """U_+ |t> = |t + 1 mod 2^{n_t}>."""
    return np.roll(np.eye(reg.dim, dtype=complex), 1, axis=0)


def delta_eigenvalues(reg):
    return -2j * np.pi * np.arange(reg.dim) / reg.dim


def delta(reg):
    """Generator of the clock shift, exp(Delta) = U_+.

    Delta = F diag(-2 pi i k / 2^{n_t}) F^dagger with F = ``qft(n_t)``; entrywise
    Delta[t, t'] = sum_k (-2 pi i k / 4^{n_t}) exp(2 pi i k (t - t') / 2^{n_t}).
    """
    F = ops.qft(reg.n_t)
    D = (F * delta_eigenvalues(reg)) @ ops.dagger(F)
    return 0.5 * (D - ops.dagger(D))


def _check_dim(model, reg):
    if model.dim * reg.dim > DIM_MAX:
        raise TooLargeError(f"system x clock dimension {model.dim * reg.dim} exceeds {DIM_MAX}")


def _blocks(model, times):
    return model.evaluate_many(times)


def _block_diagonal(blocks):
    """sum_t blocks[t] (x) |t><t| in system-major ordering."""
    n, d, _ = blocks.shape
    out = np.zeros((d, n, d, n), dtype=complex)
    idx = np.arange(n)
    out[:, idx, :, idx] = blocks
    return out.reshape(d * n, d * n)


def controlled_hamiltonian(model, reg):
    """H~ = sum_t H(mirror(t / 2^{n_p})) (x) |t><t|."""
    _check_dim(model, reg)
    return _block_diagonal(_blocks(model, clock_times(reg)))


def clock_extended_generator(model, reg):
    """H~ / 2^{n_p} + i Delta, Hermitian, acting on system (x) clock."""
    _check_dim(model, reg)
    G = controlled_hamiltonian(model, reg) / reg.ticks + 1j * ops.kron(ops.identity(model.dim),
                                                                        delta(reg))
    return 0.5 * (G + ops.dagger(G))


def _sector_parts(model, reg):
    """Per-sector pieces when q >= 1.

    Sector kappa (0 <= kappa < 2^{q-1}) is spanned by
    |kappa, r> = 2^{-(q-1)/2} sum_m exp(2 pi i kappa m / 2^{q-1}) |P m + r>,  P = 2^{n_p+1}.
    H~ is block diagonal over r there, and Delta becomes V diag(lambda) V^dagger with
    V[r, j] = exp(2 pi i r (kappa + 2^{q-1} j) / 2^{n_t}) / sqrt(P).
    """
    P = 2 * reg.ticks
    nsec = reg.dim // P
    Hs = _blocks(model, mirror(np.arange(P) / reg.ticks))
    r = np.arange(P)
    j = np.arange(P)
    for kappa in range(nsec):
        kk = kappa + nsec * j
        V = np.exp(2j * np.pi * np.outer(r, kk) / reg.dim) / np.sqrt(P)
        D = (V * (-2j * np.pi * kk / reg.dim)) @ ops.dagger(V)
        yield kappa, Hs, 0.5 * (D - ops.dagger(D))


def _sector_generator(Hs, D, d, scale_h):
    G = scale_h * _block_diagonal(Hs) + 1j * ops.kron(ops.identity(d), D)
    return 0.5 * (G + ops.dagger(G))


def _use_sectors(reg, method):
    if method not in ("auto", "dense", "sectors"):
        raise InvalidInputError(f"unknown method {method!r}")
    if method == "sectors" and reg.q < 1:
        raise InvalidInputError("sector decomposition needs q >= 1")
    return method == "sectors" or (method == "auto" and reg.q >= 1)


def evolve_from_clock_zero(model, reg, theta, method="auto"):
    """Columns of exp(-i theta (H~/2^{n_p} + i Delta)) on inputs |b> (x) |0>.

    Returns an array A of shape (d, 2^{n_t}, d) with
    A[a, t, b] = <a, t| exp(-i theta G) |b, 0>.
    """
    _check_dim(model, reg)
    d, N = model.dim, reg.dim
    if not _use_sectors(reg, method):
        E = ops.expm_hermitian_generator(clock_extended_generator(model, reg), theta)
        return E.reshape(d, N, d, N)[:, :, :, 0]
    P = 2 * reg.ticks
    nsec = N // P
    C = np.empty((nsec, d, P, d), dtype=complex)
    for kappa, Hs, D in _sector_parts(model, reg):
        G = _sector_generator(Hs, D, d, 1.0 / reg.ticks)
        E = ops.expm_hermitian_generator(G, theta).reshape(d, P, d, P)
        C[kappa] = E[:, :, :, 0]
    # back to clock positions t = P m + r: inverse DFT over kappa
    A = np.fft.ifft(C, axis=0)  # (m, d, r, d), includes the 1/nsec factor
    return np.transpose(A, (1, 0, 2, 3)).reshape(d, N, d)


def _project_back(A, reg):
    """Apply U_-^{2^{n_p}} and take the clock-|0> block."""
    return A[:, reg.ticks % reg.dim, :]


def block_encode_asymmetric(model, reg, method="auto"):
    """(1 (x) <0|) U_-^{2^{n_p}} exp(-i (H~/2^{n_p} + i Delta))^{2^{n_p}} (1 (x) |0>).

    The 2^{n_p}-th power of the exponential is taken in the spectral basis,
    i.e. as exp(-i 2^{n_p} G).
    """
    A = evolve_from_clock_zero(model, reg, float(reg.ticks), method)
    return _project_back(A, reg)


def block_encode_symmetric(model, reg, method="auto"):
    """(1 (x) <0|) U_-^{2^{n_p}} exp(-i (2 H~/2^{n_p} + 2 i Delta))^{2^{n_p - 1}} (1 (x) |0>)."""
    A = evolve_from_clock_zero(model, reg, 2.0 * 2 ** (reg.n_p - 1), method)
    return _project_back(A, reg)


def clock_entanglement(model, reg, psi0, method="auto"):
    """Von Neumann entropy (bits) of the clock after the unprojected clock-space evolution.

    The final U_- shift acts on the clock alone and leaves the entropy unchanged.
    """
    psi0 = np.asarray(psi0, dtype=complex).ravel()
    if psi0.shape != (model.dim,):
        raise InvalidStateError(f"state must have length {model.dim}")
    if abs(np.linalg.norm(psi0) - 1) > 1e-10:
        raise InvalidStateError("state must be normalized")
    A = evolve_from_clock_zero(model, reg, float(reg.ticks), method)
    psi = A @ psi0  # (d, N): system index first
    # the nonzero spectrum of the clock marginal equals that of the d x d system marginal
    rho_s = psi @ psi.conj().T
    p = np.clip(np.linalg.eigvalsh(0.5 * (rho_s + rho_s.conj().T)), 1e-15, None)
    p = p[p > 1e-15]
    return float(max(0.0, -np.sum(p * np.log2(p))))


def commutator_norm(model, reg, method="auto"):
    """Spectral norm of [Delta, H~].

    Both operators commute with the 2^{n_p+1}-tick translation when q >= 1, so
    the norm is the largest sector norm.
    """
    _check_dim(model, reg)
    d = model.dim
    if not _use_sectors(reg, method):
        Ht = controlled_hamiltonian(model, reg)
        Dfull = ops.kron(ops.identity(d), delta(reg))
        return ops.spectral_norm(ops.commutator(Dfull, Ht))
    best = 0.0
    for _, Hs, D in _sector_parts(model, reg):
        Ht = _block_diagonal(Hs)
        Dfull = ops.kron(ops.identity(d), D)
        best = max(best, ops.spectral_norm(ops.commutator(Dfull, Ht)))
    return best


def commutator_scaling_scan(model, n_p, q_list, method="auto"):
    """[(q, ||[Delta, H~]||)] for a fixed precision register."""
    q_list = list(q_list)
    if any(b <= a for a, b in zip(q_list, q_list[1:])):
        raise InvalidInputError("q_list must be increasing")
    return [(q, commutator_norm(model, ClockRegister(n_p, q), method)) for q in q_list]


def commutator_entrywise(model, reg):
    """[Delta, H~] from its matrix elements: Delta[t, t'] (H(t') - H(t)) on the (t, t') block."""
    _check_dim(model, reg)
    d, N = model.dim, reg.dim
    D = delta(reg)
    Hs = _blocks(model, clock_times(reg))
    diff = Hs[None, :, :, :] - Hs[:, None, :, :]  # [t, t'] -> H(t') - H(t)
    blocks = D[:, :, None, None] * diff
    return np.transpose(blocks, (2, 0, 3, 1)).reshape(d * N, d * N)


def printed_commutator_formula(model, reg):
    """sum_{k,t,t'} (-2 pi i k e^{-2 pi i k (t-t')/2^{n_t}} / 4^{n_t}) (H(t) - H(t')) (x) |t><t'|.

    With Delta as defined here this expression equals [log U_-, H~], where
    log U_- = Delta^T = -conj(Delta); kept for the cross-check.
    """
    _check_dim(model, reg)
    d, N = model.dim, reg.dim
    L = np.conj(delta(reg))
    Hs = _blocks(model, clock_times(reg))
    diff = Hs[:, None, :, :] - Hs[None, :, :, :]  # [t, t'] -> H(t) - H(t')
    blocks = L[:, :, None, None] * diff
    return np.transpose(blocks, (2, 0, 3, 1)).reshape(d * N, d * N)
