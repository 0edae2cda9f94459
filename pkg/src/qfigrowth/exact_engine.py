"""Dense brute-force engine for small spin-1/2 systems.

This module is the validation oracle for the closed-form production
code: it builds state vectors and density matrices explicitly, evolves
them under a Pauli-string Hamiltonian, and evaluates quantum Fisher
information (QFI) both ways:

    pure states      F_Q = 4 (<K^2> - <K>^2)
    mixed states     F_Q = 2 sum_{n,m} (p_n - p_m)^2 / (p_n + p_m) |<n|K|m>|^2

with the spectral sum restricted to p_n + p_m > 0.  It also evaluates
the skew-information commutator sum

    S = 2 sum_{i,j} tr([K_i, sqrt(sigma)]^dag [K_j, sqrt(sigma)])

whose ratio F_Q / S lies in [1, 2] for every state (equality 1 on pure
states), the empirical content of the commutator reformulation of QFI.

Basis convention: site 0 is the most significant qubit; bit value 0 is
spin up (+1/2 eigenvalue of S^z).  Commuting all-z Hamiltonians evolve
by exact diagonal phases; anything else goes through a dense Hermitian
eigendecomposition.  Sizes are capped (default 14 spins for vectors,
8 for density matrices): the engine validates, it does not scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "STATE_CAP",
    "DENSITY_CAP",
    "PureState",
    "DensityMatrix",
    "CollectiveOperator",
    "coherent_spin_state",
    "ghz_state",
    "evolve",
    "heisenberg_op",
    "site_operator",
    "collective_matrix",
    "qfi_pure",
    "qfi_spectral",
    "skew_information_sum",
    "pure_to_density",
    "state_to_json_dict",
    "state_from_json_dict",
]

STATE_CAP = 14
DENSITY_CAP = 8

_NORM_TOL = 1e-12
_HERM_TOL = 1e-10
_EIG_FLOOR = 1e-12

SPIN_HALF = {
    "x": np.array([[0.0, 0.5], [0.5, 0.0]], dtype=complex),
    "y": np.array([[0.0, -0.5j], [0.5j, 0.0]], dtype=complex),
    "z": np.array([[0.5, 0.0], [0.0, -0.5]], dtype=complex),
}


def _check_cap(n, cap, what):
    if n > cap:
        raise ValueError(f"{what} limited to {cap} spins, got {n}")


@dataclass(frozen=True)
class PureState:
    """Unit-norm amplitude vector over the 2**n_spins computational basis."""

    amplitudes: np.ndarray = field(compare=False, repr=False)
    n_spins: int

    def __post_init__(self):
        if self.amplitudes.shape != (2**self.n_spins,):
            raise ValueError("amplitude vector length must be 2**n_spins")
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state norm {norm} violates unit normalization")


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix."""

    matrix: np.ndarray = field(compare=False, repr=False)
    n_spins: int

    def __post_init__(self):
        _check_cap(self.n_spins, DENSITY_CAP, "density matrices")
        dim = 2**self.n_spins
        if self.matrix.shape != (dim, dim):
            raise ValueError("density matrix shape must be 2**n x 2**n")
        if np.abs(self.matrix - self.matrix.conj().T).max() > _HERM_TOL:
            raise ValueError("density matrix is not Hermitian within tolerance")
        if abs(np.trace(self.matrix).real - 1.0) > _HERM_TOL:
            raise ValueError("density matrix trace must be 1")
        if np.linalg.eigvalsh(self.matrix).min() < -_HERM_TOL:
            raise ValueError("density matrix has a negative eigenvalue beyond tolerance")


@dataclass(frozen=True)
class CollectiveOperator:
    """Sum of single-site spin-1/2 operators along unit directions.

    ``directions`` is (n_spins, 3); a single shared direction may be
    given as one 3-vector.  Each site operator has spectrum {-1/2, +1/2},
    so the per-site spectrum width is 1.
    """

    directions: np.ndarray = field(compare=False, repr=False)
    n_spins: int

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=float)
        if d.shape == (3,):
            d = np.tile(d, (self.n_spins, 1))
        if d.shape != (self.n_spins, 3):
            raise ValueError("directions must be one 3-vector or one per site")
        norms = np.linalg.norm(d, axis=1)
        if np.abs(norms - 1.0).max() > _NORM_TOL:
            raise ValueError("every direction must have unit norm")
        object.__setattr__(self, "directions", d)

    @property
    def kappa(self):
        """Maximal per-site spectrum width."""
        return 1.0


def coherent_spin_state(n, direction, cap=STATE_CAP):
    """Product state of n spins aligned with a unit direction."""
    _check_cap(n, cap, "pure states")
    nx, ny, nz = (float(c) for c in direction)
    if abs(nx * nx + ny * ny + nz * nz - 1.0) > 1e-10:
        raise ValueError("direction must be a unit vector")
    if nz <= -1.0 + 1e-15:
        spinor = np.array([0.0, 1.0], dtype=complex)
    else:
        a = np.sqrt((1.0 + nz) / 2.0)
        spinor = np.array([a, (nx + 1j * ny) / (2.0 * a)], dtype=complex)
    amp = np.array([1.0], dtype=complex)
    for _ in range(n):
        amp = np.kron(amp, spinor)
    amp /= np.linalg.norm(amp)
    return PureState(amplitudes=amp, n_spins=n)


def ghz_state(n, cap=STATE_CAP):
    """(|0...0> + |1...1>)/sqrt(2)."""
    _check_cap(n, cap, "pure states")
    amp = np.zeros(2**n, dtype=complex)
    amp[0] = amp[-1] = 1.0 / np.sqrt(2.0)
    return PureState(amplitudes=amp, n_spins=n)


def _spin_signs(n):
    """(2**n, n) array of +-1: S^z eigenvalue sign per site per basis state."""
    idx = np.arange(2**n)
    bits = (idx[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1
    return 1 - 2 * bits


def diagonal_energies(H):
    """Eigenvalues per computational basis state of an all-z Hamiltonian."""
    if not H.all_z():
        raise ValueError("diagonal energies are only defined for all-z Hamiltonians")
    n = H.lattice.n_sites
    s = _spin_signs(n).astype(float)
    E = np.zeros(2**n)
    for t in H.terms:
        contrib = np.full(2**n, t.coeff / 2.0 ** len(t.support))
        for site in t.support:
            contrib = contrib * s[:, site]
        E += contrib
    return E


def dense_operator(H, cap=STATE_CAP):
    """Assemble the Hamiltonian as a dense matrix."""
    n = H.lattice.n_sites
    _check_cap(n, cap, "dense operators")
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    eye = np.eye(2, dtype=complex)
    for t in H.terms:
        axis_of = dict(zip(t.support, t.axes))
        m = np.array([[t.coeff]], dtype=complex)
        for site in range(n):
            m = np.kron(m, SPIN_HALF[axis_of[site]] if site in axis_of else eye)
        out += m
    return out


def evolve(state, H, t, cap=STATE_CAP):
    """exp(-i H t) applied to a pure state."""
    n = state.n_spins
    _check_cap(n, cap, "pure states")
    if H.lattice.n_sites != n:
        raise ValueError("state and Hamiltonian sizes disagree")
    if H.all_z():
        phases = np.exp(-1j * diagonal_energies(H) * t)
        amp = phases * state.amplitudes
    else:
        M = dense_operator(H, cap=cap)
        if np.abs(M - M.conj().T).max() > _HERM_TOL:
            raise ValueError("assembled Hamiltonian is not Hermitian")
        w, V = np.linalg.eigh(M)
        amp = V @ (np.exp(-1j * w * t) * (V.conj().T @ state.amplitudes))
    amp = amp / np.linalg.norm(amp)
    return PureState(amplitudes=amp, n_spins=n)


def site_operator(K, site):
    """Dense matrix of the single-site operator S^{n_hat} at ``site``."""
    n = K.n_spins
    _check_cap(n, STATE_CAP, "dense operators")
    nx, ny, nz = K.directions[site]
    local = nx * SPIN_HALF["x"] + ny * SPIN_HALF["y"] + nz * SPIN_HALF["z"]
    m = np.array([[1.0]], dtype=complex)
    eye = np.eye(2, dtype=complex)
    for s in range(n):
        m = np.kron(m, local if s == site else eye)
    return m


def collective_matrix(K):
    """Dense matrix of the full interrogation generator sum_i K_i."""
    n = K.n_spins
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    for site in range(n):
        out += site_operator(K, site)
    return out


def heisenberg_op(H, t, K, site, cap=STATE_CAP):
    """Heisenberg-picture site operator U(t)^dag K_site U(t).

    The spectrum is unitarily invariant, so it stays {-1/2, +1/2} with
    multiplicity 2**(n-1) each.
    """
    n = K.n_spins
    _check_cap(n, cap, "dense operators")
    Kmat = site_operator(K, site)
    if H.all_z():
        phases = np.exp(-1j * diagonal_energies(H) * t)
        # U = diag(phases); U^dag K U computed elementwise
        out = (phases.conj()[:, None]) * Kmat * (phases[None, :])
    else:
        M = dense_operator(H, cap=cap)
        w, V = np.linalg.eigh(M)
        U = V @ (np.exp(-1j * w * t)[:, None] * V.conj().T)
        out = U.conj().T @ Kmat @ U
    return out


def _as_matrix(K):
    if isinstance(K, CollectiveOperator):
        return collective_matrix(K)
    return np.asarray(K, dtype=complex)


def qfi_pure(psi, K):
    """Pure-state QFI, 4 * Var(K)."""
    norm = np.linalg.norm(psi.amplitudes)
    if abs(norm - 1.0) > _NORM_TOL:
        raise ValueError("state must be normalized")
    Kmat = _as_matrix(K)
    v = Kmat @ psi.amplitudes
    mean = np.vdot(psi.amplitudes, v).real
    second = np.vdot(v, v).real
    return float(4.0 * (second - mean * mean))


def qfi_spectral(rho, K, zero_tol=_EIG_FLOOR):
    """Spectral-decomposition QFI of a density matrix.

    Eigenvalues below ``zero_tol`` count as exactly zero and pairs with
    p_n + p_m <= zero_tol are excluded from the sum.
    """
    if isinstance(rho, PureState):
        rho = pure_to_density(rho)
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if np.abs(mat - mat.conj().T).max() > _HERM_TOL:
        raise ValueError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(mat).real - 1.0) > _HERM_TOL:
        raise ValueError("density matrix must have unit trace")
    w, V = np.linalg.eigh(mat)
    p = np.where(w > zero_tol, w, 0.0)
    Kmat = _as_matrix(K)
    W = V.conj().T @ Kmat @ V
    num = (p[:, None] - p[None, :]) ** 2
    den = p[:, None] + p[None, :]
    mask = den > zero_tol
    ratio = np.zeros_like(num)
    ratio[mask] = num[mask] / den[mask]
    return float(2.0 * (ratio * np.abs(W) ** 2).sum())


def sqrt_psd(mat, zero_tol=_EIG_FLOOR):
    """Matrix square root via spectral decomposition.

    Eigenvalues below ``zero_tol`` (including small negatives) are set to
    exactly zero and the spectrum is renormalized to unit trace before
    the root is taken; otherwise spurious O(eps) eigenvalues of
    rank-deficient states would surface as O(sqrt(eps)) amplitudes.
    """
    w, V = np.linalg.eigh(mat)
    w = np.where(w > zero_tol, w, 0.0)
    total = w.sum()
    if total <= 0:
        raise ValueError("matrix is not positive semidefinite")
    w = w / total
    return (V * np.sqrt(w)[None, :]) @ V.conj().T


def skew_information_sum(sigma, heisenberg_ops):
    """2 sum_{i,j} tr([K_i, sqrt(sigma)]^dag [K_j, sqrt(sigma)]).

    The double sum factorizes through A = sum_i [K_i, sqrt(sigma)], so
    the value equals 2 ||A||_F^2 and is manifestly non-negative.
    """
    mat = sigma.matrix if isinstance(sigma, DensityMatrix) else np.asarray(sigma, dtype=complex)
    root = sqrt_psd(mat)
    dim = mat.shape[0]
    A = np.zeros((dim, dim), dtype=complex)
    for op in heisenberg_ops:
        op = np.asarray(op, dtype=complex)
        A += op @ root - root @ op
    return float(2.0 * np.vdot(A, A).real)


def pure_to_density(psi):
    return DensityMatrix(
        matrix=np.outer(psi.amplitudes, psi.amplitudes.conj()), n_spins=psi.n_spins
    )


def state_to_json_dict(psi):
    """Binary-free JSON dump of a state vector, for debugging."""
    return {
        "n_spins": psi.n_spins,
        "re": [float(a.real) for a in psi.amplitudes],
        "im": [float(a.imag) for a in psi.amplitudes],
    }


def state_from_json_dict(doc):
    amp = np.array(doc["re"], dtype=float) + 1j * np.array(doc["im"], dtype=float)
    return PureState(amplitudes=amp, n_spins=int(doc["n_spins"]))
