"""Tight-binding Hamiltonians and exact unitary evolution.

A waveguide array with on-site propagation terms beta and nearest-neighbor
couplings kappa is a real-symmetric tridiagonal operator. Evolution over a
time (equivalently, propagation length) t is U = exp(-i h t), computed by
eigendecomposition, which keeps U unitary to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

UNITARITY_TOL = 1e-10

# Built-in six-mode CNOT design target, stored exactly as designed:
# dimensionless Hamiltonian-time products in units of pi. The zero in
# CNOT_HOP[1] decouples the first two modes from the rest of the array.
CNOT_SITE = (0.00, -0.73, 0.67, 0.01, -1.01, -1.67)
CNOT_HOP = (-1.27, 0.00, -0.51, -1.69, -0.52)


def _as_float_vector(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise InputError(f"{name} must be a 1-D real vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class Hamiltonian:
    """Real-symmetric tridiagonal operator: on-site beta, hopping kappa."""

    beta: np.ndarray
    kappa: np.ndarray

    def __post_init__(self):
        beta = _as_float_vector(self.beta, "beta")
        kappa = _as_float_vector(self.kappa, "kappa")
        if beta.size < 2:
            raise InputError(f"need at least 2 modes, got {beta.size}")
        if kappa.size != beta.size - 1:
            raise InputError(
                f"kappa must have len(beta) - 1 = {beta.size - 1} entries, got {kappa.size}"
            )
        beta.flags.writeable = False
        kappa.flags.writeable = False
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "kappa", kappa)

    @property
    def n_modes(self) -> int:
        return self.beta.size

    @property
    def matrix(self) -> np.ndarray:
        """Dense symmetric matrix form."""
        m = np.diag(self.beta).astype(float)
        idx = np.arange(self.n_modes - 1)
        m[idx, idx + 1] = self.kappa
        m[idx + 1, idx] = self.kappa
        return m


@dataclass(frozen=True)
class WalkUnitary:
    """Validated N x N complex unitary. Supports np.asarray()."""

    matrix: np.ndarray
    unitarity_tol: float = field(default=UNITARITY_TOL, repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputError(f"unitary must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InputError("unitary contains non-finite entries")
        dev = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
        if dev > self.unitarity_tol:
            raise InputError(f"matrix is not unitary: max |U^H U - I| = {dev:.3e}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.matrix
        return self.matrix.astype(dtype)


def as_unitary_matrix(u) -> np.ndarray:
    """Accept a WalkUnitary or a plain square complex array."""
    if isinstance(u, WalkUnitary):
        return u.matrix
    m = np.asarray(u, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"expected a square matrix, got shape {m.shape}")
    return m


def dense_hamiltonian(h) -> np.ndarray:
    """Accept a Hamiltonian or a dense real-symmetric matrix."""
    if isinstance(h, Hamiltonian):
        return h.matrix
    m = np.asarray(h, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"Hamiltonian must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError("Hamiltonian contains non-finite entries")
    if np.abs(m - m.T).max() > 0:
        raise InputError("Hamiltonian must be symmetric")
    return m


def build_hamiltonian(beta, kappa) -> Hamiltonian:
    """Construct a validated tridiagonal Hamiltonian from coefficient vectors."""
    return Hamiltonian(beta=np.asarray(beta, dtype=float), kappa=np.asarray(kappa, dtype=float))


def cnot_hamiltonian_time() -> Hamiltonian:
    """The built-in six-mode CNOT Hamiltonian-time product (dimensionless)."""
    return build_hamiltonian(np.pi * np.array(CNOT_SITE), np.pi * np.array(CNOT_HOP))


def unitary(h, t: float = 1.0) -> WalkUnitary:
    """Evolution operator U = exp(-i h t) via real-symmetric eigendecomposition.

    Exact for Hermitian input up to the eigensolver's floating-point error,
    so the result satisfies the unitarity invariant without any step-size
    or series-truncation control.
    """
    if not np.isfinite(t):
        raise InputError(f"evolution time must be finite, got {t}")
    m = dense_hamiltonian(h)
    w, v = np.linalg.eigh(m)
    u = (v * np.exp(-1j * w * t)) @ v.conj().T
    return WalkUnitary(matrix=u)


@dataclass(frozen=True)
class Trajectory:
    """Mode intensities sampled along the evolution.

    z_grid holds the evolution parameter (fractions of t when t is
    dimensionless); intensities has one row per grid point, one column
    per mode, each row summing to 1 for lossless evolution.
    """

    z_grid: np.ndarray
    intensities: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z_grid, dtype=float)
        inten = np.asarray(self.intensities, dtype=float)
        if inten.shape[0] != z.size:
            raise InputError("z_grid and intensities row count disagree")
        sums = inten.sum(axis=1)
        if np.abs(sums - 1.0).max() > 1e-9:
            raise InputError("intensity rows must each sum to 1 within 1e-9")
        z.flags.writeable = False
        inten.flags.writeable = False
        object.__setattr__(self, "z_grid", z)
        object.__setattr__(self, "intensities", inten)


def trajectory(h, t: float, input_amplitudes, n_steps: int) -> Trajectory:
    """Single-photon intensity evolution |exp(-i h z) psi|^2 on a z grid.

    Args:
        h: Hamiltonian (or dense symmetric matrix).
        t: total evolution parameter; the grid spans [0, t].
        input_amplitudes: complex mode amplitudes, normalized to 1 within 1e-12.
        n_steps: number of grid points, at least 2.
    """
    if n_steps < 2:
        raise InputError(f"n_steps must be at least 2, got {n_steps}")
    m = dense_hamiltonian(h)
    psi = np.asarray(input_amplitudes, dtype=complex)
    if psi.shape != (m.shape[0],):
        raise InputError(f"input must have {m.shape[0]} amplitudes, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-12:
        raise InputError(f"input must be normalized to 1 within 1e-12, got norm {norm!r}")
    w, v = np.linalg.eigh(m)
    z = np.linspace(0.0, t, n_steps)
    c = v.conj().T @ psi
    amps = (v @ (np.exp(-1j * np.outer(z, w)) * c).T).T
    return Trajectory(z_grid=z, intensities=np.abs(amps) ** 2)


def single_photon_output(u, input_mode: int) -> np.ndarray:
    """Output intensity distribution |U[k, input_mode]|^2 over all modes k."""
    m = as_unitary_matrix(u)
    n = m.shape[0]
    if not 0 <= input_mode < n:
        raise InputError(f"input_mode must be in [0, {n - 1}], got {input_mode}")
    return np.abs(m[:, input_mode]) ** 2
