"""Two-photon output statistics with partial distinguishability.

Two photons injected into distinct modes i and j of a unitary U produce
coincidences at an unordered output pair {k, l} with a probability that
interpolates linearly between the classical product rule (overlap x = 0)
and fully bosonic interference (x = 1). A Gaussian mutual-coherence model
maps a relative arrival delay tau to the scalar overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .errors import DomainError, InputError
from .walk import as_unitary_matrix


@dataclass(frozen=True)
class SourceModel:
    """Photon-pair source: center wavelength, filter bandwidth, peak visibility.

    The coherence time assumes transform-limited Gaussian wavepackets,
    tau_c = (2 ln2 / pi) * lambda^2 / (c * delta_lambda), evaluated once
    from the constructor arguments. Residual experimental imperfection is
    absorbed by max_visibility rather than modeled spectrally.
    """

    center_wavelength_nm: float = 1550.0
    bandwidth_fwhm_nm: float = 12.0
    max_visibility: float = 0.946

    def __post_init__(self):
        if self.center_wavelength_nm <= 0:
            raise InputError(f"center wavelength must be positive, got {self.center_wavelength_nm}")
        if self.bandwidth_fwhm_nm <= 0:
            raise InputError(f"bandwidth must be positive, got {self.bandwidth_fwhm_nm}")
        if not 0.0 <= self.max_visibility <= 1.0:
            raise InputError(f"max_visibility must be in [0, 1], got {self.max_visibility}")

    @property
    def coherence_time_s(self) -> float:
        lam = self.center_wavelength_nm * 1e-9
        dlam = self.bandwidth_fwhm_nm * 1e-9
        return (2.0 * math.log(2.0) / math.pi) * lam**2 / (SPEED_OF_LIGHT * dlam)


@dataclass(frozen=True)
class TwoPhotonInput:
    """Photon-pair injection: input modes and mutual indistinguishability x."""

    mode_a: int
    mode_b: int
    overlap: float = 1.0

    def __post_init__(self):
        if self.mode_a < 0 or self.mode_b < 0:
            raise InputError(f"input modes must be nonnegative, got ({self.mode_a}, {self.mode_b})")
        if not 0.0 <= self.overlap <= 1.0:
            raise DomainError(f"overlap x must be in [0, 1], got {self.overlap}")


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities over unordered output pairs {k, l}, k <= l.

    Same-mode pairs (k, k) are included so the distribution is complete
    and normalized, even though a threshold-detector experiment would not
    resolve them.
    """

    n_modes: int
    probs: dict

    def __post_init__(self):
        total = sum(self.probs.values())
        if abs(total - 1.0) > 1e-9:
            raise InputError(f"distribution must sum to 1 within 1e-9, got {total!r}")

    def prob(self, k: int, l: int) -> float:
        return self.probs[(min(k, l), max(k, l))]


def unordered_pairs(n_modes: int) -> list[tuple[int, int]]:
    """All unordered mode pairs (k, l) with k <= l, in lexicographic order."""
    return [(k, l) for k in range(n_modes) for l in range(k, n_modes)]


def _check_indices(n: int, *modes: int):
    for m in modes:
        if not 0 <= m < n:
            raise InputError(f"mode index {m} out of range for {n} modes")


def two_photon_amplitude(u, i: int, j: int, k: int, l: int) -> complex:
    """Bosonic amplitude for photons entering distinct modes (i, j) to exit at {k, l}.

    For k != l the amplitude is U[k,i] U[l,j] + U[l,i] U[k,j]; for k == l it
    is sqrt(2) U[k,i] U[k,j] (both photons bunched into one mode).
    """
    m = as_unitary_matrix(u)
    _check_indices(m.shape[0], i, j, k, l)
    if i == j:
        raise InputError("input modes must be distinct")
    if k == l:
        return complex(math.sqrt(2.0) * m[k, i] * m[k, j])
    return complex(m[k, i] * m[l, j] + m[l, i] * m[k, j])


def coincidence_prob(u, inp: TwoPhotonInput, k: int, l: int) -> float:
    """Coincidence probability at output pair {k, l} for partially overlapping photons.

    Affine in the overlap x: the x = 1 limit is |two_photon_amplitude|^2 and
    the x = 0 limit is the distinguishable product rule.
    """
    m = as_unitary_matrix(u)
    _check_indices(m.shape[0], inp.mode_a, inp.mode_b, k, l)
    if inp.mode_a == inp.mode_b:
        raise InputError("input modes must be distinct")
    i, j, x = inp.mode_a, inp.mode_b, inp.overlap
    if k == l:
        return float((1.0 + x) * abs(m[k, i] * m[k, j]) ** 2)
    direct = m[k, i] * m[l, j]
    swapped = m[l, i] * m[k, j]
    return float(
        abs(direct) ** 2 + abs(swapped) ** 2 + 2.0 * x * (direct * swapped.conjugate()).real
    )


def mutual_coherence(tau_s: float, source: SourceModel) -> float:
    """Mutual indistinguishability x(tau) for a relative delay tau in seconds."""
    ratio = tau_s / source.coherence_time_s
    return source.max_visibility * math.exp(-(ratio**2))


def two_photon_distribution(u, inp: TwoPhotonInput) -> OutcomeDistribution:
    """Full normalized coincidence distribution over all unordered output pairs."""
    m = as_unitary_matrix(u)
    n = m.shape[0]
    probs = {pair: coincidence_prob(m, inp, *pair) for pair in unordered_pairs(n)}
    return OutcomeDistribution(n_modes=n, probs=probs)


def hom_scan(u, mode_a: int, mode_b: int, tau_grid_s, source: SourceModel) -> list[OutcomeDistribution]:
    """Coincidence distributions along a delay scan.

    Each grid delay is mapped to an overlap by mutual_coherence and the full
    output distribution is evaluated at that overlap, one OutcomeDistribution
    per grid point in order.
    """
    taus = np.asarray(tau_grid_s, dtype=float)
    if taus.size == 0:
        raise InputError("tau grid must be nonempty")
    out = []
    for tau in taus:
        x = mutual_coherence(float(tau), source)
        out.append(two_photon_distribution(u, TwoPhotonInput(mode_a, mode_b, overlap=x)))
    return out
