"""Bipartite von Neumann entanglement entropy and the exact Page average.

The cut is contiguous in the little-endian ordering: subsystem A is qubits
0..n_a-1 (the low index bits). All entropies are in bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DataError
from .states import StateVector

_EIG_FLOOR = 1e-12
_SUM_TOL = 1e-6


@dataclass(frozen=True)
class CutSpec:
    """Bipartition A = qubits 0..n_a-1, B = the rest."""

    n_a: int

    def validate(self, n_qubits: int) -> None:
        if not 1 <= self.n_a <= n_qubits - 1:
            raise ConfigurationError(
                f"cut n_a={self.n_a} invalid for N={n_qubits} (need 1 <= n_a <= N-1)"
            )


@dataclass(frozen=True)
class EntropyResult:
    s: float
    schmidt_sq: np.ndarray


def schmidt_spectrum(state: StateVector, cut: CutSpec) -> np.ndarray:
    """Squared Schmidt coefficients (descending) across the cut.

    Singular values of the amplitude matrix, not eigenvalues of an
    explicitly formed density matrix: better conditioned near rank
    deficiency. The dense partial trace survives only as a test oracle.
    """
    cut.validate(state.n_qubits)
    n_b = state.n_qubits - cut.n_a
    matrix = state.amplitudes.reshape(1 << n_b, 1 << cut.n_a)
    sv = np.linalg.svd(matrix, compute_uv=False)
    return np.sort(sv * sv)[::-1]


def von_neumann_entropy(schmidt_sq: np.ndarray) -> float:
    """S = -sum lambda log2 lambda with 0 log 0 = 0; entries below 1e-12 are zeros."""
    lam = np.asarray(schmidt_sq, dtype=np.float64)
    if lam.size and lam.min() < -_EIG_FLOOR:
        raise DataError(f"negative weight {lam.min()!r} in Schmidt spectrum")
    total = float(lam.sum())
    if abs(total - 1.0) > _SUM_TOL:
        raise DataError(f"Schmidt spectrum sums to {total!r}, not 1")
    lam = np.clip(lam, 0.0, 1.0)
    lam = lam[lam > _EIG_FLOOR]
    return float(-(lam * np.log2(lam)).sum()) if lam.size else 0.0


def entanglement_entropy(state: StateVector, cut: CutSpec) -> EntropyResult:
    """Schmidt spectrum and its entropy in one call."""
    spectrum = schmidt_spectrum(state, cut)
    return EntropyResult(s=von_neumann_entropy(spectrum), schmidt_sq=spectrum)


def default_cut(n_qubits: int) -> CutSpec:
    """The floor(N/2) cut used by the campaigns; covers both odd-N halves."""
    return CutSpec(n_qubits // 2)


def page_entropy(n_a: int, n_b: int) -> float:
    """Exact Haar-average entanglement entropy (Page's formula), in bits.

    With m = 2^{n_a} <= n = 2^{n_b}:

        <S> = [ sum_{k=n+1}^{mn} 1/k  -  (m-1)/(2n) ] / ln 2

    Approaches N/2 - log2(e)/2 for the even-N half cut and
    (N-1)/2 - log2(e)/4 for the floor(N/2) cut at odd N.
    """
    if n_a > n_b:
        raise ConfigurationError(f"page_entropy requires n_a <= n_b, got ({n_a}, {n_b})")
    if n_a < 1:
        raise ConfigurationError(f"n_a must be >= 1, got {n_a}")
    m = 1 << n_a
    n = 1 << n_b
    harmonic_tail = math.fsum(1.0 / k for k in range(n + 1, m * n + 1))
    return (harmonic_tail - (m - 1) / (2.0 * n)) / math.log(2.0)
