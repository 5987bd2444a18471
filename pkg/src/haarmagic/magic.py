"""Stabilizer 2-Renyi entropy (magic) of pure states, exactly.

A Pauli string is encoded by two N-bit masks (x, z); the Hermitian
representative is sigma = i^{popcount(x & z)} X^x Z^z, which has +-1
eigenvalues, so only even powers of <sigma> ever enter the entropy.
With d = 2^N the string probabilities Xi(sigma) = <sigma>^2 / d sum to 1
on pure states, and

    M2 = log2(d) - log2( sum_sigma <sigma>^4 )

which is the d^2-free reduction of the defining -log2(sum Xi^2) - log2(d).

Two evaluators are provided: `sre_naive` enumerates all 4^N strings
(O(8^N), the oracle) and `sre_fast` sweeps x-sectors with a Walsh-Hadamard
transform over z (O(N 4^N)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import CapabilityError, ConfigurationError, DataError
from .states import MAX_QUBITS, StateVector

MAX_NAIVE_QUBITS = 7

_IMAG_TOL = 1e-10
_XI_TOL = 1e-9


@dataclass(frozen=True)
class PauliString:
    """Unsigned Pauli string: X on bits of x_mask, Z on z_mask, Y on overlap."""

    x_mask: int
    z_mask: int


@dataclass(frozen=True)
class MagicResult:
    m2: float
    xi_norm: float
    sum_fourth: float


def m2_upper_bound(n_qubits: int) -> float:
    """log2((2^N + 1) / 2), the maximum attainable M2."""
    return math.log2(((1 << n_qubits) + 1) / 2.0)


def all_pauli_strings(n_qubits: int) -> Iterator[PauliString]:
    """All 4^N mask pairs, identity first, z fastest."""
    d = 1 << n_qubits
    for x in range(d):
        for z in range(d):
            yield PauliString(x, z)


def pauli_expectation(state: StateVector, pauli: PauliString) -> float:
    """<psi| sigma |psi> for the Hermitian string sigma = i^{|x&z|} X^x Z^z.

    X^x permutes amplitude indices by XOR, Z^z contributes (-1)^{k.z}, so
    the bra-ket is a single masked correlation sum over the 2^N indices.
    """
    n = state.n_qubits
    d = 1 << n
    x, z = pauli.x_mask, pauli.z_mask
    if not (0 <= x < d and 0 <= z < d):
        raise ConfigurationError(f"masks ({x}, {z}) do not fit in {n} bits")
    psi = state.amplitudes
    idx = np.arange(d, dtype=np.intp)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & z) & 1)
    val = complex(np.sum(np.conj(psi[idx ^ x]) * psi * signs))
    val *= 1j ** ((x & z).bit_count() % 4)
    if abs(val.imag) > _IMAG_TOL:
        raise DataError(f"expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)


def walsh_hadamard_inplace(v: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform over the last axis, in place.

    v'_z = sum_k (-1)^{z.k} v_k; applying twice multiplies by the length.
    Radix-4 butterflies (radix-2 tail for odd log2 n) to halve the number
    of memory passes relative to plain radix-2.
    """
    n = v.shape[-1]
    if n <= 0 or n & (n - 1):
        raise ConfigurationError(f"length must be a power of two, got {n}")
    if not v.flags.c_contiguous:
        # reshape would silently copy and the butterflies would be lost
        tmp = np.ascontiguousarray(v)
        walsh_hadamard_inplace(tmp)
        np.copyto(v, tmp)
        return v
    lead = v.shape[:-1]
    step = 1
    while step * 4 <= n:
        b = v.reshape(lead + (n // (4 * step), 4, step))
        s01 = b[..., 0, :] + b[..., 1, :]
        d01 = b[..., 0, :] - b[..., 1, :]
        s23 = b[..., 2, :] + b[..., 3, :]
        d23 = b[..., 2, :] - b[..., 3, :]
        b[..., 0, :] = s01 + s23
        b[..., 1, :] = d01 + d23
        b[..., 2, :] = s01 - s23
        b[..., 3, :] = d01 - d23
        step *= 4
    if step < n:
        b = v.reshape(lead + (n // (2 * step), 2, step))
        t = b[..., 0, :] - b[..., 1, :]
        b[..., 0, :] += b[..., 1, :]
        b[..., 1, :] = t
    return v


def _finish(n_qubits: int, sum_sq: float, sum_fourth: float) -> MagicResult:
    d = 1 << n_qubits
    xi_norm = sum_sq / d
    if abs(xi_norm - 1.0) > _XI_TOL:
        raise DataError(f"string probabilities sum to {xi_norm!r}, not 1")
    m2 = n_qubits - math.log2(sum_fourth)
    if not -1e-9 <= m2 <= m2_upper_bound(n_qubits) + 1e-9:
        raise DataError(f"M2 = {m2!r} outside [0, {m2_upper_bound(n_qubits)!r}]")
    return MagicResult(m2=m2, xi_norm=xi_norm, sum_fourth=sum_fourth)


def sre_naive(state: StateVector) -> MagicResult:
    """Brute-force M2: loop every string through `pauli_expectation`."""
    n = state.n_qubits
    if n > MAX_NAIVE_QUBITS:
        raise CapabilityError(
            f"sre_naive is O(8^N) and capped at N={MAX_NAIVE_QUBITS}; use sre_fast"
        )
    sum_sq = 0.0
    sum_fourth = 0.0
    for pauli in all_pauli_strings(n):
        e = pauli_expectation(state, pauli)
        e2 = e * e
        sum_sq += e2
        sum_fourth += e2 * e2
    return _finish(n, sum_sq, sum_fourth)


# Rows per x-slab in sre_fast; 64 keeps the slab inside L2 up to N=14.
_SLAB_ROWS = 64


def sre_fast(state: StateVector) -> MagicResult:
    """Transform-based M2 in O(N 4^N).

    For each x_mask the correlation vector v_k = conj(psi_{k xor x}) psi_k
    is WH-transformed over k, giving c(x, z) = <psi| X^x Z^z |psi> for all
    z at once. Hermitization phases drop out: <sigma>^2 = |c|^2. Slab
    partial sums are combined with math.fsum so the 4^N-term accumulation
    order is fixed and compensated.
    """
    n = state.n_qubits
    if n > MAX_QUBITS:
        raise CapabilityError(f"sre_fast is capped at N={MAX_QUBITS}")
    d = 1 << n
    psi = state.amplitudes
    conj = psi.conj()
    k = np.arange(d, dtype=np.intp)
    sq_parts: list[float] = []
    fourth_parts: list[float] = []
    for x0 in range(0, d, _SLAB_ROWS):
        xs = np.arange(x0, min(x0 + _SLAB_ROWS, d), dtype=np.intp)
        corr = conj[k[None, :] ^ xs[:, None]] * psi[None, :]
        walsh_hadamard_inplace(corr)
        p2 = corr.real**2 + corr.imag**2
        sq_parts.append(float(p2.sum()))
        fourth_parts.append(float((p2 * p2).sum()))
    return _finish(n, math.fsum(sq_parts), math.fsum(fourth_parts))
