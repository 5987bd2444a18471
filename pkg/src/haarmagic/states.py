"""Dense N-qubit pure states and the random ensembles that produce them.

Qubit indexing is little-endian throughout: qubit k lives on bit k of the
amplitude index, so |q_{N-1} ... q_1 q_0> sits at index sum_k q_k 2^k.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DataError

MAX_QUBITS = 14

_NORM_TOL = 1e-10
_UNITARY_TOL = 1e-10
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass
class StateVector:
    """Dense amplitude vector of an N-qubit pure state (unit norm enforced)."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ConfigurationError(
                f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}"
            )
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ConfigurationError(
                f"amplitude vector must have length 2^{self.n_qubits}, "
                f"got shape {self.amplitudes.shape}"
            )
        self.check_norm()

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def norm_sq(self) -> float:
        a = self.amplitudes
        return float(np.real(np.vdot(a, a)))

    def check_norm(self) -> None:
        if abs(self.norm_sq() - 1.0) > _NORM_TOL:
            raise DataError(f"state norm^2 = {self.norm_sq()!r} deviates from 1")

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())


@dataclass
class Unitary:
    """Dense unitary matrix; U^dag U = I is checked on construction."""

    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.ascontiguousarray(self.entries, dtype=np.complex128)
        d = self.entries.shape[0]
        if self.entries.ndim != 2 or self.entries.shape != (d, d) or d < 2 or d & (d - 1):
            raise ConfigurationError(f"unitary must be square with power-of-2 dim, got {self.entries.shape}")
        defect = np.abs(self.entries.conj().T @ self.entries - np.eye(d)).max()
        if defect > _UNITARY_TOL:
            raise DataError(f"matrix is not unitary (max |U^dag U - I| = {defect:.3e})")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass
class BrickwallSpec:
    """Open-boundary brick-wall circuit: layer l couples (q, q+1) for q = l mod 2."""

    n_qubits: int
    depth: int

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ConfigurationError(f"n_qubits out of range: {self.n_qubits}")
        if self.depth < 0:
            raise ConfigurationError(f"depth must be >= 0, got {self.depth}")

    def layer_pairs(self, layer: int) -> list[tuple[int, int]]:
        start = layer % 2
        return [(q, q + 1) for q in range(start, self.n_qubits - 1, 2)]


def zero_state(n_qubits: int) -> StateVector:
    """The computational reference state |0...0>."""
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def sample_haar_state(n_qubits: int, rng: np.random.Generator) -> StateVector:
    """Draw a state from the Haar (uniform) measure on the unit sphere.

    Independent standard complex Gaussian amplitudes, normalized: the
    unitary invariance of the Gaussian makes this identical in law to
    applying a Haar-random unitary to |0...0>, at O(2^N) cost.
    """
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ConfigurationError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    d = 1 << n_qubits
    amps = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    amps /= np.linalg.norm(amps)
    return StateVector(n_qubits, amps)


def sample_haar_unitary(
    dim: int, rng: np.random.Generator, *, phase_correction: bool = True
) -> Unitary:
    """Haar-random unitary via QR of a complex Ginibre matrix.

    Plain QR is NOT Haar-distributed: the decomposition is only unique once
    the phases of R's diagonal are fixed. Multiplying each column of Q by
    r_jj/|r_jj| removes the bias (Mezzadri's correction). `phase_correction`
    exists only so the verification suite can demonstrate the failure mode;
    production code must leave it True.
    """
    if dim < 2:
        raise ConfigurationError(f"unitary dim must be >= 2, got {dim}")
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    if phase_correction:
        diag = np.diagonal(r)
        q = q * (diag / np.abs(diag))[None, :]
    return Unitary(q)


def _expand_two_bit_base(n_qubits: int, q_low: int, q_high: int) -> np.ndarray:
    """Indices with bits q_low and q_high cleared, one per 4-amplitude block."""
    base = np.arange(1 << (n_qubits - 2), dtype=np.intp)
    base = ((base >> q_low) << (q_low + 1)) | (base & ((1 << q_low) - 1))
    base = ((base >> q_high) << (q_high + 1)) | (base & ((1 << q_high) - 1))
    return base


def apply_two_qubit_gate(
    state: StateVector, gate: Unitary, q_low: int, q_high: int
) -> StateVector:
    """Apply a 4x4 gate to qubits (q_low, q_high), in place.

    Gate basis index is (bit of q_high << 1) | bit of q_low, matching the
    little-endian state convention. Stride arithmetic only; the dense
    2^N x 2^N construction exists solely as a test oracle.
    """
    n = state.n_qubits
    if not (0 <= q_low < q_high < n):
        raise ConfigurationError(f"qubit pair ({q_low}, {q_high}) invalid for N={n}")
    if gate.dim != 4:
        raise ConfigurationError(f"two-qubit gate must be 4x4, got dim {gate.dim}")
    amps = state.amplitudes
    base = _expand_two_bit_base(n, q_low, q_high)
    i01 = base | (1 << q_low)
    i10 = base | (1 << q_high)
    i11 = i10 | (1 << q_low)
    block = np.stack((amps[base], amps[i01], amps[i10], amps[i11]))
    block = gate.entries @ block
    amps[base] = block[0]
    amps[i01] = block[1]
    amps[i10] = block[2]
    amps[i11] = block[3]
    state.check_norm()
    return state


def apply_clifford_gate(state: StateVector, gate: str, *targets: int) -> StateVector:
    """Apply H, S, or CNOT in place. CNOT takes (control, target)."""
    n = state.n_qubits
    amps = state.amplitudes
    name = gate.upper()
    if name in ("H", "S"):
        if len(targets) != 1:
            raise ConfigurationError(f"{name} takes one target, got {targets}")
        (q,) = targets
        if not 0 <= q < n:
            raise ConfigurationError(f"qubit {q} out of range for N={n}")
        pairs = amps.reshape(-1, 2, 1 << q)
        if name == "H":
            lo = pairs[:, 0, :].copy()
            hi = pairs[:, 1, :]
            pairs[:, 0, :] = (lo + hi) * _INV_SQRT2
            pairs[:, 1, :] = (lo - hi) * _INV_SQRT2
        else:
            pairs[:, 1, :] *= 1j
    elif name in ("CNOT", "CX"):
        if len(targets) != 2 or targets[0] == targets[1]:
            raise ConfigurationError(f"CNOT takes distinct (control, target), got {targets}")
        control, target = targets
        if not (0 <= control < n and 0 <= target < n):
            raise ConfigurationError(f"CNOT targets {targets} out of range for N={n}")
        idx = np.arange(1 << n, dtype=np.intp)
        sel = idx[(idx >> control) & 1 == 1]
        amps[sel] = amps[sel ^ (1 << target)]
    else:
        raise ConfigurationError(f"unknown Clifford gate {gate!r}")
    state.check_norm()
    return state


def tensor_product(a: StateVector, b: StateVector) -> StateVector:
    """Product state with `a` on the low-index qubits and `b` on the high ones."""
    n = a.n_qubits + b.n_qubits
    if n > MAX_QUBITS:
        raise ConfigurationError(f"product state needs {n} qubits, limit is {MAX_QUBITS}")
    return StateVector(n, np.kron(b.amplitudes, a.amplitudes))


def sample_brickwall_state(spec: BrickwallSpec, rng: np.random.Generator) -> StateVector:
    """Run `depth` layers of independent Haar 2-qubit gates on |0...0>."""
    state = zero_state(spec.n_qubits)
    for layer in range(spec.depth):
        for q_low, q_high in spec.layer_pairs(layer):
            gate = sample_haar_unitary(4, rng)
            apply_two_qubit_gate(state, gate, q_low, q_high)
    return state
