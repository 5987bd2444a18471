"""Exact magic (stabilizer 2-Renyi entropy) and entanglement statistics of
Haar-random and brick-wall-random N-qubit pure states."""

from .entanglement import (CutSpec, EntropyResult, default_cut,
                           entanglement_entropy, page_entropy,
                           schmidt_spectrum, von_neumann_entropy)
from .errors import CapabilityError, ConfigurationError, DataError, RunError
from .magic import (MagicResult, PauliString, all_pauli_strings,
                    m2_upper_bound, pauli_expectation, sre_fast, sre_naive,
                    walsh_hadamard_inplace)
from .runner import (ExperimentConfig, RunResult, SampleRecord,
                     rng_stream_for, run_brickwall_sweep, run_distribution,
                     run_scaling)
from .states import (BrickwallSpec, StateVector, Unitary, apply_clifford_gate,
                     apply_two_qubit_gate, sample_brickwall_state,
                     sample_haar_state, sample_haar_unitary, tensor_product,
                     zero_state)
from .stats import (Histogram1D, Histogram2D, MomentAccumulator, correlation,
                    cumulants, fit_log2_slope, ks_distance)

__version__ = "0.1.0"
