import math

import numpy as np
import pytest

from haarmagic.entanglement import (CutSpec, default_cut, entanglement_entropy,
                                    page_entropy, schmidt_spectrum,
                                    von_neumann_entropy)
from haarmagic.errors import ConfigurationError, DataError
from haarmagic.states import (StateVector, apply_two_qubit_gate,
                              sample_haar_state, sample_haar_unitary,
                              tensor_product)

from oracles import dense_rho_a

INV_SQRT2 = 1 / np.sqrt(2)
LOG2_E = math.log2(math.e)


def test_product_state_spectrum_is_rank_one():
    rng = np.random.default_rng(1)
    prod = tensor_product(sample_haar_state(2, rng), sample_haar_state(2, rng))
    lam = schmidt_spectrum(prod, CutSpec(2))
    assert lam[0] == pytest.approx(1.0, abs=1e-10)
    assert np.abs(lam[1:]).max() < 1e-10


def test_bell_state_spectrum():
    bell = StateVector(2, np.array([INV_SQRT2, 0, 0, INV_SQRT2]))
    lam = schmidt_spectrum(bell, CutSpec(1))
    assert np.allclose(lam, [0.5, 0.5], atol=1e-12)


def test_spectrum_matches_partial_trace_oracle():
    rng = np.random.default_rng(5)
    for _ in range(5):
        state = sample_haar_state(4, rng)
        lam = schmidt_spectrum(state, CutSpec(2))
        eig = np.sort(np.linalg.eigvalsh(dense_rho_a(state.amplitudes, 2)))[::-1]
        assert np.abs(lam - eig).max() < 1e-10


def test_spectrum_rejects_bad_cut():
    state = sample_haar_state(3, np.random.default_rng(0))
    for n_a in (0, 3, 4):
        with pytest.raises(ConfigurationError):
            schmidt_spectrum(state, CutSpec(n_a))


def test_von_neumann_entropy_known_spectra():
    assert von_neumann_entropy(np.array([1.0])) == 0.0
    assert von_neumann_entropy(np.array([0.5, 0.5])) == pytest.approx(1.0, abs=1e-12)
    assert von_neumann_entropy(np.array([0.25] * 4)) == pytest.approx(2.0, abs=1e-12)


def test_von_neumann_entropy_treats_noise_as_zero():
    assert von_neumann_entropy(np.array([1.0, 1e-13, 0.0])) == 0.0


def test_von_neumann_entropy_rejects_bad_spectra():
    with pytest.raises(DataError):
        von_neumann_entropy(np.array([0.7, 0.2]))  # sums to 0.9
    with pytest.raises(DataError):
        von_neumann_entropy(np.array([1.1, -0.1]))


def test_page_entropy_balanced_two_qubits():
    # m = n = 2: (1/3 + 1/4 - 1/4)/ln 2 = 1/(3 ln 2)
    assert page_entropy(1, 1) == pytest.approx(1 / (3 * math.log(2)), abs=1e-12)


def test_page_entropy_against_haar_average():
    # Monte Carlo over Haar 2-qubit states, batched for speed
    rng = np.random.default_rng(11)
    mats = rng.standard_normal((100_000, 2, 2)) + 1j * rng.standard_normal((100_000, 2, 2))
    mats /= np.linalg.norm(mats, axis=(1, 2), keepdims=True)
    lam = np.linalg.svd(mats, compute_uv=False) ** 2
    lam = np.clip(lam, 1e-300, 1.0)
    entropies = -(lam * np.log2(lam)).sum(axis=1)
    se = entropies.std(ddof=1) / np.sqrt(entropies.size)
    assert abs(entropies.mean() - page_entropy(1, 1)) < 4 * se


def test_page_entropy_even_asymptote():
    for n_half in (5, 6, 7):
        target = n_half - LOG2_E / 2
        assert page_entropy(n_half, n_half) == pytest.approx(target, abs=0.01)


def test_page_entropy_odd_asymptote():
    for n in (11, 13):
        a, b = (n - 1) // 2, (n + 1) // 2
        target = (n - 1) / 2 - LOG2_E / 4
        assert page_entropy(a, b) == pytest.approx(target, abs=0.01)


def test_page_entropy_requires_small_side_first():
    with pytest.raises(ConfigurationError):
        page_entropy(3, 2)
    with pytest.raises(ConfigurationError):
        page_entropy(0, 2)


def test_entropy_symmetric_between_cut_sides():
    # S_A = S_B for a pure state; the B side comes from an independent
    # dense partial trace, not from the SVD route under test
    from oracles import dense_rho_b
    rng = np.random.default_rng(13)
    for _ in range(10):
        state = sample_haar_state(5, rng)
        n_a = int(rng.integers(1, 5))
        s_a = entanglement_entropy(state, CutSpec(n_a)).s
        lam_b = np.sort(np.linalg.eigvalsh(dense_rho_b(state.amplitudes, n_a)))[::-1]
        s_b = von_neumann_entropy(np.clip(lam_b, 0.0, 1.0))
        assert abs(s_a - s_b) < 1e-9


def test_entropy_invariant_under_local_gates():
    rng = np.random.default_rng(17)
    cut = CutSpec(2)
    for q_low in (0, 2):  # inside A, inside B
        state = sample_haar_state(4, rng)
        before = entanglement_entropy(state, cut).s
        apply_two_qubit_gate(state, sample_haar_unitary(4, rng), q_low, q_low + 1)
        assert abs(entanglement_entropy(state, cut).s - before) < 1e-9


def test_entropy_zero_across_product_cut():
    rng = np.random.default_rng(19)
    prod = tensor_product(sample_haar_state(3, rng), sample_haar_state(2, rng))
    assert entanglement_entropy(prod, CutSpec(3)).s < 1e-9


def test_entropy_within_range():
    rng = np.random.default_rng(23)
    for _ in range(20):
        n = int(rng.integers(2, 8))
        n_a = int(rng.integers(1, n))
        result = entanglement_entropy(sample_haar_state(n, rng), CutSpec(n_a))
        assert -1e-12 <= result.s <= min(n_a, n - n_a) + 1e-9
        assert result.schmidt_sq.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.all(np.diff(result.schmidt_sq) <= 1e-12)


def test_default_cut_is_floor_half():
    assert default_cut(4).n_a == 2
    assert default_cut(5).n_a == 2
    assert default_cut(9).n_a == 4
