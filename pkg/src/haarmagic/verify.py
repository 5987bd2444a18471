"""Runtime invariant suite behind `haarmagic verify`.

Each check returns a CheckResult; the CLI prints one line per check and
exits nonzero if any fail. The same functions back the pytest property
suite so the two surfaces cannot drift apart.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import entanglement as ent
from . import magic, states, stats
from .runner import rng_stream_for

# chi-square 0.999 quantile at 15 dof (16 phase bins); p > 0.001 acceptance.
_CHI2_CRIT_15DOF = 37.697
_PHASE_BINS = 16


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def random_clifford_word(state: states.StateVector, length: int,
                         rng: np.random.Generator) -> states.StateVector:
    """Apply `length` uniformly chosen H/S/CNOT gates in place."""
    n = state.n_qubits
    for _ in range(length):
        kind = rng.integers(0, 3 if n >= 2 else 2)
        if kind == 0:
            states.apply_clifford_gate(state, "H", int(rng.integers(n)))
        elif kind == 1:
            states.apply_clifford_gate(state, "S", int(rng.integers(n)))
        else:
            control, target = rng.choice(n, size=2, replace=False)
            states.apply_clifford_gate(state, "CNOT", int(control), int(target))
    return state


def check_haar_state_moment(rng, trials=10_000) -> CheckResult:
    vals = np.array([abs(states.sample_haar_state(4, rng).amplitudes[0]) ** 2
                     for _ in range(trials)])
    target = 1.0 / 16.0
    dev = abs(vals.mean() - target)
    limit = 3.0 * vals.std(ddof=1) / math.sqrt(trials)
    return CheckResult("haar_state_moment", dev <= limit,
                       f"|E|psi_0|^2 - 1/16| = {dev:.2e} (3se = {limit:.2e})")


def check_haar_unitary_moment(rng, trials=10_000, *, phase_correction=True) -> CheckResult:
    sq = np.empty((trials, 2, 2))
    for t in range(trials):
        u = states.sample_haar_unitary(2, rng, phase_correction=phase_correction)
        sq[t] = np.abs(u.entries) ** 2
    dev = np.abs(sq.mean(axis=0) - 0.5).max()
    limit = 3.0 * sq.std(axis=0, ddof=1).max() / math.sqrt(trials)
    return CheckResult("haar_unitary_moment", dev <= limit,
                       f"max |E|U_ij|^2 - 1/2| = {dev:.2e} (3se = {limit:.2e})")


def check_haar_unitary_phases(rng, trials=10_000, *, phase_correction=True) -> CheckResult:
    phases = np.array([
        np.angle(states.sample_haar_unitary(4, rng, phase_correction=phase_correction)
                 .entries[0, 0])
        for _ in range(trials)])
    counts, _ = np.histogram(phases, bins=_PHASE_BINS, range=(-np.pi, np.pi))
    expected = trials / _PHASE_BINS
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    return CheckResult("haar_unitary_phases", chi2 < _CHI2_CRIT_15DOF,
                       f"arg(U_00) uniformity chi2 = {chi2:.1f} (crit {_CHI2_CRIT_15DOF})")


def check_wht_involution(rng, trials=20) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        v = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        w = v.copy()
        magic.walsh_hadamard_inplace(w)
        magic.walsh_hadamard_inplace(w)
        worst = max(worst, float(np.abs(w - 16 * v).max()))
    return CheckResult("wht_involution", worst < 1e-12,
                       f"max |WHT^2 v - 16 v| = {worst:.2e}")


def check_oracle_equivalence(rng, trials=100) -> CheckResult:
    worst = 0.0
    for n in range(1, 7):
        for _ in range(trials):
            state = states.sample_haar_state(n, rng)
            worst = max(worst, abs(magic.sre_fast(state).m2 - magic.sre_naive(state).m2))
    return CheckResult("oracle_equivalence", worst < 1e-9,
                       f"max |sre_fast - sre_naive| = {worst:.2e} over N=1..6")


def check_purity_identity(rng, trials=100) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 9))
        worst = max(worst, abs(magic.sre_fast(states.sample_haar_state(n, rng)).xi_norm - 1.0))
    return CheckResult("purity_identity", worst < 1e-9,
                       f"max |sum Xi - 1| = {worst:.2e}")


def check_clifford_invariance(rng, trials=100) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 7))
        state = states.sample_haar_state(n, rng)
        before = magic.sre_fast(state).m2
        random_clifford_word(state, 20, rng)
        worst = max(worst, abs(magic.sre_fast(state).m2 - before))
    return CheckResult("clifford_invariance", worst < 1e-9,
                       f"max |M2(C psi) - M2(psi)| = {worst:.2e}")


def check_stabilizer_zero(rng, trials=100) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 7))
        state = random_clifford_word(states.zero_state(n), 20, rng)
        worst = max(worst, abs(magic.sre_fast(state).m2))
    return CheckResult("stabilizer_zero", worst < 1e-9,
                       f"max M2 over Clifford orbit of |0..0> = {worst:.2e}")


def check_additivity(rng, trials=100) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        a = states.sample_haar_state(int(rng.integers(1, 4)), rng)
        b = states.sample_haar_state(int(rng.integers(1, 4)), rng)
        gap = abs(magic.sre_fast(states.tensor_product(a, b)).m2
                  - magic.sre_fast(a).m2 - magic.sre_fast(b).m2)
        worst = max(worst, gap)
    return CheckResult("additivity", worst < 1e-9,
                       f"max |M2(a x b) - M2(a) - M2(b)| = {worst:.2e}")


def check_m2_bounds(rng, trials=100) -> CheckResult:
    ok = True
    lo, hi = 0.0, 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 9))
        m2 = magic.sre_fast(states.sample_haar_state(n, rng)).m2
        lo = min(lo, m2)
        hi = max(hi, m2 - magic.m2_upper_bound(n))
        ok = ok and -1e-9 <= m2 <= magic.m2_upper_bound(n) + 1e-9
    return CheckResult("m2_bounds", ok,
                       f"min M2 = {lo:.2e}, max excess over bound = {hi:.2e}")


def check_schmidt_symmetry(rng, trials=100) -> CheckResult:
    # S_A = S_B for one bipartition; B's spectrum comes from its own
    # partial trace so the two sides are independent computations.
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 9))
        state = states.sample_haar_state(n, rng)
        n_a = int(rng.integers(1, n))
        s_a = ent.entanglement_entropy(state, ent.CutSpec(n_a)).s
        lam_b = np.sort(np.linalg.eigvalsh(_reduced_density(state, n_a, "B")))[::-1]
        s_b = ent.von_neumann_entropy(np.clip(lam_b, 0.0, 1.0))
        worst = max(worst, abs(s_a - s_b))
    return CheckResult("schmidt_symmetry", worst < 1e-9,
                       f"max |S_A - S_B| = {worst:.2e}")


def check_local_unitary_invariance(rng, trials=100) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(3, 8))
        cut = ent.CutSpec(int(rng.integers(2, n)))
        state = states.sample_haar_state(n, rng)
        before = ent.entanglement_entropy(state, cut).s
        gate = states.sample_haar_unitary(4, rng)
        inside_a = rng.integers(2) == 0 and cut.n_a >= 2
        if inside_a:
            q = int(rng.integers(0, cut.n_a - 1))
        elif n - cut.n_a >= 2:
            q = int(rng.integers(cut.n_a, n - 1))
        else:
            q = 0  # fall back to a gate inside A
        states.apply_two_qubit_gate(state, gate, q, q + 1)
        worst = max(worst, abs(ent.entanglement_entropy(state, cut).s - before))
    return CheckResult("local_unitary_invariance", worst < 1e-9,
                       f"max |S after one-side gate - S| = {worst:.2e}")


def _reduced_density(state: states.StateVector, n_a: int, side: str) -> np.ndarray:
    r = state.amplitudes.reshape(1 << (state.n_qubits - n_a), 1 << n_a)
    if side == "A":
        return np.einsum("ba,bc->ac", r, r.conj())
    return np.einsum("ba,ca->bc", r, r.conj())


def check_partial_trace_oracle(rng, trials=100) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 7))
        n_a = int(rng.integers(1, n))
        state = states.sample_haar_state(n, rng)
        lam = ent.schmidt_spectrum(state, ent.CutSpec(n_a))
        eig = np.sort(np.linalg.eigvalsh(_reduced_density(state, n_a, "A")))[::-1]
        # rho_A has 2^{n_a} eigenvalues; beyond the Schmidt rank they are zero
        worst = max(worst, float(np.abs(lam - eig[:lam.size]).max()))
        if eig.size > lam.size:
            worst = max(worst, float(np.abs(eig[lam.size:]).max()))
    return CheckResult("partial_trace_oracle", worst < 1e-9,
                       f"max |schmidt_sq - eig(rho_A)| = {worst:.2e}")


def check_gate_locality(rng, trials=50) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        state = states.sample_haar_state(4, rng)
        rho_b = _reduced_density(state, 2, "B")
        states.apply_two_qubit_gate(state, states.sample_haar_unitary(4, rng), 0, 1)
        worst = max(worst, float(np.abs(_reduced_density(state, 2, "B") - rho_b).max()))
    return CheckResult("gate_locality", worst < 1e-9,
                       f"max |rho_B drift under gate in A| = {worst:.2e}")


def check_page_oracle(rng, trials=20_000) -> CheckResult:
    exact = ent.page_entropy(1, 1)
    closed_form = 1.0 / (3.0 * math.log(2.0))
    if abs(exact - closed_form) > 1e-12:
        return CheckResult("page_oracle", False,
                           f"page_entropy(1,1) = {exact!r} != 1/(3 ln 2)")
    vals = np.empty(trials)
    cut = ent.CutSpec(1)
    for t in range(trials):
        vals[t] = ent.entanglement_entropy(states.sample_haar_state(2, rng), cut).s
    dev = abs(vals.mean() - exact)
    limit = 4.0 * vals.std(ddof=1) / math.sqrt(trials)
    return CheckResult("page_oracle", dev <= limit,
                       f"|mean S - page(1,1)| = {dev:.2e} (4se = {limit:.2e})")


def check_merge_equivalence(rng, trials=50) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(10, 400))
        xs = rng.standard_normal(n)
        ys = rng.standard_normal(n) + 0.3 * xs
        whole = stats.MomentAccumulator(paired=True).update_many(xs, ys)
        split = int(rng.integers(1, n))
        merged = (stats.MomentAccumulator(paired=True).update_many(xs[:split], ys[:split])
                  .merge(stats.MomentAccumulator(paired=True)
                         .update_many(xs[split:], ys[split:])))
        for field in ("mean", "m2", "m3", "m4", "mean_y", "m2_y", "co2"):
            a, b = getattr(whole, field), getattr(merged, field)
            worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return CheckResult("merge_equivalence", worst < 1e-9,
                       f"max relative field gap split-vs-whole = {worst:.2e}")


def check_rng_streams(rng, trials=200) -> CheckResult:
    a = rng_stream_for(7, 3, 11).standard_normal(64)
    b = rng_stream_for(7, 3, 11).standard_normal(64)
    if not np.array_equal(a, b):
        return CheckResult("rng_streams", False, "same triple gave different streams")
    c = rng_stream_for(7, 3, 12).standard_normal(64)
    if np.array_equal(a, c):
        return CheckResult("rng_streams", False, "adjacent sample indices collide")
    firsts = np.array([rng_stream_for(7, 0, i).random() for i in range(trials)])
    counts, _ = np.histogram(firsts, bins=8, range=(0.0, 1.0))
    expected = trials / 8
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    # chi-square 0.999 quantile at 7 dof
    return CheckResult("rng_streams", chi2 < 24.322,
                       f"first-draw uniformity chi2 = {chi2:.1f} (crit 24.3)")


def run_all_checks(trials: int = 100, seed: int = 20240,
                   qr_phase_correction: bool = True) -> list[CheckResult]:
    """Execute every check with independent sub-streams of `seed`."""
    checks: list[tuple[Callable, dict]] = [
        (check_haar_state_moment, {}),
        (check_haar_unitary_moment, {"phase_correction": qr_phase_correction}),
        (check_haar_unitary_phases, {"phase_correction": qr_phase_correction}),
        (check_wht_involution, {}),
        (check_oracle_equivalence, {"trials": trials}),
        (check_purity_identity, {"trials": trials}),
        (check_clifford_invariance, {"trials": trials}),
        (check_stabilizer_zero, {"trials": trials}),
        (check_additivity, {"trials": trials}),
        (check_m2_bounds, {"trials": trials}),
        (check_schmidt_symmetry, {"trials": trials}),
        (check_local_unitary_invariance, {"trials": trials}),
        (check_partial_trace_oracle, {"trials": trials}),
        (check_gate_locality, {}),
        (check_page_oracle, {}),
        (check_merge_equivalence, {}),
        (check_rng_streams, {}),
    ]
    results = []
    for i, (fn, kwargs) in enumerate(checks):
        rng = np.random.default_rng([seed, i])
        results.append(fn(rng, **kwargs))
    return results
