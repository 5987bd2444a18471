"""Acceptance suite: every release criterion at its stated tolerance.

Prints one PASS/FAIL line per criterion (run with -s to see them live).
The heavy sampling campaigns are module-scoped fixtures computed once;
all campaign seeds were fixed a priori.
"""
import math
import time

import numpy as np
import pytest

from haarmagic.entanglement import page_entropy
from haarmagic.runner import ExperimentConfig, run_brickwall_sweep, run_distribution
from haarmagic.stats import MomentAccumulator, fit_log2_slope
from haarmagic import verify

SEED = 2025
WORKERS = 2


def report(name, ok, detail):
    line = f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line, flush=True)
    assert ok, line


# ---------------------------------------------------------------- property suite

def test_oracle_equivalence_runtime_bounded():
    t0 = time.time()
    rng = np.random.default_rng([SEED, 1])
    worst = 0.0
    from haarmagic.magic import sre_fast, sre_naive
    from haarmagic.states import sample_haar_state
    for n in range(1, 7):
        for _ in range(100):
            state = sample_haar_state(n, rng)
            worst = max(worst, abs(sre_fast(state).m2 - sre_naive(state).m2))
    elapsed = time.time() - t0
    report("oracle_equivalence",
           worst < 1e-9 and elapsed < 60.0,
           f"max gap {worst:.2e} over 100 states x N=1..6, {elapsed:.1f}s")


def test_magic_property_group_runtime_bounded():
    t0 = time.time()
    results = {}
    for i, check in enumerate((verify.check_clifford_invariance,
                               verify.check_stabilizer_zero,
                               verify.check_additivity,
                               verify.check_m2_bounds)):
        r = check(np.random.default_rng([SEED, 2, i]), trials=100)
        results[r.name] = r
    elapsed = time.time() - t0
    ok = all(r.passed for r in results.values()) and elapsed < 120.0
    report("magic_properties", ok,
           "; ".join(f"{r.name}: {r.detail}" for r in results.values())
           + f"; {elapsed:.1f}s")


def test_entanglement_property_group():
    results = [
        verify.check_schmidt_symmetry(np.random.default_rng([SEED, 3, 0]), trials=100),
        verify.check_local_unitary_invariance(np.random.default_rng([SEED, 3, 1]), trials=100),
        verify.check_partial_trace_oracle(np.random.default_rng([SEED, 3, 2]), trials=100),
    ]
    report("entanglement_properties", all(r.passed for r in results),
           "; ".join(f"{r.name}: {r.detail}" for r in results))


def test_merge_equivalence_and_scheduling_independence(tmp_path):
    merge = verify.check_merge_equivalence(np.random.default_rng([SEED, 4]), trials=100)
    paths = {}
    for workers in (1, 4):
        out = tmp_path / f"w{workers}"
        run_distribution(ExperimentConfig(
            mode="haar", n_qubits_list=[3, 4], samples_per_point=200,
            seed=SEED, workers=workers, out_dir=out))
        paths[workers] = (out / "records.csv").read_bytes(), (out / "summary.json").read_bytes()
    identical = paths[1] == paths[4]
    report("merge_and_scheduling", merge.passed and identical,
           f"{merge.detail}; workers 1 vs 4 bytes identical: {identical}")


# ---------------------------------------------------------------- campaigns

@pytest.fixture(scope="module")
def campaign():
    """N=4..7 at 2000 samples, N=8..10 at 5000 samples, fixed seed."""
    points = {}
    for n_list, samples in (([4, 5, 6, 7], 2000), ([8, 9, 10], 5000)):
        result = run_distribution(ExperimentConfig(
            mode="haar", n_qubits_list=n_list, samples_per_point=samples,
            seed=SEED, workers=WORKERS))
        for p in result.summary["points"]:
            points[p["n_qubits"]] = p
    return points


@pytest.fixture(scope="module")
def brickwall_sweep():
    """N=5, depths 0..12, 5000 samples per depth plus a Haar reference."""
    result = run_brickwall_sweep(ExperimentConfig(
        mode="brickwall", n_qubits_list=[5], depth_list=list(range(13)),
        samples_per_point=5000, seed=SEED, workers=WORKERS))
    return {row["depth"]: row["ks"] for row in result.summary["ks_table"]}


def test_mean_magic_tracks_lower_bound(campaign):
    worst_n, worst = None, 0.0
    for n in range(4, 11):
        bound = n - 2 + math.log2(1 + 3 * 2.0 ** -n)
        gap = abs(campaign[n]["m2"]["mean"] - bound)
        if gap > worst:
            worst_n, worst = n, gap
    report("mean_magic", worst <= 0.05,
           f"max |mean(M2) - (N-2+log2(1+3/2^N))| = {worst:.4f} at N={worst_n}")


def test_mean_entropy_matches_page(campaign):
    worst_n, worst = None, 0.0
    for n in range(4, 11):
        oracle = page_entropy(n // 2, n - n // 2)
        gap = abs(campaign[n]["s"]["mean"] - oracle)
        if gap > worst:
            worst_n, worst = n, gap
    report("mean_entropy", worst <= 0.05,
           f"max |mean(S) - page| = {worst:.4f} bits at N={worst_n}")


def test_magic_variance_scaling(campaign):
    slope, _, _ = fit_log2_slope([(n, campaign[n]["m2"]["var"]) for n in range(4, 11)])
    report("magic_concentration", abs(slope - (-2.0)) <= 0.3,
           f"log2 var(M2) slope = {slope:.3f}, want -2 +- 0.3")


def test_entropy_variance_scaling(campaign):
    slope, _, _ = fit_log2_slope([(n, campaign[n]["s"]["var"]) for n in range(4, 11)])
    report("entropy_concentration", abs(slope - (-1.0)) <= 0.3,
           f"log2 var(S) slope = {slope:.3f}, want -1 +- 0.3")


def test_decorrelation(campaign):
    worst_r = max(abs(campaign[n]["pearson_r"]) for n in (8, 9, 10))
    r_ok = worst_r <= 0.05
    slope, _, _ = fit_log2_slope([(n, abs(campaign[n]["cov"])) for n in range(4, 11)])
    slope_ok = slope <= -2.0
    # NOTE: the |cov| slope half of this criterion is not attainable at these
    # sample counts: the true covariance is ~0.3 * 2^{-3N} (resolved at 9.6
    # sigma for N=3 with 200k samples) and sits far below the covariance
    # estimator's noise floor sqrt(var(M2) var(S)/n) for every N >= 4, so the
    # fitted slope tracks the floor's -1.5, not the signal's -3. Asserted as
    # specified anyway; see the supplementary small-N test for the physics.
    report("decorrelation", r_ok and slope_ok,
           f"max |r| at N>=8 = {worst_r:.4f} (<= 0.05: {r_ok}); "
           f"log2 |cov| slope = {slope:.3f} (<= -2.0: {slope_ok})")


def test_brickwall_convergence(brickwall_sweep):
    depths = sorted(brickwall_sweep)
    trend_ok = True
    running_min = float("inf")
    for d in depths:
        if brickwall_sweep[d] > running_min + 0.03:
            trend_ok = False
        running_min = min(running_min, brickwall_sweep[d])
    ks10 = brickwall_sweep[10]
    report("brickwall_convergence", trend_ok and ks10 < 0.05,
           f"KS(0)={brickwall_sweep[0]:.3f} .. KS(10)={ks10:.3f} .. "
           f"KS(12)={brickwall_sweep[12]:.3f}; trend non-increasing: {trend_ok}")


def test_gaussian_convergence(campaign):
    def standardized(point):
        var = point["m2"]["var"]
        return (abs(point["m2"]["kappa3"]) / var ** 1.5,
                abs(point["m2"]["kappa4"]) / var ** 2)

    skew4, kurt4 = standardized(campaign[4])
    skew10, kurt10 = standardized(campaign[10])
    ok = skew10 < skew4 and kurt10 < kurt4
    report("gaussian_convergence", ok,
           f"|k3|/k2^1.5: {skew4:.3f} (N=4) -> {skew10:.3f} (N=10); "
           f"|k4|/k2^2: {kurt4:.3f} -> {kurt10:.3f}")


def test_supplementary_covariance_signal_small_n():
    # Not an acceptance criterion: pins the one regime where the true
    # covariance rises above sampling noise, cov ~ 0.3 * 2^{-3N} at N=3.
    result = run_distribution(ExperimentConfig(
        mode="haar", n_qubits_list=[3], samples_per_point=100_000,
        seed=SEED, workers=WORKERS))
    p = result.summary["points"][0]
    cov = p["cov"]
    se = math.sqrt(p["m2"]["var"] * p["s"]["var"] / p["count"])
    report("supplementary_cov_signal", cov > 3 * se and cov < 2.0 ** -9,
           f"cov(N=3) = {cov:.3e} = {cov / 2.0**-9:.2f} * 2^-9, {cov / se:.1f} sigma")
