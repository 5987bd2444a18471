"""Config-driven sampling campaigns over qubit counts, circuit families
and depths, with deterministic parallel RNG streams and CSV/JSON outputs.

Determinism contract: every sample's random stream is a pure function of
(seed, point_id, sample_index), and records are reduced in ascending
(point, sample) order, so outputs are byte-identical for any worker count.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .entanglement import CutSpec, entanglement_entropy
from .errors import CapabilityError, ConfigurationError, RunError
from .magic import m2_upper_bound, sre_fast
from .states import MAX_QUBITS, BrickwallSpec, sample_brickwall_state, sample_haar_state
from .stats import (Histogram1D, Histogram2D, MomentAccumulator, correlation,
                    cumulants, cumulants_y, fit_log2_slope, ks_distance)

SCHEMA_VERSION = 1

CSV_FIELDS = ("schema_version", "experiment_id", "mode", "n_qubits", "depth",
              "sample_index", "m2_bits", "s_bits")

HIST_BINS = 101


def default_samples(n_qubits: int) -> int:
    """Per-point default sample count; exact magic is O(N 4^N) per state."""
    return 2000 if n_qubits <= 10 else 500


@dataclass
class ExperimentConfig:
    mode: str = "haar"
    n_qubits_list: list[int] = field(default_factory=list)
    depth_list: list[int] = field(default_factory=list)
    samples_per_point: int | None = None
    seed: int = 0
    cut: int | None = None
    out_dir: str | Path | None = None
    workers: int = 1
    experiment_id: str = ""

    def __post_init__(self):
        if not self.experiment_id:
            self.experiment_id = f"{self.mode}-seed{self.seed}"

    def validate(self) -> None:
        if self.mode not in ("haar", "brickwall"):
            raise ConfigurationError(f"mode must be haar or brickwall, got {self.mode!r}")
        if "," in self.experiment_id or "\n" in self.experiment_id:
            raise ConfigurationError("experiment_id must not contain commas or newlines")
        if not self.n_qubits_list:
            raise ConfigurationError("n_qubits_list is empty")
        for n in self.n_qubits_list:
            if n > MAX_QUBITS:
                raise CapabilityError(
                    f"N={n} exceeds the exact-computation limit N <= {MAX_QUBITS}")
            if n < 2:
                raise ConfigurationError(
                    f"N={n}: campaigns record entanglement and need N >= 2")
        if self.mode == "brickwall":
            if not self.depth_list:
                raise ConfigurationError("brickwall mode needs a depth list")
            for d in self.depth_list:
                if d < 0:
                    raise ConfigurationError(f"depth must be >= 0, got {d}")
        if self.samples_per_point is not None and self.samples_per_point < 1:
            raise ConfigurationError(
                f"samples_per_point must be >= 1, got {self.samples_per_point}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got {self.workers}")
        for n in self.n_qubits_list:
            if self.cut is not None and not 1 <= self.cut <= n - 1:
                raise ConfigurationError(f"cut {self.cut} invalid for N={n}")

    def samples_for(self, n_qubits: int) -> int:
        return self.samples_per_point if self.samples_per_point is not None \
            else default_samples(n_qubits)

    def cut_for(self, n_qubits: int) -> int:
        return self.cut if self.cut is not None else n_qubits // 2


@dataclass(frozen=True)
class SampleRecord:
    experiment_id: str
    mode: str
    n_qubits: int
    depth: int
    sample_index: int
    m2: float
    s: float


@dataclass
class RunResult:
    records: list[SampleRecord]
    summary: dict
    records_path: Path | None = None
    summary_path: Path | None = None


def rng_stream_for(seed: int, point_id: int, sample_index: int) -> np.random.Generator:
    """Independent, reproducible stream for one work item.

    Philox is counter-based: the key carries the campaign seed and the two
    high counter words carry (point_id, sample_index), so streams are
    separated by 2^128 draws and identical for any worker scheduling.
    """
    bitgen = np.random.Philox(key=seed & ((1 << 64) - 1),
                              counter=[0, 0, sample_index, point_id])
    return np.random.Generator(bitgen)


@dataclass(frozen=True)
class _Point:
    point_id: int
    n_qubits: int
    depth: int  # -1 means Haar


def _compute_chunk(args) -> list[tuple[int, float, float]]:
    seed, point_id, n_qubits, depth, cut_na, start, stop = args
    out = []
    for i in range(start, stop):
        rng = rng_stream_for(seed, point_id, i)
        if depth < 0:
            state = sample_haar_state(n_qubits, rng)
        else:
            state = sample_brickwall_state(BrickwallSpec(n_qubits, depth), rng)
        m2 = sre_fast(state).m2
        s = entanglement_entropy(state, CutSpec(cut_na)).s
        out.append((i, m2, s))
    return out


def _run_points(config: ExperimentConfig, points: list[_Point]) -> dict[int, list[SampleRecord]]:
    """Compute all samples; returns records per point, index-sorted."""
    tasks = []
    for pt in points:
        n_samples = config.samples_for(pt.n_qubits)
        cut_na = config.cut_for(pt.n_qubits)
        chunk = max(1, min(256, math.ceil(n_samples / (config.workers * 8))))
        for start in range(0, n_samples, chunk):
            tasks.append((config.seed, pt.point_id, pt.n_qubits, pt.depth,
                          cut_na, start, min(start + chunk, n_samples)))
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            chunk_results = list(pool.map(_compute_chunk, tasks))
    else:
        chunk_results = [_compute_chunk(t) for t in tasks]

    by_point: dict[int, list[SampleRecord]] = {pt.point_id: [] for pt in points}
    point_by_id = {pt.point_id: pt for pt in points}
    for task, rows in zip(tasks, chunk_results):
        pt = point_by_id[task[1]]
        for i, m2, s in rows:
            _check_bounds(pt, config.cut_for(pt.n_qubits), m2, s)
            by_point[pt.point_id].append(SampleRecord(
                config.experiment_id, config.mode, pt.n_qubits, pt.depth, i, m2, s))
    for rows in by_point.values():
        rows.sort(key=lambda r: r.sample_index)
    return by_point


def _check_bounds(pt: _Point, cut_na: int, m2: float, s: float) -> None:
    s_max = min(cut_na, pt.n_qubits - cut_na)
    if not -1e-9 <= m2 <= m2_upper_bound(pt.n_qubits) + 1e-9:
        raise RunError(f"sample violates the M2 bound: {m2!r} at N={pt.n_qubits}")
    if not -1e-9 <= s <= s_max + 1e-9:
        raise RunError(f"sample violates the S bound: {s!r} at N={pt.n_qubits}")


def summarize_point(point: _Point, cut_na: int, records: list[SampleRecord]) -> dict:
    """Moments, cumulants, correlation and the three histogram payloads.

    Statistics that need more observations than the point has (variance
    below 2, higher cumulants below 4) are emitted as null.
    """
    acc = MomentAccumulator(paired=True)
    for r in records:
        acc.update(r.m2, r.s)
    if acc.count >= 4:
        k_m2, k_s = cumulants(acc), cumulants_y(acc)
    else:
        var = acc.variance if acc.count >= 2 else None
        var_y = acc.variance_y if acc.count >= 2 else None
        k_m2 = (acc.mean, var, None, None)
        k_s = (acc.mean_y, var_y, None, None)

    m2_hist = Histogram1D(0.0, m2_upper_bound(point.n_qubits), HIST_BINS)
    s_hist = Histogram1D(0.0, float(max(1, min(cut_na, point.n_qubits - cut_na))), HIST_BINS)
    m2_vals = np.array([r.m2 for r in records])
    s_vals = np.array([r.s for r in records])
    m2_hist.update_many(m2_vals)
    s_hist.update_many(s_vals)

    # Joint ranges hug the peak (mean +- 5 sigma); the marginals are
    # exponentially narrow so fixed full-range binning would be all empty.
    def half_width(var):
        return max(5.0 * math.sqrt(max(var or 0.0, 0.0)), 1e-9)

    hx = half_width(k_m2[1])
    hy = half_width(k_s[1])
    joint = Histogram2D(acc.mean - hx, acc.mean + hx,
                        acc.mean_y - hy, acc.mean_y + hy, HIST_BINS, HIST_BINS)
    joint.update_many(m2_vals, s_vals)

    try:
        pearson = correlation(acc)
    except Exception:
        pearson = None  # degenerate points (e.g. depth 0) have zero variance
    cov = acc.covariance if acc.count >= 2 else None
    return {
        "point_id": point.point_id,
        "n_qubits": point.n_qubits,
        "depth": point.depth,
        "cut": cut_na,
        "count": acc.count,
        "m2": {"mean": k_m2[0], "var": k_m2[1], "kappa3": k_m2[2], "kappa4": k_m2[3]},
        "s": {"mean": k_s[0], "var": k_s[1], "kappa3": k_s[2], "kappa4": k_s[3]},
        "cov": cov,
        "pearson_r": pearson,
        "m2_hist": m2_hist.to_dict(),
        "s_hist": s_hist.to_dict(),
        "joint_hist": joint.to_dict(),
    }


def _summary_header(config: ExperimentConfig) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "experiment_id": config.experiment_id,
        "mode": config.mode,
        "seed": config.seed,
    }


def _finalize(config: ExperimentConfig, points: list[_Point],
              by_point: dict[int, list[SampleRecord]], summary: dict) -> RunResult:
    records = [r for pt in points for r in by_point[pt.point_id]]
    result = RunResult(records=records, summary=summary)
    if config.out_dir is not None:
        out = Path(config.out_dir)
        try:
            out.mkdir(parents=True, exist_ok=True)
            result.records_path = out / "records.csv"
            result.summary_path = out / "summary.json"
            write_records_csv(result.records_path, records)
            write_summary_json(result.summary_path, summary)
        except OSError as e:
            raise RunError(f"I/O failure, outputs under {out} may be partial: {e}") from e
    return result


def run_distribution(config: ExperimentConfig) -> RunResult:
    """Sample (M2, S) per qubit count (and depth, for brick-wall mode)."""
    config.validate()
    points = []
    pid = 0
    for n in config.n_qubits_list:
        for depth in (config.depth_list if config.mode == "brickwall" else [-1]):
            points.append(_Point(pid, n, depth))
            pid += 1
    by_point = _run_points(config, points)
    summary = _summary_header(config)
    summary["points"] = [summarize_point(pt, config.cut_for(pt.n_qubits), by_point[pt.point_id])
                         for pt in points]
    return _finalize(config, points, by_point, summary)


def run_brickwall_sweep(config: ExperimentConfig) -> RunResult:
    """Per-depth M2 distribution vs an equal-size Haar reference (KS distance)."""
    if config.mode != "brickwall":
        raise ConfigurationError("brick-wall sweep requires mode=brickwall")
    config.validate()
    points = []
    pid = 0
    for n in config.n_qubits_list:
        for depth in config.depth_list:
            points.append(_Point(pid, n, depth))
            pid += 1
        points.append(_Point(pid, n, -1))  # Haar reference
        pid += 1
    by_point = _run_points(config, points)

    ks_table = []
    ref_m2 = {pt.n_qubits: np.array([r.m2 for r in by_point[pt.point_id]])
              for pt in points if pt.depth < 0}
    for pt in points:
        if pt.depth < 0:
            continue
        m2 = np.array([r.m2 for r in by_point[pt.point_id]])
        ks_table.append({"n_qubits": pt.n_qubits, "depth": pt.depth,
                         "ks": ks_distance(m2, ref_m2[pt.n_qubits])})
    summary = _summary_header(config)
    summary["points"] = [summarize_point(pt, config.cut_for(pt.n_qubits), by_point[pt.point_id])
                         for pt in points]
    summary["ks_table"] = ks_table
    return _finalize(config, points, by_point, summary)


def run_scaling(config: ExperimentConfig) -> RunResult:
    """Variance/covariance decay exponents across the N sweep."""
    config.validate()
    if len(config.n_qubits_list) < 2:
        raise ConfigurationError("scaling needs at least 2 qubit counts")
    result = run_distribution(config)
    pts = result.summary["points"]
    fits = {}
    if len(pts) >= 3:
        for key, series in (
            ("var_m2", [(p["n_qubits"], p["m2"]["var"]) for p in pts]),
            ("var_s", [(p["n_qubits"], p["s"]["var"]) for p in pts]),
            ("abs_cov", [(p["n_qubits"], abs(p["cov"])) for p in pts]),
        ):
            slope, intercept, resid = fit_log2_slope(series)
            fits[key] = {"slope": slope, "intercept": intercept, "max_residual": resid}
        fits["geometric_mean_slope"] = 0.5 * (fits["var_m2"]["slope"] + fits["var_s"]["slope"])
    result.summary["fits"] = fits
    if result.summary_path is not None:
        write_summary_json(result.summary_path, result.summary)
    return result


def write_records_csv(path: Path, records: list[SampleRecord]) -> None:
    """UTF-8, '.' decimals, '\\n' line ends; floats use shortest round-trip repr."""
    lines = [",".join(CSV_FIELDS)]
    for r in records:
        lines.append(f"{SCHEMA_VERSION},{r.experiment_id},{r.mode},{r.n_qubits},"
                     f"{r.depth},{r.sample_index},{r.m2!r},{r.s!r}")
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def read_records_csv(path: Path) -> list[SampleRecord]:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.strip().split("\n")
    if lines[0] != ",".join(CSV_FIELDS):
        raise RunError(f"unexpected records header in {path}: {lines[0]!r}")
    out = []
    for line in lines[1:]:
        ver, exp, mode, n, depth, idx, m2, s = line.split(",")
        if int(ver) != SCHEMA_VERSION:
            raise RunError(f"records schema_version {ver} unsupported")
        out.append(SampleRecord(exp, mode, int(n), int(depth), int(idx),
                                float(m2), float(s)))
    return out


def write_summary_json(path: Path, summary: dict) -> None:
    Path(path).write_bytes((json.dumps(summary, indent=2) + "\n").encode("utf-8"))
