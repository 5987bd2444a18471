"""The seven figure jobs.

Every number drawn here comes from the summary files: histogram payloads
are turned into densities by pure arithmetic, Gaussian overlays use the
stored cumulants, and scaling lines use the stored fit coefficients.
Rendering is deterministic (fixed style, no timestamps, fixed svg salt).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from . import io

_STYLE = {
    "figure.dpi": 120,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.25,
    "svg.hashsalt": "haarmagic-figures",
    "legend.fontsize": 8,
}

_COLORS = plt.cm.viridis


@dataclass(frozen=True)
class FigureJob:
    figure_id: str
    input_path: str | Path
    output_path: str | Path
    fmt: str = "png"


def hist_density(payload: dict) -> tuple[np.ndarray, np.ndarray]:
    """Bin centers and normalized density from a histogram payload."""
    lo, hi, n_bins = payload["lo"], payload["hi"], payload["n_bins"]
    counts = np.asarray(payload["counts"], dtype=np.float64)
    total = counts.sum() + payload.get("out_of_range", 0)
    width = (hi - lo) / n_bins
    centers = lo + (np.arange(n_bins) + 0.5) * width
    density = counts / (total * width) if total else counts
    return centers, density


def _gaussian(x: np.ndarray, mean: float, var: float) -> np.ndarray:
    return np.exp(-0.5 * (x - mean) ** 2 / var) / math.sqrt(2 * math.pi * var)


def _save(fig, job: FigureJob) -> None:
    out = Path(job.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    metadata = {"Date": None} if job.fmt == "svg" else None
    fig.savefig(out, format=job.fmt, metadata=metadata)
    plt.close(fig)


def _n_color(i, total):
    return _COLORS(0.1 + 0.8 * i / max(1, total - 1))


def _render_f1(summary: dict, job: FigureJob) -> dict:
    depths = io.points_by_depth(summary)
    table = {row["depth"]: row["ks"] for row in io.ks_table(summary)}
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    swept = sorted(d for d in depths if d >= 0)
    for i, depth in enumerate(swept):
        centers, density = hist_density(depths[depth]["m2_hist"])
        ax.plot(centers, density, color=_n_color(i, len(swept)),
                label=f"D={depth} (KS {table[depth]:.3f})")
    centers, density = hist_density(depths[-1]["m2_hist"])
    ax.plot(centers, density, "k--", label="Haar")
    n = depths[-1]["n_qubits"]
    ax.set_xlabel("$M_2$")
    ax.set_ylabel(f"$P_{{{n}}}(M_2)$")
    ax.legend(ncol=2)
    _save(fig, job)
    return {"depths": swept, "ks": [table[d] for d in swept]}


def _marginal_distribution(summary, job, hist_key, stat_key, xlabel, ylabel):
    points = io.points_by_qubits(summary)
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    ns = sorted(points)
    for i, n in enumerate(ns):
        centers, density = hist_density(points[n][hist_key])
        ax.plot(centers, density, color=_n_color(i, len(ns)), label=f"N={n}")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(ncol=2)
    _save(fig, job)
    return {"n_qubits": ns}


def _render_f2(summary, job):
    return _marginal_distribution(summary, job, "m2_hist", "m2", "$M_2$", "$P_N(M_2)$")


def _render_f4(summary, job):
    return _marginal_distribution(summary, job, "s_hist", "s", "$S$", "$P_N(S)$")


def _semilog_centered(summary, job, hist_key, stat_key, xlabel, ylabel):
    """Density around kappa_1 on a log scale with the N(k1, k2) overlay."""
    points = io.points_by_qubits(summary)
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    ns = sorted(points)
    series = {}
    for i, n in enumerate(ns):
        stats = points[n][stat_key]
        mean, var = stats["mean"], stats["var"]
        if var is None or var <= 0:
            raise io.MissingSeries(f"point N={n} has no variance for the overlay")
        centers, density = hist_density(points[n][hist_key])
        keep = density > 0
        ax.semilogy(centers[keep] - mean, density[keep], ".",
                    color=_n_color(i, len(ns)), label=f"N={n}")
        span = 5.0 * math.sqrt(var)
        grid = np.linspace(mean - span, mean + span, 400)
        overlay_grid = _gaussian(grid, mean, var)
        ax.semilogy(grid - mean, overlay_grid, "k--", lw=0.8)
        series[n] = {"centers": (centers - mean).tolist(),
                     "density": density.tolist(),
                     "overlay": _gaussian(centers, mean, var).tolist()}
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(ncol=2)
    _save(fig, job)
    return {"n_qubits": ns, "series": series}


def _render_f3(summary, job):
    return _semilog_centered(summary, job, "m2_hist", "m2",
                             "$M_2 - \\kappa_1$", "$P_N(M_2)$")


def _render_f5(summary, job):
    return _semilog_centered(summary, job, "s_hist", "s",
                             "$S - \\kappa_1$", "$P_N(S)$")


def _render_f6(summary, job):
    points = io.points_by_qubits(summary)
    ns = sorted(points)
    fig, axes = plt.subplots(1, len(ns), figsize=(2.1 * len(ns), 2.4),
                             squeeze=False)
    for ax, n in zip(axes[0], ns):
        h = points[n]["joint_hist"]
        counts = np.asarray(h["counts"], dtype=np.float64)
        total = counts.sum() + h.get("out_of_range", 0)
        ax.imshow(counts.T / max(total, 1), origin="lower", aspect="auto",
                  extent=(h["x_lo"], h["x_hi"], h["y_lo"], h["y_hi"]),
                  cmap="magma")
        ax.set_title(f"N={n}")
        ax.set_xlabel("$M_2$")
    axes[0][0].set_ylabel("$S$")
    fig.tight_layout()
    _save(fig, job)
    return {"n_qubits": ns}


def _render_f7(summary, job):
    points = io.points_by_qubits(summary)
    fits = io.scaling_fits(summary)
    ns = np.array(sorted(points))
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    drawn_slopes = {}
    styles = {"var_m2": ("o", "crimson", "var($M_2$)"),
              "var_s": ("^", "seagreen", "var($S$)"),
              "abs_cov": ("s", "magenta", "|cov($M_2,S$)|")}
    for key, (marker, color, label) in styles.items():
        if key == "var_m2":
            vals = [points[n]["m2"]["var"] for n in ns]
        elif key == "var_s":
            vals = [points[n]["s"]["var"] for n in ns]
        else:
            vals = [abs(points[n]["cov"]) for n in ns]
        ax.plot(ns, vals, marker, color=color, label=label)
        fit = fits[key]
        line = 2.0 ** (fit["intercept"] + fit["slope"] * ns)
        ax.plot(ns, line, "--", color=color,
                label=f"{label} slope {fit['slope']:.3f}")
        drawn_slopes[key] = fit["slope"]
    ax.set_yscale("log", base=2)
    ax.set_xlabel("$N$")
    ax.set_ylabel("variance / covariance")
    ax.legend(ncol=1)
    _save(fig, job)
    return {"slopes": drawn_slopes}


_RENDERERS = {
    "f1_convergence": _render_f1,
    "f2_m2_dist": _render_f2,
    "f3_m2_semilog": _render_f3,
    "f4_s_dist": _render_f4,
    "f5_s_semilog": _render_f5,
    "f6_joint": _render_f6,
    "f7_scaling": _render_f7,
}

FIGURE_IDS = tuple(_RENDERERS)


def render(job: FigureJob) -> dict:
    """Render one figure job; returns metadata about what was drawn."""
    if job.figure_id not in _RENDERERS:
        raise ValueError(f"unknown figure_id {job.figure_id!r}")
    if job.fmt not in ("png", "svg"):
        raise ValueError(f"format must be png or svg, got {job.fmt!r}")
    summary = io.load_summary(job.input_path)
    with plt.rc_context(_STYLE):
        return _RENDERERS[job.figure_id](summary, job)
