"""Streaming, mergeable statistics for the sampling campaigns.

Single-pass central-moment accumulation to fourth order (Welford/Pebay
updates), pairwise merge formulas for parallel reduction, fixed-range
histograms with out-of-range accounting, log2 scaling fits, and the
two-sample Kolmogorov-Smirnov distance.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DataError


class MomentAccumulator:
    """Count, mean and centered power sums m2..m4; optionally a paired
    second observable with a centered cross-product sum.

    `merge` is exact in the same sense as the single-pass update: merging
    two accumulators equals accumulating the concatenated stream up to
    floating-point reordering (tested to 1e-9 relative).
    """

    __slots__ = ("paired", "count", "mean", "m2", "m3", "m4",
                 "mean_y", "m2_y", "m3_y", "m4_y", "co2")

    def __init__(self, paired: bool = False):
        self.paired = paired
        self.count = 0
        self.mean = self.m2 = self.m3 = self.m4 = 0.0
        self.mean_y = self.m2_y = self.m3_y = self.m4_y = 0.0
        self.co2 = 0.0

    def update(self, x: float, y: float | None = None) -> "MomentAccumulator":
        """Push one observation (or one pair)."""
        if not math.isfinite(x):
            raise DataError(f"non-finite observation {x!r}")
        if self.paired:
            if y is None or not math.isfinite(y):
                raise DataError(f"paired accumulator needs a finite y, got {y!r}")
        elif y is not None:
            raise DataError("unpaired accumulator got a y value")
        n1 = self.count
        self.count = n = n1 + 1
        if self.paired:
            self.co2 += (x - self.mean) * (y - self.mean_y) * n1 / n
        self.mean, self.m2, self.m3, self.m4 = self._push(
            x, n, self.mean, self.m2, self.m3, self.m4)
        if self.paired:
            self.mean_y, self.m2_y, self.m3_y, self.m4_y = self._push(
                y, n, self.mean_y, self.m2_y, self.m3_y, self.m4_y)
        return self

    @staticmethod
    def _push(x, n, mean, m2, m3, m4):
        delta = x - mean
        delta_n = delta / n
        delta_n2 = delta_n * delta_n
        term1 = delta * delta_n * (n - 1)
        mean += delta_n
        m4 += (term1 * delta_n2 * (n * n - 3 * n + 3)
               + 6.0 * delta_n2 * m2 - 4.0 * delta_n * m3)
        m3 += term1 * delta_n * (n - 2) - 3.0 * delta_n * m2
        m2 += term1
        return mean, m2, m3, m4

    def update_many(self, xs, ys=None) -> "MomentAccumulator":
        if ys is None:
            for x in np.asarray(xs, dtype=np.float64):
                self.update(float(x))
        else:
            for x, y in zip(np.asarray(xs, np.float64), np.asarray(ys, np.float64), strict=True):
                self.update(float(x), float(y))
        return self

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        """Combined accumulator of both streams; neither input is mutated."""
        if self.paired != other.paired:
            raise DataError("cannot merge paired with unpaired accumulators")
        if self.count == 0:
            return other._copy()
        if other.count == 0:
            return self._copy()
        out = MomentAccumulator(self.paired)
        na, nb = self.count, other.count
        out.count = n = na + nb
        out.mean, out.m2, out.m3, out.m4 = self._combine(
            na, self.mean, self.m2, self.m3, self.m4,
            nb, other.mean, other.m2, other.m3, other.m4)
        if self.paired:
            out.mean_y, out.m2_y, out.m3_y, out.m4_y = self._combine(
                na, self.mean_y, self.m2_y, self.m3_y, self.m4_y,
                nb, other.mean_y, other.m2_y, other.m3_y, other.m4_y)
            dx = other.mean - self.mean
            dy = other.mean_y - self.mean_y
            out.co2 = self.co2 + other.co2 + dx * dy * na * nb / n
        return out

    @staticmethod
    def _combine(na, mean_a, m2a, m3a, m4a, nb, mean_b, m2b, m3b, m4b):
        n = na + nb
        delta = mean_b - mean_a
        d2 = delta * delta
        mean = mean_a + delta * nb / n
        m2 = m2a + m2b + d2 * na * nb / n
        m3 = (m3a + m3b + delta * d2 * na * nb * (na - nb) / (n * n)
              + 3.0 * delta * (na * m2b - nb * m2a) / n)
        m4 = (m4a + m4b
              + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n ** 3)
              + 6.0 * d2 * (na * na * m2b + nb * nb * m2a) / (n * n)
              + 4.0 * delta * (na * m3b - nb * m3a) / n)
        return mean, m2, m3, m4

    def _copy(self) -> "MomentAccumulator":
        out = MomentAccumulator(self.paired)
        for name in self.__slots__:
            setattr(out, name, getattr(self, name))
        return out

    @property
    def variance(self) -> float:
        """Sample (n-1) variance of x."""
        if self.count < 2:
            raise DataError("variance needs at least 2 observations")
        return self.m2 / (self.count - 1)

    @property
    def variance_y(self) -> float:
        if not self.paired:
            raise DataError("accumulator is not paired")
        if self.count < 2:
            raise DataError("variance needs at least 2 observations")
        return self.m2_y / (self.count - 1)

    @property
    def covariance(self) -> float:
        """Sample (n-1) covariance of the pair."""
        if not self.paired:
            raise DataError("accumulator is not paired")
        if self.count < 2:
            raise DataError("covariance needs at least 2 observations")
        return self.co2 / (self.count - 1)


def cumulants(acc: MomentAccumulator) -> tuple[float, float, float, float]:
    """(kappa1..kappa4) of the x stream.

    kappa2 is the (n-1) sample variance; kappa3 and kappa4 use
    bias-uncorrected population central moments (mu3, mu4 - 3 mu2^2).
    """
    if acc.count < 4:
        raise DataError(f"cumulants need >= 4 observations, have {acc.count}")
    n = acc.count
    mu2 = acc.m2 / n
    return (acc.mean, acc.m2 / (n - 1), acc.m3 / n, acc.m4 / n - 3.0 * mu2 * mu2)


def cumulants_y(acc: MomentAccumulator) -> tuple[float, float, float, float]:
    """(kappa1..kappa4) of the paired y stream."""
    if not acc.paired:
        raise DataError("accumulator is not paired")
    if acc.count < 4:
        raise DataError(f"cumulants need >= 4 observations, have {acc.count}")
    n = acc.count
    mu2 = acc.m2_y / n
    return (acc.mean_y, acc.m2_y / (n - 1), acc.m3_y / n, acc.m4_y / n - 3.0 * mu2 * mu2)


def correlation(acc: MomentAccumulator) -> float:
    """Pearson r of the pair, in [-1, 1]."""
    if not acc.paired:
        raise DataError("accumulator is not paired")
    if acc.count < 2:
        raise DataError("correlation needs at least 2 observations")
    if acc.m2 <= 0.0 or acc.m2_y <= 0.0:
        raise DataError("correlation undefined for zero variance")
    r = acc.co2 / math.sqrt(acc.m2 * acc.m2_y)
    return max(-1.0, min(1.0, r))


class Histogram1D:
    """Fixed uniform binning on [lo, hi]; observations outside are counted
    in `out_of_range` so totals are conserved exactly."""

    def __init__(self, lo: float, hi: float, n_bins: int = 101):
        if not (hi > lo) or n_bins < 1:
            raise DataError(f"bad histogram range [{lo}, {hi}] x {n_bins}")
        self.lo = float(lo)
        self.hi = float(hi)
        self.n_bins = int(n_bins)
        self.counts = np.zeros(n_bins, dtype=np.int64)
        self.out_of_range = 0

    @property
    def total(self) -> int:
        return int(self.counts.sum()) + self.out_of_range

    def update(self, x: float) -> None:
        if self.lo <= x <= self.hi:
            idx = min(int((x - self.lo) / (self.hi - self.lo) * self.n_bins),
                      self.n_bins - 1)
            self.counts[idx] += 1
        else:
            self.out_of_range += 1

    def update_many(self, values) -> None:
        values = np.asarray(values, dtype=np.float64)
        hist, _ = np.histogram(values, bins=self.n_bins, range=(self.lo, self.hi))
        self.counts += hist
        self.out_of_range += int(values.size - hist.sum())

    def bin_edges(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n_bins + 1)

    def densities(self) -> np.ndarray:
        """counts / (total * bin_width); integrates to 1 when nothing fell outside."""
        if self.total == 0:
            return np.zeros(self.n_bins)
        width = (self.hi - self.lo) / self.n_bins
        return self.counts / (self.total * width)

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "n_bins": self.n_bins,
                "counts": self.counts.tolist(), "out_of_range": self.out_of_range}


class Histogram2D:
    """Joint fixed-range histogram with the same conservation contract."""

    def __init__(self, x_lo, x_hi, y_lo, y_hi, n_bins_x: int = 101, n_bins_y: int = 101):
        if not (x_hi > x_lo and y_hi > y_lo) or n_bins_x < 1 or n_bins_y < 1:
            raise DataError("bad 2D histogram ranges")
        self.x_lo, self.x_hi = float(x_lo), float(x_hi)
        self.y_lo, self.y_hi = float(y_lo), float(y_hi)
        self.n_bins_x, self.n_bins_y = int(n_bins_x), int(n_bins_y)
        self.counts = np.zeros((n_bins_x, n_bins_y), dtype=np.int64)
        self.out_of_range = 0

    @property
    def total(self) -> int:
        return int(self.counts.sum()) + self.out_of_range

    def update(self, x: float, y: float) -> None:
        if self.x_lo <= x <= self.x_hi and self.y_lo <= y <= self.y_hi:
            ix = min(int((x - self.x_lo) / (self.x_hi - self.x_lo) * self.n_bins_x),
                     self.n_bins_x - 1)
            iy = min(int((y - self.y_lo) / (self.y_hi - self.y_lo) * self.n_bins_y),
                     self.n_bins_y - 1)
            self.counts[ix, iy] += 1
        else:
            self.out_of_range += 1

    def update_many(self, xs, ys) -> None:
        xs = np.asarray(xs, dtype=np.float64)
        ys = np.asarray(ys, dtype=np.float64)
        hist, _, _ = np.histogram2d(
            xs, ys, bins=(self.n_bins_x, self.n_bins_y),
            range=((self.x_lo, self.x_hi), (self.y_lo, self.y_hi)))
        self.counts += hist.astype(np.int64)
        self.out_of_range += int(xs.size - hist.sum())

    def to_dict(self) -> dict:
        return {"x_lo": self.x_lo, "x_hi": self.x_hi,
                "y_lo": self.y_lo, "y_hi": self.y_hi,
                "n_bins_x": self.n_bins_x, "n_bins_y": self.n_bins_y,
                "counts": self.counts.tolist(), "out_of_range": self.out_of_range}


def fit_log2_slope(points) -> tuple[float, float, float]:
    """Least squares of log2(v) against N; returns (slope, intercept, max residual).

    The slope is the base-2 exponent per qubit, so v = c 4^{-N} fits -2.
    """
    pts = list(points)
    if len(pts) < 3:
        raise DataError(f"scaling fit needs >= 3 points, got {len(pts)}")
    ns = np.array([p[0] for p in pts], dtype=np.float64)
    vs = np.array([p[1] for p in pts], dtype=np.float64)
    if np.any(vs <= 0.0) or not np.all(np.isfinite(vs)):
        raise DataError("scaling fit needs strictly positive finite values")
    logs = np.log2(vs)
    slope, intercept = np.polyfit(ns, logs, 1)
    residuals = logs - (slope * ns + intercept)
    return float(slope), float(intercept), float(np.abs(residuals).max())


def ks_distance(sample_a, sample_b) -> float:
    """Sup-norm distance between the two empirical CDFs, in [0, 1]."""
    a = np.sort(np.asarray(sample_a, dtype=np.float64))
    b = np.sort(np.asarray(sample_b, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise DataError("KS distance needs non-empty samples")
    grid = np.concatenate((a, b))
    cdf_a = np.searchsorted(a, grid, side="right") / a.size
    cdf_b = np.searchsorted(b, grid, side="right") / b.size
    return float(np.abs(cdf_a - cdf_b).max())
