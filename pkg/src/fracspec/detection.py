"""
Peak statistics on bifrequency grids and the k-scan coupling detector.

The detection statistic is the peak-to-median contrast over the grid with
the first ``margin`` rows and columns removed. Both numerator and
denominator scale as the cube of the signal amplitude, so the contrast does
not depend on signal level. Grid values below ``ROUNDING_FLOOR`` times the
grid's reference magnitude are treated as zero; without this guard a clean
deterministic grid would divide rounding noise by rounding noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import BifrequencyGrid, EstimatorConfig, Signal, averaged_fractional_bispectrum
from .errors import ConfigurationError

__all__ = [
    "PeakReport",
    "KScanResult",
    "FrequencyRatioEstimate",
    "peak_statistic",
    "k_scan",
    "k_grid",
    "estimate_frequency_ratio",
    "ROUNDING_FLOOR",
    "EPS",
    "DETECTION_THRESHOLD",
]

EPS = 1e-300
ROUNDING_FLOOR = 1e-9
DETECTION_THRESHOLD = 20.0


@dataclass(frozen=True)
class PeakReport:
    value: float
    location: tuple[int, int]
    background: float
    contrast: float

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "location": list(self.location),
            "background": self.background,
            "contrast": self.contrast,
        }


@dataclass(frozen=True)
class KScanResult:
    entries: list[tuple[float, PeakReport]]
    best_k: float
    best_peak: PeakReport

    def to_dict(self, bin_resolution: float | None = None) -> dict:
        d = {
            "best_k": self.best_k,
            "best_peak": self.best_peak.to_dict(),
            "entries": [{"k": k, "peak": pk.to_dict()} for k, pk in self.entries],
        }
        if bin_resolution is not None:
            u, v = self.best_peak.location
            d["bin_resolution"] = bin_resolution
            d["best_peak_hz"] = [u * bin_resolution, v * bin_resolution]
        return d


@dataclass(frozen=True)
class FrequencyRatioEstimate:
    k_star: float
    f1: float
    f2: float
    contrast: float
    detected: bool
    peak: PeakReport


def peak_statistic(grid: BifrequencyGrid, exclude_axes: int = 1) -> PeakReport:
    """Largest ``|F|`` over ``u, v >= exclude_axes`` and its contrast.

    Ties go to the lexicographically smallest ``(u, v)``. The background is
    the median magnitude over the same region. A peak at or below the
    rounding floor reports zero contrast.
    """
    m = int(exclude_axes)
    if m < 0:
        raise ConfigurationError("exclude_axes must be >= 0")
    mag = grid.magnitude[m:, m:]
    if mag.size == 0:
        raise ConfigurationError("search region is empty")
    flat = int(np.argmax(mag))
    u, v = np.unravel_index(flat, mag.shape)
    value = float(mag[u, v])
    background = float(np.median(mag))
    floor = ROUNDING_FLOOR * grid.reference_magnitude
    if value <= floor:
        contrast = 0.0
    else:
        contrast = value / max(background, floor, EPS)
    return PeakReport(value, (int(u) + m, int(v) + m), background, contrast)


def _rational_config(config: EstimatorConfig, k: float) -> EstimatorConfig:
    frac = Fraction(k).limit_denominator(10_000)
    if float(frac) != k:
        raise ConfigurationError(f"k={k} has no small rational form for exact_rational mode")
    return replace(config, rational_k=(frac.numerator, frac.denominator))


def k_scan(
    signal: Signal,
    k_values: Sequence[float],
    config: EstimatorConfig | None = None,
    grid_extent: int | None = None,
    exclude_axes: int = 1,
) -> KScanResult:
    """Evaluate the fractional bispectrum peak contrast at each ``k``.

    The best entry maximizes contrast; ties go to the smaller ``k`` and then
    to the smaller peak location.
    """
    config = config or EstimatorConfig()
    ks = [float(k) for k in k_values]
    if not ks:
        raise ConfigurationError("k_values must not be empty")
    if not all(math.isfinite(k) for k in ks):
        raise ConfigurationError("k_values must be finite")
    entries = []
    for k in ks:
        cfg = _rational_config(config, k) if config.interp == "exact_rational" else config
        grid = averaged_fractional_bispectrum(signal, k, cfg, grid_extent)
        entries.append((k, peak_statistic(grid, exclude_axes)))
    best_k, best_peak = min(entries, key=lambda e: (-e[1].contrast, e[0], e[1].location))
    return KScanResult(entries, best_k, best_peak)


def k_grid(low: float, high: float, step: float) -> list[float]:
    """Arithmetic grid ``low, low + step, ... <= high``, rounded to 12 decimals.

    The rounding makes decimal grid points such as 1.5 come out exact.
    """
    if not (math.isfinite(low) and math.isfinite(high) and math.isfinite(step)):
        raise ConfigurationError("k range must be finite")
    if not low < high:
        raise ConfigurationError("k range needs low < high")
    if not step > 0:
        raise ConfigurationError("k step must be > 0")
    count = int(math.floor((high - low) / step + 1e-9)) + 1
    return [round(low + i * step, 12) for i in range(count)]


def estimate_frequency_ratio(
    signal: Signal,
    k_range: tuple[float, float, float],
    config: EstimatorConfig | None = None,
    grid_extent: int | None = None,
    threshold: float = DETECTION_THRESHOLD,
) -> FrequencyRatioEstimate:
    """Find ``k*`` and the coupled frequency pair from a k-scan.

    The peak's ``u`` coordinate gives ``f1`` in hertz. Reading the second
    frequency as ``f1 (1 + k*)`` assumes the peak lies on the diagonal
    ``u = v``; off-diagonal peaks give ``f2 = (u + k* v)`` in bins instead,
    which is what is returned here.
    """
    result = k_scan(signal, k_grid(*k_range), config, grid_extent)
    u, v = result.best_peak.location
    config = config or EstimatorConfig()
    L = config.segment_length or len(signal)
    res = signal.sample_rate / L
    return FrequencyRatioEstimate(
        k_star=result.best_k,
        f1=u * res,
        f2=(u + result.best_k * v) * res,
        contrast=result.best_peak.contrast,
        detected=result.best_peak.contrast >= threshold,
        peak=result.best_peak,
    )
