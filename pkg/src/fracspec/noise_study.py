"""
Monte Carlo studies of how segment averaging suppresses Gaussian noise in
the fractional bispectrum.

Trial ``i`` at the ``j``-th segment count draws its noise from
``NoiseSpec(sigma, base_seed, stream=(i, j))``. The noise shape therefore
depends only on ``(base_seed, i, j)``; changing ``sigma`` rescales the same
draws, and results do not depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import EstimatorConfig, averaged_fractional_bispectrum
from .detection import peak_statistic
from .errors import ConfigurationError
from .signals import NoiseSpec, ToneSpec, add, gaussian_noise, multi_tone

__all__ = [
    "StudyConfig",
    "SuppressionPoint",
    "SuppressionCurve",
    "gaussian_null_study",
    "contaminated_signal_study",
    "default_contaminated_config",
]


@dataclass(frozen=True)
class StudyConfig:
    """Parameters of a suppression study.

    Each record is ``M * segment_length`` samples long and is cut into ``M``
    non-overlapping segments for every ``M`` in ``segment_counts``.
    """

    base_seed: int = 0
    trials: int = 32
    segment_counts: tuple[int, ...] = (4, 16, 64)
    sigma: float = 1.0
    k: float = 1.5
    signal: tuple[ToneSpec, ...] | None = None
    grid_extent: int | None = None
    segment_length: int = 64
    sample_rate: float = 64.0
    window: str = "rectangular"
    interp: str = "linear"
    exclude_axes: int = 1

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 1:
            raise ConfigurationError("trials must be a positive integer")
        counts = tuple(int(m) for m in self.segment_counts)
        if not counts or any(m < 1 for m in counts):
            raise ConfigurationError("segment_counts must be positive integers")
        if any(b <= a for a, b in zip(counts, counts[1:])):
            raise ConfigurationError("segment_counts must be strictly increasing")
        object.__setattr__(self, "segment_counts", counts)
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ConfigurationError("sigma must be finite and >= 0")
        if self.signal is not None:
            object.__setattr__(self, "signal", tuple(self.signal))
        # validates segment_length, window and interp up front
        self.estimator()

    def estimator(self) -> EstimatorConfig:
        return EstimatorConfig(window=self.window, segment_length=self.segment_length, interp=self.interp)


@dataclass(frozen=True)
class SuppressionPoint:
    segments: int
    mean_abs: float
    peak_contrast: float


@dataclass(frozen=True)
class SuppressionCurve:
    points: list[SuppressionPoint] = field(default_factory=list)
    slope_estimate: float | None = None

    def to_dict(self) -> dict:
        return {
            "points": [
                {"segments": p.segments, "mean_abs": p.mean_abs, "peak_contrast": p.peak_contrast}
                for p in self.points
            ],
            "slope_estimate": self.slope_estimate,
        }


def default_contaminated_config(**overrides) -> StudyConfig:
    """Two unit tones on bins 8 and 20 of each 64-sample segment, k = 1.5, sigma = 1."""
    params = dict(
        signal=(ToneSpec(8.0), ToneSpec(20.0)),
        k=1.5,
        sigma=1.0,
        segment_length=64,
        sample_rate=64.0,
    )
    params.update(overrides)
    return StudyConfig(**params)


def _loglog_slope(counts, values) -> float | None:
    if len(counts) < 2 or not all(v > 0 for v in values):
        return None
    slope, _ = np.polyfit(np.log(counts), np.log(values), 1)
    return float(slope)


def _run(config: StudyConfig) -> SuppressionCurve:
    est = config.estimator()
    m0 = config.exclude_axes
    points = []
    for j, M in enumerate(config.segment_counts):
        n = M * config.segment_length
        base = multi_tone(config.signal, n, config.sample_rate) if config.signal else None
        abs_sum = 0.0
        contrast_sum = 0.0
        for i in range(config.trials):
            noise = gaussian_noise(NoiseSpec(config.sigma, config.base_seed, (i, j)), n, config.sample_rate)
            record = add(base, noise) if base is not None else noise
            grid = averaged_fractional_bispectrum(record, config.k, est, config.grid_extent)
            abs_sum += float(np.mean(grid.magnitude[m0:, m0:]))
            contrast_sum += peak_statistic(grid, m0).contrast
        points.append(SuppressionPoint(M, abs_sum / config.trials, contrast_sum / config.trials))
    slope = _loglog_slope([p.segments for p in points], [p.mean_abs for p in points])
    return SuppressionCurve(points, slope)


def gaussian_null_study(config: StudyConfig) -> SuppressionCurve:
    """Grid-mean ``|F|`` of pure noise versus the number of averaged segments.

    ``slope_estimate`` is the least-squares slope of ``log(mean_abs)`` against
    ``log(M)``; averaging a zero-mean statistic predicts about -1/2. It is
    ``None`` when any ``mean_abs`` is zero (e.g. ``sigma = 0``).
    """
    if config.signal:
        raise ConfigurationError("the null study takes pure noise; drop the signal component")
    return _run(config)


def contaminated_signal_study(config: StudyConfig) -> SuppressionCurve:
    """Peak contrast of tones plus noise versus the number of averaged segments.

    ``peak_contrast`` and ``mean_abs`` are trial means; ``slope_estimate``
    fits ``mean_abs`` as in :func:`gaussian_null_study`.
    """
    if not config.signal:
        raise ConfigurationError("the contaminated study needs a tone component")
    return _run(config)
