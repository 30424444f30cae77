"""
Time-domain triple correlation and its fractional generalization.

All lags are circular (mod N). With circular indexing the 2D DFT of the lag
grid equals the full frequency-domain triple-product grid exactly, rather
than only in the long-record limit. Users expecting linear (zero-padded)
lags should pad the signal themselves.

The fractional form needs ``x(tau + k t)`` at non-integer times. For
``k = p/q`` those times lie on a grid of spacing ``1/q``, where the
band-limited (trigonometric) interpolant of the signal is obtained exactly by
zero-padding its spectrum to length ``q N``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Signal, _check_rational, exact_rational_full
from .errors import ConfigurationError, InvalidInputError

__all__ = [
    "CumulantGrid",
    "triple_correlation",
    "band_limited_upsample",
    "fractional_triple_correlation",
    "cumulant_grid",
    "dft2_matrix",
    "verify_fourier_pair",
    "MAX_VERIFY_LENGTH",
]

MAX_VERIFY_LENGTH = 128


@dataclass(frozen=True, eq=False)
class CumulantGrid:
    """Real lag grid ``values[rho, tau]``; ``lag_resolution`` is seconds per lag."""

    values: np.ndarray
    k: float
    lag_resolution: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or not np.all(np.isfinite(v)):
            raise InvalidInputError("cumulant grid must be a finite 2D array")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def triple_correlation(signal: Signal, rho: int, tau: int) -> float:
    """Circular third-order lag product ``sum_t x[t+rho] x[t+tau] x[t]``."""
    x = signal.samples
    t = np.arange(x.size)
    return float(np.sum(x[(t + rho) % x.size] * x[(t + tau) % x.size] * x))


def band_limited_upsample(x: np.ndarray, q: int) -> np.ndarray:
    """Trigonometric interpolant of the periodic sequence ``x`` at times ``j/q``.

    Returns ``q * len(x)`` real samples; every ``q``-th one reproduces ``x``.
    For even lengths the Nyquist coefficient is split evenly between the
    positive and negative frequency so the interpolant stays real.
    """
    x = np.asarray(x, dtype=float)
    if q == 1:
        return x.copy()
    n = x.size
    X = np.fft.fft(x)
    Y = np.zeros(q * n, dtype=complex)
    half = n // 2
    if n % 2 == 0:
        Y[:half] = X[:half]
        Y[half] = 0.5 * X[half]
        Y[q * n - half] = 0.5 * X[half]
    else:
        Y[:half + 1] = X[:half + 1]
    neg = X[half + 1:]
    if neg.size:
        Y[q * n - neg.size:] = neg
    y = np.fft.ifft(Y) * q
    return y.real


def fractional_triple_correlation(signal: Signal, rho: int, tau: int, p: int, q: int) -> float:
    """``sum_t x[t+rho] x_c(tau + (p/q) t) x[t]`` with band-limited ``x_c``.

    For ``q = 1`` this is an integer-index sum and equals
    :func:`triple_correlation` exactly when ``p = 1``.
    """
    p, q = _check_rational(p, q)
    x = signal.samples
    n = x.size
    t = np.arange(n)
    xu = band_limited_upsample(x, q)
    return float(np.sum(x[(t + rho) % n] * xu[(q * tau + p * t) % (q * n)] * x))


def cumulant_grid(signal: Signal, p: int = 1, q: int = 1, extent: int | None = None) -> CumulantGrid:
    """Tabulate the fractional triple correlation over ``0 <= rho, tau < extent``."""
    p, q = _check_rational(p, q)
    x = signal.samples
    n = x.size
    extent = n if extent is None else int(extent)
    if not 1 <= extent <= n:
        raise ConfigurationError(f"extent must lie in [1, {n}]")
    t = np.arange(n)
    xu = band_limited_upsample(x, q)
    lags = np.arange(extent)
    second = xu[(q * lags[:, None] + p * t[None, :]) % (q * n)]
    out = np.empty((extent, extent))
    for rho in range(extent):
        # same product order as triple_correlation, one lag row at a time
        out[rho] = np.sum(x[(t + rho) % n][None, :] * second * x[None, :], axis=1)
    return CumulantGrid(out, p / q, 1.0 / signal.sample_rate)


def dft2_matrix(n: int) -> np.ndarray:
    """Forward DFT matrix ``W[a, b] = exp(-2j pi a b / n)`` with exact phase reduction."""
    ab = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(-2j * np.pi * ab / n)


def verify_fourier_pair(signal: Signal, p: int = 1, q: int = 1, max_length: int = MAX_VERIFY_LENGTH) -> float:
    """Largest relative mismatch between the two routes to the bispectrum.

    Route (a) builds the full ``N x N`` fractional triple-correlation grid and
    applies an explicit 2D DFT; route (b) forms the exact-rational triple
    product directly from FFT spectra. The mismatch is
    ``max|a - b| / max|b|`` (absolute when ``b`` vanishes).
    """
    p, q = _check_rational(p, q)
    n = len(signal)
    if n > max_length:
        raise ConfigurationError(
            f"N = {n} exceeds the brute-force cap of {max_length}; use a shorter signal"
        )
    if n < 2:
        raise ConfigurationError("verification needs at least two samples")
    R = cumulant_grid(signal, p, q, n).values
    W = dft2_matrix(n)
    from_time = W @ R @ W.T
    from_freq = exact_rational_full(signal, p, q).values
    err = float(np.max(np.abs(from_time - from_freq)))
    scale = float(np.max(np.abs(from_freq)))
    return err / scale if scale > 0 else err
