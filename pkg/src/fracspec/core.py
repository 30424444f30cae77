"""
Direct (triple-product) bispectrum and fractional bispectrum estimators.

Conventions
-----------
* The forward DFT is unnormalized: ``X[m] = sum_t x[t] exp(-2j*pi*m*t/N)``.
* Spectra are treated as N-periodic, so ``X[-m]`` is ``X[N - m]``.
* A fractional bispectrum grid holds ``X[u] * X[v] * conj(X(u + k*v))`` for
  integer bins ``0 <= u, v < grid_extent``. Only the third index can be
  fractional; it is evaluated by nearest-bin or linear interpolation of the
  periodic coefficient sequence, or exactly (for rational ``k = p/q``) on a
  ``q``-times finer frequency grid obtained by zero-padding in time.
* Full ``N x N`` grids (used by the symmetry checks and the Fourier-pair
  verification) map ``v`` to its signed representative in ``(-N/2, N/2]``.
  For even ``N`` the Nyquist column averages the ``+N/2`` and ``-N/2``
  evaluations, which is what the band-limited interpolator on the time side
  does as well.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Literal

import numpy as np
from scipy.signal import windows

from .errors import ConfigurationError, InvalidInputError

__all__ = [
    "Signal",
    "Spectrum",
    "EstimatorConfig",
    "BifrequencyGrid",
    "dft_forward",
    "spectrum_value_at",
    "bispectrum_direct",
    "fractional_bispectrum_direct",
    "fractional_bispectrum_exact_rational",
    "fractional_bispectrum_full",
    "exact_rational_full",
    "averaged_fractional_bispectrum",
    "segment_signal",
]

Window = Literal["rectangular", "hann"]
Detrend = Literal["none", "remove_mean"]
Interp = Literal["nearest", "linear", "exact_rational"]


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Signal:
    """Real, uniformly sampled sequence.

    Parameters
    ----------
    samples : array_like
        Real sample values. Copied and stored read-only as float64.
    sample_rate : float
        Samples per second, finite and strictly positive.
    """

    samples: np.ndarray
    sample_rate: float = 1.0

    def __post_init__(self):
        x = np.array(self.samples, dtype=float, copy=True).reshape(-1)
        if x.size < 1:
            raise InvalidInputError("a signal needs at least one sample")
        if not np.all(np.isfinite(x)):
            raise InvalidInputError("signal contains non-finite samples")
        fs = float(self.sample_rate)
        if not math.isfinite(fs) or fs <= 0:
            raise InvalidInputError(f"sample_rate must be finite and > 0, got {self.sample_rate!r}")
        object.__setattr__(self, "samples", _readonly(x))
        object.__setattr__(self, "sample_rate", fs)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Unnormalized DFT coefficients of one signal or segment."""

    coefficients: np.ndarray
    sample_rate: float = 1.0

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex, copy=True).reshape(-1)
        if c.size < 1:
            raise InvalidInputError("a spectrum needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("spectrum contains non-finite coefficients")
        object.__setattr__(self, "coefficients", _readonly(c))
        object.__setattr__(self, "sample_rate", float(self.sample_rate))

    @property
    def origin_length(self) -> int:
        return self.coefficients.size

    @property
    def bin_resolution(self) -> float:
        """Hertz per bin."""
        return self.sample_rate / self.origin_length


@dataclass(frozen=True)
class EstimatorConfig:
    """Windowing, segmentation, detrending and fractional-index policy.

    ``segment_length=0`` means the whole signal is one segment; otherwise it
    must be a power of two. ``rational_k=(p, q)`` is required when
    ``interp="exact_rational"`` and must be in lowest terms.
    """

    window: Window = "rectangular"
    segment_length: int = 0
    overlap_fraction: float = 0.0
    detrend: Detrend = "remove_mean"
    interp: Interp = "linear"
    rational_k: tuple[int, int] | None = None

    def __post_init__(self):
        if self.window not in ("rectangular", "hann"):
            raise ConfigurationError(f"unknown window {self.window!r}")
        if self.detrend not in ("none", "remove_mean"):
            raise ConfigurationError(f"unknown detrend mode {self.detrend!r}")
        if self.interp not in ("nearest", "linear", "exact_rational"):
            raise ConfigurationError(f"unknown interpolation mode {self.interp!r}")
        L = int(self.segment_length)
        if L != self.segment_length or L < 0 or (L > 0 and L & (L - 1)):
            raise ConfigurationError("segment_length must be 0 or a power of two")
        object.__setattr__(self, "segment_length", L)
        ov = float(self.overlap_fraction)
        if not 0.0 <= ov <= 0.9:
            raise ConfigurationError("overlap_fraction must lie in [0, 0.9]")
        object.__setattr__(self, "overlap_fraction", ov)
        if self.interp == "exact_rational":
            if self.rational_k is None:
                raise ConfigurationError("interp='exact_rational' requires rational_k=(p, q)")
            p, q = _check_rational(*self.rational_k)
            object.__setattr__(self, "rational_k", (p, q))
        elif self.rational_k is not None:
            object.__setattr__(self, "rational_k", _check_rational(*self.rational_k))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["rational_k"] = list(self.rational_k) if self.rational_k is not None else None
        return d


@dataclass(frozen=True, eq=False)
class BifrequencyGrid:
    """Complex (fractional) bispectrum on integer bin pairs ``values[u, v]``.

    ``reference_magnitude`` is the mean over segments of ``max|X|**3``; it sets
    the scale below which grid values are indistinguishable from rounding.
    """

    values: np.ndarray
    k: float
    bin_resolution: float
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    segments_averaged: int = 1
    reference_magnitude: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 2:
            raise InvalidInputError("grid values must be two-dimensional")
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("grid contains non-finite values")
        if self.segments_averaged < 1:
            raise InvalidInputError("segments_averaged must be >= 1")
        object.__setattr__(self, "values", _readonly(v))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    def frequencies(self) -> np.ndarray:
        """Bin centres in hertz along either grid axis (rows are ``u``)."""
        return np.arange(max(self.values.shape)) * self.bin_resolution


def _check_rational(p, q) -> tuple[int, int]:
    if int(p) != p or int(q) != q:
        raise ConfigurationError("rational k needs integer p and q")
    p, q = int(p), int(q)
    if q <= 0:
        raise ConfigurationError("q must be a positive integer")
    if math.gcd(abs(p), q) != 1:
        raise ConfigurationError(f"{p}/{q} is not in lowest terms")
    return p, q


def _check_k(k) -> float:
    k = float(k)
    if not math.isfinite(k):
        raise InvalidInputError("k must be finite")
    return k


def _check_extent(n: int, grid_extent: int) -> int:
    if n < 2:
        raise ConfigurationError("grid operations need at least two samples")
    e = int(grid_extent)
    if e != grid_extent or e < 1:
        raise ConfigurationError("grid_extent must be a positive integer")
    if e > n // 2:
        raise ConfigurationError(f"grid_extent {e} exceeds N/2 = {n // 2}")
    return e


def _as_spectrum(obj) -> Spectrum:
    if isinstance(obj, Spectrum):
        return obj
    if isinstance(obj, Signal):
        return dft_forward(obj)
    raise InvalidInputError(f"expected Signal or Spectrum, got {type(obj).__name__}")


def dft_forward(signal: Signal) -> Spectrum:
    """Unnormalized forward DFT of ``signal``."""
    if not isinstance(signal, Signal):
        signal = Signal(signal)
    return Spectrum(np.fft.fft(signal.samples), signal.sample_rate)


def _interp_periodic(c: np.ndarray, index, interp: str) -> np.ndarray:
    """Evaluate the N-periodic sequence ``c`` at real ``index`` (any shape)."""
    n = c.size
    idx = np.asarray(index, dtype=float)
    if not np.all(np.isfinite(idx)):
        raise InvalidInputError("fractional index must be finite")
    r = np.mod(idx, n)
    lo = np.floor(r)
    frac = r - lo
    i0 = lo.astype(np.int64) % n
    if interp == "nearest":
        return c[np.floor(r + 0.5).astype(np.int64) % n]
    if interp == "linear":
        i1 = (i0 + 1) % n
        out = (1.0 - frac) * c[i0] + frac * c[i1]
        # integral positions must return the stored coefficient untouched
        return np.where(frac == 0.0, c[i0], out)
    raise ConfigurationError(f"interp must be 'nearest' or 'linear', got {interp!r}")


def spectrum_value_at(spectrum: Spectrum, index: float, interp: str = "linear") -> complex:
    """Value of the periodic extension of ``spectrum`` at a real bin index.

    Integer indices return the stored coefficient exactly; ``-1`` maps to
    ``N - 1``.
    """
    return complex(_interp_periodic(spectrum.coefficients, float(index), interp))


def _third_factor(c: np.ndarray, k: float, u: np.ndarray, v: np.ndarray, interp: str) -> np.ndarray:
    """``X(u + k v)`` on the broadcast of integer arrays ``u`` and ``v``."""
    n = c.size
    idx = u + k * v
    integral = np.floor(idx) == idx
    if np.all(integral):
        return c[idx.astype(np.int64) % n]
    out = _interp_periodic(c, idx, interp)
    if np.any(integral):
        exact = c[np.where(integral, idx, 0).astype(np.int64) % n]
        out = np.where(integral, exact, out)
    return out


def bispectrum_direct(spectrum: Spectrum | Signal, grid_extent: int | None = None) -> BifrequencyGrid:
    """Classical bispectrum ``X[u] X[v] conj(X[u+v])`` for ``0 <= u, v < grid_extent``."""
    spectrum = _as_spectrum(spectrum)
    c = spectrum.coefficients
    n = c.size
    e = _check_extent(n, n // 2 if grid_extent is None else grid_extent)
    u = np.arange(e)
    values = c[u][:, None] * c[u][None, :] * np.conj(c[(u[:, None] + u[None, :]) % n])
    return BifrequencyGrid(
        values, 1.0, spectrum.bin_resolution,
        reference_magnitude=float(np.max(np.abs(c)) ** 3),
    )


def fractional_bispectrum_direct(
    spectrum: Spectrum | Signal,
    k: float,
    grid_extent: int | None = None,
    interp: str = "linear",
) -> BifrequencyGrid:
    """Fractional bispectrum ``X[u] X[v] conj(X(u + k v))`` on the principal grid.

    Parameters
    ----------
    spectrum : Spectrum or Signal
        Source coefficients; a Signal is transformed first.
    k : float
        Coupling ratio. ``k = 1`` reproduces :func:`bispectrum_direct`
        bit-for-bit.
    grid_extent : int, optional
        Grid side, at most ``N // 2`` (default).
    interp : {"nearest", "linear"}
        How ``X`` is evaluated when ``u + k v`` is not an integer.
    """
    spectrum = _as_spectrum(spectrum)
    k = _check_k(k)
    if interp not in ("nearest", "linear"):
        raise ConfigurationError("direct estimator supports interp 'nearest' or 'linear'")
    c = spectrum.coefficients
    n = c.size
    e = _check_extent(n, n // 2 if grid_extent is None else grid_extent)
    u = np.arange(e)
    third = _third_factor(c, k, u[:, None].astype(float), u[None, :].astype(float), interp)
    values = c[u][:, None] * c[u][None, :] * np.conj(third)
    return BifrequencyGrid(
        values, k, spectrum.bin_resolution,
        estimator=EstimatorConfig(interp=interp),
        reference_magnitude=float(np.max(np.abs(c)) ** 3),
    )


def _exact_rational_values(x: np.ndarray, p: int, q: int, e: int) -> tuple[np.ndarray, np.ndarray]:
    n = x.size
    c = np.fft.fft(x)
    fine = c if q == 1 else np.fft.fft(x, n=q * n)
    u = np.arange(e)
    j = (q * u[:, None] + p * u[None, :]) % (q * n)
    return c[u][:, None] * c[u][None, :] * np.conj(fine[j]), c


def fractional_bispectrum_exact_rational(
    signal: Signal, p: int, q: int, grid_extent: int | None = None
) -> BifrequencyGrid:
    """Fractional bispectrum for ``k = p/q`` without interpolation error.

    The third factor is read from the length ``q*N`` DFT of the signal
    zero-padded in time, whose bin ``q*u + p*v`` sits exactly at frequency
    ``u + (p/q) v`` of the original grid.
    """
    p, q = _check_rational(p, q)
    x = signal.samples
    e = _check_extent(x.size, x.size // 2 if grid_extent is None else grid_extent)
    values, c = _exact_rational_values(x, p, q, e)
    return BifrequencyGrid(
        values, p / q, signal.sample_rate / x.size,
        estimator=EstimatorConfig(interp="exact_rational", rational_k=(p, q)),
        reference_magnitude=float(np.max(np.abs(c)) ** 3),
    )


def _signed_bins(n: int) -> np.ndarray:
    m = np.arange(n)
    return np.where(m > n // 2, m - n, m)


def fractional_bispectrum_full(
    spectrum: Spectrum | Signal, k: float, interp: str = "linear"
) -> BifrequencyGrid:
    """Fractional bispectrum over every bin pair ``(u, v)`` in ``[0, N)^2``.

    ``v`` is taken as its signed representative so that the result obeys
    ``F[N-u, N-v] = conj(F[u, v])`` for real signals at any ``k``.
    """
    spectrum = _as_spectrum(spectrum)
    k = _check_k(k)
    c = spectrum.coefficients
    n = c.size
    if n < 2:
        raise ConfigurationError("grid operations need at least two samples")
    u = np.arange(n, dtype=float)[:, None]
    vs = _signed_bins(n).astype(float)[None, :]
    third = _third_factor(c, k, u, vs, interp)
    if n % 2 == 0:
        nyq = n // 2
        alt = _third_factor(c, k, u[:, 0], np.full(n, -float(nyq)), interp)
        third[:, nyq] = 0.5 * third[:, nyq] + 0.5 * alt
    values = c[:, None] * c[None, :] * np.conj(third)
    return BifrequencyGrid(
        values, k, spectrum.bin_resolution,
        estimator=EstimatorConfig(interp=interp),
        reference_magnitude=float(np.max(np.abs(c)) ** 3),
    )


def exact_rational_full(signal: Signal, p: int, q: int) -> BifrequencyGrid:
    """Exact-rational fractional bispectrum over every bin pair in ``[0, N)^2``.

    This is the frequency-domain side of the Fourier-pair check against the
    fractional triple correlation.
    """
    p, q = _check_rational(p, q)
    x = signal.samples
    n = x.size
    if n < 2:
        raise ConfigurationError("grid operations need at least two samples")
    c = np.fft.fft(x)
    fine = c if q == 1 else np.fft.fft(x, n=q * n)
    m = q * n
    u = np.arange(n)[:, None]
    vs = _signed_bins(n)[None, :]
    third = fine[(q * u + p * vs) % m]
    if n % 2 == 0:
        nyq = n // 2
        alt = fine[(q * u[:, 0] - p * nyq) % m]
        third[:, nyq] = 0.5 * third[:, nyq] + 0.5 * alt
    values = c[:, None] * c[None, :] * np.conj(third)
    return BifrequencyGrid(
        values, p / q, signal.sample_rate / n,
        estimator=EstimatorConfig(interp="exact_rational", rational_k=(p, q)),
        reference_magnitude=float(np.max(np.abs(c)) ** 3),
    )


def segment_signal(x: np.ndarray, segment_length: int, overlap_fraction: float = 0.0) -> np.ndarray:
    """Split ``x`` into equal segments, one per row.

    Segments start every ``max(1, round(L * (1 - overlap)))`` samples; a tail
    shorter than one segment is dropped.
    """
    n = x.size
    if segment_length == 0:
        return x[None, :].copy()
    L = segment_length
    if n < L:
        raise InvalidInputError(f"signal of length {n} is shorter than one segment ({L})")
    step = max(1, int(round(L * (1.0 - overlap_fraction))))
    starts = np.arange(0, n - L + 1, step)
    return np.stack([x[s:s + L] for s in starts])


def averaged_fractional_bispectrum(
    signal: Signal,
    k: float,
    config: EstimatorConfig | None = None,
    grid_extent: int | None = None,
) -> BifrequencyGrid:
    """Segment-averaged fractional bispectrum.

    Each segment is detrended, windowed and transformed; the per-segment
    grids are summed in segment order and divided by the segment count.
    With ``interp="exact_rational"`` the configured ``rational_k`` must equal
    ``k``.
    """
    config = config or EstimatorConfig()
    k = _check_k(k)
    if config.interp == "exact_rational":
        p, q = config.rational_k
        if abs(p / q - k) > 1e-12 * max(1.0, abs(k)):
            raise ConfigurationError(f"k={k} does not match rational_k {p}/{q}")
    segs = segment_signal(signal.samples, config.segment_length, config.overlap_fraction)
    L = segs.shape[1]
    e = _check_extent(L, L // 2 if grid_extent is None else grid_extent)
    if config.detrend == "remove_mean":
        segs = segs - segs.mean(axis=1, keepdims=True)
    if config.window == "hann":
        segs = segs * windows.hann(L, sym=False)

    acc = np.zeros((e, e), dtype=complex)
    ref = 0.0
    u = np.arange(e, dtype=float)
    for seg in segs:
        if config.interp == "exact_rational":
            vals, c = _exact_rational_values(seg, p, q, e)
        else:
            c = np.fft.fft(seg)
            third = _third_factor(c, k, u[:, None], u[None, :], config.interp)
            ui = np.arange(e)
            vals = c[ui][:, None] * c[ui][None, :] * np.conj(third)
        acc += vals
        ref += float(np.max(np.abs(c)) ** 3)
    m = segs.shape[0]
    return BifrequencyGrid(
        acc / m, k, signal.sample_rate / L,
        estimator=config, segments_averaged=m, reference_magnitude=ref / m,
    )
