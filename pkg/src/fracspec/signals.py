"""
Deterministic synthetic signals: tone mixtures, quadratically phase-coupled
triples, white Gaussian noise and band-limited Gaussian noise.

Noise comes from numpy's PCG64 bit generator fed by a ``SeedSequence``. The
``stream`` tuple of a :class:`NoiseSpec` becomes the sequence's spawn key, so
``(seed, (trial, batch))`` names an independent, reproducible stream without
any shared state. Normal variates use numpy's ziggurat sampler
(``Generator.standard_normal``), which is platform independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import Signal
from .errors import ConfigurationError, InvalidInputError

__all__ = [
    "ToneSpec",
    "NoiseSpec",
    "multi_tone",
    "coupled_triple",
    "noise_rng",
    "gaussian_noise",
    "bandpass_noise",
    "add",
    "scale",
]


@dataclass(frozen=True)
class ToneSpec:
    frequency: float
    amplitude: float = 1.0
    phase: float = 0.0

    def __post_init__(self):
        if not self.frequency >= 0:
            raise ConfigurationError("tone frequency must be >= 0")


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float = 1.0
    seed: int = 0
    stream: tuple[int, ...] = ()

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ConfigurationError("sigma must be finite and >= 0")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed must be an unsigned 64-bit integer")


def _check_n(n) -> int:
    if int(n) != n or n < 1:
        raise ConfigurationError("n must be a positive integer")
    return int(n)


def multi_tone(tones: Iterable[ToneSpec], n: int, sample_rate: float = 1.0) -> Signal:
    """Sum of cosines ``a cos(2 pi f t / fs + phi)`` sampled at ``t = 0..n-1``."""
    n = _check_n(n)
    t = np.arange(n)
    x = np.zeros(n)
    nyquist = sample_rate / 2
    for tone in tones:
        if tone.frequency >= nyquist:
            raise ConfigurationError(
                f"tone at {tone.frequency} Hz is not below Nyquist ({nyquist} Hz)"
            )
        # reduce the phase ramp modulo the period to keep long records accurate
        cycles = np.mod(tone.frequency * t, sample_rate) / sample_rate
        x += tone.amplitude * np.cos(2 * np.pi * cycles + tone.phase)
    return Signal(x, sample_rate)


def coupled_triple(
    f1: float,
    f2: float,
    n: int,
    sample_rate: float = 1.0,
    phases: Sequence[float] = (0.0, 0.0),
) -> Signal:
    """Unit tones at ``f1``, ``f2`` and ``f1 + f2`` with ``phi3 = phi1 + phi2``.

    The bispectrum at ``(f1, f2)`` is then real and positive. With
    ``f1 == f2`` there is a single tone at ``f1`` (phase ``phi1``) and one at
    ``2 f1`` with phase ``2 phi1``.
    """
    phi1, phi2 = (float(p) for p in phases)
    if f1 == f2:
        tones = [ToneSpec(f1, 1.0, phi1), ToneSpec(2 * f1, 1.0, 2 * phi1)]
    else:
        tones = [ToneSpec(f1, 1.0, phi1), ToneSpec(f2, 1.0, phi2), ToneSpec(f1 + f2, 1.0, phi1 + phi2)]
    return multi_tone(tones, n, sample_rate)


def noise_rng(spec: NoiseSpec) -> np.random.Generator:
    ss = np.random.SeedSequence(int(spec.seed), spawn_key=tuple(int(s) for s in spec.stream))
    return np.random.Generator(np.random.PCG64(ss))


def gaussian_noise(spec: NoiseSpec, n: int, sample_rate: float = 1.0) -> Signal:
    """``n`` independent N(0, sigma^2) draws from the stream named by ``spec``."""
    n = _check_n(n)
    z = noise_rng(spec).standard_normal(n)
    return Signal(spec.sigma * z, sample_rate)


def bandpass_noise(low: float, high: float, spec: NoiseSpec, n: int, sample_rate: float = 1.0) -> Signal:
    """White Gaussian noise restricted to bins with frequency in ``[low, high]``.

    The mask is applied symmetrically to positive and negative frequencies,
    so the inverse transform is real up to rounding.
    """
    n = _check_n(n)
    if not 0 < low < high < sample_rate / 2:
        raise ConfigurationError("band must satisfy 0 < low < high < sample_rate / 2")
    white = gaussian_noise(spec, n, sample_rate).samples
    X = np.fft.fft(white)
    f = np.abs(np.fft.fftfreq(n, d=1.0 / sample_rate))
    X[(f < low) | (f > high)] = 0.0
    y = np.fft.ifft(X)
    resid = float(np.max(np.abs(y.imag))) if n else 0.0
    assert resid <= 1e-12 * max(1.0, float(np.max(np.abs(y.real)))), resid
    return Signal(y.real, sample_rate)


def _check_compatible(a: Signal, b: Signal):
    if len(a) != len(b):
        raise InvalidInputError(f"length mismatch: {len(a)} vs {len(b)}")
    if a.sample_rate != b.sample_rate:
        raise InvalidInputError(f"sample rate mismatch: {a.sample_rate} vs {b.sample_rate}")


def add(a: Signal, b: Signal) -> Signal:
    _check_compatible(a, b)
    return Signal(a.samples + b.samples, a.sample_rate)


def scale(a: Signal, c: float) -> Signal:
    return Signal(float(c) * a.samples, a.sample_rate)
