import numpy as np
import pytest

from fracspec import (
    ConfigurationError,
    InvalidInputError,
    NoiseSpec,
    Signal,
    ToneSpec,
    add,
    bandpass_noise,
    bispectrum_direct,
    coupled_triple,
    dft_forward,
    fractional_bispectrum_direct,
    gaussian_noise,
    k_scan,
    multi_tone,
    scale,
)
from oracles import brute_dft, brute_triple


class TestMultiTone:
    def test_empty_is_zero(self):
        s = multi_tone([], 16, 16.0)
        assert np.all(s.samples == 0) and len(s) == 16

    def test_single_tone_dft(self):
        s = multi_tone([ToneSpec(8.0)], 64, 64.0)
        c = brute_dft(s.samples)
        assert c[8] == pytest.approx(32, abs=1e-9)
        np.testing.assert_allclose(dft_forward(s).coefficients, c, atol=1e-9)

    def test_bispectrum_phase(self):
        phi1, phi2 = 0.7, -0.4
        s = multi_tone([ToneSpec(8.0, 1.0, phi1), ToneSpec(16.0, 1.0, phi2)], 64, 64.0)
        b = bispectrum_direct(s).values[8, 8]
        oracle = brute_triple(s.samples, 8, 8, 1)
        assert b == pytest.approx(oracle, rel=1e-9)
        assert np.angle(oracle) == pytest.approx(2 * phi1 - phi2, abs=1e-9)

    def test_support(self):
        s = multi_tone([ToneSpec(5.0, 2.0), ToneSpec(11.0, 0.5, 1.0)], 32, 32.0)
        c = dft_forward(s).coefficients
        mask = np.ones(32, bool)
        mask[[5, 27, 11, 21]] = False
        assert np.max(np.abs(c[mask])) < 1e-9

    def test_nyquist_rejected(self):
        with pytest.raises(ConfigurationError):
            multi_tone([ToneSpec(32.0)], 64, 64.0)
        with pytest.raises(ConfigurationError):
            ToneSpec(-1.0)

    def test_long_record_accuracy(self):
        s = multi_tone([ToneSpec(20.0)], 64 * 1024, 64.0)
        seg = s.samples[-64:]
        np.testing.assert_allclose(seg, np.cos(2 * np.pi * 20 * np.arange(64) / 64), atol=1e-12)


class TestCoupled:
    def test_degenerate(self):
        a = coupled_triple(8.0, 8.0, 64, 64.0, (0.3, 0.3))
        b = multi_tone([ToneSpec(8.0, 1.0, 0.3), ToneSpec(16.0, 1.0, 0.6)], 64, 64.0)
        np.testing.assert_array_equal(a.samples, b.samples)

    def test_peak_value(self):
        s = coupled_triple(8.0, 12.0, 64, 64.0)
        oracle = brute_triple(s.samples, 8, 12, 1)
        assert oracle == pytest.approx(32.0**3, rel=1e-9)
        assert bispectrum_direct(s).values[8, 12] == pytest.approx(oracle, rel=1e-9)

    def test_random_phases_real_positive(self, rng):
        for _ in range(5):
            ph = rng.uniform(-np.pi, np.pi, 2)
            s = coupled_triple(8.0, 12.0, 64, 64.0, tuple(ph))
            b = brute_triple(s.samples, 8, 12, 1)
            assert abs(b) == pytest.approx(32.0**3, rel=1e-9)
            assert np.angle(b) == pytest.approx(0.0, abs=1e-9)

    def test_sum_above_nyquist(self):
        with pytest.raises(ConfigurationError):
            coupled_triple(20.0, 15.0, 64, 64.0)


class TestNoise:
    def test_sigma_zero(self):
        assert np.all(gaussian_noise(NoiseSpec(0.0, 3), 32).samples == 0)

    def test_deterministic(self):
        a = gaussian_noise(NoiseSpec(1.0, 42), 8).samples
        b = gaussian_noise(NoiseSpec(1.0, 42), 8).samples
        assert np.array_equal(a, b)
        assert not np.array_equal(a, gaussian_noise(NoiseSpec(1.0, 43), 8).samples)
        assert not np.array_equal(a, gaussian_noise(NoiseSpec(1.0, 42, (1,)), 8).samples)

    def test_frozen_values(self):
        # PCG64 + SeedSequence(0) + ziggurat normals; guards the seeding scheme
        x = gaussian_noise(NoiseSpec(1.0, 0), 3).samples
        np.testing.assert_array_equal(x, np.random.default_rng(0).standard_normal(3))

    def test_moments(self):
        n = 65536
        x = gaussian_noise(NoiseSpec(1.0, 5), n).samples
        assert abs(x.mean()) < 4 / np.sqrt(n)
        assert abs(x.var() - 1) < 0.1

    def test_sigma_scales_same_draws(self):
        a = gaussian_noise(NoiseSpec(1.0, 9, (2, 3)), 16).samples
        b = gaussian_noise(NoiseSpec(2.0, 9, (2, 3)), 16).samples
        np.testing.assert_array_equal(b, 2 * a)

    @pytest.mark.parametrize("kw", [dict(sigma=-1.0), dict(sigma=np.inf), dict(seed=-1), dict(seed=2**64)])
    def test_spec_validation(self, kw):
        with pytest.raises(ConfigurationError):
            NoiseSpec(**kw)


class TestBandpass:
    def test_mask_exact(self):
        s = bandpass_noise(20.0, 30.0, NoiseSpec(1.0, 1), 128, 128.0)
        c = dft_forward(s).coefficients
        f = np.abs(np.fft.fftfreq(128, 1 / 128))
        outside = (f < 20) | (f > 30)
        assert np.max(np.abs(c[outside])) < 1e-10
        assert np.min(np.abs(c[~outside])) > 0

    def test_near_full_band(self):
        n, fs = 64, 64.0
        spec = NoiseSpec(1.0, 2)
        s = bandpass_noise(0.5, 31.5, spec, n, fs)
        w = np.fft.fft(gaussian_noise(spec, n, fs).samples)
        w[0] = 0
        w[n // 2] = 0
        np.testing.assert_allclose(s.samples, np.fft.ifft(w).real, atol=1e-12)

    def test_bispectrum_blind_fractional_not(self):
        s = bandpass_noise(20.0, 30.0, NoiseSpec(1.0, 4), 128, 128.0)
        ref = np.max(np.abs(dft_forward(s).coefficients)) ** 3
        b = bispectrum_direct(s).values
        assert np.max(np.abs(b[1:, 1:])) < 1e-9 * ref
        f = fractional_bispectrum_direct(s, 0.5).values
        assert np.max(np.abs(f[1:, 1:])) > 1e-3 * ref
        scan = k_scan(s, [0.3, 0.5, 0.7, 1.0, 1.5])
        assert scan.best_k != 1.0
        assert dict(scan.entries)[1.0].contrast == 0.0
        assert scan.best_peak.contrast > 100

    def test_band_validation(self):
        for lo, hi in [(0.0, 10.0), (10.0, 5.0), (10.0, 64.0)]:
            with pytest.raises(ConfigurationError):
                bandpass_noise(lo, hi, NoiseSpec(), 128, 128.0)


class TestArithmetic:
    def test_add_zero(self, rng):
        x = Signal(rng.standard_normal(8), 2.0)
        assert np.array_equal(add(x, Signal(np.zeros(8), 2.0)).samples, x.samples)

    def test_scale_zero(self, rng):
        assert np.all(scale(Signal(rng.standard_normal(8)), 0).samples == 0)

    def test_scale_cubes_bispectrum(self, rng):
        x = Signal(rng.standard_normal(32))
        np.testing.assert_allclose(
            bispectrum_direct(scale(x, 2)).values, 8 * bispectrum_direct(x).values, rtol=1e-12
        )

    def test_mismatch(self):
        with pytest.raises(InvalidInputError):
            add(Signal(np.ones(4)), Signal(np.ones(5)))
        with pytest.raises(InvalidInputError):
            add(Signal(np.ones(4), 1.0), Signal(np.ones(4), 2.0))
