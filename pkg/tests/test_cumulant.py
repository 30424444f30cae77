import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fracspec import (
    ConfigurationError,
    Signal,
    bispectrum_direct,
    cumulant_grid,
    exact_rational_full,
    fractional_triple_correlation,
    triple_correlation,
    verify_fourier_pair,
)
from fracspec.cumulant import band_limited_upsample, dft2_matrix
from oracles import brute_triple_correlation, tone_signal


def impulse(n):
    x = np.zeros(n)
    x[0] = 1.0
    return Signal(x)


class TestTripleCorrelation:
    def test_zero_signal(self):
        assert triple_correlation(Signal(np.zeros(8)), 2, 3) == 0.0

    def test_impulse(self):
        s = impulse(8)
        assert triple_correlation(s, 0, 0) == 1.0
        for rho, tau in [(0, 1), (1, 0), (3, 5), (7, 7)]:
            assert triple_correlation(s, rho, tau) == 0.0

    def test_two_tone_origin(self):
        x = tone_signal([8, 16], 64)
        s = Signal(x)
        want = brute_triple_correlation(x, 0, 0)
        assert triple_correlation(s, 0, 0) == pytest.approx(want, rel=1e-12)
        # the origin of the 2D inverse DFT of the full bispectrum is the lag-(0, 0) value
        full = exact_rational_full(s, 1, 1).values
        assert np.sum(full).real / 64**2 == pytest.approx(want, rel=1e-9)

    def test_brute_force_lags(self, rng):
        x = rng.standard_normal(13)
        for rho, tau in [(0, 0), (2, 9), (12, 1), (-3, 4)]:
            assert triple_correlation(Signal(x), rho, tau) == pytest.approx(
                brute_triple_correlation(x, rho, tau), rel=1e-12, abs=1e-12
            )


class TestUpsample:
    @pytest.mark.parametrize("n", [7, 8, 16, 17])
    @pytest.mark.parametrize("q", [2, 3, 4])
    def test_reproduces_samples(self, rng, n, q):
        x = rng.standard_normal(n)
        y = band_limited_upsample(x, q)
        assert y.size == q * n
        np.testing.assert_allclose(y[::q], x, atol=1e-12)

    def test_midpoints_of_low_tone(self):
        n = 16
        t = np.arange(n)
        x = np.cos(2 * np.pi * 3 * t / n + 0.4)
        y = band_limited_upsample(x, 2)
        want = np.cos(2 * np.pi * 3 * (np.arange(2 * n) / 2) / n + 0.4)
        np.testing.assert_allclose(y, want, atol=1e-12)

    def test_nyquist_split_is_cosine(self):
        n = 8
        x = np.cos(np.pi * np.arange(n))
        y = band_limited_upsample(x, 2)
        np.testing.assert_allclose(y, np.cos(np.pi * np.arange(2 * n) / 2), atol=1e-12)


class TestFractional:
    def test_k1_reduction_exact(self, rng):
        s = Signal(rng.standard_normal(20))
        for rho, tau in [(0, 0), (3, 11), (19, 2)]:
            assert fractional_triple_correlation(s, rho, tau, 1, 1) == triple_correlation(s, rho, tau)

    def test_integer_k_is_integer_index_sum(self, rng):
        x = rng.standard_normal(15)
        t = np.arange(15)
        got = fractional_triple_correlation(Signal(x), 2, 5, 2, 1)
        assert got == pytest.approx(np.sum(x[(t + 2) % 15] * x[(5 + 2 * t) % 15] * x), rel=1e-12)

    def test_gcd(self):
        with pytest.raises(ConfigurationError):
            fractional_triple_correlation(Signal(np.ones(8)), 0, 0, 4, 2)

    def test_matches_inverse_dft_of_frequency_grid(self, rng):
        x = rng.standard_normal(16)
        s = Signal(x)
        full = exact_rational_full(s, 3, 2).values
        lags = np.fft.ifft2(full).real
        grid = cumulant_grid(s, 3, 2).values
        np.testing.assert_allclose(grid, lags, rtol=0, atol=1e-9 * np.max(np.abs(lags)))
        assert fractional_triple_correlation(s, 4, 9, 3, 2) == pytest.approx(lags[4, 9], rel=1e-9)


class TestCumulantGrid:
    def test_zero(self):
        assert np.all(cumulant_grid(Signal(np.zeros(8)), 3, 2).values == 0)

    def test_impulse(self):
        g = cumulant_grid(impulse(8)).values
        want = np.zeros((8, 8))
        want[0, 0] = 1
        np.testing.assert_array_equal(g, want)

    def test_k1_equals_classical_exactly(self, rng):
        s = Signal(rng.standard_normal(24))
        g = cumulant_grid(s, 1, 1, 24).values
        want = np.array([[triple_correlation(s, r, t) for t in range(24)] for r in range(24)])
        assert np.array_equal(g, want)

    def test_grid_entries_equal_scalar(self, rng):
        s = Signal(rng.standard_normal(12))
        g = cumulant_grid(s, 5, 4, 6).values
        for r, t in [(0, 0), (5, 1), (2, 3)]:
            assert g[r, t] == pytest.approx(fractional_triple_correlation(s, r, t, 5, 4), rel=1e-12, abs=1e-12)

    def test_symmetric_at_k1(self, rng):
        g = cumulant_grid(Signal(rng.standard_normal(20))).values
        np.testing.assert_allclose(g, g.T, rtol=1e-9, atol=1e-12)

    def test_metadata_and_extent(self):
        g = cumulant_grid(Signal(np.ones(8), 4.0), 3, 2, 5)
        assert g.values.shape == (5, 5) and g.k == 1.5 and g.lag_resolution == 0.25
        with pytest.raises(ConfigurationError):
            cumulant_grid(Signal(np.ones(8)), 1, 1, 9)

    @settings(max_examples=20, deadline=None)
    @given(
        arrays(np.float64, st.integers(2, 24), elements=st.floats(-5, 5)),
        st.sampled_from([(1, 1), (3, 2), (1, 2)]),
    )
    def test_cubic_scaling(self, x, pq):
        a = -1.7
        g1 = cumulant_grid(Signal(x), *pq).values
        g2 = cumulant_grid(Signal(a * x), *pq).values
        np.testing.assert_allclose(g2, a**3 * g1, rtol=1e-12, atol=1e-12 * abs(a) ** 3 * (np.max(np.abs(g1)) + 1e-300))


class TestVerify:
    def test_dft_matrix(self):
        W = dft2_matrix(8)
        x = np.arange(8.0)
        np.testing.assert_allclose(W @ x, np.fft.fft(x), atol=1e-12)

    @pytest.mark.parametrize("pq", [(1, 1), (3, 2), (5, 4), (-2, 3)])
    def test_impulse(self, pq):
        assert verify_fourier_pair(impulse(16), *pq) < 1e-12

    def test_two_tone_classical(self):
        assert verify_fourier_pair(Signal(tone_signal([4, 8], 32)), 1, 1) < 1e-9

    def test_random_three_halves(self, rng):
        assert verify_fourier_pair(Signal(rng.standard_normal(32)), 3, 2) < 1e-9

    def test_zero_signal(self):
        assert verify_fourier_pair(Signal(np.zeros(8)), 3, 2) == 0.0

    def test_length_cap(self):
        with pytest.raises(ConfigurationError):
            verify_fourier_pair(Signal(np.ones(129)), 1, 1)
        assert verify_fourier_pair(Signal(np.ones(12)), 1, 1, max_length=12) < 1e-12

    def test_consistent_with_bispectrum_direct(self, rng):
        x = rng.standard_normal(32)
        full = exact_rational_full(Signal(x), 1, 1).values
        np.testing.assert_allclose(full[:16, :16], bispectrum_direct(Signal(x)).values, rtol=1e-12, atol=1e-12)

    @settings(max_examples=15, deadline=None)
    @given(
        arrays(np.float64, st.integers(2, 40), elements=st.floats(-3, 3)),
        st.sampled_from([(1, 1), (1, 2), (3, 2), (2, 1), (5, 4), (-1, 3), (7, 4)]),
    )
    def test_identity_property(self, x, pq):
        if not np.any(x):
            x = x + 1.0
        assert verify_fourier_pair(Signal(x), *pq) < 1e-9
