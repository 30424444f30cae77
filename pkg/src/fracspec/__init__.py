"""Bispectrum and fractional bispectrum estimation.

The fractional bispectrum ``F(u, v, k) = X(u) X(v) conj(X(u + k v))``
generalizes the bispectrum (``k = 1``) to frequency triples that are not
harmonically related, while keeping its blindness to zero-mean Gaussian
noise.
"""

__version__ = "0.1.0"

from .core import (
    BifrequencyGrid,
    EstimatorConfig,
    Signal,
    Spectrum,
    averaged_fractional_bispectrum,
    bispectrum_direct,
    dft_forward,
    exact_rational_full,
    fractional_bispectrum_direct,
    fractional_bispectrum_exact_rational,
    fractional_bispectrum_full,
    spectrum_value_at,
)
from .cumulant import (
    CumulantGrid,
    cumulant_grid,
    fractional_triple_correlation,
    triple_correlation,
    verify_fourier_pair,
)
from .detection import (
    KScanResult,
    PeakReport,
    estimate_frequency_ratio,
    k_grid,
    k_scan,
    peak_statistic,
)
from .errors import ConfigurationError, FracspecError, InvalidInputError
from .noise_study import (
    StudyConfig,
    SuppressionCurve,
    contaminated_signal_study,
    gaussian_null_study,
)
from .signals import (
    NoiseSpec,
    ToneSpec,
    add,
    bandpass_noise,
    coupled_triple,
    gaussian_noise,
    multi_tone,
    scale,
)
