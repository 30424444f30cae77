"""
The bispectrum's blind spot and the fractional fix
==================================================

Two tones at 8 Hz and 20 Hz are not harmonically related, so no pair of
them sums to the other and the classical bispectrum is zero everywhere.
Reading the third factor at ``u + k v`` instead of ``u + v`` recovers the
pair once ``k = 1.5``, since 8 + 1.5 * 8 = 20.
"""

import numpy as np

from fracspec import (
    ToneSpec,
    bispectrum_direct,
    fractional_bispectrum_exact_rational,
    multi_tone,
)

# 64 samples at 64 Hz: one bin per hertz.
x = multi_tone([ToneSpec(8.0), ToneSpec(20.0)], n=64, sample_rate=64.0)

###############################################################################
# Classical bispectrum: only rounding noise survives away from the axes.
b = bispectrum_direct(x)
print("max |S(u, v)|, u, v >= 1 :", np.abs(b.values[1:, 1:]).max())

###############################################################################
# Fractional bispectrum at k = 3/2, evaluated exactly on a half-bin grid.
f = fractional_bispectrum_exact_rational(x, p=3, q=2)
u, v = np.unravel_index(np.argmax(np.abs(f.values[1:, 1:])), (31, 31))
print("peak of |F(u, v, 1.5)|   :", np.abs(f.values).max(), "at", (int(u) + 1, int(v) + 1))
print("expected (N/2)^3         :", 32**3)
