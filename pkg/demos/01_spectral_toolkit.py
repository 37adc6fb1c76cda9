"""Hilbert transform, holomorphic projection and dealiased products.

The Fourier multiplier and the principal-value quadrature give the same
Hilbert transform, and the transform squares to the identity on mean-free
data.
"""

import numpy as np

from crestwave import spectral as sp
from crestwave.verify import random_field

n = 256
x = sp.PeriodicGrid(n).points
rng = np.random.default_rng(1)
f = random_field(n, rng)

print("H sin(pi a) - i cos(pi a):", sp.sup_norm(sp.hilbert(np.sin(np.pi * x)) - 1j * np.cos(np.pi * x)))
print("multiplier vs quadrature: ", sp.sup_norm(sp.hilbert(f) - sp.hilbert_quadrature(f)))
g = f - f.mean()
print("H^2 g - g:                ", sp.sup_norm(sp.hilbert(sp.hilbert(g)) - g))

# holomorphic part: only modes k <= 0 survive
P = sp.project(f)
k = sp.PeriodicGrid(n).wavenumbers
print("largest k > 0 coefficient after projection:", np.abs(np.fft.fft(P))[k > 0].max() / n)
