"""Discrete differential operators under periodic boundaries, plus the FFT
solve of the screened Poisson system (beta1*I - beta2*Lap) v = rhs.

Conventions fixed here and relied on everywhere else:
  * gradient uses forward differences with wraparound,
  * divergence is the exact negative adjoint of gradient,
  * Lap = divergence(gradient(.)), whose Fourier multipliers lie in [-8, 0].

A gradient field is stored as an array of shape (2, m, n); component 0 is
the horizontal (column) difference, component 1 the vertical (row) one.
"""

import numpy as np
from scipy.fft import fft2, ifft2


def gradient(u):
    """Forward differences with periodic wraparound.

    gx[i, j] = u[i, (j+1) mod n] - u[i, j]
    gy[i, j] = u[(i+1) mod m, j] - u[i, j]
    """
    u = np.asarray(u, dtype=np.float64)
    gx = np.roll(u, -1, axis=1) - u
    gy = np.roll(u, -1, axis=0) - u
    return np.stack((gx, gy))


def divergence(g):
    """Negative adjoint of :func:`gradient`: <grad u, g> = <u, -div g> for all u, g."""
    g = np.asarray(g, dtype=np.float64)
    if g.ndim != 3 or g.shape[0] != 2:
        raise ValueError("gradient field must have shape (2, m, n)")
    gx, gy = g[0], g[1]
    return (gx - np.roll(gx, 1, axis=1)) + (gy - np.roll(gy, 1, axis=0))


def laplacian_spectrum(m: int, n: int):
    """Fourier multipliers of the periodic Laplacian divergence(gradient(.)).

    Entry (i, j) is 2*cos(2*pi*i/m) + 2*cos(2*pi*j/n) - 4, so the constant
    mode (0, 0) maps to 0 and every multiplier lies in [-8, 0].
    """
    if m < 1 or n < 1:
        raise ValueError("grid dimensions must be positive")
    wm = 2.0 * np.cos(2.0 * np.pi * np.arange(m) / m)
    wn = 2.0 * np.cos(2.0 * np.pi * np.arange(n) / n)
    return wm[:, None] + wn[None, :] - 4.0


def solve_screened_poisson(rhs, beta1: float, beta2: float, spectrum):
    """Solve (beta1*I - beta2*Lap) v = rhs by pointwise division in Fourier space.

    beta1 > 0 keeps the denominator strictly positive because the Laplacian
    multipliers are <= 0. The imaginary residue of the inverse transform is
    discarded.
    """
    if beta1 <= 0:
        raise ValueError("beta1 must be positive")
    rhs = np.asarray(rhs, dtype=np.float64)
    denom = beta1 - beta2 * spectrum
    return ifft2(fft2(rhs) / denom).real
