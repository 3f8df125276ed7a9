"""Closed-form proximal operators and simplex projections.

The sparsity penalty is the transformed L1 function
rho_a(t) = (a+1)|t| / (a+|t|), applied componentwise to gradient fields.
Its proximal operator has a closed form built from a cosine expression;
the isotropic L2,1 shrinkage serves as the classical-TV baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TL1Params:
    """Transformed-L1 prox parameters: sparsity shape ``a`` and scale ``lam``."""

    a: float
    lam: float

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError(f"a must be positive, got {self.a}")
        if self.lam < 0:
            raise ValueError(f"lam must be nonnegative, got {self.lam}")


def rho_a(t, a: float):
    """Transformed L1 penalty (a+1)|t| / (a+|t|); even, bounded by a+1."""
    if a <= 0:
        raise ValueError(f"a must be positive, got {a}")
    at = np.abs(t)
    return (a + 1.0) * at / (a + at)


def tl1_threshold(params: TL1Params) -> float:
    """Dead-zone half-width of the TL1 prox: inputs with |t| <= threshold map to 0."""
    a, lam = params.a, params.lam
    if lam > a * a / (2.0 * (a + 1.0)):
        return math.sqrt(2.0 * lam * (a + 1.0)) - a / 2.0
    return lam * (a + 1.0) / a


def _tl1_prox(x, a: float, lam: float):
    """Vectorized TL1 prox; lam == 0 short-circuits to the identity."""
    x = np.asarray(x, dtype=np.float64)
    if lam == 0.0:
        return x.copy()
    tau = tl1_threshold(TL1Params(a, lam))
    at = np.abs(x)
    # arccos argument can leave [-1, 1] by roundoff just above the threshold
    arg = 1.0 - 27.0 * lam * a * (a + 1.0) / (2.0 * (a + at) ** 3)
    phi = np.arccos(np.clip(arg, -1.0, 1.0))
    shrunk = np.sign(x) * (
        (2.0 / 3.0) * (a + at) * np.cos(phi / 3.0) - 2.0 * a / 3.0 + at / 3.0
    )
    return np.where(at <= tau, 0.0, shrunk)


def tl1_prox_scalar(t: float, params: TL1Params) -> float:
    """Proximal operator of lam * rho_a at a scalar: argmin_y lam*rho_a(y) + (y-t)^2/2."""
    return float(_tl1_prox(t, params.a, params.lam))


def tl1_prox_field(g, params: TL1Params):
    """TL1 prox applied independently to every entry of a gradient field."""
    g = np.asarray(g, dtype=np.float64)
    return _tl1_prox(g, params.a, params.lam)


def l21_prox_field(g, lam: float):
    """Isotropic shrinkage: scale each pixel's (gx, gy) vector by max(r-lam, 0)/r.

    Pixels with zero magnitude map to (0, 0). This is the prox of
    lam * sum_ij sqrt(gx^2 + gy^2), the classical-TV baseline.
    """
    if lam < 0:
        raise ValueError(f"lam must be nonnegative, got {lam}")
    g = np.asarray(g, dtype=np.float64)
    if g.ndim != 3 or g.shape[0] != 2:
        raise ValueError("gradient field must have shape (2, m, n)")
    r = np.sqrt(g[0] ** 2 + g[1] ** 2)
    scale = np.zeros_like(r)
    nz = r > 0
    scale[nz] = np.maximum(r[nz] - lam, 0.0) / r[nz]
    return g * scale


def _project_rows(Y):
    """Project each row of (P, N) onto the probability simplex (sort-and-threshold)."""
    P, N = Y.shape
    s = np.sort(Y, axis=1)[:, ::-1]
    css = np.cumsum(s, axis=1) - 1.0
    idx = np.arange(1, N + 1)
    rho = np.count_nonzero(s - css / idx > 0, axis=1)
    theta = css[np.arange(P), rho - 1] / rho
    X = np.maximum(Y - theta[:, None], 0.0)
    # renormalize the last few ulps of roundoff away
    X /= X.sum(axis=1, keepdims=True)
    return X


def project_simplex(y):
    """Euclidean projection of a vector onto {x : x >= 0, sum(x) = 1}."""
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.size == 0:
        raise ValueError("cannot project an empty vector")
    return _project_rows(y[None, :])[0]


def project_membership(grids):
    """Per-pixel simplex projection across the phase axis of (N, m, n) grids."""
    U = np.asarray(grids, dtype=np.float64)
    if U.ndim != 3:
        raise ValueError("expected N grids of identical shape (N, m, n)")
    if U.shape[0] < 2:
        raise ValueError("membership projection needs at least 2 phases")
    N = U.shape[0]
    shape = U.shape[1:]
    rows = U.reshape(N, -1).T
    projected = _project_rows(rows)
    return projected.T.reshape((N,) + shape)
