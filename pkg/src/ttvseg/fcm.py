"""Fuzzy c-means clustering on scalar intensities, used to initialize the solver.

Centroids start at evenly spaced quantiles of the intensity distribution, so
the default run is fully deterministic; the config seed is reserved for
optional random restarts and is unused by this initialization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_EMPTY_CLUSTER_EPS = 1e-12


@dataclass(frozen=True)
class FcmConfig:
    clusters: int
    fuzzifier: float = 2.0
    max_iter: int = 100
    tol: float = 1e-5
    seed: int = 0  # reserved for random restarts; quantile init ignores it

    def __post_init__(self):
        if self.clusters < 2:
            raise ValueError("need at least 2 clusters")
        if self.fuzzifier <= 1:
            raise ValueError("fuzzifier must exceed 1")
        if self.max_iter < 0:
            raise ValueError("max_iter must be nonnegative")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


def _memberships(x, c, fuzzifier):
    """Membership rows (P, N) for intensities x given centroids c.

    Pixels coinciding with a centroid get full membership in the
    lowest-indexed coinciding cluster.
    """
    d = np.abs(x[:, None] - c[None, :])
    dmin = d.min(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        # ratios dmin/d <= 1 keep the powers well scaled
        r = (dmin / d) ** (2.0 / (fuzzifier - 1.0))
        U = r / r.sum(axis=1, keepdims=True)
    hit = dmin[:, 0] == 0.0
    if np.any(hit):
        onehot = np.zeros((int(hit.sum()), c.size))
        first = np.argmax(d[hit] == 0.0, axis=1)
        onehot[np.arange(first.size), first] = 1.0
        U[hit] = onehot
    return U


def _centroids(x, U, fuzzifier, previous):
    """Weighted means sum(u^m * x) / sum(u^m); empty clusters keep their centroid."""
    w = U**fuzzifier
    den = w.sum(axis=0)
    num = w.T @ x
    safe = den > _EMPTY_CLUSTER_EPS
    c = previous.copy()
    c[safe] = num[safe] / den[safe]
    return c


def fcm_objective(f, U, c, fuzzifier: float = 2.0) -> float:
    """Clustering objective sum_x sum_k u_k(x)^m (f(x) - c_k)^2."""
    f = np.asarray(f, dtype=np.float64)
    U = np.asarray(U, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    d2 = (f[None, :, :] - c[:, None, None]) ** 2
    return float((U**fuzzifier * d2).sum())


def fuzzy_cmeans(f, config: FcmConfig):
    """Cluster an image's intensities into soft memberships and centroids.

    Alternates membership and centroid updates until the largest centroid
    move drops below config.tol or config.max_iter rounds have run. Returns
    (U, c) with U of shape (clusters, height, width), centroids sorted
    ascending and memberships permuted to match.
    """
    f = np.asarray(f, dtype=np.float64)
    if f.size == 0:
        raise ValueError("cannot cluster an empty image")
    x = f.ravel()
    N = config.clusters
    m = config.fuzzifier

    c = np.quantile(x, (np.arange(N) + 0.5) / N)
    U = _memberships(x, c, m)
    for _ in range(config.max_iter):
        U = _memberships(x, c, m)
        c_new = _centroids(x, U, m, c)
        delta = np.abs(c_new - c).max()
        c = c_new
        if delta < config.tol:
            break
    U = _memberships(x, c, m)

    order = np.argsort(c, kind="stable")
    c = c[order]
    U = U[:, order]
    return U.T.reshape((N,) + f.shape).copy(), c
