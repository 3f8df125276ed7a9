"""Core grid utilities: normalization, seeded noise, membership/label conversion.

An image grid is a 2-D float64 array (row-major). A membership field is a
3-D array of shape (phases, height, width) whose per-pixel columns lie on
the probability simplex. A label mask is a 2-D integer array with values
in {0, ..., phases-1}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Per-pixel membership sums must match 1 within this tolerance.
MEMBERSHIP_SUM_TOL = 1e-9


@dataclass(frozen=True)
class NoiseSpec:
    """Additive Gaussian noise drawn from a stream seeded by ``seed``."""

    mean: float = 0.0
    variance: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError(f"noise variance must be >= 0, got {self.variance}")


def normalize(img):
    """Affinely map intensities onto [0, 1].

    Constant images map to all zeros (the degenerate range is collapsed
    rather than divided by).
    """
    img = np.asarray(img, dtype=np.float64)
    if img.size == 0:
        raise ValueError("cannot normalize an empty image")
    lo = img.min()
    hi = img.max()
    if hi == lo:
        return np.zeros_like(img)
    return (img - lo) / (hi - lo)


def add_gaussian_noise(img, spec: NoiseSpec):
    """Corrupt ``img`` with i.i.d. Gaussian noise generated in row-major order.

    The output is a pure function of (img, spec): the same seed reproduces
    the same corruption bit for bit. Values are deliberately not clipped to
    [0, 1]; the data-fidelity term tolerates out-of-range intensities.
    """
    img = np.asarray(img, dtype=np.float64)
    rng = np.random.default_rng(spec.seed)
    noise = rng.normal(spec.mean, np.sqrt(spec.variance), size=img.shape)
    return img + noise


def to_label_mask(U):
    """Hard labels from memberships: per-pixel argmax, ties to the smallest phase."""
    U = np.asarray(U)
    if U.ndim != 3:
        raise ValueError("membership field must have shape (phases, height, width)")
    return np.argmax(U, axis=0).astype(np.int64)


def ground_truth_to_membership(labels, n_phases: int):
    """One-hot membership field from a label mask."""
    labels = np.asarray(labels)
    if labels.ndim != 2:
        raise ValueError("label mask must be 2-D")
    if labels.min() < 0 or labels.max() >= n_phases:
        raise ValueError(f"labels must lie in [0, {n_phases})")
    U = np.zeros((n_phases,) + labels.shape, dtype=np.float64)
    for k in range(n_phases):
        U[k][labels == k] = 1.0
    return U


def validate_membership(U, n_phases: int | None = None):
    """Check the simplex invariants and return ``U`` as a float64 array.

    Raises ValueError if entries leave [0, 1], per-pixel sums drift from 1
    by more than MEMBERSHIP_SUM_TOL, or any value is non-finite.
    """
    U = np.asarray(U, dtype=np.float64)
    if U.ndim != 3 or U.shape[0] < 2:
        raise ValueError("membership field must have shape (phases >= 2, height, width)")
    if n_phases is not None and U.shape[0] != n_phases:
        raise ValueError(f"expected {n_phases} phases, got {U.shape[0]}")
    if not np.isfinite(U).all():
        raise ValueError("membership field contains non-finite values")
    if U.min() < 0.0 or U.max() > 1.0:
        raise ValueError("membership values must lie in [0, 1]")
    err = np.abs(U.sum(axis=0) - 1.0).max()
    if err > MEMBERSHIP_SUM_TOL:
        raise ValueError(f"per-pixel membership sums deviate from 1 by {err:.3e}")
    return U
