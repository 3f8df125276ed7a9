"""Per-region segmentation overlap scores (DICE and Jaccard)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RegionScore:
    phase: int
    dice: float
    jaccard: float


@dataclass(frozen=True)
class ScoreReport:
    per_phase: tuple[RegionScore, ...]
    mean_dice: float
    mean_jaccard: float
    include_background: bool


def _counts(pred, truth, phase):
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValueError("prediction and ground truth shapes differ")
    A = pred == phase
    B = truth == phase
    return int(A.sum()), int(B.sum()), int((A & B).sum())


def dice(pred, truth, phase: int) -> float:
    """2|A&B| / (|A|+|B|); 1.0 when the region is absent from both masks."""
    na, nb, ni = _counts(pred, truth, phase)
    if na + nb == 0:
        return 1.0
    return 2.0 * ni / (na + nb)


def jaccard(pred, truth, phase: int) -> float:
    """|A&B| / |A or B|; 1.0 when the region is absent from both masks."""
    na, nb, ni = _counts(pred, truth, phase)
    union = na + nb - ni
    if union == 0:
        return 1.0
    return ni / union


def score_all(pred, truth, n_phases: int, include_background: bool = False) -> ScoreReport:
    """Score every phase and average them.

    With include_background=False the averages run over phases 1..N-1 only,
    the convention for multiphase tables where phase 0 is the background.
    """
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.max() >= n_phases or truth.max() >= n_phases:
        raise ValueError(f"labels must lie in [0, {n_phases})")
    scores = tuple(
        RegionScore(phase=k, dice=dice(pred, truth, k), jaccard=jaccard(pred, truth, k))
        for k in range(n_phases)
    )
    averaged = scores if include_background else scores[1:]
    mean_dice = sum(s.dice for s in averaged) / len(averaged)
    mean_jaccard = sum(s.jaccard for s in averaged) / len(averaged)
    return ScoreReport(
        per_phase=scores,
        mean_dice=mean_dice,
        mean_jaccard=mean_jaccard,
        include_background=include_background,
    )
