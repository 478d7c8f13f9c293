"""
Verification metrics: Mann-Whitney AUC, ROC curves and error rates
"""

from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Sequence

import numpy as np
from scipy.stats import rankdata
from sklearn import metrics as skmetrics

from ..core.exceptions import DomainError


class Rates(NamedTuple):
    fnr: float
    fpr: float
    tpr: float


@dataclass(frozen=True, eq=False)
class RocCurve:
    """ROC points from (0, 0) to (1, 1) and the thresholds generating them"""
    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray

    def area(self) -> float:
        """Trapezoidal area under the curve"""
        return float(skmetrics.auc(self.fpr, self.tpr))

    def points(self) -> List[Dict[str, float]]:
        return [
            {'fpr': float(f), 'tpr': float(t), 'threshold': float(th)}
            for f, t, th in zip(self.fpr, self.tpr, self.thresholds)
        ]


def _scores(values: Sequence[float], name: str) -> np.ndarray:
    array = np.asarray(values, dtype=np.float64).ravel()
    if array.shape[0] == 0:
        raise DomainError(f"{name} score set is empty")
    if not np.all(np.isfinite(array)):
        raise DomainError(f"{name} scores must be finite")
    return array


def auc(genuine_scores: Sequence[float], impostor_scores: Sequence[float]) -> float:
    """
    Mann-Whitney AUC

    The fraction of (genuine, impostor) pairs where the genuine score is
    higher, counting ties as one half.
    """
    genuine = _scores(genuine_scores, "genuine")
    impostor = _scores(impostor_scores, "impostor")
    n_g, n_i = genuine.shape[0], impostor.shape[0]
    # Midranks are multiples of 1/2, so the U statistic is exact in floating point
    ranks = rankdata(np.concatenate([genuine, impostor]), method='average')
    u = ranks[:n_g].sum() - n_g * (n_g + 1) / 2.0
    return float(u / (n_g * n_i))


def roc_curve(genuine_scores: Sequence[float], impostor_scores: Sequence[float]) -> RocCurve:
    """
    ROC curve with genuine as the positive class

    Every distinct observed score is a threshold (acceptance is score >=
    threshold); an infinite sentinel supplies the (0, 0) endpoint.
    """
    genuine = _scores(genuine_scores, "genuine")
    impostor = _scores(impostor_scores, "impostor")
    labels = np.concatenate([np.ones_like(genuine), np.zeros_like(impostor)])
    scores = np.concatenate([genuine, impostor])
    fpr, tpr, thresholds = skmetrics.roc_curve(labels, scores, drop_intermediate=False)
    # Older scikit-learn uses max + 1 as the sentinel
    thresholds = np.asarray(thresholds, dtype=np.float64).copy()
    thresholds[0] = np.inf
    return RocCurve(np.asarray(fpr, dtype=np.float64), np.asarray(tpr, dtype=np.float64), thresholds)


def rates_at(genuine_scores: Sequence[float], impostor_scores: Sequence[float], delta: float) -> Rates:
    """
    Error rates at a threshold, accepting scores >= delta

    Returns:
        (fnr, fpr, tpr)
    """
    genuine = _scores(genuine_scores, "genuine")
    impostor = _scores(impostor_scores, "impostor")
    fnr = float(np.mean(genuine < delta))
    fpr = float(np.mean(impostor >= delta))
    return Rates(fnr, fpr, 1.0 - fnr)
