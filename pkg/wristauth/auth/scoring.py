"""
Similarity scoring, accept/deny decisions and AUC-based weight calibration
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import DomainError
from ..core.logger import get_logger
from ..dsp.savgol import filter_trial
from ..dtw.distance import DistanceVector
from ..evaluation.metrics import auc
from ..motion.models import N_CHANNELS, Trial
from .profile import UNIFORM_WEIGHTS, Profile, distance_to_group

logger = get_logger(__name__)

DEFAULT_AUC_FLOOR = 0.85

_WEIGHT_TOLERANCE = 1e-9


class Decision(str, Enum):
    ACCEPT = "accept"
    DENY = "deny"


@dataclass(frozen=True)
class ScoreReport:
    """Outcome of one verification attempt"""
    ss: Tuple[float, ...]
    tss: float
    threshold: float
    decision: Decision
    distance: Optional[Tuple[float, ...]] = None

    @property
    def accepted(self) -> bool:
        return self.decision is Decision.ACCEPT

    def to_dict(self) -> Dict[str, Any]:
        report = {
            'tss': self.tss,
            'ss': list(self.ss),
            'threshold': self.threshold,
            'decision': self.decision.value,
        }
        if self.distance is not None:
            report['distance'] = list(self.distance)
        return report


def _components(vector, name: str) -> np.ndarray:
    values = vector.d if isinstance(vector, DistanceVector) else np.asarray(vector, dtype=np.float64)
    if values.shape != (N_CHANNELS,):
        raise DomainError(f"{name} must have {N_CHANNELS} components")
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise DomainError(f"{name} components must be finite and non-negative, got {values.tolist()}")
    return values


def similarity_scores(e, s) -> Tuple[float, ...]:
    """
    Per-dimension similarity min(e_k / s_k, 1); a zero distance scores 1

    The ratio is capped at 1 so that a probe closer to the group than its
    ideal distance scores full marks.
    """
    e = _components(e, "e")
    s = _components(s, "s")
    ss = []
    for e_k, s_k in zip(e, s):
        ss.append(1.0 if s_k == 0 else float(min(e_k / s_k, 1.0)))
    return tuple(ss)


def total_similarity(ss: Sequence[float], mu: Sequence[float]) -> float:
    """Weighted total similarity score"""
    ss = np.asarray(ss, dtype=np.float64)
    mu = np.asarray(mu, dtype=np.float64)
    if ss.shape != (N_CHANNELS,) or mu.shape != (N_CHANNELS,):
        raise DomainError(f"scores and weights must have {N_CHANNELS} components")
    if np.any(mu < 0):
        raise DomainError(f"weights must be non-negative, got {mu.tolist()}")
    if abs(mu.sum() - 1.0) > _WEIGHT_TOLERANCE:
        raise DomainError(f"weights must sum to 1, got {mu.sum()!r}")
    tss = float(np.dot(mu, ss))
    return min(max(tss, 0.0), 1.0)


def decide(tss: float, threshold: float) -> Decision:
    """Accept when the total score reaches the threshold (inclusive)"""
    return Decision.ACCEPT if tss >= threshold else Decision.DENY


def score_filtered(probe: Trial, profile: Profile, band: Optional[int] = None, workers: int = 1) -> ScoreReport:
    """Score a probe that has already been filtered"""
    s = distance_to_group(probe, profile, band=band, workers=workers)
    ss = similarity_scores(profile.ideal, s)
    tss = total_similarity(ss, profile.weights_mu)
    return ScoreReport(ss, tss, profile.threshold_delta, decide(tss, profile.threshold_delta), tuple(s.tolist()))


def authenticate(probe: Trial, profile: Profile, band: Optional[int] = None, workers: int = 1) -> ScoreReport:
    """
    Verify a raw probe against a profile

    The probe is smoothed with the profile's filter settings, its distance to
    the enrollment group is turned into similarity scores, and the total
    score is compared with the profile threshold.
    """
    filtered = filter_trial(probe, profile.window, profile.degree)
    report = score_filtered(filtered, profile, band=band, workers=workers)
    logger.debug(f"Probe scored tss={report.tss:.4f} -> {report.decision.value}")
    return report


def dimension_scores(probes: Sequence[Trial], profile: Profile, band: Optional[int] = None,
                     workers: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """
    Score many raw probes

    Returns:
        (N x 6 similarity scores, N total scores)
    """
    reports = [authenticate(p, profile, band=band, workers=workers) for p in probes]
    ss = np.array([r.ss for r in reports], dtype=np.float64).reshape(len(reports), N_CHANNELS)
    tss = np.array([r.tss for r in reports], dtype=np.float64)
    return ss, tss


def weights_from_auc(auc_values: Sequence[float], floor: float = DEFAULT_AUC_FLOOR) -> Tuple[float, ...]:
    """
    Dimension weights proportional to each dimension's AUC margin over the floor

    B_k = max(A_k - floor, 0), mu_k = B_k / sum(B); uniform when no
    dimension clears the floor.
    """
    a = np.asarray(auc_values, dtype=np.float64)
    if a.shape != (N_CHANNELS,):
        raise DomainError(f"expected {N_CHANNELS} AUC values, got {a.shape}")
    b = np.maximum(a - floor, 0.0)
    total = b.sum()
    if total <= 0:
        logger.warning(f"No motion dimension has AUC above {floor}; falling back to uniform weights")
        return UNIFORM_WEIGHTS
    return tuple(float(v) for v in b / total)


def calibrate_weights(genuine_ss_per_dim, impostor_ss_per_dim,
                      floor: float = DEFAULT_AUC_FLOOR) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    """
    Calibrate dimension weights from labeled similarity scores

    Args:
        genuine_ss_per_dim: (N_g x 6) scores of genuine probes
        impostor_ss_per_dim: (N_i x 6) scores of impostor probes
        floor: AUC a dimension must exceed to receive weight

    Returns:
        (mu, per-dimension AUC)
    """
    genuine = np.asarray(genuine_ss_per_dim, dtype=np.float64)
    impostor = np.asarray(impostor_ss_per_dim, dtype=np.float64)
    for name, table in (("genuine", genuine), ("impostor", impostor)):
        if table.ndim != 2 or table.shape[1] != N_CHANNELS:
            raise DomainError(f"{name} scores must be an N x {N_CHANNELS} table")
        if table.shape[0] == 0:
            raise DomainError(f"{name} score set is empty")

    aucs = tuple(auc(genuine[:, k], impostor[:, k]) for k in range(N_CHANNELS))
    mu = weights_from_auc(aucs, floor)
    logger.info(f"Calibrated weights from AUC {['%.4f' % a for a in aucs]}")
    return mu, aucs
