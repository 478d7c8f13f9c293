"""
User templates: pairwise DTW statistics, group ideal distance and rank weights
"""

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.stats import poisson

from ..core.exceptions import DomainError
from ..core.logger import get_logger
from ..dsp.savgol import DEFAULT_DEGREE, DEFAULT_WINDOW, filter_trial
from ..dtw.distance import DistanceVector, dtw_vectors
from ..motion.models import N_CHANNELS, Trial

logger = get_logger(__name__)

DEFAULT_THRESHOLD = 0.55
UNIFORM_WEIGHTS = tuple([1.0 / N_CHANNELS] * N_CHANNELS)
UPPER_QUARTILE = 0.75

_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class PairwiseDistances:
    """
    DTW distances between all unordered pairs of enrollment trials

    Attributes:
        n: Number of trials
        per_dim: (6, n(n-1)/2) array; column order follows itertools.combinations
    """
    n: int
    per_dim: np.ndarray

    def __post_init__(self):
        per_dim = np.array(self.per_dim, dtype=np.float64)
        expected = self.n * (self.n - 1) // 2
        if per_dim.shape != (N_CHANNELS, expected):
            raise DomainError(f"expected {N_CHANNELS} x {expected} pairwise distances, got {per_dim.shape}")
        per_dim.setflags(write=False)
        object.__setattr__(self, 'per_dim', per_dim)

    def dimension(self, k: int) -> np.ndarray:
        """Distances of dimension k (1..6)"""
        return self.per_dim[k - 1]


def _normalize(weights: Sequence[float], name: str) -> Tuple[float, ...]:
    values = np.asarray(weights, dtype=np.float64)
    if values.ndim != 1 or np.any(values < 0) or not np.all(np.isfinite(values)):
        raise DomainError(f"{name} must be a vector of finite non-negative reals")
    total = values.sum()
    if abs(total - 1.0) > _SUM_TOLERANCE:
        raise DomainError(f"{name} must sum to 1, got {total!r}")
    return tuple(float(v) for v in values)


@dataclass(frozen=True, eq=False)
class Profile:
    """
    A trained user template

    Attributes:
        trials: Filtered enrollment trials
        ideal: Group ideal distance e
        weights_mu: Per-dimension weights of the total similarity score
        threshold_delta: Acceptance threshold
        rank_weights_rho: Poisson rank weights, one per enrollment trial
        window: Smoothing window used for the trials
        degree: Smoothing polynomial degree
    """
    trials: Tuple[Trial, ...]
    ideal: DistanceVector
    weights_mu: Tuple[float, ...] = UNIFORM_WEIGHTS
    threshold_delta: float = DEFAULT_THRESHOLD
    rank_weights_rho: Tuple[float, ...] = field(default=())
    window: int = DEFAULT_WINDOW
    degree: int = DEFAULT_DEGREE

    def __post_init__(self):
        trials = tuple(self.trials)
        n = len(trials)
        if n < 2:
            raise DomainError(f"a profile needs at least 2 enrollment trials, got {n}")
        if len(self.weights_mu) != N_CHANNELS:
            raise DomainError(f"weights_mu must have {N_CHANNELS} components")
        if not 0.0 < float(self.threshold_delta) <= 1.0:
            raise DomainError(f"threshold_delta must lie in (0, 1], got {self.threshold_delta}")
        rho = self.rank_weights_rho or poisson_rank_weights(n)
        if len(rho) != n:
            raise DomainError(f"rank_weights_rho must have {n} components, got {len(rho)}")

        object.__setattr__(self, 'trials', trials)
        object.__setattr__(self, 'weights_mu', _normalize(self.weights_mu, "weights_mu"))
        object.__setattr__(self, 'rank_weights_rho', _normalize(rho, "rank_weights_rho"))
        object.__setattr__(self, 'threshold_delta', float(self.threshold_delta))

    @property
    def n(self) -> int:
        return len(self.trials)

    def with_weights(self, weights_mu: Sequence[float]) -> "Profile":
        """Copy of this profile with new dimension weights"""
        return Profile(self.trials, self.ideal, tuple(weights_mu), self.threshold_delta,
                       self.rank_weights_rho, self.window, self.degree)

    def with_threshold(self, threshold_delta: float) -> "Profile":
        """Copy of this profile with a new threshold"""
        return Profile(self.trials, self.ideal, self.weights_mu, threshold_delta,
                       self.rank_weights_rho, self.window, self.degree)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Profile):
            return NotImplemented
        return (
            self.trials == other.trials
            and self.ideal == other.ideal
            and self.weights_mu == other.weights_mu
            and self.threshold_delta == other.threshold_delta
            and self.rank_weights_rho == other.rank_weights_rho
            and (self.window, self.degree) == (other.window, other.degree)
        )

    __hash__ = None


def pairwise_distances(trials: Sequence[Trial], band: Optional[int] = None, workers: int = 1) -> PairwiseDistances:
    """
    DTW distance vectors between every unordered pair of trials

    Args:
        trials: Filtered enrollment trials, at least 2
        band: Optional Sakoe-Chiba radius
        workers: Thread count for the pair computations
    """
    n = len(trials)
    if n < 2:
        raise DomainError(f"pairwise distances need at least 2 trials, got {n}")
    pairs = [(trials[i], trials[j]) for i, j in combinations(range(n), 2)]
    vectors = dtw_vectors(pairs, band=band, workers=workers)
    return PairwiseDistances(n, np.column_stack([v.d for v in vectors]))


def upper_quartile(values: Sequence[float]) -> float:
    """Nearest-rank upper quartile: the ceil(0.75 m)-th smallest value"""
    ordered = np.sort(np.asarray(values, dtype=np.float64))
    m = ordered.shape[0]
    if m == 0:
        raise DomainError("upper quartile of an empty set")
    rank = math.ceil(UPPER_QUARTILE * m)
    return float(ordered[rank - 1])


def ideal_distance(pd: PairwiseDistances) -> DistanceVector:
    """Group ideal distance e: per-dimension upper quartile of the pairwise distances"""
    return DistanceVector(np.array([upper_quartile(pd.per_dim[k]) for k in range(N_CHANNELS)]))


def poisson_rank_weights(n: int) -> Tuple[float, ...]:
    """
    Rank weights rho_i proportional to the Poisson pmf at i = 1..n

    The rate is max(1, floor(n / 5)); the floor of 1 keeps the weights
    defined for groups smaller than five.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 2:
        raise DomainError(f"rank weights need n >= 2, got {n!r}")
    lam = max(1, n // 5)
    beta = poisson.pmf(np.arange(1, n + 1), lam)
    rho = beta / beta.sum()
    return tuple(float(r) for r in rho)


def weighted_group_distance(distances: np.ndarray, rho: Sequence[float]) -> float:
    """Sort the distances ascending and weight them by rank"""
    ordered = np.sort(np.asarray(distances, dtype=np.float64))
    return float(np.dot(np.asarray(rho, dtype=np.float64), ordered))


def distance_to_group(probe: Trial, profile: Profile, band: Optional[int] = None, workers: int = 1) -> DistanceVector:
    """
    Rank-weighted DTW distance s from a filtered probe to the enrollment group

    Per dimension the probe's distances to each enrollment trial are sorted
    ascending, so the closest trials receive the largest weights.
    """
    vectors = dtw_vectors([(probe, trial) for trial in profile.trials], band=band, workers=workers)
    table = np.vstack([v.d for v in vectors])
    return DistanceVector(np.array([
        weighted_group_distance(table[:, k], profile.rank_weights_rho) for k in range(N_CHANNELS)
    ]))


def train(
    trials: Sequence[Trial],
    weights_mu: Optional[Sequence[float]] = None,
    threshold_delta: float = DEFAULT_THRESHOLD,
    window: int = DEFAULT_WINDOW,
    degree: int = DEFAULT_DEGREE,
    band: Optional[int] = None,
    workers: int = 1,
) -> Profile:
    """
    Train a profile from raw enrollment trials

    Args:
        trials: At least 2 raw trials of the same word
        weights_mu: Dimension weights (uniform when None)
        threshold_delta: Acceptance threshold
        window: Smoothing window
        degree: Smoothing polynomial degree
        band: Optional Sakoe-Chiba radius
        workers: Thread count for DTW

    Returns:
        Profile holding the filtered trials, e, mu, delta and rho
    """
    if len(trials) < 2:
        raise DomainError(f"training needs at least 2 trials, got {len(trials)}")

    filtered = tuple(filter_trial(t, window, degree) for t in trials)
    pd = pairwise_distances(filtered, band=band, workers=workers)
    ideal = ideal_distance(pd)
    logger.debug(f"Trained profile on {len(filtered)} trials - e={ideal.tolist()}")

    return Profile(
        trials=filtered,
        ideal=ideal,
        weights_mu=tuple(weights_mu) if weights_mu is not None else UNIFORM_WEIGHTS,
        threshold_delta=threshold_delta,
        rank_weights_rho=poisson_rank_weights(len(filtered)),
        window=window,
        degree=degree,
    )
