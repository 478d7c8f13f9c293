"""
Statistical and frequency-domain features of motion trials
"""

from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np
import pandas as pd
from scipy.special import xlogy
from scipy.stats import kurtosis, skew

from ..core.exceptions import DomainError
from ..motion.models import CHANNELS, N_CHANNELS, Trial

CORE_FEATURES = (
    "mean", "min", "max", "range", "variance",
    "kurtosis", "skewness", "energy", "entropy",
)

DEFAULT_PAIRS = 1000
DEFAULT_BINS = 20

Seed = Union[int, Sequence[int]]


def dft(series: Sequence[float]) -> np.ndarray:
    """Unnormalized discrete Fourier transform"""
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] == 0:
        raise DomainError("DFT needs a non-empty one-dimensional series")
    return np.fft.fft(x)


def spectral_energy(spectrum: np.ndarray) -> float:
    """Sum of |v_i|^2"""
    return float(np.sum(np.abs(spectrum) ** 2))


def spectral_entropy(spectrum: np.ndarray) -> float:
    """Sum of |v_i|^2 ln |v_i|^2, with 0 ln 0 = 0"""
    power = np.abs(spectrum) ** 2
    return float(np.sum(xlogy(power, power)))


def channel_statistics(x: np.ndarray) -> List[float]:
    """The nine core features of one channel, in CORE_FEATURES order"""
    variance = float(np.var(x))
    if variance == 0.0:
        kurt, skewness = 0.0, 0.0
    else:
        # Population moments; kurtosis is not excess
        kurt = float(kurtosis(x, fisher=False, bias=True))
        skewness = float(skew(x, bias=True))
    spectrum = dft(x)
    lo, hi = float(np.min(x)), float(np.max(x))
    return [
        float(np.mean(x)), lo, hi, hi - lo, variance,
        kurt, skewness, spectral_energy(spectrum), spectral_entropy(spectrum),
    ]


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """
    Features of one trial

    Attributes:
        core: 54 values, nine per channel in CORE_FEATURES order
        dis: (6, bins) histograms of random two-point differences, each summing to 1
        peak: Per-channel maximum absolute value
    """
    core: np.ndarray
    dis: np.ndarray
    peak: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.core, self.dis.ravel(), self.peak])


def difference_histogram(x: np.ndarray, first: np.ndarray, second: np.ndarray, bins: int) -> np.ndarray:
    """Normalized histogram of x[first] - x[second] over [-r, r], r = max(x) - min(x)"""
    r = float(np.max(x) - np.min(x))
    if r == 0.0:
        r = 1.0
    counts, _ = np.histogram(x[first] - x[second], bins=bins, range=(-r, r))
    return counts / float(first.shape[0])


def extract_features(trial: Trial, rng_seed: Seed = 0, pairs: int = DEFAULT_PAIRS,
                     bins: int = DEFAULT_BINS) -> FeatureVector:
    """
    Feature vector of a filtered trial

    The sampled index pairs are shared by all channels, so permuting
    channels permutes the feature blocks.

    Args:
        trial: Filtered trial
        rng_seed: Seed for the random point pairs
        pairs: Number of point pairs per channel
        bins: Histogram bins
    """
    if pairs < 1 or bins < 1:
        raise DomainError("pairs and bins must be positive")
    values = trial.values
    n = values.shape[0]
    rng = np.random.default_rng(rng_seed)
    first = rng.integers(0, n, size=pairs)
    second = rng.integers(0, n, size=pairs)

    core, dis, peak = [], [], []
    for k in range(N_CHANNELS):
        x = values[:, k]
        core.extend(channel_statistics(x))
        dis.append(difference_histogram(x, first, second, bins))
        peak.append(float(np.max(np.abs(x))))
    return FeatureVector(np.array(core), np.vstack(dis), np.array(peak))


def core_columns() -> List[str]:
    return [f"{c}_{f}" for c in CHANNELS for f in CORE_FEATURES]


def feature_columns(bins: int = DEFAULT_BINS) -> List[str]:
    """Column order of feature matrices: core, then Dis bins, then peaks"""
    dis = [f"{c}_dis_{b:02d}" for c in CHANNELS for b in range(bins)]
    peak = [f"{c}_peak" for c in CHANNELS]
    return core_columns() + dis + peak


def feature_matrix(trials: Sequence[Trial], seed: int = 0, pairs: int = DEFAULT_PAIRS,
                   bins: int = DEFAULT_BINS) -> pd.DataFrame:
    """
    Features of many trials, one row each

    Trial i draws its point pairs from the seed stream (seed, i).
    """
    rows = [extract_features(t, (int(seed), i), pairs, bins).as_array() for i, t in enumerate(trials)]
    return pd.DataFrame(np.vstack(rows) if rows else np.empty((0, len(feature_columns(bins)))),
                        columns=feature_columns(bins))


def correlation_matrix(features: pd.DataFrame) -> pd.DataFrame:
    """Pearson correlation of the core features; constant columns correlate 0 with the rest"""
    columns = core_columns()
    values = features[columns].corr().fillna(0.0).to_numpy(copy=True)
    np.fill_diagonal(values, 1.0)
    return pd.DataFrame(values, index=columns, columns=columns)
