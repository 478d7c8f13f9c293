"""
Savitzky-Golay smoothing of motion channels
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.signal import savgol_coeffs

from ..core.exceptions import DomainError, TrialTooShortError
from ..motion.models import MIN_TRIAL_LENGTH, Trial

DEFAULT_WINDOW = 9
DEFAULT_DEGREE = 2


@dataclass(frozen=True)
class SgKernel:
    """Least-squares smoothing weights evaluated at the window center"""
    window: int
    degree: int
    weights: tuple

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=np.float64)


def _check_window(window: int, degree: int):
    if isinstance(window, bool) or not isinstance(window, (int, np.integer)):
        raise DomainError(f"window must be an integer, got {window!r}")
    if isinstance(degree, bool) or not isinstance(degree, (int, np.integer)):
        raise DomainError(f"degree must be an integer, got {degree!r}")
    if window < 3 or window % 2 == 0:
        raise DomainError(f"window must be an odd integer >= 3, got {window}")
    if not 0 <= degree < window:
        raise DomainError(f"degree must satisfy 0 <= degree < window, got degree={degree}, window={window}")


@lru_cache(maxsize=None)
def _kernel_weights(window: int, degree: int) -> tuple:
    # Least squares on integer abscissae -h..h, evaluated at 0
    return tuple(float(w) for w in savgol_coeffs(window, degree))


def sg_coefficients(window: int, degree: int) -> SgKernel:
    """
    Compute the smoothing kernel for an odd window and polynomial degree

    Args:
        window: Odd window length >= 3
        degree: Polynomial degree, 0 <= degree < window

    Returns:
        SgKernel whose weights reproduce polynomials up to `degree`
    """
    _check_window(window, degree)
    return SgKernel(int(window), int(degree), _kernel_weights(int(window), int(degree)))


def _edge_value(x: np.ndarray, i: int, degree: int) -> float:
    n = x.shape[0]
    half = min(i, n - 1 - i)
    size = 2 * half + 1
    if size < 3:
        return float(x[i])
    weights = _kernel_weights(size, min(degree, size - 1))
    return float(np.dot(weights, x[i - half:i + half + 1]))


def sg_smooth(channel: np.ndarray, window: int = DEFAULT_WINDOW, degree: int = DEFAULT_DEGREE) -> np.ndarray:
    """
    Smooth one channel with a Savitzky-Golay filter

    Interior points use the full window. Each of the first and last
    (window - 1) / 2 points uses the largest odd window centered on it that
    fits inside the series, with the degree capped at that window minus one.

    Args:
        channel: One motion dimension
        window: Odd window length
        degree: Polynomial degree

    Returns:
        Smoothed channel of the same length
    """
    _check_window(window, degree)
    x = np.asarray(channel, dtype=np.float64)
    if x.ndim != 1:
        raise DomainError("channel must be one-dimensional")
    n = x.shape[0]
    if n < max(window, MIN_TRIAL_LENGTH):
        raise TrialTooShortError(f"channel has {n} samples, at least {max(window, MIN_TRIAL_LENGTH)} are required")

    weights = np.asarray(_kernel_weights(int(window), int(degree)))
    half = (window - 1) // 2

    out = np.empty_like(x)
    out[half:n - half] = np.correlate(x, weights, mode='valid')
    for i in range(half):
        out[i] = _edge_value(x, i, degree)
        out[n - 1 - i] = _edge_value(x, n - 1 - i, degree)
    return out


def filter_trial(trial: Trial, window: int = DEFAULT_WINDOW, degree: int = DEFAULT_DEGREE) -> Trial:
    """
    Smooth all six channels of a trial independently

    Timestamps and labels are carried over unchanged.
    """
    smoothed = np.column_stack([
        sg_smooth(trial.values[:, k], window, degree) for k in range(trial.values.shape[1])
    ])
    return trial.with_values(smoothed)
