"""
Dynamic time warping distances between motion channels and trials
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numba import njit

from ..core.exceptions import DomainError
from ..motion.models import N_CHANNELS, Trial

# nogil lets batch evaluation run on a thread pool; no fastmath so that
# symmetric inputs give bit-identical results
jitkw = {
    "nogil": True,
    "cache": False,
    "fastmath": False,
}

NO_BAND = -1


@dataclass(frozen=True, eq=False)
class DistanceVector:
    """Six per-dimension DTW distances in channel order"""
    d: np.ndarray

    def __post_init__(self):
        d = np.array(self.d, dtype=np.float64)
        if d.shape != (N_CHANNELS,):
            raise DomainError(f"distance vector must have {N_CHANNELS} components, got shape {d.shape}")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise DomainError(f"distance components must be finite and non-negative, got {d.tolist()}")
        d.setflags(write=False)
        object.__setattr__(self, 'd', d)

    def __getitem__(self, index):
        return self.d[index]

    def __len__(self) -> int:
        return N_CHANNELS

    def __eq__(self, other) -> bool:
        if not isinstance(other, DistanceVector):
            return NotImplemented
        return bool(np.array_equal(self.d, other.d))

    __hash__ = None

    def tolist(self) -> List[float]:
        return [float(v) for v in self.d]


@njit(**jitkw)
def _cumulative_cost(a, b, band):
    # Two rolling rows over the shorter series
    m = a.shape[0]
    n = b.shape[0]
    prev = np.full(n, np.inf)
    curr = np.full(n, np.inf)
    for i in range(m):
        for j in range(n):
            if band >= 0 and abs(i - j) > band:
                curr[j] = np.inf
                continue
            diff = a[i] - b[j]
            cost = diff * diff
            if i == 0 and j == 0:
                curr[j] = cost
                continue
            best = np.inf
            if i > 0 and j > 0:
                best = prev[j - 1]
            if i > 0 and prev[j] < best:
                best = prev[j]
            if j > 0 and curr[j - 1] < best:
                best = curr[j - 1]
            curr[j] = cost + best
        tmp = prev
        prev = curr
        curr = tmp
    return prev[n - 1]


@njit(**jitkw)
def _cumulative_matrix(a, b, band):
    m = a.shape[0]
    n = b.shape[0]
    s = np.full((m, n), np.inf)
    for i in range(m):
        for j in range(n):
            if band >= 0 and abs(i - j) > band:
                continue
            diff = a[i] - b[j]
            cost = diff * diff
            if i == 0 and j == 0:
                s[i, j] = cost
                continue
            best = np.inf
            if i > 0 and j > 0:
                best = s[i - 1, j - 1]
            if i > 0 and s[i - 1, j] < best:
                best = s[i - 1, j]
            if j > 0 and s[i, j - 1] < best:
                best = s[i, j - 1]
            s[i, j] = cost + best
    return s


def _as_series(x, name: str) -> np.ndarray:
    series = np.ascontiguousarray(x, dtype=np.float64)
    if series.ndim != 1:
        raise DomainError(f"{name} must be a one-dimensional series")
    if series.shape[0] == 0:
        raise DomainError(f"{name} must not be empty")
    if not np.all(np.isfinite(series)):
        raise DomainError(f"{name} contains non-finite values")
    return series


def _band_radius(band: Optional[int], m: int, n: int) -> int:
    if band is None:
        return NO_BAND
    if band < 0:
        raise DomainError(f"band radius must be non-negative, got {band}")
    # A narrower band than the length difference admits no path
    return max(int(band), abs(m - n))


def _distance(a: np.ndarray, b: np.ndarray, band: int) -> float:
    if b.shape[0] > a.shape[0]:
        a, b = b, a
    return float(np.sqrt(_cumulative_cost(a, b, band)))


def dtw_distance(a: Sequence[float], b: Sequence[float], band: Optional[int] = None) -> float:
    """
    DTW distance between two series

    The cost of aligning a_i with b_j is (a_i - b_j)^2; the result is the
    square root of the cheapest cumulative cost over monotone paths from the
    first to the last pair with steps (0,1), (1,0), (1,1).

    Args:
        a: First series
        b: Second series
        band: Optional Sakoe-Chiba radius in samples; None is unconstrained

    Returns:
        Non-negative distance
    """
    a = _as_series(a, "a")
    b = _as_series(b, "b")
    return _distance(a, b, _band_radius(band, a.shape[0], b.shape[0]))


def dtw_path(a: Sequence[float], b: Sequence[float], band: Optional[int] = None) -> Tuple[float, List[Tuple[int, int]]]:
    """
    DTW distance together with one optimal warping path

    Materializes the full cumulative matrix; use dtw_distance when only the
    distance is needed.

    Returns:
        (distance, path) with 0-based (i, j) index pairs from (0, 0) to (m-1, n-1)
    """
    a = _as_series(a, "a")
    b = _as_series(b, "b")
    m, n = a.shape[0], b.shape[0]
    s = _cumulative_matrix(a, b, _band_radius(band, m, n))

    i, j = m - 1, n - 1
    path = [(i, j)]
    while i > 0 or j > 0:
        if i == 0:
            j -= 1
        elif j == 0:
            i -= 1
        else:
            steps = ((s[i - 1, j - 1], i - 1, j - 1), (s[i - 1, j], i - 1, j), (s[i, j - 1], i, j - 1))
            _, i, j = min(steps, key=lambda step: step[0])
        path.append((i, j))
    path.reverse()
    return float(np.sqrt(s[m - 1, n - 1])), path


def _vector(ta: Trial, tb: Trial, band: Optional[int]) -> DistanceVector:
    m, n = len(ta), len(tb)
    radius = _band_radius(band, m, n)
    return DistanceVector(np.array([
        _distance(
            np.ascontiguousarray(ta.values[:, k]),
            np.ascontiguousarray(tb.values[:, k]),
            radius,
        )
        for k in range(N_CHANNELS)
    ]))


def dtw_vector(ta: Trial, tb: Trial, band: Optional[int] = None) -> DistanceVector:
    """
    Per-dimension DTW distances between two trials

    Component k is the DTW distance between channel k of each trial. Trials
    are compared as given; filtering is the caller's job.
    """
    return _vector(ta, tb, band)


def dtw_vectors(
    pairs: Sequence[Tuple[Trial, Trial]],
    band: Optional[int] = None,
    workers: int = 1,
) -> List[DistanceVector]:
    """
    Distance vectors for many trial pairs, in input order

    Args:
        pairs: (trial, trial) pairs
        band: Optional Sakoe-Chiba radius
        workers: Thread count; pairs are independent so any count gives the same result
    """
    if workers <= 1 or len(pairs) < 2:
        return [_vector(ta, tb, band) for ta, tb in pairs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda pair: _vector(pair[0], pair[1], band), pairs))
