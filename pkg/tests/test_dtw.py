"""
Tests for dynamic time warping
"""

import math
import warnings
from functools import lru_cache

import numpy as np
import pytest
from numba import njit

from wristauth.core.exceptions import DomainError
from wristauth.dtw.distance import DistanceVector, dtw_distance, dtw_path, dtw_vector, dtw_vectors, jitkw
from wristauth.synth.generator import gen_trial

from .conftest import make_trial


def exhaustive_dtw(a, b) -> float:
    """Minimum over every monotone path by plain recursion"""
    a, b = tuple(a), tuple(b)

    @lru_cache(maxsize=None)
    def best(i, j):
        cost = (a[i] - b[j]) ** 2
        if i == 0 and j == 0:
            return cost
        options = []
        if i > 0:
            options.append(best(i - 1, j))
        if j > 0:
            options.append(best(i, j - 1))
        if i > 0 and j > 0:
            options.append(best(i - 1, j - 1))
        return cost + min(options)

    return math.sqrt(best(len(a) - 1, len(b) - 1))


class TestDtwDistance:
    """Test the scalar DTW distance"""

    def test_identity(self, rng):
        a = rng.normal(size=40)
        assert dtw_distance(a, a) == 0.0

    def test_two_point_example(self):
        """Test that (0,0) vs (1,1) costs the diagonal path"""
        assert dtw_distance([0, 0], [1, 1]) == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_warping_absorbs_repeats(self):
        assert dtw_distance([1, 2, 3], [1, 2, 2, 3]) == 0.0

    def test_exhaustive_oracle(self, rng):
        """Test against path enumeration on small integer series"""
        for _ in range(500):
            a = rng.integers(-3, 4, size=int(rng.integers(1, 9))).astype(float)
            b = rng.integers(-3, 4, size=int(rng.integers(1, 9))).astype(float)
            assert dtw_distance(a, b) == exhaustive_dtw(a, b)

    def test_symmetry(self, rng):
        """Test that swapping arguments gives the identical distance"""
        for _ in range(50):
            a = rng.normal(size=int(rng.integers(5, 30)))
            b = rng.normal(size=int(rng.integers(5, 30)))
            assert dtw_distance(a, b) == dtw_distance(b, a)

    def test_constant_series(self):
        """Test the closed form 3|g| for length-9 constants"""
        assert dtw_distance(np.zeros(9), np.full(9, 2.0)) == pytest.approx(6.0, abs=1e-12)

    def test_band_never_below_unconstrained(self, rng):
        for _ in range(30):
            a = rng.normal(size=25)
            b = rng.normal(size=20)
            assert dtw_distance(a, b, band=2) >= dtw_distance(a, b) - 1e-12

    def test_band_widened_to_length_gap(self):
        """Test that a band narrower than the length difference still finds a path"""
        d = dtw_distance(np.zeros(20), np.zeros(5), band=0)
        assert d == 0.0

    def test_wide_band_is_unconstrained(self, rng):
        a, b = rng.normal(size=15), rng.normal(size=12)
        assert dtw_distance(a, b, band=100) == dtw_distance(a, b)

    @pytest.mark.parametrize("a,b", [([], [1.0]), ([1.0, np.nan], [1.0]), ([[1.0]], [1.0])])
    def test_invalid_series(self, a, b):
        with pytest.raises(DomainError):
            dtw_distance(a, b)

    def test_negative_band(self):
        with pytest.raises(DomainError):
            dtw_distance([1.0, 2.0], [1.0], band=-1)

    @pytest.mark.parametrize("c", [2.0, -0.5, 3.7])
    def test_scaling(self, rng, c):
        """Test that scaling both series scales the distance by |c|"""
        for _ in range(20):
            a = rng.normal(size=int(rng.integers(5, 30)))
            b = rng.normal(size=int(rng.integers(5, 30)))
            assert dtw_distance(c * a, c * b) == pytest.approx(abs(c) * dtw_distance(a, b), rel=1e-9)


class TestKernelOptions:
    """Test the compile options of the DTW kernels"""

    def test_compiles_without_warnings(self):
        """Test that the shared options are all ones njit accepts silently"""
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            kernel = njit(**jitkw)(lambda x: x + 1.0)
            assert kernel(1.0) == 2.0

        assert not [w for w in caught if "ignored" in str(w.message)]


class TestDtwPath:
    """Test warping path recovery"""

    def test_path_shape(self, rng):
        """Test corner endpoints, unit steps and path length bounds"""
        for _ in range(50):
            m, n = int(rng.integers(1, 15)), int(rng.integers(1, 15))
            a, b = rng.normal(size=m), rng.normal(size=n)
            distance, path = dtw_path(a, b)

            assert path[0] == (0, 0)
            assert path[-1] == (m - 1, n - 1)
            assert max(m, n) <= len(path) <= m + n - 1
            for (i0, j0), (i1, j1) in zip(path, path[1:]):
                assert (i1 - i0, j1 - j0) in {(0, 1), (1, 0), (1, 1)}

    def test_path_cost_matches_distance(self, rng):
        for _ in range(50):
            a, b = rng.normal(size=12), rng.normal(size=9)
            distance, path = dtw_path(a, b)
            cost = sum((a[i] - b[j]) ** 2 for i, j in path)

            assert math.sqrt(cost) == pytest.approx(distance, rel=1e-12)
            assert distance == pytest.approx(dtw_distance(a, b), rel=1e-12)

    def test_zero_cost_path(self):
        distance, path = dtw_path([1, 2, 3], [1, 2, 2, 3])
        assert distance == 0.0
        assert path == [(0, 0), (1, 1), (1, 2), (2, 3)]


class TestDtwVector:
    """Test per-dimension distances between trials"""

    def test_identical_trials(self, style):
        trial = gen_trial(style, 0)
        assert dtw_vector(trial, trial) == DistanceVector(np.zeros(6))

    def test_dimensions_independent(self, rng):
        """Test that a change in channel 1 only moves component 1"""
        values = rng.normal(size=(30, 6))
        changed = values.copy()
        changed[:, 0] += 1.0
        d = dtw_vector(make_trial(values), make_trial(changed))

        assert d[0] > 0
        assert np.all(d.d[1:] == 0.0)

    def test_matches_channel_distances(self, style):
        ta, tb = gen_trial(style, 1), gen_trial(style, 2)
        d = dtw_vector(ta, tb)
        for k in range(6):
            assert d[k] == dtw_distance(ta.values[:, k], tb.values[:, k])

    def test_batch_order_and_workers(self, style, other_style):
        """Test that threaded batches keep input order and values"""
        trials = [gen_trial(style, s) for s in range(3)] + [gen_trial(other_style, s) for s in range(3)]
        pairs = [(trials[i], trials[j]) for i in range(6) for j in range(i + 1, 6)]

        serial = dtw_vectors(pairs)
        threaded = dtw_vectors(pairs, workers=4)
        assert serial == threaded
        assert serial[0] == dtw_vector(*pairs[0])

    def test_vector_validation(self):
        with pytest.raises(DomainError):
            DistanceVector([1.0, 2.0])
        with pytest.raises(DomainError):
            DistanceVector([1.0, -1.0, 0, 0, 0, 0])
