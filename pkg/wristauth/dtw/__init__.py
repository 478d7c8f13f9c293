"""
Dynamic time warping distances
"""

from .distance import DistanceVector, dtw_distance, dtw_path, dtw_vector, dtw_vectors

__all__ = ["DistanceVector", "dtw_distance", "dtw_path", "dtw_vector", "dtw_vectors"]
