"""
Template training and verification
"""

from .profile import (
    DEFAULT_THRESHOLD,
    UNIFORM_WEIGHTS,
    PairwiseDistances,
    Profile,
    distance_to_group,
    ideal_distance,
    pairwise_distances,
    poisson_rank_weights,
    train,
    upper_quartile,
    weighted_group_distance,
)
from .scoring import (
    DEFAULT_AUC_FLOOR,
    Decision,
    ScoreReport,
    authenticate,
    calibrate_weights,
    decide,
    dimension_scores,
    similarity_scores,
    total_similarity,
    weights_from_auc,
)

__all__ = [
    'DEFAULT_AUC_FLOOR',
    'DEFAULT_THRESHOLD',
    'UNIFORM_WEIGHTS',
    'Decision',
    'PairwiseDistances',
    'Profile',
    'ScoreReport',
    'authenticate',
    'calibrate_weights',
    'decide',
    'dimension_scores',
    'distance_to_group',
    'ideal_distance',
    'pairwise_distances',
    'poisson_rank_weights',
    'similarity_scores',
    'total_similarity',
    'train',
    'upper_quartile',
    'weighted_group_distance',
    'weights_from_auc',
]
