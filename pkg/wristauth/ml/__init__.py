"""
Closed-set baseline: features, regularized regression and a linear classifier
"""

from .contrast import CrossValidationRow, FeatureSelection, FlawReport, cross_validate, open_set_flaw_demo, select_features
from .features import (
    CORE_FEATURES,
    FeatureVector,
    correlation_matrix,
    dft,
    extract_features,
    feature_columns,
    feature_matrix,
)
from .models import ClosedSetClassifier, train_closed_set
from .regression import lasso_fit, ridge_fit

__all__ = [
    "CORE_FEATURES",
    "ClosedSetClassifier",
    "CrossValidationRow",
    "FeatureSelection",
    "FeatureVector",
    "FlawReport",
    "correlation_matrix",
    "cross_validate",
    "dft",
    "extract_features",
    "feature_columns",
    "feature_matrix",
    "lasso_fit",
    "open_set_flaw_demo",
    "ridge_fit",
    "select_features",
    "train_closed_set",
]
