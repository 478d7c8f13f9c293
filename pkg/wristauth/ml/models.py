"""
Closed-set word classifier used as the contrast to template verification
"""

from collections import Counter
from typing import Any, Dict, List, Sequence

import numpy as np
from sklearn.linear_model import SGDClassifier
from sklearn.preprocessing import StandardScaler

from ..core.exceptions import DomainError, ProfileFormatError
from ..core.logger import LoggerMixin


class ClosedSetClassifier(LoggerMixin):
    """
    One-vs-rest linear max-margin classifier on standardized features

    Prediction is the argmax of the per-class decision values, so every
    input receives one of the training labels; there is no reject path.
    """

    def __init__(self, alpha: float = 1e-4, max_iter: int = 1000, seed: int = 7):
        """
        Initialize classifier

        Args:
            alpha: Regularization strength of the hinge-loss objective
            max_iter: Maximum passes of stochastic subgradient descent
            seed: Seed for the sample order
        """
        self.alpha = alpha
        self.max_iter = max_iter
        self.seed = seed
        self.classes_: List[str] = []
        self.mean_ = None
        self.scale_ = None
        self.coef_ = None
        self.intercept_ = None
        self.feature_names: List[str] = []

    @property
    def is_trained(self) -> bool:
        return self.coef_ is not None

    def fit(self, X, labels: Sequence[str], feature_names: Sequence[str] = ()) -> "ClosedSetClassifier":
        """
        Train on labeled feature rows

        Args:
            X: (N, d) feature matrix
            labels: N class labels
            feature_names: Optional column names kept with the model
        """
        X = np.asarray(X, dtype=np.float64)
        labels = [str(label) for label in labels]
        if X.ndim != 2 or X.shape[0] != len(labels):
            raise DomainError(f"feature matrix shape {X.shape} does not match {len(labels)} labels")
        counts = Counter(labels)
        if len(counts) < 2:
            raise DomainError(f"closed-set training needs at least 2 classes, got {len(counts)}")
        small = sorted(label for label, count in counts.items() if count < 2)
        if small:
            raise DomainError(f"every class needs at least 2 samples: {', '.join(small)}")

        scaler = StandardScaler()
        scaled = scaler.fit_transform(X)
        model = SGDClassifier(loss='hinge', alpha=self.alpha, max_iter=self.max_iter,
                              tol=1e-4, random_state=self.seed)
        model.fit(scaled, labels)

        coef = np.asarray(model.coef_, dtype=np.float64)
        intercept = np.asarray(model.intercept_, dtype=np.float64)
        if coef.shape[0] == 1:
            # Binary problems come back as one hyperplane for classes_[1]
            coef = np.vstack([-coef, coef])
            intercept = np.concatenate([-intercept, intercept])

        self.classes_ = [str(c) for c in model.classes_]
        self.mean_ = np.asarray(scaler.mean_, dtype=np.float64)
        self.scale_ = np.asarray(scaler.scale_, dtype=np.float64)
        self.coef_ = coef
        self.intercept_ = intercept
        self.feature_names = list(feature_names)

        self.logger.info(f"Closed-set classifier trained on {X.shape[0]} samples of {len(self.classes_)} classes")
        return self

    def decision_function(self, X) -> np.ndarray:
        """(N, classes) decision values"""
        if not self.is_trained:
            raise DomainError("classifier is not trained")
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.coef_.shape[1]:
            raise DomainError(f"expected {self.coef_.shape[1]} features, got {X.shape[1]}")
        scaled = (X - self.mean_) / self.scale_
        return scaled @ self.coef_.T + self.intercept_

    def predict(self, X) -> List[str]:
        """Training label with the largest decision value for each row"""
        winners = np.argmax(self.decision_function(X), axis=1)
        return [self.classes_[i] for i in winners]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'classes': list(self.classes_),
            'feature_names': list(self.feature_names),
            'mean': self.mean_.tolist(),
            'scale': self.scale_.tolist(),
            'coef': self.coef_.tolist(),
            'intercept': self.intercept_.tolist(),
            'alpha': float(self.alpha),
            'max_iter': int(self.max_iter),
            'seed': int(self.seed),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ClosedSetClassifier":
        model = cls(data.get('alpha', 1e-4), data.get('max_iter', 1000), data.get('seed', 7))
        try:
            model.classes_ = [str(c) for c in data['classes']]
            model.feature_names = list(data.get('feature_names', []))
            model.mean_ = np.asarray(data['mean'], dtype=np.float64)
            model.scale_ = np.asarray(data['scale'], dtype=np.float64)
            model.coef_ = np.asarray(data['coef'], dtype=np.float64).reshape(len(model.classes_), -1)
            model.intercept_ = np.asarray(data['intercept'], dtype=np.float64)
        except (KeyError, ValueError, TypeError) as e:
            raise ProfileFormatError(f"invalid classifier document: {e}")
        return model


def train_closed_set(X, labels: Sequence[str], feature_names: Sequence[str] = (), alpha: float = 1e-4,
                     max_iter: int = 1000, seed: int = 7) -> ClosedSetClassifier:
    """Fit a closed-set classifier on labeled word-class features"""
    return ClosedSetClassifier(alpha, max_iter, seed).fit(X, labels, feature_names)
