"""
Closed-set contrast experiment: feature selection, cross-validation and the
open-set flaw of a classifier that cannot reject
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from sklearn.metrics import accuracy_score, precision_score
from sklearn.model_selection import StratifiedKFold
from sklearn.preprocessing import StandardScaler

from ..auth.profile import Profile
from ..auth.scoring import authenticate
from ..core.exceptions import ConvergenceError, DomainError
from ..core.logger import get_logger
from ..motion.models import Trial
from .features import core_columns
from .models import ClosedSetClassifier
from .regression import lambda_max, lasso_fit, ridge_fit

logger = get_logger(__name__)

SELECTION_TOLERANCE = 1e-6


@dataclass
class FeatureSelection:
    """Union of features kept by one-vs-rest lasso fits, with ridge contributions"""
    selected: List[str]
    lasso_lambda: float
    ridge_contribution: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'selected': list(self.selected),
            'n_selected': len(self.selected),
            'lasso_lambda': self.lasso_lambda,
            'ridge_contribution': dict(self.ridge_contribution),
        }


def _one_vs_rest_targets(labels: Sequence[str]) -> Dict[str, np.ndarray]:
    labels = np.asarray(labels)
    targets = {}
    for label in sorted(set(labels.tolist())):
        y = np.where(labels == label, 1.0, -1.0)
        targets[label] = y - y.mean()
    return targets


def _gradient_scale(X: np.ndarray, y: np.ndarray) -> float:
    return float(np.max(np.abs(X.T @ y)))


def select_features(X: pd.DataFrame, labels: Sequence[str], ratio: float = 0.1,
                    ridge_lambda: float = 1.0, max_sweeps: int = 1000) -> FeatureSelection:
    """
    Lasso feature selection on standardized features

    For each class a lasso fit separates it from the rest at
    lam = ratio * lam_max; a feature is selected when any fit keeps it.
    Ridge contribution is the norm of a feature's ridge coefficients across
    the same one-vs-rest targets.
    """
    if not 0.0 < ratio <= 1.0:
        raise DomainError(f"lasso ratio must lie in (0, 1], got {ratio}")
    names = list(X.columns)
    scaled = StandardScaler().fit_transform(X.to_numpy(dtype=np.float64))
    targets = _one_vs_rest_targets(labels)

    keep = np.zeros(len(names), dtype=bool)
    lam_used = 0.0
    for label, y in targets.items():
        lam = ratio * lambda_max(scaled, y)
        lam_used = max(lam_used, lam)
        scale = max(1.0, _gradient_scale(scaled, y))
        try:
            beta = lasso_fit(scaled, y, lam, tol=SELECTION_TOLERANCE * scale, max_sweeps=max_sweeps)
        except ConvergenceError as e:
            logger.warning(f"Lasso for class {label} stopped early: {e}")
            beta = e.coefficients
        keep |= beta != 0

    ridge = ridge_fit(scaled, np.column_stack(list(targets.values())), ridge_lambda)
    contribution = np.linalg.norm(np.atleast_2d(ridge), axis=1)
    selected = [name for name, flag in zip(names, keep) if flag]
    logger.info(f"Lasso kept {len(selected)} of {len(names)} features")
    return FeatureSelection(
        selected=selected,
        lasso_lambda=float(lam_used),
        ridge_contribution={name: float(c) for name, c in zip(names, contribution)},
    )


@dataclass
class CrossValidationRow:
    features: str
    selection: str
    accuracy: float
    mean_average_precision: float
    n_features: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'features': self.features,
            'selection': self.selection,
            'accuracy': self.accuracy,
            'map': self.mean_average_precision,
            'n_features': self.n_features,
        }


def cross_validate(
    X: pd.DataFrame,
    labels: Sequence[str],
    folds: int = 5,
    seed: int = 7,
    ratio: float = 0.1,
    alpha: float = 1e-4,
    max_iter: int = 1000,
) -> List[CrossValidationRow]:
    """
    Stratified k-fold accuracy and macro precision of the closed-set classifier

    Four configurations: core or all features, each with and without lasso
    selection. Standardization and selection are fit on each training fold.
    """
    labels = np.asarray([str(label) for label in labels])
    smallest = min(Counter(labels.tolist()).values(), default=0)
    if folds < 2 or smallest < folds:
        raise DomainError(f"{folds}-fold cross-validation needs at least {folds} trials per class, got {smallest}")
    columns_all = list(X.columns)
    feature_sets = {'core': core_columns(), 'all': columns_all}
    splitter = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
    splits = list(splitter.split(np.zeros(len(labels)), labels))

    rows = []
    for set_name, columns in feature_sets.items():
        for selection in ('none', 'lasso'):
            accuracies, precisions, widths = [], [], []
            for train_idx, test_idx in splits:
                chosen = columns
                if selection == 'lasso':
                    chosen = select_features(X.iloc[train_idx][columns], labels[train_idx], ratio).selected or columns
                model = ClosedSetClassifier(alpha, max_iter, seed)
                model.fit(X.iloc[train_idx][chosen].to_numpy(), labels[train_idx], chosen)
                predicted = model.predict(X.iloc[test_idx][chosen].to_numpy())
                accuracies.append(accuracy_score(labels[test_idx], predicted))
                precisions.append(precision_score(labels[test_idx], predicted, average='macro', zero_division=0))
                widths.append(len(chosen))
            rows.append(CrossValidationRow(
                features=set_name,
                selection=selection,
                accuracy=float(np.mean(accuracies)),
                mean_average_precision=float(np.mean(precisions)),
                n_features=float(np.mean(widths)),
            ))
            logger.info(f"{set_name}/{selection}: accuracy {rows[-1].accuracy:.3f}, "
                        f"MAP {rows[-1].mean_average_precision:.3f}")
    return rows


@dataclass
class FlawReport:
    """Closed-set labels versus template decisions on words absent at training"""
    password: str
    rows: List[Dict[str, Any]]

    @property
    def labeled_fraction(self) -> float:
        return float(np.mean([row['predicted'] is not None for row in self.rows]))

    @property
    def denial_rate(self) -> float:
        return float(np.mean([row['decision'] == 'deny' for row in self.rows]))

    @property
    def assigned_to_password(self) -> int:
        return sum(row['predicted'] == self.password for row in self.rows)

    def label_counts(self) -> Dict[str, int]:
        return dict(sorted(Counter(row['predicted'] for row in self.rows).items()))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'password': self.password,
            'trials': len(self.rows),
            'labeled_fraction': self.labeled_fraction,
            'denial_rate': self.denial_rate,
            'assigned_to_password': self.assigned_to_password,
            'label_counts': self.label_counts(),
            'rows': self.rows,
        }


def open_set_flaw_demo(classifier: ClosedSetClassifier, unseen_trials: Sequence[Trial],
                       unseen_features: pd.DataFrame, profile: Profile, password: str,
                       band: Optional[int] = None, workers: int = 1) -> FlawReport:
    """
    Run unseen-word trials through both the classifier and the template verifier

    Args:
        classifier: Trained closed-set classifier
        unseen_trials: Raw trials of words absent at training
        unseen_features: Their feature rows, in the same order
        profile: Template profile of the password word
        password: Label the profile protects
    """
    if len(unseen_trials) != len(unseen_features):
        raise DomainError("unseen trials and feature rows differ in number")
    columns = classifier.feature_names or list(unseen_features.columns)
    predicted = classifier.predict(unseen_features[columns].to_numpy()) if len(unseen_trials) else []

    rows = []
    for trial, label in zip(unseen_trials, predicted):
        report = authenticate(trial, profile, band=band, workers=workers)
        rows.append({
            'word': trial.word_label,
            'predicted': label,
            'tss': report.tss,
            'decision': report.decision.value,
        })
    flaw = FlawReport(password, rows)
    logger.info(f"Classifier labeled {flaw.labeled_fraction:.0%} of unseen trials, "
                f"{flaw.assigned_to_password} as {password!r}; verifier denied {flaw.denial_rate:.0%}")
    return flaw
