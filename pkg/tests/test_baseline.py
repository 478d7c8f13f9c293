"""
Tests for the closed-set baseline: features, regularized regression and the classifier
"""

import math

import numpy as np
import pandas as pd
import pytest

from wristauth.auth.profile import train
from wristauth.core.exceptions import DomainError, SingularityError
from wristauth.dsp.savgol import filter_trial
from wristauth.ml.contrast import cross_validate, open_set_flaw_demo, select_features
from wristauth.ml.features import (
    CORE_FEATURES,
    correlation_matrix,
    dft,
    extract_features,
    feature_columns,
    feature_matrix,
    spectral_energy,
    spectral_entropy,
)
from wristauth.ml.models import ClosedSetClassifier, train_closed_set
from wristauth.ml.regression import kkt_violation, lambda_max, lasso_fit, ridge_fit
from wristauth.synth.generator import gen_trial, gen_user

from .conftest import constant_trial


def _blobs(rng, per_class=10, d=5):
    centers = {'love': np.zeros(d), 'book': np.full(d, 6.0), 'time': np.r_[6.0, np.zeros(d - 1)] - 6.0}
    rows, labels = [], []
    for label, center in centers.items():
        rows.append(center + rng.normal(scale=0.5, size=(per_class, d)))
        labels += [label] * per_class
    return np.vstack(rows), labels


class TestFeatures:
    """Test trial features"""

    def test_dft_examples(self):
        assert np.allclose(dft([1, 0, 0, 0]), np.ones(4))
        assert np.allclose(dft([1, 1]), [2, 0])

    def test_dft_matches_definition(self, rng):
        x = rng.normal(size=17)
        n = np.arange(17)
        naive = np.array([np.sum(x * np.exp(-2j * np.pi * k * n / 17)) for k in range(17)])
        assert np.max(np.abs(dft(x) - naive)) < 1e-9

    def test_energy_and_entropy(self):
        spectrum = np.array([2.0, 0.0, 0.0, 0.0])
        assert spectral_energy(spectrum) == pytest.approx(4.0)
        assert spectral_entropy(spectrum) == pytest.approx(4.0 * math.log(4.0))

    def test_constant_channel(self):
        """Test that a constant channel has zero spread and zero shape moments"""
        features = extract_features(constant_trial(20, 2.0))
        core = features.core.reshape(6, len(CORE_FEATURES))

        stats = dict(zip(CORE_FEATURES, core[0]))
        assert (stats['mean'], stats['min'], stats['max'], stats['range']) == (2.0, 2.0, 2.0, 0.0)
        assert (stats['variance'], stats['kurtosis'], stats['skewness']) == (0.0, 0.0, 0.0)
        assert np.allclose(features.peak, 2.0)

    def test_histograms_normalized(self, style):
        features = extract_features(filter_trial(gen_trial(style, 1)), rng_seed=3)

        assert features.dis.shape == (6, 20)
        assert np.allclose(features.dis.sum(axis=1), 1.0, atol=1e-12)
        assert features.as_array().shape == (180,)

    def test_seeded(self, style):
        trial = gen_trial(style, 1)
        first = extract_features(trial, rng_seed=5).as_array()
        assert np.array_equal(first, extract_features(trial, rng_seed=5).as_array())

    def test_feature_matrix(self, enrollment):
        table = feature_matrix(enrollment, seed=2)

        assert table.shape == (5, 180)
        assert list(table.columns) == feature_columns()
        assert table.columns[0] == "ax_mean"
        assert table.columns[-1] == "gz_peak"

    def test_correlation_matrix(self, enrollment):
        table = feature_matrix(enrollment + [constant_trial(60, 1.0)])
        corr = correlation_matrix(table)

        assert corr.shape == (54, 54)
        assert np.all(np.diag(corr.to_numpy()) == 1.0)
        assert not corr.isna().any().any()


class TestRidge:
    """Test ridge regression"""

    def test_identity_design(self):
        y = np.array([2.0, -4.0, 6.0])
        assert np.allclose(ridge_fit(np.eye(3), y, 1.0), y / 2.0)

    def test_zero_penalty_is_least_squares(self, rng):
        X = rng.normal(size=(30, 4))
        y = rng.normal(size=30)
        expected, *_ = np.linalg.lstsq(X, y, rcond=None)
        assert np.allclose(ridge_fit(X, y, 0.0), expected, atol=1e-9)

    def test_large_penalty_shrinks(self, rng):
        X = rng.normal(size=(30, 4))
        y = rng.normal(size=30)
        assert np.max(np.abs(ridge_fit(X, y, 1e9))) < 1e-6

    def test_normal_equations(self, rng):
        X = rng.normal(size=(25, 6))
        y = rng.normal(size=25)
        beta = ridge_fit(X, y, 0.5)
        assert np.allclose((X.T @ X + 0.5 * np.eye(6)) @ beta, X.T @ y, atol=1e-9)

    def test_singular_without_penalty(self):
        X = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
        with pytest.raises(SingularityError):
            ridge_fit(X, np.ones(3), 0.0)

    def test_invalid(self):
        with pytest.raises(DomainError):
            ridge_fit(np.eye(3), np.ones(3), -1.0)
        with pytest.raises(DomainError):
            ridge_fit(np.eye(3), np.ones(4), 1.0)


class TestLasso:
    """Test coordinate-descent lasso"""

    def test_orthonormal_soft_threshold(self, rng):
        """Test the closed form S(X^T y, lam/2) for an orthonormal design"""
        q, _ = np.linalg.qr(rng.normal(size=(20, 4)))
        y = rng.normal(size=20) * 3.0
        lam = 1.5
        z = q.T @ y
        expected = np.sign(z) * np.maximum(np.abs(z) - lam / 2.0, 0.0)

        assert np.max(np.abs(lasso_fit(q, y, lam) - expected)) < 1e-8

    def test_large_penalty_is_zero(self, rng):
        X = rng.normal(size=(20, 5))
        y = rng.normal(size=20)
        assert np.all(lasso_fit(X, y, lambda_max(X, y) * 1.01) == 0.0)

    def test_zero_penalty_is_least_squares(self, rng):
        X = rng.normal(size=(40, 3))
        y = rng.normal(size=40)
        expected, *_ = np.linalg.lstsq(X, y, rcond=None)
        assert np.allclose(lasso_fit(X, y, 0.0), expected, atol=1e-6)

    def test_optimality(self, rng):
        X = rng.normal(size=(30, 8))
        y = X[:, 0] * 2.0 - X[:, 3] + rng.normal(scale=0.1, size=30)
        beta = lasso_fit(X, y, 5.0)

        assert kkt_violation(X, y, beta, 5.0) <= 1e-8
        assert beta[0] > 0 and beta[3] < 0

    def test_invalid(self):
        with pytest.raises(DomainError):
            lasso_fit(np.eye(3), np.ones(3), -0.1)
        with pytest.raises(DomainError):
            lasso_fit(np.eye(3), np.ones((3, 2)), 0.1)


class TestClosedSet:
    """Test the closed-set classifier and its contrast experiment"""

    def test_separable_classes(self, rng):
        X, labels = _blobs(rng)
        model = train_closed_set(X, labels, seed=3)

        assert model.predict(X) == labels
        assert sorted(model.classes_) == ['book', 'love', 'time']

    def test_no_reject_path(self, rng):
        """Test that any input, however far away, receives a training label"""
        X, labels = _blobs(rng)
        model = train_closed_set(X, labels)
        far = np.full((3, X.shape[1]), 1e4)

        assert all(label in model.classes_ for label in model.predict(far))

    def test_binary_problem(self, rng):
        X, labels = _blobs(rng)
        keep = [i for i, label in enumerate(labels) if label != 'time']
        model = train_closed_set(X[keep], [labels[i] for i in keep])

        assert model.coef_.shape[0] == 2
        assert model.predict(X[keep]) == [labels[i] for i in keep]

    def test_document_round_trip(self, rng):
        X, labels = _blobs(rng)
        model = train_closed_set(X, labels, feature_names=[f"f{i}" for i in range(5)])
        restored = ClosedSetClassifier.from_dict(model.to_dict())

        assert np.allclose(restored.decision_function(X), model.decision_function(X))
        assert restored.feature_names == model.feature_names

    def test_training_errors(self, rng):
        X, labels = _blobs(rng)
        with pytest.raises(DomainError):
            train_closed_set(X, ['love'] * len(labels))
        with pytest.raises(DomainError):
            train_closed_set(X[:21], labels[:20] + ['lone'])
        with pytest.raises(DomainError):
            ClosedSetClassifier().predict(X)

    def test_select_features(self, rng):
        """Test that the one informative column survives selection"""
        labels = ['a'] * 15 + ['b'] * 15
        X = pd.DataFrame(rng.normal(size=(30, 6)), columns=[f"f{i}" for i in range(6)])
        X['f2'] += np.where(np.array(labels) == 'a', 4.0, -4.0)

        selection = select_features(X, labels, ratio=0.5)
        assert 'f2' in selection.selected
        assert set(selection.ridge_contribution) == set(X.columns)

    def test_cross_validation_folds(self, rng):
        X, labels = _blobs(rng, per_class=4)
        table = pd.DataFrame(X, columns=[f"f{i}" for i in range(5)])
        with pytest.raises(DomainError):
            cross_validate(table, labels, folds=5)

    def test_open_set_flaw(self, enrollment, style, other_style):
        """Test that the classifier labels every unseen word while the verifier decides"""
        known = enrollment + [gen_trial(other_style, s, word='book') for s in range(5)]
        labels = ['love'] * 5 + ['book'] * 5
        filtered = [filter_trial(t) for t in known]
        features = feature_matrix(filtered, seed=1)
        classifier = train_closed_set(features.to_numpy(), labels, list(features.columns))

        unseen = [gen_trial(gen_user(303), s, word='moon') for s in range(3)]
        unseen_features = feature_matrix([filter_trial(t) for t in unseen], seed=2)
        flaw = open_set_flaw_demo(classifier, unseen, unseen_features, train(enrollment), 'love')

        assert flaw.labeled_fraction == 1.0
        assert all(row['predicted'] in ('love', 'book') for row in flaw.rows)
        assert all(row['decision'] in ('accept', 'deny') for row in flaw.rows)
        assert sum(flaw.label_counts().values()) == 3

    def test_flaw_rows_must_match(self, enrollment):
        features = feature_matrix(enrollment)
        classifier = train_closed_set(features.to_numpy(), ['love', 'book'] * 2 + ['love'], list(features.columns))
        with pytest.raises(DomainError):
            open_set_flaw_demo(classifier, enrollment[:2], features, train(enrollment), 'love')
