"""
End-to-end checks on the dataset the shipped configuration generates

These run the full experiments at their default sizes, so they are the
slowest tests in the suite.
"""

import itertools

import numpy as np
import pytest

from wristauth.auth.profile import UNIFORM_WEIGHTS, train
from wristauth.auth.scoring import authenticate
from wristauth.core.config import Config
from wristauth.dsp.savgol import filter_trial
from wristauth.dtw.distance import dtw_vector
from wristauth.evaluation.experiments import (
    FilterSettings,
    attack_eval,
    discrimination,
    fault_tolerance_sweep,
    score_groups,
    train_profile,
)
from wristauth.ml.contrast import cross_validate, open_set_flaw_demo
from wristauth.ml.features import feature_matrix
from wristauth.ml.models import train_closed_set
from wristauth.synth.generator import CHANNEL_SCALE, MimicSpec, build_dataset, gen_mimic, gen_trial, gen_user

LADDER = ['word', 'script', 'all-simulating']


@pytest.fixture(scope="module")
def config():
    return Config()


@pytest.fixture(scope="module")
def dataset(config):
    return build_dataset(config.get_synth_params())


@pytest.fixture(scope="module")
def attack_report(dataset):
    attack = dataset.attack
    profile = train_profile(attack.enroll, FilterSettings(), threshold=0.65)
    scenarios = {'genuine': attack.genuine}
    scenarios.update(attack.scenarios)
    return attack_eval(profile, scenarios)


class TestDefaultDiscrimination:
    """Test self / non-self discrimination over fifteen users"""

    def test_error_rates(self, dataset):
        assert len(dataset.users) == 15
        result = discrimination(score_groups(dataset.users, FilterSettings()), UNIFORM_WEIGHTS, 0.55)

        assert result.mean_fnr <= 0.05
        assert result.mean_fpr <= 0.10
        assert result.auc_total >= 0.95

    def test_intra_user_distances_smaller(self, dataset):
        """Test that a writer's own trials lie closer than other writers' trials"""
        wins, total = 0, 0
        for group in dataset.users:
            anchor = filter_trial(group.enroll[0])
            own = [self._scaled(anchor, p) for p in group.probes]
            others = [self._scaled(anchor, g.probes[0]) for g in dataset.users if g.user != group.user]
            for intra, inter in itertools.product(own, others):
                wins += intra < inter
                total += 1

        assert wins / total >= 0.95

    @staticmethod
    def _scaled(anchor, probe) -> float:
        return float(np.sum(dtw_vector(anchor, filter_trial(probe)).d / CHANNEL_SCALE))


class TestDefaultAttacks:
    """Test the mimic ladder against the attack target"""

    def test_ladder_order(self, attack_report):
        medians = [attack_report.scenario(name).median_tss for name in LADDER]

        assert medians[0] < medians[1] < medians[2]
        assert attack_report.ordering_holds(LADDER)

    @pytest.mark.parametrize("name", ["word", "script"])
    def test_weak_mimics_rejected_at_hardened_threshold(self, attack_report, name):
        assert attack_report.scenario(name).acceptance == 0.0

    def test_median_rises_with_strength(self):
        """Test that median scores increase with imitation strength"""
        target = gen_user(101)
        attackers = [gen_user(500 + j) for j in range(5)]
        profile = train([gen_trial(target, t) for t in range(10)])

        medians = []
        for strength in (0.0, 0.5, 0.8, 1.0):
            probes = [gen_mimic(MimicSpec(a, target, strength), 100 + t)
                      for a in attackers for t in range(4)]
            medians.append(np.median([authenticate(p, profile).tss for p in probes]))

        assert all(a < b for a, b in zip(medians, medians[1:]))


class TestDefaultFaultTolerance:
    """Test training groups polluted with abnormal trials"""

    def test_sweep_end_points(self, dataset):
        fault = dataset.fault
        clean, half = fault_tolerance_sweep(fault.clean, fault.bad, fault.test_genuine, fault.test_bad, [0.0, 0.5])

        assert clean.tpr == 1.0
        assert half.n_bad == len(fault.clean)
        assert half.fnr <= 0.05

    def test_bad_trials_exceed_ideal_distance(self, dataset):
        """Test that abnormal trials sit beyond the ideal distance in most dimensions"""
        fault = dataset.fault
        profile = train(fault.clean)
        exceeded = np.array([
            np.asarray(authenticate(t, profile).distance) > profile.ideal.d for t in fault.test_bad
        ])

        assert exceeded.shape == (len(fault.test_bad), 6)
        assert exceeded.sum(axis=1).mean() >= 5


class TestDefaultBaseline:
    """Test the closed-set classifier against the template verifier"""

    @pytest.fixture(scope="class")
    def features(self, dataset, config):
        params = config.get_baseline_params()
        known, labels = dataset.words.labeled()
        table = feature_matrix([filter_trial(t) for t in known], params['seed'], params['pairs'], params['bins'])
        return table, labels, params

    def test_cross_validated_accuracy(self, features):
        table, labels, params = features
        assert len(set(labels)) == 10

        rows = cross_validate(table, labels, params['folds'], params['seed'], params['lasso_ratio'],
                              params['alpha'], params['max_iter'])

        assert len(rows) == 4
        assert all(row.accuracy >= 0.9 for row in rows if row.features == 'all')

    def test_unseen_words_denied(self, dataset, features):
        """Test that the classifier labels every unseen word and the verifier denies them"""
        table, labels, params = features
        words = dataset.words
        classifier = train_closed_set(table.to_numpy(), labels, list(table.columns),
                                      params['alpha'], params['max_iter'], params['seed'])
        unseen = words.unseen_trials()
        unseen_features = feature_matrix([filter_trial(t) for t in unseen], params['seed'] + 1,
                                         params['pairs'], params['bins'])

        flaw = open_set_flaw_demo(classifier, unseen, unseen_features, train(words.known[words.password]),
                                  words.password)

        assert flaw.labeled_fraction == 1.0
        assert flaw.denial_rate >= 0.9
