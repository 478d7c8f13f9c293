"""
Shared fixtures for the WristAuth test suite
"""

import numpy as np
import pytest
import yaml

from wristauth.motion.models import N_CHANNELS, NOMINAL_RATE, Trial
from wristauth.synth.generator import gen_trial, gen_user


def make_trial(values, word=None, user=None, rate=NOMINAL_RATE) -> Trial:
    """Trial on a uniform time grid from an (n, 6) array"""
    values = np.asarray(values, dtype=np.float64)
    times = np.arange(values.shape[0]) / rate
    return Trial(times, values, word, user, rate)


def constant_trial(n: int = 12, level: float = 0.0, **labels) -> Trial:
    return make_trial(np.full((n, N_CHANNELS), level), **labels)


# Small enough to keep a full evaluation under a few seconds
SMALL_SYNTH = {
    'seed': 11,
    'sample_rate': 62.0,
    'components': 6,
    'freq_range': [0.5, 4.0],
    'tempo_range': [0.8, 1.0],
    'size_range': [0.8, 1.2],
    'tempo_jitter': 0.1,
    'amplitude_jitter': 0.05,
    'warp_deviation': 0.1,
    'noise_ratio': 0.05,
    'users': 3,
    'enroll': 3,
    'genuine': 2,
    'word': 'love',
    'attack': {
        'enroll': 4,
        'genuine': 3,
        'attackers': 2,
        'trials': 2,
        'rotation_fidelity': 0.6,
        'strengths': {'word': 0.0, 'script': 0.5, 'all-simulating': 0.8},
    },
    'fault': {'clean': 4, 'bad': 4, 'test_genuine': 3, 'test_bad': 3},
    'words': {'classes': 3, 'trials': 4, 'unseen_classes': 2, 'unseen_trials': 2},
}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def small_synth():
    """Synth section of a tiny dataset, with the seed folded in"""
    return {key: (dict(value) if isinstance(value, dict) else value) for key, value in SMALL_SYNTH.items()}


@pytest.fixture
def small_config(tmp_path, small_synth):
    """Path of a config file describing the tiny dataset"""
    document = {
        'seed': small_synth['seed'],
        'synth': {k: v for k, v in small_synth.items() if k != 'seed'},
        'evaluation': {'fractions': [0.0, 0.5], 'progress': False, 'roc_csv': True},
        'baseline': {'pairs': 200, 'bins': 10, 'folds': 2, 'max_iter': 200},
    }
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(document), encoding='utf-8')
    return path


@pytest.fixture
def style():
    return gen_user(101)


@pytest.fixture
def other_style():
    return gen_user(202)


@pytest.fixture
def enrollment(style):
    """Five raw trials of one synthetic writer"""
    return [gen_trial(style, seed, word='love', user='u01') for seed in range(5)]
