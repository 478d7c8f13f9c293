"""
Wrist motion trial model and trial file I/O
"""

from .models import CHANNELS, MIN_TRIAL_LENGTH, NOMINAL_RATE, MotionSample, Trial, channel
from .io import load_trial, load_trials, parse_trial, save_trial, write_trial
from .dataset import AttackSet, Dataset, FaultSet, UserGroup, WordSet

__all__ = [
    "CHANNELS",
    "MIN_TRIAL_LENGTH",
    "NOMINAL_RATE",
    "AttackSet",
    "Dataset",
    "FaultSet",
    "MotionSample",
    "Trial",
    "UserGroup",
    "WordSet",
    "channel",
    "load_trial",
    "load_trials",
    "parse_trial",
    "save_trial",
    "write_trial",
]
