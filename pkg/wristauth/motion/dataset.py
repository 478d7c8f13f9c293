"""
Labeled collections of trials used by experiments
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from .models import Trial


@dataclass(frozen=True)
class UserGroup:
    """One enrolled user: enrollment trials and held-out genuine probes"""
    user: str
    enroll: Tuple[Trial, ...]
    probes: Tuple[Trial, ...]


@dataclass(frozen=True)
class AttackSet:
    """
    Mimic attack trials against one target

    Attributes:
        target: Target user id
        enroll: Target enrollment trials
        genuine: Held-out target trials
        scenarios: Scenario name -> attack trials, in increasing strength order
        strengths: Scenario name -> mimic strength
    """
    target: str
    enroll: Tuple[Trial, ...]
    genuine: Tuple[Trial, ...]
    scenarios: Dict[str, Tuple[Trial, ...]]
    strengths: Dict[str, float] = field(default_factory=dict)

    def ordered_scenarios(self) -> List[str]:
        """Scenario names sorted by strength, ties broken by name"""
        return sorted(self.scenarios, key=lambda name: (self.strengths.get(name, 0.0), name))


@dataclass(frozen=True)
class FaultSet:
    """Clean and corrupted trials of one user for the training-data fault sweep"""
    clean: Tuple[Trial, ...]
    bad: Tuple[Trial, ...]
    test_genuine: Tuple[Trial, ...]
    test_bad: Tuple[Trial, ...]


@dataclass(frozen=True)
class WordSet:
    """
    Word-class trials for the closed-set contrast

    Attributes:
        password: Word the verification profile is trained on
        known: Word label -> trials available at training
        unseen: Word label -> trials of words absent at training
    """
    password: str
    known: Dict[str, Tuple[Trial, ...]]
    unseen: Dict[str, Tuple[Trial, ...]]

    def labeled(self) -> Tuple[List[Trial], List[str]]:
        """Known trials and their labels in sorted label order"""
        trials, labels = [], []
        for label in sorted(self.known):
            trials.extend(self.known[label])
            labels.extend([label] * len(self.known[label]))
        return trials, labels

    def unseen_trials(self) -> List[Trial]:
        return [t for label in sorted(self.unseen) for t in self.unseen[label]]


@dataclass(frozen=True)
class Dataset:
    """Every trial set an experiment run may use; absent sections are None"""
    seed: Optional[int]
    users: Tuple[UserGroup, ...] = ()
    attack: Optional[AttackSet] = None
    fault: Optional[FaultSet] = None
    words: Optional[WordSet] = None
    config: Dict = field(default_factory=dict)

    def __iter__(self) -> Iterator[UserGroup]:
        return iter(self.users)
