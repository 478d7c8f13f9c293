"""
Experiment harnesses: self/non-self discrimination, mimic attacks,
fault tolerance of training data and AUC-based weight calibration
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import spearmanr
from tqdm import tqdm

from ..auth.profile import UNIFORM_WEIGHTS, Profile, train
from ..auth.scoring import authenticate, weights_from_auc
from ..core.exceptions import DomainError
from ..core.logger import get_logger
from ..dsp.savgol import DEFAULT_DEGREE, DEFAULT_WINDOW
from ..motion.dataset import UserGroup
from ..motion.models import N_CHANNELS, Trial
from .metrics import auc, rates_at

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class ScoredSet:
    """Per-dimension similarity scores of a set of probes against one profile"""
    ss: np.ndarray

    def __post_init__(self):
        ss = np.asarray(self.ss, dtype=np.float64).reshape(-1, N_CHANNELS)
        object.__setattr__(self, 'ss', ss)

    def __len__(self) -> int:
        return int(self.ss.shape[0])

    def tss(self, mu: Sequence[float]) -> np.ndarray:
        """Total scores under dimension weights mu"""
        return np.clip(self.ss @ np.asarray(mu, dtype=np.float64), 0.0, 1.0)


@dataclass
class FilterSettings:
    """Signal and kernel settings shared by every profile an experiment trains"""
    window: int = DEFAULT_WINDOW
    degree: int = DEFAULT_DEGREE
    band: Optional[int] = None
    workers: int = 1
    progress: bool = False


def score_set(probes: Sequence[Trial], profile: Profile, settings: FilterSettings, desc: str = "") -> ScoredSet:
    """Score raw probes against a profile, keeping per-dimension scores"""
    iterator = tqdm(probes, desc=desc, leave=False, disable=not settings.progress or not desc)
    rows = [authenticate(p, profile, band=settings.band, workers=settings.workers).ss for p in iterator]
    return ScoredSet(np.array(rows, dtype=np.float64))


def train_profile(trials: Sequence[Trial], settings: FilterSettings, threshold: float = 0.55) -> Profile:
    return train(trials, threshold_delta=threshold, window=settings.window, degree=settings.degree,
                 band=settings.band, workers=settings.workers)


# Self / non-self discrimination

@dataclass
class ScoreTable:
    """Scores of every user's probes against every user's profile"""
    users: List[str]
    cells: Dict[Tuple[str, str], ScoredSet]

    def genuine(self, user: str) -> ScoredSet:
        return self.cells[(user, user)]

    def impostor(self, user: str) -> ScoredSet:
        parts = [self.cells[(user, other)].ss for other in self.users if other != user]
        return ScoredSet(np.vstack(parts))

    def pooled(self) -> Tuple[ScoredSet, ScoredSet]:
        genuine = np.vstack([self.genuine(u).ss for u in self.users])
        impostor = np.vstack([self.impostor(u).ss for u in self.users])
        return ScoredSet(genuine), ScoredSet(impostor)


def score_groups(groups: Sequence[UserGroup], settings: FilterSettings) -> ScoreTable:
    """Train one profile per user and score every user's probes against it"""
    if len(groups) < 2:
        raise DomainError(f"discrimination needs at least 2 users, got {len(groups)}")
    users = [g.user for g in groups]
    if len(set(users)) != len(users):
        raise DomainError("user ids must be unique")

    cells: Dict[Tuple[str, str], ScoredSet] = {}
    for group in tqdm(groups, desc="profiles", disable=not settings.progress):
        profile = train_profile(group.enroll, settings)
        for other in groups:
            cells[(group.user, other.user)] = score_set(other.probes, profile, settings)
    return ScoreTable(users, cells)


@dataclass
class UserRates:
    user: str
    fnr: float
    fpr: float
    tpr: float


@dataclass
class DiscriminationResult:
    """Per-user and averaged error rates at one threshold"""
    threshold: float
    weights: Tuple[float, ...]
    per_user: List[UserRates]
    mean_fnr: float
    mean_fpr: float
    mean_tpr: float
    auc_total: float
    auc_per_dim: Tuple[float, ...]

    def to_dict(self) -> Dict:
        return {
            'threshold': self.threshold,
            'weights': list(self.weights),
            'fnr': self.mean_fnr,
            'fpr': self.mean_fpr,
            'tpr': self.mean_tpr,
            'auc_total': self.auc_total,
            'auc_per_dim': list(self.auc_per_dim),
            'per_user': [
                {'user': r.user, 'fnr': r.fnr, 'fpr': r.fpr, 'tpr': r.tpr} for r in self.per_user
            ],
        }


def discrimination(table: ScoreTable, mu: Sequence[float], delta: float) -> DiscriminationResult:
    """Error rates of every user's profile against genuine and cross-user probes"""
    per_user = []
    for user in table.users:
        rates = rates_at(table.genuine(user).tss(mu), table.impostor(user).tss(mu), delta)
        per_user.append(UserRates(user, rates.fnr, rates.fpr, rates.tpr))

    genuine, impostor = table.pooled()
    return DiscriminationResult(
        threshold=float(delta),
        weights=tuple(float(m) for m in mu),
        per_user=per_user,
        mean_fnr=float(np.mean([r.fnr for r in per_user])),
        mean_fpr=float(np.mean([r.fpr for r in per_user])),
        mean_tpr=float(np.mean([r.tpr for r in per_user])),
        auc_total=auc(genuine.tss(mu), impostor.tss(mu)),
        auc_per_dim=tuple(auc(genuine.ss[:, k], impostor.ss[:, k]) for k in range(N_CHANNELS)),
    )


def discrimination_experiment(groups: Sequence[UserGroup], mu: Sequence[float] = UNIFORM_WEIGHTS,
                              delta: float = 0.55,
                              settings: Optional[FilterSettings] = None) -> DiscriminationResult:
    """Train every user, score all probes and report error rates at delta"""
    return discrimination(score_groups(groups, settings or FilterSettings()), mu, delta)


def self_similarity(table: ScoreTable, mu: Sequence[float] = UNIFORM_WEIGHTS) -> np.ndarray:
    """
    Mean total score of user i's probes against user j's profile

    Rows index probe owners, columns index profiles.
    """
    k = len(table.users)
    matrix = np.zeros((k, k))
    for i, probe_user in enumerate(table.users):
        for j, profile_user in enumerate(table.users):
            matrix[i, j] = float(np.mean(table.cells[(profile_user, probe_user)].tss(mu)))
    return matrix


# Mimic attacks

@dataclass
class ScenarioSummary:
    name: str
    count: int
    median_tss: float
    max_tss: float
    min_tss: float
    acceptance: float
    margin: float
    tss: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            'count': self.count,
            'median_tss': self.median_tss,
            'max_tss': self.max_tss,
            'min_tss': self.min_tss,
            'acceptance': self.acceptance,
            'margin': self.margin,
            'tss': self.tss,
        }


@dataclass
class AttackReport:
    """Total-score distributions per attack scenario against one profile"""
    threshold: float
    weights: Tuple[float, ...]
    scenarios: List[ScenarioSummary]

    def scenario(self, name: str) -> ScenarioSummary:
        for summary in self.scenarios:
            if summary.name == name:
                return summary
        raise KeyError(name)

    @property
    def max_attacker_tss(self) -> float:
        attacks = [s.max_tss for s in self.scenarios if s.name != 'genuine']
        return max(attacks) if attacks else float('nan')

    def ordering_holds(self, order: Sequence[str]) -> bool:
        """True when median scores strictly increase along the given scenario order"""
        medians = [self.scenario(name).median_tss for name in order]
        return all(a < b for a, b in zip(medians, medians[1:]))

    def to_dict(self) -> Dict:
        return {
            'threshold': self.threshold,
            'weights': list(self.weights),
            'max_attacker_tss': self.max_attacker_tss,
            'scenarios': {s.name: s.to_dict() for s in self.scenarios},
        }


def summarize_scenarios(scored: Mapping[str, ScoredSet], mu: Sequence[float], delta: float) -> AttackReport:
    """Summarize scored scenarios under weights mu and threshold delta"""
    summaries = []
    for name, scores in scored.items():
        tss = np.sort(scores.tss(mu))
        summaries.append(ScenarioSummary(
            name=name,
            count=int(tss.shape[0]),
            median_tss=float(np.median(tss)),
            max_tss=float(tss[-1]),
            min_tss=float(tss[0]),
            acceptance=float(np.mean(tss >= delta)),
            margin=float(delta - tss[-1]),
            tss=[float(v) for v in tss],
        ))
    return AttackReport(float(delta), tuple(float(m) for m in mu), summaries)


def score_scenarios(profile: Profile, scenarios: Mapping[str, Sequence[Trial]],
                    settings: Optional[FilterSettings] = None) -> Dict[str, ScoredSet]:
    """Score every scenario's trials against a profile"""
    settings = settings or FilterSettings()
    if not scenarios:
        raise DomainError("attack evaluation needs at least one scenario")
    scored = {}
    for name, trials in scenarios.items():
        if len(trials) == 0:
            raise DomainError(f"scenario {name!r} has no trials")
        scored[name] = score_set(trials, profile, settings, desc=f"scenario {name}")
    return scored


def attack_eval(profile: Profile, scenarios: Mapping[str, Sequence[Trial]],
                settings: Optional[FilterSettings] = None) -> AttackReport:
    """
    Total-score distribution of each labeled scenario against a profile

    The profile's own weights and threshold are used. A scenario named
    'genuine' is reported alongside the attacks but excluded from the
    maximum attacker score.
    """
    scored = score_scenarios(profile, scenarios, settings)
    return summarize_scenarios(scored, profile.weights_mu, profile.threshold_delta)


# Fault tolerance of training data

@dataclass
class FaultTolerancePoint:
    bad_fraction: float
    n_bad: int
    tpr: float
    fnr: float
    bad_acceptance: float

    def to_dict(self) -> Dict:
        return {
            'bad_fraction': self.bad_fraction,
            'n_bad': self.n_bad,
            'tpr': self.tpr,
            'fnr': self.fnr,
            'bad_acceptance': self.bad_acceptance,
        }


def bad_count(n_clean: int, fraction: float) -> int:
    """Number of bad trials that makes up `fraction` of a training group"""
    if not 0.0 <= fraction < 1.0:
        raise DomainError(f"bad fraction must lie in [0, 1), got {fraction}")
    return int(round(fraction * n_clean / (1.0 - fraction)))


def fault_tolerance_sweep(
    clean_trials: Sequence[Trial],
    bad_trials: Sequence[Trial],
    test_genuine: Sequence[Trial],
    test_bad: Sequence[Trial],
    fractions: Sequence[float],
    mu: Sequence[float] = UNIFORM_WEIGHTS,
    delta: float = 0.55,
    settings: Optional[FilterSettings] = None,
) -> List[FaultTolerancePoint]:
    """
    Retrain with a growing share of bad trials mixed into the training group

    For each fraction f the group holds every clean trial plus
    round(f * n_clean / (1 - f)) bad trials. Reports the acceptance rate of
    genuine probes and of bad probes.
    """
    settings = settings or FilterSettings()
    if not test_genuine or not test_bad:
        raise DomainError("fault tolerance needs genuine and bad test probes")
    counts = [bad_count(len(clean_trials), f) for f in fractions]
    if counts and max(counts) > len(bad_trials):
        raise DomainError(f"fraction {max(fractions)} needs {max(counts)} bad trials, only {len(bad_trials)} given")
    if len(clean_trials) + min(counts, default=0) < 2:
        raise DomainError("training group needs at least 2 trials")

    points = []
    for fraction, n_bad in tqdm(list(zip(fractions, counts)), desc="fault sweep", disable=not settings.progress):
        group = list(clean_trials) + list(bad_trials[:n_bad])
        profile = train_profile(group, settings, delta).with_weights(mu)
        genuine = score_set(test_genuine, profile, settings).tss(mu)
        bad = score_set(test_bad, profile, settings).tss(mu)
        rates = rates_at(genuine, bad, delta)
        points.append(FaultTolerancePoint(
            bad_fraction=float(fraction),
            n_bad=n_bad,
            tpr=rates.tpr,
            fnr=rates.fnr,
            bad_acceptance=rates.fpr,
        ))
        logger.debug(f"Fault sweep f={fraction:.2f} n_bad={n_bad} tpr={rates.tpr:.3f}")
    return points


# Weight calibration

@dataclass
class CalibrationResult:
    auc_per_dim: Tuple[float, ...]
    weights: Tuple[float, ...]
    discrimination: Dict[str, DiscriminationResult]
    attacks: Dict[str, AttackReport]

    def to_dict(self) -> Dict:
        return {
            'auc_per_dim': list(self.auc_per_dim),
            'weights': list(self.weights),
            'discrimination': {k: v.to_dict() for k, v in self.discrimination.items()},
            'attacks': {k: v.to_dict() for k, v in self.attacks.items()},
        }


def calibration_experiment(
    table: ScoreTable,
    thresholds: Mapping[str, float],
    attack_scores: Optional[Mapping[str, ScoredSet]] = None,
    floor: float = 0.85,
) -> CalibrationResult:
    """
    Derive dimension weights from per-dimension AUC and re-run discrimination
    and, when given, the attack ladder at each named threshold
    """
    genuine, impostor = table.pooled()
    aucs = tuple(auc(genuine.ss[:, k], impostor.ss[:, k]) for k in range(N_CHANNELS))
    mu = weights_from_auc(aucs, floor)

    rediscriminated = {name: discrimination(table, mu, delta) for name, delta in thresholds.items()}
    attacks = {}
    if attack_scores:
        attacks = {name: summarize_scenarios(attack_scores, mu, delta) for name, delta in thresholds.items()}
    return CalibrationResult(aucs, mu, rediscriminated, attacks)


def spearman_trend(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation; nan when either side is constant"""
    if len(set(xs)) < 2 or len(set(ys)) < 2:
        return math.nan
    return float(spearmanr(xs, ys).correlation)
