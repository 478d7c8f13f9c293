"""
Evaluation report assembly and emission
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
import yaml

from ..auth.profile import UNIFORM_WEIGHTS
from ..core.logger import get_logger
from ..motion.dataset import Dataset
from ..storage.manager import ProfileStore
from ..storage.manifest import to_plain
from .experiments import (
    AttackReport,
    CalibrationResult,
    DiscriminationResult,
    FaultTolerancePoint,
    FilterSettings,
    calibration_experiment,
    discrimination,
    fault_tolerance_sweep,
    score_groups,
    score_scenarios,
    self_similarity,
    spearman_trend,
    summarize_scenarios,
    train_profile,
)
from .metrics import RocCurve, roc_curve

logger = get_logger(__name__)


@dataclass
class EvalReport:
    """Everything one evaluation run measured, plus what it was run with"""
    seed: Optional[int]
    config: Dict[str, Any]
    config_fingerprint: str
    discrimination: DiscriminationResult
    self_similarity: np.ndarray
    roc: RocCurve
    attacks: Optional[AttackReport] = None
    attack_order: List[str] = field(default_factory=list)
    fault_tolerance: List[FaultTolerancePoint] = field(default_factory=list)
    calibration: Optional[CalibrationResult] = None

    @property
    def fnr(self) -> float:
        return self.discrimination.mean_fnr

    @property
    def fpr(self) -> float:
        return self.discrimination.mean_fpr

    @property
    def tpr(self) -> float:
        return self.discrimination.mean_tpr

    @property
    def auc_total(self) -> float:
        return self.discrimination.auc_total

    def diagonal_dominant(self) -> bool:
        """True when every user's probes score highest against their own profile"""
        matrix = self.self_similarity
        return bool(np.all(np.argmax(matrix, axis=1) == np.arange(matrix.shape[0])))

    def to_dict(self) -> Dict[str, Any]:
        report: Dict[str, Any] = {
            'seed': self.seed,
            'config': self.config,
            'config_fingerprint': self.config_fingerprint,
            'threshold': self.discrimination.threshold,
            'weights': list(self.discrimination.weights),
            'fnr': self.fnr,
            'fpr': self.fpr,
            'tpr': self.tpr,
            'auc_total': self.auc_total,
            'auc_per_dim': list(self.discrimination.auc_per_dim),
            'discrimination': self.discrimination.to_dict(),
            'self_similarity': {
                'matrix': self.self_similarity.tolist(),
                'diagonal_dominant': self.diagonal_dominant(),
            },
            'roc_points': len(self.roc.fpr),
        }
        if self.attacks is not None:
            report['attacks'] = self.attacks.to_dict()
            report['attacks']['order'] = list(self.attack_order)
            report['attacks']['ordering_holds'] = self.attacks.ordering_holds(self.attack_order)
        if self.fault_tolerance:
            fractions = [p.bad_fraction for p in self.fault_tolerance]
            report['fault_tolerance'] = {
                'points': [p.to_dict() for p in self.fault_tolerance],
                'tpr_trend': spearman_trend(fractions, [p.tpr for p in self.fault_tolerance]),
            }
        if self.calibration is not None:
            report['calibration'] = self.calibration.to_dict()
        return report


def build_report(
    dataset: Dataset,
    settings: FilterSettings,
    delta: float,
    mu: Sequence[float] = UNIFORM_WEIGHTS,
    fractions: Sequence[float] = (),
    calibration_thresholds: Optional[Mapping[str, float]] = None,
    auc_floor: float = 0.85,
    seed: Optional[int] = None,
    config: Optional[Dict[str, Any]] = None,
    fingerprint: str = "",
) -> EvalReport:
    """
    Run every experiment the dataset has trial sets for

    Discrimination and self-similarity always run. The attack ladder,
    fault-tolerance sweep and calibration run when the dataset carries the
    trial sets they need.

    Args:
        dataset: Loaded or generated dataset
        settings: Filter and DTW settings
        delta: Decision threshold
        mu: Dimension weights
        fractions: Bad-trial fractions for the fault sweep
        calibration_thresholds: Named thresholds at which calibrated weights are re-evaluated
        auc_floor: AUC floor for weight calibration
        seed: Seed recorded in the report
        config: Resolved configuration recorded in the report
        fingerprint: Configuration digest recorded in the report
    """
    table = score_groups(dataset.users, settings)
    result = discrimination(table, mu, delta)
    genuine, impostor = table.pooled()
    curve = roc_curve(genuine.tss(mu), impostor.tss(mu))
    logger.info(f"Discrimination at delta={delta}: FNR {result.mean_fnr:.4f}, FPR {result.mean_fpr:.4f}, "
                f"AUC {result.auc_total:.4f}")

    attacks, order, attack_scores = None, [], None
    if dataset.attack is not None:
        attack = dataset.attack
        profile = train_profile(attack.enroll, settings, delta)
        order = attack.ordered_scenarios()
        scenarios = {'genuine': attack.genuine}
        scenarios.update({name: attack.scenarios[name] for name in order})
        attack_scores = score_scenarios(profile, scenarios, settings)
        attacks = summarize_scenarios(attack_scores, mu, delta)

    points = []
    if dataset.fault is not None and fractions:
        fault = dataset.fault
        points = fault_tolerance_sweep(fault.clean, fault.bad, fault.test_genuine, fault.test_bad,
                                       fractions, mu, delta, settings)

    calibration = None
    if calibration_thresholds:
        calibration = calibration_experiment(table, calibration_thresholds, attack_scores, auc_floor)

    return EvalReport(
        seed=seed,
        config=dict(config or {}),
        config_fingerprint=fingerprint,
        discrimination=result,
        self_similarity=self_similarity(table, mu),
        roc=curve,
        attacks=attacks,
        attack_order=order,
        fault_tolerance=points,
        calibration=calibration,
    )


def render_report(report: EvalReport) -> str:
    """YAML text of a report; identical inputs give identical text"""
    return yaml.safe_dump(to_plain(report.to_dict()), default_flow_style=False, sort_keys=True)


def write_report(report: EvalReport, path: Union[str, Path], roc_csv: bool = True) -> List[Path]:
    """
    Write a report and, optionally, its ROC points next to it

    Returns:
        Paths written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_report(report), encoding='utf-8')
    written = [path]
    if roc_csv:
        written.append(ProfileStore().export_roc(report.roc, path.with_suffix('.roc.csv')))
    logger.info(f"Report written to {path}")
    return written
