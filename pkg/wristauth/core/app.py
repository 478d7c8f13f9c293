"""
Main WristAuth application class
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import yaml

from ..auth.profile import Profile, train
from ..auth.scoring import ScoreReport, authenticate, calibrate_weights, dimension_scores
from ..core.exceptions import DomainError, ManifestError
from ..dsp.savgol import filter_trial
from ..evaluation.experiments import FilterSettings
from ..evaluation.report import EvalReport, build_report, write_report
from ..ml.contrast import cross_validate, open_set_flaw_demo, select_features
from ..ml.features import correlation_matrix, feature_matrix
from ..ml.models import train_closed_set
from ..motion.io import format_for, load_trial, load_trials
from ..motion.models import CHANNELS
from ..storage.manager import ProfileStore
from ..storage.manifest import load_dataset, to_plain
from ..synth.generator import gen_dataset
from .config import PRESETS, Config
from .logger import LoggerMixin

SCORES_SUFFIX = ".scores.csv"


def _is_trial_file(path: Path) -> bool:
    try:
        format_for(path)
    except DomainError:
        return False
    return True


@dataclass
class CalibrationOutcome:
    weights: Tuple[float, ...]
    aucs: Tuple[float, ...]
    n_genuine: int
    n_impostor: int
    profile_path: Path


@dataclass
class BaselineOutcome:
    """Results of the closed-set contrast run"""
    report: Dict[str, Any]
    written: List[Path] = field(default_factory=list)


class WristAuthApp(LoggerMixin):
    """Main WristAuth application class"""

    def __init__(self, config: Config):
        """
        Initialize WristAuth application

        Args:
            config: Application configuration
        """
        self.config = config
        self.store = ProfileStore()
        self.logger.debug("WristAuth application initialized")

    @property
    def settings(self) -> FilterSettings:
        filt = self.config.get_filter_params()
        dtw = self.config.get_dtw_params()
        return FilterSettings(
            window=filt['window'],
            degree=filt['degree'],
            band=dtw['band'],
            workers=dtw['workers'],
            progress=self.config.get_eval_params()['progress'],
        )

    def enroll(self, trial_paths: Sequence[Union[str, Path]], out_path: Union[str, Path]) -> Profile:
        """
        Train a profile from trial files and save it

        Args:
            trial_paths: At least 2 trial files of the same word
            out_path: Profile destination

        Returns:
            The trained profile
        """
        if len(trial_paths) < 2:
            raise DomainError(f"enrollment needs at least 2 trial files, got {len(trial_paths)}")
        trials = load_trials(trial_paths)
        settings = self.settings
        auth = self.config.get_auth_params()

        profile = train(
            trials,
            weights_mu=auth['weights'],
            threshold_delta=auth['threshold'],
            window=settings.window,
            degree=settings.degree,
            band=settings.band,
            workers=settings.workers,
        )
        self.store.save_profile(profile, out_path)
        self.logger.info(f"Enrolled {profile.n} trials into {out_path}")
        return profile

    def verify(self, probe_path: Union[str, Path], profile_path: Union[str, Path],
               threshold: Optional[float] = None) -> ScoreReport:
        """
        Verify a probe file against a stored profile

        Args:
            probe_path: Probe trial file
            profile_path: Stored profile
            threshold: Override of the profile's threshold

        Returns:
            Score report with the decision
        """
        profile = self.store.load_profile(profile_path)
        if threshold is not None:
            profile = profile.with_threshold(threshold)
        probe = load_trial(probe_path)
        dtw = self.config.get_dtw_params()
        return authenticate(probe, profile, band=dtw['band'], workers=dtw['workers'])

    def _score_directory(self, directory: Union[str, Path], profile: Profile) -> np.ndarray:
        root = Path(directory)
        if not root.is_dir():
            raise DomainError(f"{root} is not a directory")
        score_files = sorted(p for p in root.iterdir() if p.name.endswith(SCORES_SUFFIX))
        trial_files = sorted(
            p for p in root.iterdir()
            if p.is_file() and not p.name.endswith(SCORES_SUFFIX) and _is_trial_file(p)
        )

        rows = [self._read_scores(p) for p in score_files]
        if trial_files:
            dtw = self.config.get_dtw_params()
            ss, _ = dimension_scores(load_trials(trial_files), profile, dtw['band'], dtw['workers'])
            rows.append(ss)
        if not rows or sum(r.shape[0] for r in rows) == 0:
            raise DomainError(f"{root} holds no trials or score files")
        return np.vstack(rows)

    @staticmethod
    def _read_scores(path: Path) -> np.ndarray:
        table = pd.read_csv(path, comment='#')
        missing = [c for c in CHANNELS if c not in table.columns]
        if missing:
            raise DomainError(f"{path}: score file lacks columns {', '.join(missing)}")
        values = table[list(CHANNELS)].to_numpy(dtype=np.float64)
        if not np.all(np.isfinite(values)):
            raise DomainError(f"{path}: scores must be finite")
        return values

    def calibrate(self, genuine_dir: Union[str, Path], impostor_dir: Union[str, Path],
                  profile_path: Union[str, Path]) -> CalibrationOutcome:
        """
        Calibrate a profile's dimension weights from labeled probes

        Each directory holds trial files, which are scored against the
        profile, or score files (*.scores.csv) of per-dimension scores.
        The profile is rewritten with the calibrated weights.
        """
        profile = self.store.load_profile(profile_path)
        genuine = self._score_directory(genuine_dir, profile)
        impostor = self._score_directory(impostor_dir, profile)
        floor = self.config.get_auth_params()['auc_floor']

        mu, aucs = calibrate_weights(genuine, impostor, floor)
        self.store.save_profile(profile.with_weights(mu), profile_path)
        return CalibrationOutcome(mu, aucs, genuine.shape[0], impostor.shape[0], Path(profile_path))

    def evaluate(self, manifest_path: Union[str, Path], out_path: Union[str, Path]) -> EvalReport:
        """
        Run the evaluation experiments on a dataset manifest

        Args:
            manifest_path: manifest.yaml or the directory holding it
            out_path: Report destination; ROC points go next to it

        Returns:
            The evaluation report
        """
        dataset = load_dataset(manifest_path)
        auth = self.config.get_auth_params()
        params = self.config.get_eval_params()
        weights = auth['weights'] or [1.0 / len(CHANNELS)] * len(CHANNELS)
        calibration = {name: PRESETS[name] for name in ('hardened', 'balanced')}

        report = build_report(
            dataset,
            self.settings,
            delta=auth['threshold'],
            mu=weights,
            fractions=params['fractions'],
            calibration_thresholds=calibration,
            auc_floor=auth['auc_floor'],
            seed=params['seed'],
            config=self.config.get_all(),
            fingerprint=self.config.fingerprint(),
        )
        write_report(report, out_path, roc_csv=params['roc_csv'])
        return report

    def synth(self, out_dir: Union[str, Path], force: bool = False) -> Path:
        """Generate the synthetic dataset described by the configuration"""
        return gen_dataset(self.config.get_synth_params(), out_dir, force=force)

    def baseline(self, manifest_path: Union[str, Path], out_dir: Union[str, Path]) -> BaselineOutcome:
        """
        Closed-set contrast on a manifest's word classes

        Writes the feature matrix, the core-feature correlation matrix, the
        trained classifier and a YAML report into out_dir.
        """
        dataset = load_dataset(manifest_path)
        if dataset.words is None:
            raise ManifestError(f"{manifest_path}: the baseline needs a words section")
        words = dataset.words
        params = self.config.get_baseline_params()
        settings = self.settings
        out = Path(out_dir)

        known, labels = words.labeled()
        unseen = words.unseen_trials()
        filtered = [filter_trial(t, settings.window, settings.degree) for t in known]
        features = feature_matrix(filtered, params['seed'], params['pairs'], params['bins'])
        unseen_filtered = [filter_trial(t, settings.window, settings.degree) for t in unseen]
        # Offset the seed stream so unseen rows never reuse a known row's point pairs
        unseen_features = feature_matrix(unseen_filtered, params['seed'] + 1, params['pairs'], params['bins'])

        selection = select_features(features, labels, params['lasso_ratio'], params['ridge_lambda'],
                                    params['max_iter'])
        rows = cross_validate(features, labels, params['folds'], params['seed'], params['lasso_ratio'],
                              params['alpha'], params['max_iter'])
        classifier = train_closed_set(features.to_numpy(), labels, list(features.columns),
                                      params['alpha'], params['max_iter'], params['seed'])

        auth = self.config.get_auth_params()
        profile = train(words.known[words.password], threshold_delta=auth['threshold'],
                        window=settings.window, degree=settings.degree,
                        band=settings.band, workers=settings.workers)
        flaw = open_set_flaw_demo(classifier, unseen, unseen_features, profile, words.password,
                                  band=settings.band, workers=settings.workers)

        written = [
            self.store.export_table(features.assign(label=labels), out / "features.csv"),
            self.store.export_table(correlation_matrix(features), out / "correlation.csv", index=True),
            self.store.save_classifier(classifier, out / "classifier.yaml"),
        ]
        report = {
            'seed': params['seed'],
            'config': self.config.get_all(),
            'config_fingerprint': self.config.fingerprint(),
            'cross_validation': [row.to_dict() for row in rows],
            'feature_selection': selection.to_dict(),
            'open_set': flaw.to_dict(),
        }
        report_path = out / "baseline.yaml"
        report_path.write_text(
            yaml.safe_dump(to_plain(report), default_flow_style=False, sort_keys=True), encoding='utf-8'
        )
        written.append(report_path)
        return BaselineOutcome(report, written)

