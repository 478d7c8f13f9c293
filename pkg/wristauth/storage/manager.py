"""
Persistence of profiles, classifiers and exported tables
"""

from pathlib import Path
from typing import Any, Dict, Union

import pandas as pd
import yaml
from jsonschema import Draft7Validator

from ..auth.profile import Profile
from ..core.exceptions import ProfileFormatError, WristAuthError
from ..core.logger import LoggerMixin
from ..dtw.distance import DistanceVector
from ..evaluation.metrics import RocCurve
from ..ml.models import ClosedSetClassifier
from ..motion.io import parse_trial, write_trial
from ..motion.models import N_CHANNELS
from .manifest import to_plain

PROFILE_FORMAT = "wristauth-profile/1"
CLASSIFIER_FORMAT = "wristauth-classifier/1"

_SIX_REALS = {"type": "array", "items": {"type": "number"}, "minItems": N_CHANNELS, "maxItems": N_CHANNELS}

PROFILE_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["format", "n", "ideal", "weights", "threshold", "rank_weights", "window", "degree", "trials"],
    "properties": {
        "format": {"const": PROFILE_FORMAT},
        "n": {"type": "integer", "minimum": 2},
        "ideal": _SIX_REALS,
        "weights": _SIX_REALS,
        "threshold": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "rank_weights": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "window": {"type": "integer", "minimum": 3},
        "degree": {"type": "integer", "minimum": 0},
        "trials": {"type": "array", "minItems": 2, "items": {"type": "string"}},
    },
}

CLASSIFIER_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["format", "classes", "mean", "scale", "coef", "intercept"],
    "properties": {
        "format": {"const": CLASSIFIER_FORMAT},
        "classes": {"type": "array", "items": {"type": "string"}, "minItems": 2},
        "feature_names": {"type": "array", "items": {"type": "string"}},
        "mean": {"type": "array", "items": {"type": "number"}},
        "scale": {"type": "array", "items": {"type": "number"}},
        "coef": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
        "intercept": {"type": "array", "items": {"type": "number"}},
    },
}


class ProfileStore(LoggerMixin):
    """Reads and writes profile and classifier documents as YAML"""

    def _write(self, document: Dict[str, Any], path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as file:
            yaml.safe_dump(to_plain(document), file, default_flow_style=False, sort_keys=True)
        return path

    def _read(self, path: Union[str, Path], schema: Dict[str, Any], kind: str) -> Dict[str, Any]:
        path = Path(path)
        try:
            with open(path, 'r', encoding='utf-8') as file:
                document = yaml.safe_load(file)
        except yaml.YAMLError as e:
            raise ProfileFormatError(f"{path}: not valid YAML: {e}")
        errors = sorted(Draft7Validator(schema).iter_errors(document), key=lambda e: list(e.path))
        if errors:
            location = "/".join(str(p) for p in errors[0].path) or "<root>"
            raise ProfileFormatError(f"{path}: invalid {kind} document at {location}: {errors[0].message}")
        return document

    def save_profile(self, profile: Profile, path: Union[str, Path]) -> Path:
        """
        Save a profile

        Enrollment trials are embedded as CSV text so the document is
        self-contained.

        Args:
            profile: Profile to save
            path: Destination file

        Returns:
            Path written
        """
        document = {
            'format': PROFILE_FORMAT,
            'n': profile.n,
            'ideal': profile.ideal.tolist(),
            'weights': list(profile.weights_mu),
            'threshold': profile.threshold_delta,
            'rank_weights': list(profile.rank_weights_rho),
            'window': profile.window,
            'degree': profile.degree,
            'trials': [write_trial(t, 'csv').decode('utf-8') for t in profile.trials],
        }
        path = self._write(document, path)
        self.logger.info(f"Profile saved to {path}")
        return path

    def load_profile(self, path: Union[str, Path]) -> Profile:
        """Load a profile saved by save_profile"""
        document = self._read(path, PROFILE_SCHEMA, "profile")
        try:
            trials = tuple(parse_trial(text, 'csv', name=f"{path}:trials[{i}]")
                           for i, text in enumerate(document['trials']))
            if len(trials) != document['n']:
                raise ProfileFormatError(f"{path}: n={document['n']} but {len(trials)} trials stored")
            return Profile(
                trials=trials,
                ideal=DistanceVector(document['ideal']),
                weights_mu=tuple(document['weights']),
                threshold_delta=document['threshold'],
                rank_weights_rho=tuple(document['rank_weights']),
                window=document['window'],
                degree=document['degree'],
            )
        except ProfileFormatError:
            raise
        except WristAuthError as e:
            raise ProfileFormatError(f"{path}: {e}")

    def save_classifier(self, classifier: ClosedSetClassifier, path: Union[str, Path]) -> Path:
        """Save a trained closed-set classifier"""
        document = {'format': CLASSIFIER_FORMAT}
        document.update(classifier.to_dict())
        path = self._write(document, path)
        self.logger.info(f"Classifier saved to {path}")
        return path

    def load_classifier(self, path: Union[str, Path]) -> ClosedSetClassifier:
        return ClosedSetClassifier.from_dict(self._read(path, CLASSIFIER_SCHEMA, "classifier"))

    def export_table(self, table: pd.DataFrame, path: Union[str, Path], index: bool = False) -> Path:
        """
        Export a table as CSV

        Args:
            table: Table to write
            path: Destination file
            index: Write the row index as the first column

        Returns:
            Path written
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(path, index=index, float_format='%.17g', lineterminator='\n')
        self.logger.debug(f"Exported {len(table)} rows to {path}")
        return path

    def export_roc(self, curve: RocCurve, path: Union[str, Path]) -> Path:
        """Write ROC points with a fpr,tpr,threshold header"""
        table = pd.DataFrame({'fpr': curve.fpr, 'tpr': curve.tpr, 'threshold': curve.thresholds})
        return self.export_table(table, path)
