"""
Configuration management for WristAuth
"""

import copy
import hashlib
import yaml
from pathlib import Path
from typing import Any, Dict, List, Optional


PRESETS: Dict[str, float] = {
    'paper-default': 0.55,
    'hardened': 0.65,
    'balanced': 0.62,
}

# Alternative names accepted wherever a preset is named
PRESET_ALIASES: Dict[str, str] = {
    'standard': 'paper-default',
}

DEFAULT_CONFIG: Dict[str, Any] = {
    'app': {
        'name': 'WristAuth',
        'version': '1.0.0',
    },
    'seed': 7,
    'logging': {
        'level': 'INFO',
        'file_path': None,
        'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    },
    'filter': {
        'window': 9,
        'degree': 2,
    },
    'dtw': {
        'band': None,
        'workers': 1,
    },
    'auth': {
        'threshold': PRESETS['paper-default'],
        'weights': None,
        'preset': None,
    },
    'calibration': {
        'auc_floor': 0.85,
    },
    'synth': {
        'sample_rate': 62.0,
        'components': 8,
        'freq_range': [0.5, 6.0],
        'tempo_range': [1.5, 2.5],
        'size_range': [0.8, 1.2],
        'tempo_jitter': 0.1,
        'amplitude_jitter': 0.05,
        'warp_deviation': 0.1,
        'noise_ratio': 0.05,
        'users': 15,
        'enroll': 5,
        'genuine': 10,
        'word': 'love',
        'attack': {
            'enroll': 25,
            'genuine': 20,
            'attackers': 15,
            'trials': 10,
            'rotation_fidelity': 0.6,
            'strengths': {
                'word': 0.0,
                'script': 0.5,
                'all-simulating': 0.8,
            },
        },
        'fault': {
            'clean': 10,
            'bad': 10,
            'test_genuine': 50,
            'test_bad': 50,
        },
        'words': {
            'classes': 10,
            'trials': 20,
            'unseen_classes': 10,
            'unseen_trials': 10,
        },
    },
    'evaluation': {
        'fractions': [0.0, 0.1, 0.2, 0.3, 0.4, 0.5],
        'progress': True,
        'roc_csv': True,
    },
    'baseline': {
        'pairs': 1000,
        'bins': 20,
        'folds': 5,
        'lasso_ratio': 0.1,
        'ridge_lambda': 1.0,
        'max_iter': 1000,
        'alpha': 0.0001,
    },
}


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def preset_names() -> List[str]:
    """Every accepted preset name, canonical names and aliases"""
    return sorted(set(PRESETS) | set(PRESET_ALIASES))


class Config:
    """Configuration management class for WristAuth"""

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize configuration from built-in defaults and an optional YAML file

        Args:
            config_path: Path to configuration file; None uses defaults only
        """
        self.config_path = Path(config_path) if config_path else None
        self._config = copy.deepcopy(DEFAULT_CONFIG)
        if self.config_path is not None:
            self.load_config()

    def load_config(self):
        """Load configuration from YAML file and merge it over the defaults"""
        if not self.config_path.exists():
            raise FileNotFoundError(f"Configuration file not found: {self.config_path}")

        try:
            with open(self.config_path, 'r', encoding='utf-8') as file:
                loaded = yaml.safe_load(file) or {}
        except Exception as e:
            raise RuntimeError(f"Failed to load configuration: {e}")

        if not isinstance(loaded, dict):
            raise RuntimeError(f"Failed to load configuration: top level of {self.config_path} is not a mapping")

        self._config = _deep_merge(DEFAULT_CONFIG, loaded)
        preset = self.get('auth.preset')
        if preset is not None:
            self.apply_preset(preset)

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value using dot notation

        Args:
            key: Configuration key (e.g., 'auth.threshold', 'filter.window')
            default: Default value if key not found

        Returns:
            Configuration value
        """
        keys = key.split('.')
        value = self._config

        try:
            for k in keys:
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key: str, value: Any):
        """
        Set configuration value using dot notation

        Args:
            key: Configuration key
            value: Value to set
        """
        keys = key.split('.')
        config = self._config

        for k in keys[:-1]:
            if k not in config or not isinstance(config[k], dict):
                config[k] = {}
            config = config[k]

        config[keys[-1]] = value

    def save(self, path: Optional[str] = None):
        """
        Save configuration to file

        Args:
            path: Optional path to save to (defaults to original path)
        """
        save_path = Path(path) if path else self.config_path
        if save_path is None:
            raise RuntimeError("Failed to save configuration: no path given")

        try:
            save_path.parent.mkdir(parents=True, exist_ok=True)
            with open(save_path, 'w', encoding='utf-8') as file:
                yaml.safe_dump(self._config, file, default_flow_style=False, indent=2, sort_keys=True)
        except Exception as e:
            raise RuntimeError(f"Failed to save configuration: {e}")

    def get_all(self) -> Dict[str, Any]:
        """Get all configuration as dictionary"""
        return copy.deepcopy(self._config)

    def update(self, config_dict: Dict[str, Any]):
        """
        Update configuration with dictionary (nested mappings are merged)

        Args:
            config_dict: Dictionary with configuration updates
        """
        self._config = _deep_merge(self._config, config_dict)

    def apply_preset(self, name: str):
        """
        Set the decision threshold from a named preset

        Args:
            name: One of paper-default, hardened, balanced (or the alias standard)
        """
        canonical = PRESET_ALIASES.get(name, name)
        if canonical not in PRESETS:
            raise ValueError(f"Unknown threshold preset: {name} (choose from {', '.join(preset_names())})")
        self.set('auth.preset', canonical)
        self.set('auth.threshold', PRESETS[canonical])

    def validate(self) -> bool:
        """
        Validate configuration

        Returns:
            True if configuration is valid
        """
        required_keys = [
            'seed',
            'filter.window',
            'filter.degree',
            'auth.threshold',
            'calibration.auc_floor',
            'synth.sample_rate',
            'logging.level'
        ]

        for key in required_keys:
            if self.get(key) is None:
                raise ValueError(f"Missing required configuration key: {key}")

        threshold = self.get('auth.threshold')
        if not 0.0 < float(threshold) <= 1.0:
            raise ValueError(f"auth.threshold must lie in (0, 1], got {threshold}")

        weights = self.get('auth.weights')
        if weights is not None:
            if len(weights) != 6 or any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-9:
                raise ValueError("auth.weights must be 6 non-negative reals summing to 1")

        window = self.get('filter.window')
        if window < 3 or window % 2 == 0:
            raise ValueError(f"filter.window must be an odd integer >= 3, got {window}")
        degree = self.get('filter.degree')
        if not 0 <= degree < window:
            raise ValueError(f"filter.degree must lie in [0, window), got {degree}")

        return True

    def fingerprint(self) -> str:
        """Get a sha256 digest of the resolved configuration"""
        canonical = yaml.safe_dump(self._config, default_flow_style=False, sort_keys=True)
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()

    def get_filter_params(self) -> Dict[str, Any]:
        """Get Savitzky-Golay filter parameters"""
        return {
            'window': int(self.get('filter.window', 9)),
            'degree': int(self.get('filter.degree', 2)),
        }

    def get_dtw_params(self) -> Dict[str, Any]:
        """Get DTW kernel parameters"""
        band = self.get('dtw.band')
        return {
            'band': None if band is None else int(band),
            'workers': int(self.get('dtw.workers', 1)),
        }

    def get_auth_params(self) -> Dict[str, Any]:
        """Get authentication parameters"""
        weights: Optional[List[float]] = self.get('auth.weights')
        return {
            'threshold': float(self.get('auth.threshold', PRESETS['paper-default'])),
            'weights': None if weights is None else [float(w) for w in weights],
            'auc_floor': float(self.get('calibration.auc_floor', 0.85)),
        }

    def get_synth_params(self) -> Dict[str, Any]:
        """Get synthetic dataset parameters"""
        params = copy.deepcopy(self.get('synth', {}))
        params['seed'] = int(self.get('seed'))
        return params

    def get_eval_params(self) -> Dict[str, Any]:
        """Get evaluation harness parameters"""
        return {
            'fractions': [float(f) for f in self.get('evaluation.fractions', [])],
            'progress': bool(self.get('evaluation.progress', True)),
            'roc_csv': bool(self.get('evaluation.roc_csv', True)),
            'seed': int(self.get('seed')),
        }

    def get_baseline_params(self) -> Dict[str, Any]:
        """Get closed-set baseline parameters"""
        params = copy.deepcopy(self.get('baseline', {}))
        params['seed'] = int(self.get('seed'))
        return params
