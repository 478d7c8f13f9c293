"""
Dataset manifests: a directory of trial CSVs described by manifest.yaml
"""

from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np
import yaml
from jsonschema import Draft7Validator

from ..core.exceptions import ManifestError
from ..core.logger import get_logger
from ..motion.dataset import AttackSet, Dataset, FaultSet, UserGroup, WordSet
from ..motion.io import load_trial, save_trial
from ..motion.models import Trial

logger = get_logger(__name__)

MANIFEST_NAME = "manifest.yaml"
MANIFEST_FORMAT = "wristauth-manifest/1"

_PATHS = {"type": "array", "items": {"type": "string"}}
_NONEMPTY_PATHS = {"type": "array", "items": {"type": "string"}, "minItems": 1}

MANIFEST_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["format", "users"],
    "properties": {
        "format": {"const": MANIFEST_FORMAT},
        "seed": {"type": ["integer", "null"]},
        "config": {"type": "object"},
        "users": {
            "type": "array",
            "minItems": 2,
            "items": {
                "type": "object",
                "required": ["user", "enroll", "probes"],
                "properties": {
                    "user": {"type": "string"},
                    "enroll": {"type": "array", "items": {"type": "string"}, "minItems": 2},
                    "probes": _NONEMPTY_PATHS,
                },
            },
        },
        "attack": {
            "type": "object",
            "required": ["target", "enroll", "genuine", "scenarios"],
            "properties": {
                "target": {"type": "string"},
                "enroll": {"type": "array", "items": {"type": "string"}, "minItems": 2},
                "genuine": _NONEMPTY_PATHS,
                "scenarios": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "required": ["name", "strength", "trials"],
                        "properties": {
                            "name": {"type": "string"},
                            "strength": {"type": "number", "minimum": 0, "maximum": 1},
                            "trials": _NONEMPTY_PATHS,
                        },
                    },
                },
            },
        },
        "fault": {
            "type": "object",
            "required": ["clean", "bad", "test_genuine", "test_bad"],
            "properties": {name: _PATHS for name in ("clean", "bad", "test_genuine", "test_bad")},
        },
        "words": {
            "type": "object",
            "required": ["password", "known", "unseen"],
            "properties": {
                "password": {"type": "string"},
                "known": {"type": "object", "additionalProperties": _NONEMPTY_PATHS, "minProperties": 2},
                "unseen": {"type": "object", "additionalProperties": _NONEMPTY_PATHS},
            },
        },
    },
}


def to_plain(value: Any) -> Any:
    """Convert tuples and numpy scalars into types yaml.safe_dump accepts"""
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_plain(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def validate_manifest(document: Any, source: str = MANIFEST_NAME):
    """Raise ManifestError listing the first schema violation"""
    errors = sorted(Draft7Validator(MANIFEST_SCHEMA).iter_errors(document), key=lambda e: list(e.path))
    if errors:
        error = errors[0]
        location = "/".join(str(p) for p in error.path) or "<root>"
        raise ManifestError(f"{source}: {location}: {error.message}")
    words = document.get("words")
    if words and words["password"] not in words["known"]:
        raise ManifestError(f"{source}: words/password: {words['password']!r} is not a known word class")


class _Writer:
    """Writes trials under a root and records their relative paths"""

    def __init__(self, root: Path):
        self.root = root
        self.count = 0

    def write(self, relative: str, trials: Sequence[Trial]) -> List[str]:
        paths = []
        for index, trial in enumerate(trials):
            path = f"{relative}/t{index:03d}.csv"
            save_trial(trial, self.root / path)
            paths.append(path)
        self.count += len(paths)
        return paths


def dataset_document(dataset: Dataset, writer: _Writer) -> Dict[str, Any]:
    document: Dict[str, Any] = {
        "format": MANIFEST_FORMAT,
        "seed": dataset.seed,
        "config": to_plain(dataset.config),
        "users": [
            {
                "user": group.user,
                "enroll": writer.write(f"users/{group.user}/enroll", group.enroll),
                "probes": writer.write(f"users/{group.user}/probes", group.probes),
            }
            for group in dataset.users
        ],
    }

    attack = dataset.attack
    if attack is not None:
        document["attack"] = {
            "target": attack.target,
            "enroll": writer.write("attack/target/enroll", attack.enroll),
            "genuine": writer.write("attack/target/genuine", attack.genuine),
            "scenarios": [
                {
                    "name": name,
                    "strength": float(attack.strengths.get(name, 0.0)),
                    "trials": writer.write(f"attack/{name}", attack.scenarios[name]),
                }
                for name in attack.ordered_scenarios()
            ],
        }

    fault = dataset.fault
    if fault is not None:
        document["fault"] = {
            name: writer.write(f"fault/{name}", getattr(fault, name))
            for name in ("clean", "bad", "test_genuine", "test_bad")
        }

    words = dataset.words
    if words is not None:
        document["words"] = {
            "password": words.password,
            "known": {w: writer.write(f"words/known/{w}", words.known[w]) for w in sorted(words.known)},
            "unseen": {w: writer.write(f"words/unseen/{w}", words.unseen[w]) for w in sorted(words.unseen)},
        }
    return document


def save_dataset(dataset: Dataset, out_dir: Union[str, Path], force: bool = False) -> Path:
    """
    Write a dataset as trial CSVs plus manifest.yaml

    Args:
        dataset: Dataset to write
        out_dir: Output directory
        force: Allow writing into a non-empty directory

    Returns:
        Path of the manifest
    """
    root = Path(out_dir)
    if root.exists() and any(root.iterdir()) and not force:
        raise FileExistsError(f"output directory {root} is not empty (use --force to overwrite)")
    root.mkdir(parents=True, exist_ok=True)

    writer = _Writer(root)
    document = dataset_document(dataset, writer)
    validate_manifest(document)

    manifest = root / MANIFEST_NAME
    with open(manifest, 'w', encoding='utf-8') as file:
        yaml.safe_dump(document, file, default_flow_style=False, sort_keys=True)
    logger.info(f"Wrote {writer.count} trials and {manifest}")
    return manifest


def _load_all(root: Path, paths: Sequence[str]) -> Tuple[Trial, ...]:
    trials = []
    for relative in paths:
        path = root / relative
        if not path.is_file():
            raise ManifestError(f"manifest lists missing file {relative}")
        trials.append(load_trial(path))
    return tuple(trials)


def load_dataset(manifest_path: Union[str, Path]) -> Dataset:
    """
    Read a manifest and every trial it lists

    Paths in the manifest are relative to its directory.
    """
    manifest_path = Path(manifest_path)
    if manifest_path.is_dir():
        manifest_path = manifest_path / MANIFEST_NAME
    try:
        with open(manifest_path, 'r', encoding='utf-8') as file:
            document = yaml.safe_load(file)
    except yaml.YAMLError as e:
        raise ManifestError(f"{manifest_path}: not valid YAML: {e}")
    validate_manifest(document, str(manifest_path))
    root = manifest_path.parent

    users = tuple(
        UserGroup(entry["user"], _load_all(root, entry["enroll"]), _load_all(root, entry["probes"]))
        for entry in document["users"]
    )

    attack = None
    if "attack" in document:
        spec = document["attack"]
        attack = AttackSet(
            target=spec["target"],
            enroll=_load_all(root, spec["enroll"]),
            genuine=_load_all(root, spec["genuine"]),
            scenarios={s["name"]: _load_all(root, s["trials"]) for s in spec["scenarios"]},
            strengths={s["name"]: float(s["strength"]) for s in spec["scenarios"]},
        )

    fault = None
    if "fault" in document:
        spec = document["fault"]
        fault = FaultSet(**{name: _load_all(root, spec[name]) for name in ("clean", "bad", "test_genuine", "test_bad")})

    words = None
    if "words" in document:
        spec = document["words"]
        words = WordSet(
            password=spec["password"],
            known={w: _load_all(root, paths) for w, paths in spec["known"].items()},
            unseen={w: _load_all(root, paths) for w, paths in spec["unseen"].items()},
        )

    logger.debug(f"Loaded manifest {manifest_path} with {len(users)} users")
    return Dataset(document.get("seed"), users, attack, fault, words, document.get("config") or {})
