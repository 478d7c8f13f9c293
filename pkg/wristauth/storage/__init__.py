"""
Profile, classifier and dataset persistence
"""

from .manager import CLASSIFIER_FORMAT, PROFILE_FORMAT, ProfileStore
from .manifest import MANIFEST_FORMAT, MANIFEST_NAME, load_dataset, save_dataset, validate_manifest

__all__ = [
    "CLASSIFIER_FORMAT",
    "MANIFEST_FORMAT",
    "MANIFEST_NAME",
    "PROFILE_FORMAT",
    "ProfileStore",
    "load_dataset",
    "save_dataset",
    "validate_manifest",
]
