"""
WristAuth - Handwriting Verification from Wrist Motion

Verifies that a person is who they claim to be from the accelerometer and
gyroscope readings a wrist-worn device records while they write a word.
Enrollment trials form a group template; a probe is accepted when its
weighted per-dimension similarity to the template clears a threshold.
"""

__version__ = "1.0.0"
__author__ = "WristAuth Team"
__description__ = "Handwriting verification from wrist motion"

from .core.app import WristAuthApp
from .core.config import Config

__all__ = [
    "WristAuthApp",
    "Config",
    "__version__",
    "__author__",
    "__description__"
]
