"""
Core components of WristAuth
"""

from .app import WristAuthApp
from .config import Config
from .logger import setup_logging

__all__ = ["WristAuthApp", "Config", "setup_logging"]
