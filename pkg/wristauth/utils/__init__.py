"""
Utility modules for WristAuth
"""

from .cli import CommandLine, build_parser, main

__all__ = ["CommandLine", "build_parser", "main"]
