"""
Signal conditioning for motion trials
"""

from .savgol import DEFAULT_DEGREE, DEFAULT_WINDOW, SgKernel, filter_trial, sg_coefficients, sg_smooth

__all__ = ["DEFAULT_DEGREE", "DEFAULT_WINDOW", "SgKernel", "filter_trial", "sg_coefficients", "sg_smooth"]
