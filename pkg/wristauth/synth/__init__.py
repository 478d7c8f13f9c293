"""
Synthetic writers, mimic attacks and datasets
"""

from .generator import (
    GeneratorParams,
    MimicSpec,
    UserStyle,
    build_dataset,
    derive_seed,
    gen_bad_trial,
    gen_dataset,
    gen_mimic,
    gen_trial,
    gen_user,
)

__all__ = [
    "GeneratorParams",
    "MimicSpec",
    "UserStyle",
    "build_dataset",
    "derive_seed",
    "gen_bad_trial",
    "gen_dataset",
    "gen_mimic",
    "gen_trial",
    "gen_user",
]
