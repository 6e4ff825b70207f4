"""
Configuration package.
"""
from config.settings import (
    LOG_LEVEL,
    DEFAULT_MAX_AMBIENT_POINTS,
    DEFAULT_MAX_EVALUATIONS,
    DEFAULT_MAX_PAIR_EVALUATIONS,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    DEFAULT_TOLERANCES,
)

__all__ = [
    "LOG_LEVEL",
    "DEFAULT_MAX_AMBIENT_POINTS",
    "DEFAULT_MAX_EVALUATIONS",
    "DEFAULT_MAX_PAIR_EVALUATIONS",
    "DEFAULT_SEED",
    "DEFAULT_TRIALS",
    "DEFAULT_TOLERANCES",
]
