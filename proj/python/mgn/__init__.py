"""Two-layer modified Green-Naghdi solver."""

from ._core import (
    Config,
    DomainError,
    IoError,
    ParseError,
    PhysParams,
    ValidationError,
    admissibility,
    eval_F,
    growth_rate,
    run_to_directory,
    simulate,
    threshold_curve,
    upsilon_F,
)

__all__ = [
    "Config",
    "DomainError",
    "IoError",
    "ParseError",
    "PhysParams",
    "ValidationError",
    "admissibility",
    "eval_F",
    "growth_rate",
    "run_to_directory",
    "simulate",
    "threshold_curve",
    "upsilon_F",
]
