"""Dual-entropy, quantum-statistics model of benefit distributions."""

from .distribution import (
    BenefitDistribution,
    BinnedSeries,
    PeakInfo,
    SmoothingConfig,
    cpf,
    detect_peak,
    normalize,
    smooth,
)
from .errors import SocEntropyError
from .fitting import FitConfig, FitReport, fit
from .laws import FitParameters
from .lorenz import classify_symmetry, lorenz_points

__all__ = [
    "BenefitDistribution",
    "BinnedSeries",
    "FitConfig",
    "FitParameters",
    "FitReport",
    "PeakInfo",
    "SmoothingConfig",
    "SocEntropyError",
    "classify_symmetry",
    "cpf",
    "detect_peak",
    "fit",
    "lorenz_points",
    "normalize",
    "smooth",
]
