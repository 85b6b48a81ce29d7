"""Distributions of floating-point rounding errors and probabilistic range analysis."""

from .density import Density, DistributionSpec, build
from .minifloat import FloatFormat, MiniFloat

__all__ = ["Density", "DistributionSpec", "build", "FloatFormat", "MiniFloat"]

__version__ = "0.1.0"
