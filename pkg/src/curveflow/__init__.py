"""Numerical laboratory for curvature-driven evolution of curves and
surfaces of revolution."""

__version__ = "0.1.0"

from . import axisym, curves, errors, flow1d, lab, oracle, rescale

__all__ = ["axisym", "curves", "errors", "flow1d", "lab", "oracle", "rescale",
           "__version__"]
