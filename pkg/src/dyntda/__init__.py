"""Topological signatures of dynamical systems from simulated quantum overlaps."""

from .errors import DynTDAError

__version__ = "0.1.0"
__all__ = ["DynTDAError", "__version__"]
