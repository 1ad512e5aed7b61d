"""Archimedean gamma-factor calculus and numerical L-function tools."""

from .errors import ArchimedeaError

__version__ = "0.1.0"

__all__ = ["ArchimedeaError", "__version__"]
