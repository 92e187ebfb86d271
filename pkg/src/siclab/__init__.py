"""Simulations of quantum information scrambling as mutual information I(A:R)."""

from .series import SICSeries

__version__ = "0.1.0"

__all__ = ["SICSeries", "__version__"]
