"""Finite-dimensional experiments around weak-type operator Lipschitz estimates."""

from . import czkernel, doi, fourier, funclib, harness, norms, spectral

__all__ = ["czkernel", "doi", "fourier", "funclib", "harness", "norms", "spectral"]
__version__ = "0.1.0"
