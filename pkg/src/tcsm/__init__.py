"""Verification and spectral-analysis toolkit for truncated inverse-square
models on a circle: exact ground-state checks, local-energy oracles, and
degree-block spectra of the similarity-transformed operator."""

__version__ = "0.1.0"
