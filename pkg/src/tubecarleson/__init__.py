"""Numerical verifier for Hardy/Bergman spectral representations on tube
domains over low-rank symmetric cones and the associated Carleson-measure
machinery."""

__version__ = "0.1.0"
