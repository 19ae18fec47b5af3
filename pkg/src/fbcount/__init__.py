"""Singularity counting for closed curves in the real projective plane."""
__version__ = "0.1.0"
