"""Exact-arithmetic toolkit for twisted polynomial differential forms,
Pfaff ideals and their deformation spaces on projective space."""

__version__ = "0.1.0"
