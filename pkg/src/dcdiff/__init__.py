"""Dirac-Coulomb propagator simulator and diffraction-front diagnostics."""

__version__ = "0.1.0"
