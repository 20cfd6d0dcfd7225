"""Leakage elimination and decoherence-free subsystem numerics."""

__version__ = "0.1.0"
