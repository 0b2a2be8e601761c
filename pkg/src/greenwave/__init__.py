"""Adaptive traffic-signal control on grid networks via QUBO minimization."""

__version__ = "0.1.0"
