"""Exact decision procedures for linear dynamical system reachability.

Decides whether the orbit of a rational vector under a rational matrix ever
enters a given subspace, and the companion problem of simultaneous zeros of
several linear recurrence sequences, producing certified zero indices or
certified search bounds whenever the instance falls into a tractable class.
"""

__all__ = ["__version__"]

__version__ = "0.1.0"
