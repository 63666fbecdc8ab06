"""Exact computations with planar quasi-invariants, their rank-one modules,
Baker-Akhiezer functions and truncated Sato theory."""

__version__ = "0.1.0"
