"""Executable domain theory: finite dcpos, combinatory PCF and its Scott model,
ideal completions, the dyadics and the finite D-infinity tower."""

__version__ = "0.1.0"
