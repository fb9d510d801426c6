"""Exact verification of quadratic relations for free-field q-deformed W-currents."""

__version__ = "0.1.0"
