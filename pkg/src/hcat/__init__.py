"""Rotational constant-mean-curvature surfaces in H^2 x R.

Profiles of the catenoid family and the entire graph, machine-checked
disjointness certificates, shifted-barrier strip verification, and
surface-of-revolution mesh export.
"""

__version__ = "0.1.0"
