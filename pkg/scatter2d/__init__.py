"""
scatter2d: A library for two-dimensional potential scattering.

This package provides tools for:
- Exact partial-wave phase shifts and cross sections (Numerov)
- Classical deflection functions, rainbows and orbiting
- WKB, eikonal and stationary-phase approximations
- The Airy uniform approximation near a rainbow

Units: hbar**2/(2 mu) = 1, so E = k**2.
"""

__version__ = "0.1.0"
