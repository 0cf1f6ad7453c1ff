"""Equatorial rigidity of highest-weight spherical states.

Exact Wallis-product, Gamma-ratio, and quadrature routes to the rigidity
index, the polar localization kinematics behind it, and the rigid-rotor /
thin-shell realizations, with a table-emitting CLI.
"""

__version__ = "0.1.0"

from .errors import (
    DomainError,
    EquirigError,
    NonConvergence,
    ParseError,
    ProfileError,
    ResourceError,
)

__all__ = [
    "__version__",
    "DomainError",
    "EquirigError",
    "NonConvergence",
    "ParseError",
    "ProfileError",
    "ResourceError",
]
