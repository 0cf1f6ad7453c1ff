"""Exception hierarchy shared across the package."""


class EquirigError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(EquirigError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NonConvergence(EquirigError, ArithmeticError):
    """Adaptive quadrature exhausted its evaluation budget without converging."""


class ResourceError(EquirigError, RuntimeError):
    """A request exceeds a configured resource cap (sample count, exact-arithmetic size)."""


class ParseError(EquirigError, ValueError):
    """Malformed input data (e.g. a bad row in a radial-profile CSV)."""


class ProfileError(EquirigError, ValueError):
    """A radial profile violates its structural or normalization invariants."""
