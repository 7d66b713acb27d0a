"""Exception hierarchy."""
from __future__ import annotations


class EqHitchinError(Exception):
    """Base class for all library errors."""


class StructureError(EqHitchinError, ValueError):
    """Mismatched rings, primes, shapes or malformed input."""


class NotInvertibleError(EqHitchinError, ArithmeticError):
    """Division by a non-unit."""


class DivergenceError(EqHitchinError, ValueError):
    """A symmetric-power series that does not converge in t^-1."""


class RootNormalizationError(EqHitchinError, ValueError):
    """The requested leading coefficient is not a p-th root of the leading term."""


class GeometryError(EqHitchinError, ValueError):
    """Fixed-point data violating a consistency relation."""


class ModelInconsistencyError(EqHitchinError, ValueError):
    """Supplied component data contradicting a checkable identity."""


class ConfigError(EqHitchinError, ValueError):
    """Unusable CLI configuration."""
