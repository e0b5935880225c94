"""Shared exception types for the appell4 package."""


class Appell4Error(Exception):
    """Base class for all package-specific errors."""


class PoleError(Appell4Error):
    """A gamma/Pochhammer denominator vanishes (parameter on the pole lattice)."""


class OverflowSignalError(Appell4Error):
    """A value or partial sum exceeded the double-precision floating range."""


class InvalidOperatorError(Appell4Error):
    """An operator was used outside its domain (e.g. termwise delta with k != 1,
    or a 1/k-scaled theta operator constructed with k = 0)."""


class MarginError(Appell4Error):
    """A coefficient grid is too small to absorb the index shifts of an
    operator expression."""


class RegimeError(Appell4Error):
    """A computation was requested outside its validity regime (e.g. an
    integral-representation check with k >= 1 and non-terminating t)."""


class UnsupportedKError(Appell4Error):
    """A reduction was requested for a k value outside {0, 1}."""


class ConstraintError(Appell4Error):
    """A parameter point violates an identity's registered constraints."""


class QuadratureConvergenceError(Appell4Error):
    """The symmetric-tridiagonal eigensolver failed to converge."""
