"""Exception hierarchy shared by all leafspace modules."""


class LeafspaceError(Exception):
    """Base class for all errors raised by this package."""


class DegreeCapError(LeafspaceError):
    """An algebraic computation would exceed the configured minpoly degree cap."""


class ZeroDivisionLeafError(LeafspaceError):
    """Inversion of zero, or division by a non-invertible value."""


class ModelError(LeafspaceError):
    """The requested operation leaves the supported exact-value model
    (e.g. inverting a mixed sum of transcendental monomials)."""


class NonDenseError(LeafspaceError):
    """An operation requiring dense leaves was applied to a non-dense foliation."""


class DegenerateInputError(LeafspaceError):
    """Structurally invalid input (rank-deficient basis, dimension mismatch, ...)."""


class SpecParseError(LeafspaceError):
    """A foliation spec file could not be parsed; message carries a location."""
