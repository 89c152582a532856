"""Exception types shared across the package.

Negative mathematical answers (an invalid characteristic function, an
inequivalent pair of points, a map that fails a check) are returned as
values, never raised.  Exceptions are reserved for inputs that violate a
documented contract: wrong shapes, objects from mismatched ambient
dimensions, faces that do not exist, unreadable problem files.
"""

from __future__ import annotations


class TorquoError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(TorquoError):
    """Operands have incompatible shapes or ambient dimensions."""


class PreconditionError(TorquoError):
    """A documented precondition of an operation does not hold."""


class SimplicityError(TorquoError):
    """A maximal face does not consist of exactly n distinct facets."""


class ComplexInputError(TorquoError):
    """Maximal face data is malformed: bad indices, duplicates, dangling facets."""


class NoSuchFaceError(TorquoError):
    """The requested facet set is not a face of the complex."""


class ProblemFileError(TorquoError):
    """A problem file failed to parse or violates the schema."""
