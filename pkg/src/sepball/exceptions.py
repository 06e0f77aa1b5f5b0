"""Exception hierarchy.

Every input problem is a ``ValueError`` subclass so callers that only know
the standard library can still catch it; numerical breakdowns derive from
``numpy.linalg.LinAlgError``.
"""

import numpy as np


class SepballError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(SepballError, ValueError):
    """Input data violates a precondition (non-finite, non-Hermitian, ...)."""


class InvalidShapeError(InvalidInputError):
    """Dimensions do not match the requested bipartite or block structure."""


class DegenerateShapeError(InvalidShapeError):
    """The block structure is too small for the requested construction."""


class InvalidParameterError(InvalidInputError):
    """A scalar parameter (p, N, rank, ...) is out of range."""


class NotPSDError(InvalidInputError):
    """Matrix is not positive semidefinite within tolerance."""

    def __init__(self, min_eig, message=None):
        self.min_eig = float(min_eig)
        if message is None:
            message = f"matrix is not positive semidefinite (min eigenvalue {self.min_eig:.9g})"
        super().__init__(message)


class NotAProjectorError(InvalidInputError):
    """Matrix is not an orthogonal projector within tolerance."""


class NumericError(SepballError, np.linalg.LinAlgError):
    """A numerical routine failed to converge or to meet its residual bound."""

    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message)
