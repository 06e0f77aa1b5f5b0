"""Input validation helpers shared by all modules.

The helpers return cleaned ``numpy`` arrays (complex dtype, symmetrized when
asked for) so that downstream code never repeats the checks.
"""

import math
import numbers

import numpy as np

from .exceptions import InvalidInputError, InvalidParameterError, InvalidShapeError

#: Relative tolerance on conjugate symmetry, scaled by ``max(1, max|entry|)``.
HERMITIAN_RTOL = 1e-10

#: Tolerance on the norm of pure states and the trace of density matrices.
NORM_TOL = 1e-8

#: Default relative tolerance for all pass/fail decisions.
DEFAULT_TOL = 1e-9

INF = math.inf


def check_matrix(A, name="matrix"):
    """Return ``A`` as a finite 2-D complex array."""
    try:
        arr = np.asarray(A, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{name} is not numeric: {exc}") from None
    if arr.ndim != 2:
        raise InvalidShapeError(f"{name} must be 2-D, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains NaN or Inf entries")
    return arr


def check_square(A, name="matrix"):
    arr = check_matrix(A, name)
    if arr.shape[0] != arr.shape[1]:
        raise InvalidShapeError(f"{name} must be square, got shape {arr.shape}")
    return arr


def hermitian_tolerance(A):
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    return HERMITIAN_RTOL * max(1.0, scale)


def check_hermitian(A, name="matrix"):
    """Validate conjugate symmetry and return the symmetrized ``(A + A^H)/2``.

    Violations larger than ``1e-10 * max(1, max|A_ij|)`` are rejected rather
    than silently symmetrized.
    """
    arr = check_square(A, name)
    skew = float(np.max(np.abs(arr - arr.conj().T))) if arr.size else 0.0
    tol = hermitian_tolerance(arr)
    if skew > tol:
        raise InvalidInputError(
            f"{name} is not Hermitian: max|A - A^H| = {skew:.3g} exceeds {tol:.3g}"
        )
    return 0.5 * (arr + arr.conj().T)


def check_p(p):
    """Validate a spectral norm exponent; ``math.inf`` selects the operator norm."""
    if isinstance(p, str):
        if p.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        try:
            p = float(p)
        except ValueError:
            raise InvalidParameterError(f"cannot interpret p={p!r}") from None
    if not isinstance(p, numbers.Real) or math.isnan(p):
        raise InvalidParameterError(f"p must be a real number >= 1, got {p!r}")
    p = float(p)
    if p < 1:
        raise InvalidParameterError(f"p must be >= 1, got {p}")
    return p


def check_positive_int(n, name, minimum=1):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise InvalidParameterError(f"{name} must be an integer, got {n!r}")
    if n < minimum:
        raise InvalidParameterError(f"{name} must be >= {minimum}, got {n}")
    return int(n)


def check_tol(tol):
    if not isinstance(tol, numbers.Real) or not (tol >= 0) or math.isinf(tol):
        raise InvalidParameterError(f"tol must be a finite non-negative number, got {tol!r}")
    return float(tol)


def check_state_stack(X, name="X"):
    """Return ``X`` as a finite ``(n_samples, d, d)`` complex array.

    A single ``(d, d)`` matrix is promoted to a stack of one.
    """
    try:
        arr = np.asarray(X, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{name} is not numeric: {exc}") from None
    if arr.ndim == 2:
        arr = arr[np.newaxis]
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise InvalidShapeError(
            f"{name} must have shape (n_samples, d, d) or (d, d), got {arr.shape}"
        )
    if arr.shape[0] == 0:
        raise InvalidShapeError(f"{name} contains no samples")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains NaN or Inf entries")
    return arr
